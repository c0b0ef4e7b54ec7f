"""Command-line front end.

Exit codes: 0 ok, 1 I/O or parse error, 2 domain error, 3 verification failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import __version__, boolean, freegas, qgrand
from .errors import AccuracyError, DomainError, SpectrumParseError
from .spectrum import bundled_spectrum, load_spectrum, partition_function
from .verify import format_report, run_verification

EXIT_OK, EXIT_IO, EXIT_DOMAIN, EXIT_VERIFY = 0, 1, 2, 3

DISCRETE_COLUMNS = ("lnZ", "Omega", "PV", "N")
CONTINUUM_COLUMNS = ("betaP", "rho", "eos_ratio", "condensate_fraction")
_ALIASES = {"βP": "betaP", "ρ": "rho", "lnz": "lnZ", "pv": "PV", "n": "N"}


class UsageError(Exception):
    pass


@dataclass
class Table:
    """Rows of named values plus a metadata block; the unit of CLI output."""

    columns: list[str]
    rows: list[list[Any]] = field(default_factory=list)
    metadata: dict[str, Any] = field(default_factory=dict)

    def records(self) -> list[dict[str, Any]]:
        return [dict(zip(self.columns, row)) for row in self.rows]


def _fmt(value, precision: int) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, f".{precision}g")
    return str(value)


def _round(value, precision: int):
    if isinstance(value, float) and precision < 17 and math.isfinite(value):
        return float(format(value, f".{precision}g"))
    return value


def emit_csv(table: Table, precision: int = 17) -> str:
    lines = [",".join(table.columns)]
    lines += [",".join(_fmt(v, precision) for v in row) for row in table.rows]
    return "\n".join(lines) + "\n"


def emit_json(table: Table, precision: int = 17, extra: dict | None = None) -> str:
    doc = {"metadata": table.metadata}
    if extra:
        doc.update({k: {kk: _round(vv, precision) for kk, vv in v.items()} for k, v in extra.items()})
    doc["rows"] = [{k: _round(v, precision) for k, v in rec.items()} for rec in table.records()]
    return json.dumps(doc, indent=2) + "\n"


def parse_json_table(text: str) -> Table:
    doc = json.loads(text)
    rows = doc["rows"]
    columns = list(rows[0]) if rows else []
    return Table(columns, [[r[c] for c in columns] for r in rows], doc["metadata"])


def _write(args, text: str):
    if args.output:
        with open(args.output, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _metadata(command: str, **inputs) -> dict[str, Any]:
    return {
        "command": command,
        "inputs": {k: v for k, v in inputs.items() if v is not None},
        "library_version": __version__,
        "units": inputs.get("units", "reduced"),
    }


def _spectrum(args):
    return load_spectrum(args.spectrum) if args.spectrum else bundled_spectrum()


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_zeta(args) -> int:
    s = _spectrum(args)
    value = partition_function(s, args.beta)
    table = Table(["beta", "zeta"], [[args.beta, value]],
                  _metadata("zeta", spectrum=args.spectrum, beta=args.beta))
    if args.format == "text":
        _write(args, _fmt(value, args.precision) + "\n")
    elif args.format == "csv":
        _write(args, emit_csv(table, args.precision))
    else:
        _write(args, emit_json(table, args.precision))
    return EXIT_OK


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + m for m in missing))


def cmd_grand(args) -> int:
    _require(args, "beta", "z", "q")
    s = _spectrum(args)
    gs = qgrand.GrandState.of(s, args.beta, args.z, args.q)
    summary = {
        "lnZ": qgrand.ln_grand_partition(gs),
        "Omega": qgrand.landau_potential(gs),
        "PV": qgrand.pv(gs),
        "N": qgrand.total_number(gs),
    }
    occ = Table(["energy", "degeneracy", "occupation"],
                [[r.energy, r.degeneracy, r.occupation] for r in qgrand.occupancy_table(gs)],
                _metadata("grand", spectrum=args.spectrum, beta=args.beta, z=args.z, q=args.q))
    p = args.precision
    if args.format == "json":
        _write(args, emit_json(occ, p, {"summary": summary}))
    elif args.format == "csv":
        if args.occupancy:
            _write(args, emit_csv(occ, p))
        else:
            _write(args, emit_csv(Table(list(summary), [list(summary.values())]), p))
    else:
        lines = [f"{k} = {_fmt(v, p)}" for k, v in summary.items()]
        lines.append("energy degeneracy occupation")
        lines += [" ".join(_fmt(v, p) for v in row) for row in occ.rows]
        _write(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_boolean(args) -> int:
    _require(args, "beta", "z")
    s = _spectrum(args)
    bs = boolean.BooleanState(s, args.beta, args.z)
    summary = {"Z": boolean.boolean_gpf(bs), "N": boolean.boolean_total(bs)}
    occ = Table(["energy", "degeneracy", "occupation"],
                [[lv.energy, lv.degeneracy, boolean.boolean_occupation(lv.energy, lv.degeneracy, bs)]
                 for lv in s],
                _metadata("boolean", spectrum=args.spectrum, beta=args.beta, z=args.z))
    p = args.precision
    if args.format == "json":
        _write(args, emit_json(occ, p, {"summary": summary}))
    elif args.format == "csv":
        _write(args, emit_csv(occ if args.occupancy else Table(list(summary), [list(summary.values())]), p))
    else:
        lines = [f"{k} = {_fmt(v, p)}" for k, v in summary.items()]
        lines.append("energy degeneracy occupation")
        lines += [" ".join(_fmt(v, p) for v in row) for row in occ.rows]
        _write(args, "\n".join(lines) + "\n")
    return EXIT_OK


def _wavelength(args, beta=None) -> float:
    """Thermal wavelength from --lambda, SI --mass/--temperature, or reduced beta."""
    if args.wavelength is not None:
        return args.wavelength
    beta = args.beta if beta is None else beta
    if args.units == "si":
        if args.mass is None:
            raise UsageError("--units si needs --mass (kg) or --lambda")
        if args.temperature is not None:
            temperature = args.temperature
        elif beta is not None:
            temperature = 1.0 / (freegas.BOLTZMANN * beta)
        else:
            raise UsageError("--units si needs --temperature (K), --beta (1/J) or --lambda")
        return freegas.thermal_wavelength(args.mass, temperature)
    if beta is None:
        raise UsageError("give --lambda, or --beta for the reduced wavelength sqrt(2 pi beta)")
    return freegas.reduced_wavelength(beta)


def _gas_row(q, z, lam, args, rho=None) -> dict[str, Any]:
    """Continuum observables; with ``rho`` the fugacity is solved for first."""
    fraction, condensed = 0.0, False
    if rho is not None:
        sol = freegas.solve_fugacity(rho * lam ** 3, q)
        z, fraction, condensed = sol.fugacity, sol.condensate_fraction, sol.condensed
    gp = freegas.GasPoint(q, z, lam, args.a, args.volume)
    bp, dens = freegas.beta_pressure(gp), freegas.density(gp)
    if condensed:
        # thermal part plus ground-state fraction recovers the requested density
        dens = dens + fraction * rho
    ratio = freegas.eos_ratio(q, z) if args.a == 0 and not condensed else bp / dens
    return {"z": z, "betaP": bp, "rho": dens, "eos_ratio": ratio,
            "condensate_fraction": fraction, "condensed": condensed}


def cmd_eos(args) -> int:
    _require(args, "q")
    if (args.z is None) == (args.density is None):
        raise UsageError("give exactly one of --z and --density")
    lam = _wavelength(args)
    row = _gas_row(args.q, args.z, lam, args, args.density)
    cols = ["q", "lambda", *row]
    table = Table(cols, [[args.q, lam, *row.values()]],
                  _metadata("eos", q=args.q, z=args.z, density=args.density, wavelength=lam,
                            a=args.a, volume=args.volume, units=args.units))
    p = args.precision
    if args.format == "json":
        _write(args, emit_json(table, p))
    elif args.format == "csv":
        _write(args, emit_csv(table, p))
    else:
        _write(args, "".join(f"{c} = {_fmt(v, p)}\n" for c, v in zip(cols, table.rows[0])))
    return EXIT_OK


def cmd_critical(args) -> int:
    _require(args, "q")
    lam = _wavelength(args)
    value = freegas.critical_density(args.q, lam)
    table = Table(["q", "lambda", "rho_c"], [[args.q, lam, value]],
                  _metadata("critical", q=args.q, wavelength=lam, units=args.units))
    if args.format == "text":
        _write(args, _fmt(value, args.precision) + "\n")
    elif args.format == "csv":
        _write(args, emit_csv(table, args.precision))
    else:
        _write(args, emit_json(table, args.precision))
    return EXIT_OK


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    steps: int
    scale: str = "linear"

    def __post_init__(self):
        if self.variable not in ("fugacity", "beta", "q"):
            raise UsageError(f"cannot sweep {self.variable!r}; choose fugacity, beta or q")
        if not self.start < self.stop:
            raise DomainError(f"sweep needs start < stop, got {self.start!r} >= {self.stop!r}")
        if self.steps < 2:
            raise DomainError(f"sweep needs steps >= 2, got {self.steps!r}")
        if self.scale == "log" and not self.start > 0:
            raise DomainError("log-scaled sweep needs start > 0")

    def grid(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.steps)
        return np.linspace(self.start, self.stop, self.steps)


def _columns(args, allowed) -> list[str]:
    if not args.columns:
        return list(allowed[:3])
    cols = [_ALIASES.get(c.strip(), c.strip()) for c in args.columns.split(",") if c.strip()]
    bad = [c for c in cols if c not in allowed]
    if bad:
        raise UsageError(f"unknown column(s) {bad} for this sweep; choose from {list(allowed)}")
    return cols


def cmd_sweep(args) -> int:
    sweep = SweepSpec(args.variable, args.start, args.stop, args.steps, args.scale)
    var_attr = {"fugacity": "z", "beta": "beta", "q": "q"}[sweep.variable]
    if args.continuum:
        cols = _columns(args, CONTINUUM_COLUMNS)
        fixed = [n for n in ("q",) if n != var_attr]
        if args.density is None and var_attr != "z":
            fixed.append("z")
    else:
        cols = _columns(args, DISCRETE_COLUMNS)
        s = _spectrum(args)
        fixed = [n for n in ("beta", "z", "q") if n != var_attr]
    _require(args, *fixed)

    header = ["beta", "z", "q"] + (["lambda"] if args.continuum else [])
    if args.continuum and args.density is not None:
        header.append("condensed")
    table = Table(header + cols, metadata=_metadata(
        "sweep", spectrum=None if args.continuum else args.spectrum, continuum=args.continuum,
        variable=sweep.variable, start=sweep.start, stop=sweep.stop, steps=sweep.steps,
        scale=sweep.scale, beta=args.beta, z=args.z, q=args.q, density=args.density,
        wavelength=args.wavelength, units=args.units))
    skipped = []
    for i, value in enumerate(sweep.grid()):
        point = {"beta": args.beta, "z": args.z, "q": args.q}
        point[var_attr] = float(value)
        try:
            if args.continuum:
                lam = _wavelength(args, point["beta"])
                row = _gas_row(point["q"], point["z"], lam, args, args.density)
                point["z"] = row["z"]
                vals = [point["beta"], point["z"], point["q"], lam]
                if args.density is not None:
                    vals.append(row["condensed"])
            else:
                gs = qgrand.GrandState.of(s, point["beta"], point["z"], point["q"])
                row = {"lnZ": qgrand.ln_grand_partition(gs), "Omega": qgrand.landau_potential(gs),
                       "PV": qgrand.pv(gs), "N": qgrand.total_number(gs)}
                vals = [point["beta"], point["z"], point["q"]]
        except (DomainError, AccuracyError) as exc:
            skipped.append({"index": i, sweep.variable: float(value), "reason": str(exc)})
            continue
        table.rows.append(vals + [row[c] for c in cols])
    table.metadata["skipped"] = skipped
    for sk in skipped:
        print(f"skipped point {sk['index']} ({sweep.variable}={sk[sweep.variable]!r}): {sk['reason']}",
              file=sys.stderr)
    if not table.rows:
        print("error: every sweep point was rejected", file=sys.stderr)
        return EXIT_DOMAIN
    if args.format == "json":
        _write(args, emit_json(table, args.precision))
    else:
        _write(args, emit_csv(table, args.precision))
    return EXIT_OK


def cmd_verify(args) -> int:
    s = _spectrum(args)
    results = run_verification(s, samples=args.samples, seed=args.seed)
    header = (f"quons {__version__} verify: spectrum={args.spectrum or 'bundled:oscillator8'} "
              f"levels={len(s)} samples={args.samples} seed={args.seed}\n")
    _write(args, header + format_report(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_IO, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--spectrum", metavar="PATH", help="CSV or JSON spectrum file")
    common.add_argument("--beta", type=float, help="inverse temperature (reduced units)")
    common.add_argument("--z", type=float, help="fugacity")
    common.add_argument("--q", type=float, help="deformation parameter in [-1, 1]")
    common.add_argument("--format", choices=("text", "csv", "json"), default="text")
    common.add_argument("--output", metavar="PATH", help="write to file instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--precision", type=int, default=17, help="significant digits")
    common.add_argument("--units", choices=("reduced", "si"), default="reduced")

    gas = _Parser(add_help=False)
    gas.add_argument("--lambda", dest="wavelength", type=float, help="thermal wavelength")
    gas.add_argument("--mass", type=float, help="particle mass in kg (with --units si)")
    gas.add_argument("--temperature", type=float, help="temperature in K (with --units si)")
    gas.add_argument("--density", type=float, help="number density; the fugacity is solved for")
    gas.add_argument("--a", type=float, default=0.0, help="condensate weight a >= 0")
    gas.add_argument("--volume", type=float, help="volume, needed when a > 0")

    parser = _Parser(prog="quons", description="Thermodynamics of q-particles.")
    parser.add_argument("--version", action="version", version=f"quons {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("zeta", parents=[common], help="partition function of a spectrum")
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("grand", parents=[common], help="ln Z, Omega, PV, N and occupations")
    p.add_argument("--occupancy", action="store_true", help="CSV: emit the occupancy table")
    p.set_defaults(func=cmd_grand)

    p = sub.add_parser("boolean", parents=[common], help="Boolean-statistics thermodynamics")
    p.add_argument("--occupancy", action="store_true", help="CSV: emit the occupancy table")
    p.set_defaults(func=cmd_boolean)

    p = sub.add_parser("sweep", parents=[common, gas], help="tabulate observables on a grid")
    p.add_argument("--continuum", action="store_true", help="free gas instead of a spectrum")
    p.add_argument("--variable", required=True, choices=("fugacity", "beta", "q"))
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--scale", choices=("linear", "log"), default="linear")
    p.add_argument("--columns", help="comma-separated: lnZ,Omega,PV,N or betaP,rho,eos_ratio,condensate_fraction")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("eos", parents=[common, gas], help="free-gas equation of state at one point")
    p.set_defaults(func=cmd_eos)

    p = sub.add_parser("critical", parents=[common, gas], help="critical density for 0 < q <= 1")
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("verify", parents=[common], help="run the randomised invariant suite")
    p.add_argument("--samples", type=int, default=200)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SpectrumParseError, OSError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except DomainError as exc:
        msg = f"error: {exc}"
        if exc.boundary is not None:
            msg += f" (boundary {exc.boundary!r})"
        print(msg, file=sys.stderr)
        return EXIT_DOMAIN
    except AccuracyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
