"""Discrete one-particle spectra, the partition function and state validation.

Energies are dimensionless (k_B = 1).  A spectrum is a finite, strictly
increasing list of levels; infinite spectra must be truncated by the caller,
who is also responsible for the truncation error.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from importlib import resources
from typing import IO, Iterable, Union

import numpy as np

from .errors import DomainError, SpectrumParseError

__all__ = [
    "EnergyLevel",
    "Spectrum",
    "ThermoState",
    "Verdict",
    "partition_function",
    "validate",
    "parse_spectrum",
    "dump_spectrum",
    "load_spectrum",
    "bundled_spectrum",
]


@dataclass(frozen=True)
class EnergyLevel:
    energy: float
    degeneracy: float

    def __post_init__(self):
        e, g = float(self.energy), float(self.degeneracy)
        if not math.isfinite(e) or e < 0:
            raise DomainError(f"energy must be finite and >= 0, got {self.energy!r}")
        if not math.isfinite(g) or g <= 0:
            raise DomainError(f"degeneracy must be finite and > 0, got {self.degeneracy!r}")
        object.__setattr__(self, "energy", e)
        object.__setattr__(self, "degeneracy", g)


@dataclass(frozen=True)
class Spectrum:
    """Immutable list of levels with strictly increasing energies."""

    levels: tuple[EnergyLevel, ...]

    def __post_init__(self):
        levels = tuple(self.levels)
        if not levels:
            raise DomainError("spectrum must contain at least one level")
        for prev, cur in zip(levels, levels[1:]):
            if not cur.energy > prev.energy:
                raise DomainError(
                    f"energies must be strictly increasing: {prev.energy!r} then {cur.energy!r}"
                )
        object.__setattr__(self, "levels", levels)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, float]]) -> "Spectrum":
        """Build a spectrum from ``(energy, degeneracy)`` pairs in any order.

        Levels with exactly equal energies are merged by summing degeneracies.
        """
        merged: dict[float, float] = {}
        for energy, degeneracy in pairs:
            level = EnergyLevel(energy, degeneracy)
            merged[level.energy] = merged.get(level.energy, 0.0) + level.degeneracy
        return cls(tuple(EnergyLevel(e, merged[e]) for e in sorted(merged)))

    def __len__(self):
        return len(self.levels)

    def __iter__(self):
        return iter(self.levels)

    @property
    def energies(self) -> np.ndarray:
        return np.array([lv.energy for lv in self.levels])

    @property
    def degeneracies(self) -> np.ndarray:
        return np.array([lv.degeneracy for lv in self.levels])

    @property
    def min_energy(self) -> float:
        return self.levels[0].energy

    def shifted(self, c: float) -> "Spectrum":
        """Add ``c`` to every energy; levels that become equal after rounding are merged."""
        return Spectrum.from_pairs((lv.energy + c, lv.degeneracy) for lv in self.levels)

    def pairs(self) -> list[tuple[float, float]]:
        return [(lv.energy, lv.degeneracy) for lv in self.levels]


@dataclass(frozen=True)
class ThermoState:
    """Inverse temperature, fugacity and deformation parameter ``q``.

    Construction only checks the field ranges; whether the state is
    admissible for a particular spectrum is decided by :func:`validate`.
    """

    beta: float
    fugacity: float
    q: float

    def __post_init__(self):
        beta, z, q = float(self.beta), float(self.fugacity), float(self.q)
        if not (math.isfinite(beta) and beta > 0):
            raise DomainError(f"beta must be finite and > 0, got {self.beta!r}")
        if not (math.isfinite(z) and z > 0):
            raise DomainError(f"fugacity must be finite and > 0, got {self.fugacity!r}")
        if not (-1.0 <= q <= 1.0):
            raise DomainError(f"q must lie in [-1, 1], got {self.q!r}")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "fugacity", z)
        object.__setattr__(self, "q", q)

    @property
    def chemical_potential(self) -> float:
        return math.log(self.fugacity) / self.beta


@dataclass(frozen=True)
class Verdict:
    """Outcome of :func:`validate`.

    ``boundary`` is the supremum of admissible fugacities, ``exp(beta*min_energy)/q``,
    and is only set for ``q > 0``.
    """

    ok: bool
    constraint: str | None = None
    boundary: float | None = None

    def __bool__(self):
        return self.ok


def _boltzmann_weights(spectrum: Spectrum, beta: float) -> np.ndarray:
    return spectrum.degeneracies * np.exp(-beta * spectrum.energies)


def partition_function(spectrum: Spectrum, beta: float) -> float:
    """Return ``sum_i g_i exp(-beta * e_i)``.

    Raises
    ------
    DomainError
        If ``beta <= 0`` or the sum overflows.
    """
    beta = float(beta)
    if not (math.isfinite(beta) and beta > 0):
        raise DomainError(f"beta must be finite and > 0, got {beta!r}")
    terms = _boltzmann_weights(spectrum, beta)
    total = 0.0
    for i, t in enumerate(terms):
        total += t
        if not math.isfinite(total):
            lv = spectrum.levels[i]
            raise DomainError(
                f"partition function overflows at level {i} "
                f"(energy={lv.energy!r}, degeneracy={lv.degeneracy!r})"
            )
    return math.fsum(terms)


def validate(spectrum: Spectrum, state: ThermoState) -> Verdict:
    """Check the fugacity bound ``z * q * exp(-beta * min_energy) < 1`` for ``q > 0``."""
    if state.q <= 0:
        return Verdict(True)
    boundary = math.exp(state.beta * spectrum.min_energy) / state.q
    if state.fugacity * state.q * math.exp(-state.beta * spectrum.min_energy) < 1.0:
        return Verdict(True, boundary=boundary)
    return Verdict(
        False,
        constraint=(
            f"fugacity {state.fugacity!r} must be below exp(beta*min_energy)/q = {boundary!r}"
        ),
        boundary=boundary,
    )


Source = Union[bytes, str, IO[bytes], IO[str]]


def _read_text(source: Source) -> str:
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8-sig")
        except UnicodeDecodeError as exc:
            raise SpectrumParseError(f"spectrum is not valid UTF-8: {exc}") from exc
    return source


def _to_float(value, where, location):
    if isinstance(value, bool):
        raise SpectrumParseError(f"{where}: expected a number, got {value!r}", location=location)
    try:
        return float(value)
    except (TypeError, ValueError):
        raise SpectrumParseError(
            f"{where}: expected a number, got {value!r}", location=location
        ) from None


def _parse_json(text: str) -> list[tuple[float, float]]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpectrumParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, list):
        raise SpectrumParseError("JSON spectrum must be an array of {energy, degeneracy} objects")
    pairs = []
    for idx, item in enumerate(data):
        if not isinstance(item, dict) or "energy" not in item or "degeneracy" not in item:
            raise SpectrumParseError(
                f"element {idx}: expected an object with keys 'energy' and 'degeneracy'",
                location=idx,
            )
        pairs.append(
            (
                _to_float(item["energy"], f"element {idx}", idx),
                _to_float(item["degeneracy"], f"element {idx}", idx),
            )
        )
    return pairs


def _parse_csv(text: str) -> list[tuple[float, float]]:
    rows = csv.reader(io.StringIO(text))
    header = next(rows, None)
    if header is None or [h.strip() for h in header] != ["energy", "degeneracy"]:
        raise SpectrumParseError("CSV spectrum must start with the header 'energy,degeneracy'", location=1)
    pairs = []
    for lineno, row in enumerate(rows, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise SpectrumParseError(
                f"line {lineno}: expected 2 fields, got {len(row)}", location=lineno
            )
        pairs.append(
            (
                _to_float(row[0].strip(), f"line {lineno}", lineno),
                _to_float(row[1].strip(), f"line {lineno}", lineno),
            )
        )
    return pairs


def parse_spectrum(source: Source) -> Spectrum:
    """Parse a spectrum from CSV (``energy,degeneracy`` header) or a JSON array.

    The format is sniffed from the first non-blank character.  The result is
    sorted by energy with exact duplicates merged.

    Raises
    ------
    SpectrumParseError
        Malformed input; ``location`` gives the line (CSV) or element (JSON).
    DomainError
        Negative energy, non-positive degeneracy, or an empty spectrum.
    """
    text = _read_text(source)
    stripped = text.lstrip()
    pairs = _parse_json(stripped) if stripped.startswith("[") else _parse_csv(text)
    return Spectrum.from_pairs(pairs)


def dump_spectrum(spectrum: Spectrum, fmt: str = "csv") -> str:
    if fmt == "csv":
        lines = ["energy,degeneracy"]
        lines += [f"{lv.energy!r},{lv.degeneracy!r}" for lv in spectrum]
        return "\n".join(lines) + "\n"
    if fmt == "json":
        return json.dumps([{"energy": lv.energy, "degeneracy": lv.degeneracy} for lv in spectrum])
    raise ValueError(f"unknown spectrum format {fmt!r}")


def load_spectrum(path) -> Spectrum:
    with open(path, "rb") as fh:
        return parse_spectrum(fh)


def bundled_spectrum() -> Spectrum:
    """First eight shells of the 3D isotropic oscillator, zero-point energy dropped."""
    text = resources.files("quons").joinpath("data/oscillator8.csv").read_text()
    return parse_spectrum(text)
