"""Grand partition functions built on the full Fock space, for comparison only.

Summing ``(zeta z)^n`` over all particle numbers on the full Fock space gives
``1/(1 - zeta z)``.  That value does not depend on q, ignores the Gibbs
factor, and exists only for ``zeta z < 1``, whereas a classical gas admits
any fugacity.  Dividing the n-th term by ``n!`` restores the correct
Boltzmann result ``exp(zeta z)``.

Nothing outside this module and the tests may call these functions.
"""
import math

from .errors import DomainError
from .spectrum import Spectrum, partition_function

__all__ = ["naive_full_fock_gpf", "gibbs_series_partial"]


def naive_full_fock_gpf(spectrum: Spectrum, beta: float, z: float) -> float:
    """``1/(1 - zeta z)``: the incorrect, q-independent full-Fock value."""
    zz = partition_function(spectrum, beta) * z
    if zz >= 1.0:
        raise DomainError(f"zeta*z = {zz!r} >= 1: the geometric series diverges", boundary=1.0)
    return 1.0 / (1.0 - zz)


def gibbs_series_partial(spectrum: Spectrum, beta: float, z: float, n_terms: int) -> float:
    """Partial sum ``sum_{n=0}^{n_terms} (zeta z)^n / n!``."""
    if n_terms < 1:
        raise DomainError(f"n_terms must be >= 1, got {n_terms!r}")
    zz = partition_function(spectrum, beta) * z
    term, terms = 1.0, [1.0]
    for n in range(1, n_terms + 1):
        term *= zz / n
        terms.append(term)
    return math.fsum(terms)
