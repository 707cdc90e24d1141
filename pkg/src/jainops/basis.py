"""The Jain basis and its moment integrals.

The basis functions

    L_{n,k}(x) = n x (n x + k beta)^{k-1} e^{-(n x + k beta)} / k!

form a partition of unity on [0, inf) for 0 <= beta < 1 and reduce to the
Szasz-Mirakjan (Poisson) weights at beta = 0.  Evaluation accumulates the
exponent in log space so indices up to the configured truncation cap
(10^4 and beyond) neither overflow nor underflow prematurely.

``basis_moment_integral`` evaluates the half-line inner products
<L_{n,k-1}, t^r> through their closed hypergeometric form

    <L_{n,k-1}, t^r> = (k)_r / n^{r+1} * e^{-(k-1) beta}
                         * 1F1(2-k; 1-r-k; (k-1) beta),

with the terminating 1F1 summed in exact rational arithmetic (all its
terms are nonnegative, and exactness keeps the value reliable for large
k) and the exponential prefactor applied in log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .config import SeriesQuadConfig
from .errors import DomainError, TruncationError
from .numerics import hyp1f1_terminating, pochhammer


@dataclass(frozen=True)
class JainParams:
    """Operator parameters: index n > 0 and shape 0 <= beta < 1.

    All closed forms are rational in n, so n may be any positive real,
    not just an integer.
    """

    n: float
    beta: float

    def __post_init__(self):
        if not self.n > 0:
            raise DomainError(f"operator index n must be > 0, got {self.n}")
        if not 0 <= self.beta < 1:
            raise DomainError(f"beta must lie in [0, 1), got {self.beta}")


def jain_basis(p: JainParams, k: int, x: float) -> float:
    """Value of the basis function L_{n,k}(x) for x >= 0, k >= 0.

    Conventions at the boundary, chosen by continuity so the partition of
    unity extends to x = 0: L_{n,0}(0) = 1 and L_{n,k}(0) = 0 for k >= 1.
    """
    if k < 0:
        raise DomainError(f"basis index k must be >= 0, got {k}")
    if x < 0:
        raise DomainError(f"basis argument x must be >= 0, got {x}")
    n, beta = p.n, p.beta
    if x == 0.0:
        return 1.0 if k == 0 else 0.0
    if k == 0:
        return math.exp(-n * x)
    nx = n * x
    log_term = (
        math.log(nx)
        + (k - 1) * math.log(nx + k * beta)
        - (nx + k * beta)
        - math.lgamma(k + 1)
    )
    return math.exp(log_term)


def basis_partial_sum(
    p: JainParams, x: float, cfg: SeriesQuadConfig
) -> tuple[float, int]:
    """Partial sum of the basis series and the truncation index used.

    Terms are accumulated until the running term drops below
    cfg.tail_tol *and* the cumulative sum exceeds 1 - cfg.tail_tol; the
    weights are unimodal in k, so the mass test prevents stopping in the
    small pre-peak region when n x is large.  Reaching cfg.k_max first
    raises TruncationError (the basis decays slowly as beta approaches 1,
    so a too-small cap is a configuration problem, not a math one).
    """
    total = 0.0
    for k in range(cfg.k_max + 1):
        term = jain_basis(p, k, x)
        total += term
        if term < cfg.tail_tol and total > 1.0 - cfg.tail_tol:
            return total, k
    raise TruncationError(
        f"basis series at n={p.n}, beta={p.beta}, x={x} did not meet the tail "
        f"criterion within k_max={cfg.k_max}"
    )


# Above this index the moment integrals use the scaled floating-point
# series; below it, exact rationals (the crossover balances the O(k^2)
# bit cost of exact arithmetic against what the verification tolerances
# need -- the float series keeps ~k*eps relative accuracy because every
# term is nonnegative).
_EXACT_SERIES_K_CAP = 64

# Rescale threshold for the scaled float series.
_RESCALE_AT = 1e250
_LOG_RESCALE = math.log(_RESCALE_AT)


def _log_hyp1f1_terminating(k: int, r: int, c: float) -> float:
    """log of 1F1(2-k; 1-r-k; c) for c >= 0, summed with overflow rescaling."""
    a = 2 - k
    b = 1 - r - k
    term = 1.0
    total = 1.0
    shift = 0.0
    for j in range(k - 2):
        term *= (a + j) * c / ((b + j) * (j + 1))
        total += term
        if total > _RESCALE_AT:
            total /= _RESCALE_AT
            term /= _RESCALE_AT
            shift += _LOG_RESCALE
    return math.log(total) + shift


def basis_moment_integral(p: JainParams, k: int, r: int) -> float:
    """The inner product <L_{n,k-1}, t^r> over [0, inf), k >= 1, r >= 0."""
    if k < 1:
        raise DomainError(f"moment integral needs k >= 1, got {k}")
    if r < 0:
        raise DomainError(f"moment integral needs r >= 0, got {r}")
    if k <= _EXACT_SERIES_K_CAP:
        c = (k - 1) * Fraction(p.beta)
        series = hyp1f1_terminating(2 - k, 1 - r - k, c)
        if not isinstance(series, Fraction):
            series = Fraction(series)
        # All series terms are nonnegative, so series >= 1 and the logs exist.
        log_series = math.log(series.numerator) - math.log(series.denominator)
    else:
        log_series = _log_hyp1f1_terminating(k, r, (k - 1) * p.beta)
    log_value = (
        math.log(pochhammer(k, r))
        - (r + 1) * math.log(p.n)
        - (k - 1) * p.beta
        + log_series
    )
    return math.exp(log_value)
