"""Numerical application of the sampling and integral operators.

``apply_jain`` evaluates the sampling series  sum_k L_{n,k}(x) f(k/n).
``apply_phillips`` evaluates the integral modification

    sum_{k>=1} [ <L_{n,k-1}, f> / <L_{n,k-1}, 1> ] L_{n,k}(x)
        + exp(-n x) f(0),

with the inner-product ratios computed exactly for polynomial f (through
the closed hypergeometric moment integrals) and by adaptive quadrature
otherwise.  Both reuse the basis-mass truncation criterion; the index is
doubled for unbounded f, which is what keeps polynomially weighted tails
below the verification tolerances.

The operator series converges for polynomially bounded f; exponentially
growing inputs (e^{a t} with a of the order of n(1-beta)) are outside the
supported class and are the caller's responsibility.

``t_moment_series`` and ``central_moment_series`` are the numeric series
routes for the moment objects: their per-index weights are the exact
moment-ratio polynomials, which makes them direct oracles for the
symbolic closed forms in :mod:`jainops.moments`.
"""

from __future__ import annotations

import math

from .basis import JainParams, basis_moment_integral, basis_partial_sum, jain_basis
from .config import SeriesQuadConfig
from .functions import TestFunction
from .moments import ratio_poly_recur
from .numerics import integrate_halfline


def _truncation_index(p: JainParams, x: float, cfg: SeriesQuadConfig, widen: bool) -> int:
    _, k_used = basis_partial_sum(p, x, cfg)
    return 2 * k_used if widen else k_used


def _horner(coeffs: list[float], k: float) -> float:
    value = 0.0
    for c in reversed(coeffs):
        value = value * k + c
    return value


def _kernel_breakpoints(p: JainParams, k: int) -> list[float] | None:
    """Bracket the peak of the integration kernel L_{n,k-1}(t).

    The kernel concentrates near t = (k-1)(1-beta)/n with width of order
    sqrt(k)/n; for large k the automatic infinite-interval transformation
    can step over the peak, so hand it explicit split points.
    """
    if k < 20:
        return None
    center = (k - 1) * (1.0 - p.beta) / p.n
    width = 12.0 * ((1.0 - p.beta) * math.sqrt(k) + 4.0) / p.n
    return [max(center - width, 0.0), center + width]


def _phillips_ratio(p: JainParams, k: int, f: TestFunction, cfg: SeriesQuadConfig) -> float:
    key = (p.n, p.beta, k, cfg.quad_rel_tol)
    cached = f._moment_cache.get(key)
    if cached is not None:
        return cached
    denom = basis_moment_integral(p, k, 0)
    if f.poly_coeffs is not None:
        numer = sum(
            a * basis_moment_integral(p, k, r)
            for r, a in enumerate(f.poly_coeffs)
            if a
        )
    else:
        numer = integrate_halfline(
            lambda t: jain_basis(p, k - 1, t) * f.eval(t),
            cfg,
            breakpoints=_kernel_breakpoints(p, k),
        )
    ratio = numer / denom
    f._moment_cache[key] = ratio
    return ratio


def apply_jain(p: JainParams, f: TestFunction, x: float, cfg: SeriesQuadConfig) -> float:
    """The sampling operator applied to f at x."""
    k_top = _truncation_index(p, x, cfg, widen=not f.is_bounded)
    n = p.n
    return sum(jain_basis(p, k, x) * f.eval(k / n) for k in range(k_top + 1))


def apply_phillips(p: JainParams, f: TestFunction, x: float, cfg: SeriesQuadConfig) -> float:
    """The integral-modified operator applied to f at x.

    The exp(-n x) f(0) term is added separately and exactly; it is never
    folded into the series over k.
    """
    k_top = _truncation_index(p, x, cfg, widen=not f.is_bounded)
    total = 0.0
    for k in range(1, k_top + 1):
        weight = jain_basis(p, k, x)
        if weight:
            total += _phillips_ratio(p, k, f, cfg) * weight
    return total + math.exp(-p.n * x) * f.eval(0.0)


def t_moment_series(p: JainParams, r: int, x: float, cfg: SeriesQuadConfig) -> float:
    """Numeric series for the r-th raw moment of the integral operator.

    Sums the moment-ratio polynomial against the basis, plus the
    exp(-n x) f(0) term that only the r = 0 monomial contributes.
    """
    coeffs = ratio_poly_recur(r).main_coefficient_floats(p.beta, p.n)
    k_top = _truncation_index(p, x, cfg, widen=True)
    total = 0.0
    for k in range(1, k_top + 1):
        weight = jain_basis(p, k, x)
        if weight:
            total += _horner(coeffs, k) * weight
    if r == 0:
        total += math.exp(-p.n * x)
    return total


def central_moment_series(p: JainParams, r: int, x: float, cfg: SeriesQuadConfig) -> float:
    """Numeric series for the r-th central moment at x.

    The weight at index k is the binomial combination
    sum_j C(r,j) (-x)^{r-j} R_j(k) of the exact moment-ratio polynomials
    (no quadrature), so this route is directly comparable to the
    symbolic binomial construction.
    """
    tables = [
        ratio_poly_recur(j).main_coefficient_floats(p.beta, p.n) for j in range(r + 1)
    ]
    binom = [math.comb(r, j) * (-x) ** (r - j) for j in range(r + 1)]
    k_top = _truncation_index(p, x, cfg, widen=True)
    total = 0.0
    for k in range(1, k_top + 1):
        weight = jain_basis(p, k, x)
        if weight:
            total += weight * sum(b * _horner(t, k) for b, t in zip(binom, tables))
    return total + math.exp(-p.n * x) * (-x) ** r
