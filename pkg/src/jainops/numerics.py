"""Special functions and half-line quadrature.

The moment calculus needs exactly three pieces of special-function
machinery -- the rising factorial, the terminating Kummer function
1F1(a; b; z) with nonpositive integer a, and the Tricomi U function as a
half-line integral used purely as a cross-check oracle -- plus adaptive
quadrature on [0, inf) for the integral operator.  Everything here is a
pure function; nothing holds mutable state.
"""

from __future__ import annotations

import math

from scipy.integrate import quad

from .config import SeriesQuadConfig
from .errors import DomainError, QuadratureError

# Absolute floor handed to QUADPACK so zero-valued integrals terminate;
# relative accuracy is governed by SeriesQuadConfig.quad_rel_tol.
_QUAD_EPSABS = 1e-14


def pochhammer(a, m: int):
    """Rising factorial a (a+1) ... (a+m-1); 1 for m = 0.

    The result type follows the argument type, so exact rational input
    gives an exact rational product.
    """
    if m < 0:
        raise DomainError(f"pochhammer needs m >= 0, got {m}")
    result = 1
    for i in range(m):
        result = result * (a + i)
    return result


def hyp1f1_terminating(a, b, z):
    """Kummer's 1F1(a; b; z) in its terminating regime.

    Requires a to be a nonpositive integer (the sum then has |a| + 1
    terms), or z = 0 where the value is 1 for any parameters.  The lower
    parameter b may be a negative integer as long as no needed
    denominator factor (b)_j vanishes: in the moment integrals the call
    is always (a, b) = (2 - k, 1 - r - k), whose sum stops at degree
    j = k - 2 while the first vanishing factor of (b)_j would occur at
    j = r + k - 1 > k - 2, so the computation is always well defined.

    Arithmetic follows the argument types: Fraction arguments give the
    exact rational value of the polynomial.
    """
    if z == 0:
        return 1
    if a > 0 or a != int(a):
        raise DomainError(
            f"hyp1f1_terminating needs a nonpositive integer a (or z = 0), got a={a}"
        )
    degree = -int(a)
    term = 1
    total = 1
    for j in range(degree):
        num = a + j
        if num == 0:
            break
        den = b + j
        if den == 0:
            raise DomainError(
                f"hyp1f1_terminating hit a vanishing denominator (b)_j at b={b}, j={j + 1}"
            )
        term = term * num * z / (den * (j + 1))
        total = total + term
    return total


def _quad_piece(fn, lo, hi, cfg: SeriesQuadConfig) -> float:
    out = quad(
        fn,
        lo,
        hi,
        epsabs=_QUAD_EPSABS,
        epsrel=cfg.quad_rel_tol,
        limit=cfg.quad_max_subdiv,
        full_output=True,
    )
    value, abserr = out[0], out[1]
    if len(out) > 3:
        # QUADPACK appends an explanation when it gives up; accept the result
        # anyway if its own error estimate meets the requested tolerance
        # (typical for roundoff-limited pieces of negligible magnitude).
        if abserr > max(_QUAD_EPSABS, abs(value) * 10 * cfg.quad_rel_tol):
            raise QuadratureError(
                f"quadrature on [{lo}, {hi}] failed: {out[3].strip()}"
            )
    return value


def _integrate_halfline_callable(fn, cfg: SeriesQuadConfig, breakpoints=None) -> float:
    pieces = [0.0]
    if breakpoints:
        pieces.extend(b for b in sorted(breakpoints) if b > 0)
    total = 0.0
    for lo, hi in zip(pieces, pieces[1:]):
        total += _quad_piece(fn, lo, hi, cfg)
    total += _quad_piece(fn, pieces[-1], math.inf, cfg)
    return total


def integrate_halfline(f, cfg: SeriesQuadConfig, breakpoints=None) -> float:
    """Integral of f over [0, inf) to relative tolerance cfg.quad_rel_tol.

    ``f`` is either a plain callable or a TestFunction (anything with an
    ``eval`` attribute).  Optional ``breakpoints`` split the range so that
    sharply peaked integrands (high-index basis kernels) are not missed by
    the infinite-interval transformation.  Raises QuadratureError when the
    adaptive scheme cannot converge within cfg.quad_max_subdiv.
    """
    fn = getattr(f, "eval", f)
    return _integrate_halfline_callable(fn, cfg, breakpoints)


def tricomi_u_oracle(a: float, b: float, z: float, cfg: SeriesQuadConfig) -> float:
    """Tricomi's confluent hypergeometric function U(a, b, z) for a, z > 0.

    Evaluated directly from the integral representation

        U(a, b, z) = (1/Gamma(a)) * int_0^inf e^{-z t} t^{a-1} (1+t)^{b-a-1} dt,

    which is the independent cross-check route for the closed
    hypergeometric moment formula; it is deliberately not computed from
    any series identity.
    """
    if not a > 0:
        raise DomainError(f"tricomi_u_oracle needs a > 0, got {a}")
    if not z > 0:
        raise DomainError(f"tricomi_u_oracle needs z > 0, got {z}")
    power = b - a - 1

    def integrand(t: float) -> float:
        if t == 0.0:
            return 0.0 if a > 1 else (1.0 if a == 1 else math.inf)
        return math.exp(-z * t + (a - 1) * math.log(t) + power * math.log1p(t))

    # The integrand decays like e^{-z t} t^{b-2}; split where the mass sits.
    scale = max(a / z, 1.0 / z, 1.0)
    value = _integrate_halfline_callable(
        integrand, cfg, breakpoints=[scale, 10.0 * scale]
    )
    return value / math.gamma(a)
