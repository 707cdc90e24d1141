"""Differential-identity checks and convergence experiments.

Identity checks come in two flavours.  Where the objects are exact
polynomials (the moment families), the identities are verified by exact
rational arithmetic and the residual is the zero polynomial -- that is
the acceptance gate.  Finite-difference variants of the same identities
are kept as smoke tests; their residuals scale as O(h^2) under step
halving.

Two identities circulate in print with defective coefficients; both are
checked here in their verified forms, with the quoted variants available
behind flags so the mismatch itself is testable:

* the beta-derivative relation for the ratio polynomials holds with the
  bracket [ r + beta(2-beta)/(1-beta) + (1-beta) k ]; the variant with a
  bare ``beta`` middle term does not vanish (counterexample r = 0),
* the beta-derivative of the basis needs the factor n x/(n x + beta) on
  the shifted lower-index term; without it the residual stays O(beta)
  (counterexample k = 2, where the closed form is elementary).

The convergence experiments drive the actual integral operator and
collect errors into :class:`ConvergenceReport` values that serialize to
CSV and JSON.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .basis import JainParams, jain_basis
from .config import SeriesQuadConfig
from .errors import DomainError
from .exactpoly import ExactPoly, ExpPoly
from .functions import TestFunction
from .moments import (
    asymptotic_derivative_coefficients,
    central_moment_derived,
    ratio_poly_recur,
    t_moment_general,
)
from .operators import apply_phillips

_RATE_FLOOR = 1e-300


# ---------------------------------------------------------------------------
# report carrier
# ---------------------------------------------------------------------------


@dataclass
class ConvergenceReport:
    """Errors of an experiment over an ascending list of n values."""

    n_values: list[float]
    errors: list[float]
    observed_rate: Optional[float] = field(default=None)
    limit_estimate: Optional[float] = None

    def __post_init__(self):
        if len(self.n_values) != len(self.errors):
            raise ValueError("n_values and errors must have equal length")
        if any(b <= a for a, b in zip(self.n_values, self.n_values[1:])):
            raise ValueError("n_values must be strictly increasing")
        if any(not math.isfinite(e) for e in self.errors):
            raise ValueError("errors must be finite")
        if self.observed_rate is None:
            self.observed_rate = _loglog_slope(self.n_values, self.errors)

    def local_rates(self) -> list[Optional[float]]:
        """Per-step log-log slopes; None for the first entry."""
        rates: list[Optional[float]] = [None]
        for (n0, n1), (e0, e1) in zip(
            zip(self.n_values, self.n_values[1:]), zip(self.errors, self.errors[1:])
        ):
            if e0 > 0 and e1 > 0:
                rates.append(math.log(e1 / e0) / math.log(n1 / n0))
            else:
                rates.append(None)
        return rates

    def to_csv(self) -> str:
        lines = ["n,error,rate"]
        for n, err, rate in zip(self.n_values, self.errors, self.local_rates()):
            rate_text = "" if rate is None else format(rate, ".17g")
            lines.append(f"{format(n, '.17g')},{format(err, '.17g')},{rate_text}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(
            {
                "n_values": self.n_values,
                "errors": self.errors,
                "observed_rate": self.observed_rate,
                "limit_estimate": self.limit_estimate,
            }
        )


def _loglog_slope(ns, errors) -> Optional[float]:
    points = [(n, e) for n, e in zip(ns, errors) if e > _RATE_FLOOR]
    if len(points) < 3:
        return None
    logs_n = np.log([p[0] for p in points])
    logs_e = np.log([p[1] for p in points])
    return float(np.polyfit(logs_n, logs_e, 1)[0])


# ---------------------------------------------------------------------------
# basis differential identity:  n x (D + n) L = k [ -beta (D + n) + (nx+beta)/x ] L
# ---------------------------------------------------------------------------


def _basis_dx(p: JainParams, k: int, x: float) -> float:
    # logarithmic derivative of L_{n,k} in x, exact closed form
    value = jain_basis(p, k, x)
    n, beta = p.n, p.beta
    if k == 0:
        return -n * value
    return value * (1.0 / x + (k - 1) * n / (n * x + k * beta) - n)


def check_basis_diff_identity(
    p: JainParams, k: int, x: float, h: float, mode: str = "fd"
) -> float:
    """Residual of the first-order differential identity of the basis.

    ``mode='fd'`` approximates D by central differences of step h and the
    residual is O(h^2); ``mode='analytic'`` uses the closed-form
    derivative and leaves roundoff only.
    """
    if k < 1:
        raise DomainError(f"identity check needs k >= 1, got {k}")
    if x <= 0:
        raise DomainError(f"identity check needs x > 0, got {x}")
    n, beta = p.n, p.beta
    value = jain_basis(p, k, x)
    if mode == "analytic":
        deriv = _basis_dx(p, k, x)
    elif mode == "fd":
        deriv = (jain_basis(p, k, x + h) - jain_basis(p, k, max(x - h, 0.0))) / (2 * h)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    lhs = n * x * (deriv + n * value)
    rhs = k * (-beta * (deriv + n * value) + (n * x + beta) / x * value)
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# raw-moment differential identity
# ---------------------------------------------------------------------------


def _series_moment_exp(r: int) -> ExpPoly:
    # the bare k-series: T_r minus its delta_{r,0} exp(-n x) sampling term
    value = t_moment_general(r)
    if r == 0:
        value = value - ExpPoly(0, 1)
    return value


def _identity_operands(r: int) -> tuple[ExpPoly, ExpPoly]:
    B = ExactPoly.beta()
    s_r = _series_moment_exp(r)
    s_r1 = _series_moment_exp(r + 1)
    s_r2 = _series_moment_exp(r + 2)
    g1 = (
        s_r2.times_n_power(2)
        - (r + 1 + B) * s_r1.times_n_power(1)
        + (r + 2) * B * s_r
    )
    g2 = ExactPoly.one_minus_beta() * s_r1.times_n_power(1) + (r + 2) * B * s_r
    return g1, g2


def t_moment_identity_residual(r: int) -> ExpPoly:
    """Exact residual of the second-order differential identity.

    The identity couples the k-series of orders r, r+1, r+2:

        [ -beta x (D+n) + n x + beta ] [ n^2 S_{r+2} - n(r+beta+1) S_{r+1}
                                          + beta (r+2) S_r ]
            = n x^2 (D+n) [ n(1-beta) S_{r+1} + beta (r+2) S_r ],

    where S_j is the bare basis series for the j-th moment (S_j = T_j for
    j >= 1 and S_0 = T_0 - exp(-n x); with T_0 = 1 in the r = 0 slot the
    identity picks up a 2 beta (n x + beta) exp(-n x) defect, so the
    series form is the one that closes).  The result is identically zero
    for every supported r.
    """
    B = ExactPoly.beta()
    X = ExactPoly.main()
    n_x = X.times_n_power(1)
    g1, g2 = _identity_operands(r)
    d_plus_n = lambda g: g.diff_x() + g.times_n_power(1)
    lhs = (-B * X) * d_plus_n(g1) + (n_x + B) * g1
    rhs = (X**2).times_n_power(1) * d_plus_n(g2)
    return lhs - rhs


def check_t_moment_diff_identity(
    p: JainParams, r: int, x: float, h: float, mode: str = "analytic"
) -> float:
    """Numeric residual of the raw-moment differential identity at x.

    ``mode='analytic'`` differentiates the exact polynomial forms and the
    residual is roundoff-level; ``mode='fd'`` replaces D by central
    differences of step h.
    """
    if x <= 0:
        raise DomainError(f"identity check needs x > 0, got {x}")
    n, beta = p.n, p.beta
    g1, g2 = _identity_operands(r)

    def d_plus_n(g: ExpPoly, at: float) -> float:
        if mode == "analytic":
            deriv = g.diff_x().eval(at, beta, n)
        elif mode == "fd":
            deriv = (g.eval(at + h, beta, n) - g.eval(at - h, beta, n)) / (2 * h)
        else:
            raise ValueError(f"unknown mode {mode!r}")
        return deriv + n * g.eval(at, beta, n)

    lhs = -beta * x * d_plus_n(g1, x) + (n * x + beta) * g1.eval(x, beta, n)
    rhs = n * x**2 * d_plus_n(g2, x)
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# beta-derivative identities
# ---------------------------------------------------------------------------


def ratio_beta_identity_residual(r: int, simple_beta_bracket: bool = False) -> ExactPoly:
    """Exact residual of  beta dR_r/dbeta = bracket * R_r - n R_{r+1}.

    With the verified bracket [ r + beta(2-beta)/(1-beta) + (1-beta) k ]
    the residual is the zero polynomial for every r.  With
    ``simple_beta_bracket=True`` the middle term is the bare ``beta`` of
    the commonly quoted form, and the residual equals
    beta/(1-beta) * R_r -- nonzero for every beta > 0.
    """
    K = ExactPoly.main()
    B = ExactPoly.beta()
    OMB = ExactPoly.one_minus_beta()
    if simple_beta_bracket:
        bracket = r + B + OMB * K
    else:
        bracket = r + (B * (2 - B)).over_one_minus_beta() + OMB * K
    p_r = ratio_poly_recur(r)
    p_next = ratio_poly_recur(r + 1)
    return B * p_r.diff_beta() - (bracket * p_r - p_next.times_n_power(1))


def check_ratio_beta_derivative(
    r: int,
    k: int,
    beta: float,
    h: float,
    n: float = 1.0,
    mode: str = "exact",
    simple_beta_bracket: bool = False,
) -> float:
    """Numeric residual of the ratio-polynomial beta-derivative identity.

    ``mode='exact'`` differentiates the rational form symbolically (the
    residual is roundoff-level, and exactly zero as a polynomial);
    ``mode='fd'`` uses a central difference in beta with step h, which
    needs h < min(beta, 1-beta).
    """
    if not 0 < beta < 1:
        raise DomainError(f"beta must lie in (0, 1), got {beta}")
    if mode == "exact":
        return abs(
            ratio_beta_identity_residual(r, simple_beta_bracket).eval(k, beta, n)
        )
    if mode != "fd":
        raise ValueError(f"unknown mode {mode!r}")
    if not h < min(beta, 1.0 - beta):
        raise DomainError("step h must stay inside (0, 1) around beta")
    p_r = ratio_poly_recur(r)
    deriv = (p_r.eval(k, beta + h, n) - p_r.eval(k, beta - h, n)) / (2 * h)
    if simple_beta_bracket:
        bracket = r + beta + (1 - beta) * k
    else:
        bracket = r + beta * (2 - beta) / (1 - beta) + (1 - beta) * k
    rhs = bracket * p_r.eval(k, beta, n) - n * ratio_poly_recur(r + 1).eval(k, beta, n)
    return abs(beta * deriv - rhs)


def check_basis_beta_derivative(
    p: JainParams,
    k: int,
    x: float,
    h: float,
    mode: str = "fd",
    drop_shift_prefactor: bool = False,
) -> float:
    """Residual of  dL_{n,k}/dbeta = -k L_{n,k}(x)
                                     + (k-1) [n x/(n x + beta)] L_{n,k-1}(x + beta/n).

    The n x/(n x + beta) factor is required: differentiating the closed
    form of L_{n,2} shows the shifted term carries n x, not n x + beta.
    ``drop_shift_prefactor=True`` checks the variant without the factor,
    whose residual does not vanish for beta > 0.

    ``mode='fd'`` uses a central difference in beta (O(h^2) residual),
    ``mode='analytic'`` the closed-form derivative.
    """
    if k < 1:
        raise DomainError(f"identity check needs k >= 1, got {k}")
    if x <= 0:
        raise DomainError(f"identity check needs x > 0, got {x}")
    n, beta = p.n, p.beta
    if mode == "analytic":
        # d/dbeta log L = k(k-1)/(nx + k beta) - k
        deriv = jain_basis(p, k, x) * (k * (k - 1) / (n * x + k * beta) - k)
    elif mode == "fd":
        if not 0 < beta - h < beta + h < 1:
            raise DomainError("step h must keep beta +/- h inside (0, 1)")
        deriv = (
            jain_basis(JainParams(n, beta + h), k, x)
            - jain_basis(JainParams(n, beta - h), k, x)
        ) / (2 * h)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    shifted = (k - 1) * jain_basis(p, k - 1, x + beta / n)
    if not drop_shift_prefactor:
        shifted *= n * x / (n * x + beta)
    rhs = -k * jain_basis(p, k, x) + shifted
    return abs(deriv - rhs)


# ---------------------------------------------------------------------------
# convergence experiments
# ---------------------------------------------------------------------------


def voronovskaja_limit(beta: float, x: float, fp_x: float, fpp_x: float) -> float:
    """The first-order limit  A(beta) f'(x) + C(beta, x) f''(x).

    The coefficients come from the exact large-n central-moment limits
    (A = beta(2-beta)/(1-beta), C = x/(1-beta)); see
    :func:`jainops.moments.asymptotic_derivative_coefficients`.
    """
    a_coeff, c_coeff = asymptotic_derivative_coefficients()
    return a_coeff.eval(x, beta, 1.0) * fp_x + c_coeff.eval(x, beta, 1.0) * fpp_x


def voronovskaja_experiment(
    beta: float,
    f: TestFunction,
    fp: TestFunction,
    fpp: TestFunction,
    x: float,
    n_values,
    cfg: SeriesQuadConfig,
) -> ConvergenceReport:
    """Errors of n [P_n f - f](x) against the exact first-order limit."""
    if x <= 0:
        raise DomainError(f"the asymptotic experiment needs x > 0, got {x}")
    limit = voronovskaja_limit(beta, x, fp.eval(x), fpp.eval(x))
    f_x = f.eval(x)
    scaled = [
        n * (apply_phillips(JainParams(n, beta), f, x, cfg) - f_x) for n in n_values
    ]
    errors = [abs(v - limit) for v in scaled]
    return ConvergenceReport(
        n_values=list(n_values), errors=errors, limit_estimate=scaled[-1]
    )


def korovkin_convergence_table(
    beta: float,
    f: TestFunction,
    interval: tuple[float, float],
    n_values,
    grid_size: int,
    cfg: SeriesQuadConfig,
) -> ConvergenceReport:
    """Sup-norm errors of the integral operator on a grid over [a, b]."""
    a, b = interval
    if not 0 <= a < b:
        raise DomainError(f"interval must satisfy 0 <= a < b, got {interval}")
    xs = np.linspace(a, b, grid_size)
    errors = []
    for n in n_values:
        p = JainParams(n, beta)
        errors.append(
            max(abs(apply_phillips(p, f, float(x), cfg) - f.eval(float(x))) for x in xs)
        )
    return ConvergenceReport(n_values=list(n_values), errors=errors)


# ---------------------------------------------------------------------------
# moduli of continuity and the sup-norm smoothness bound
# ---------------------------------------------------------------------------


def modulus_of_continuity(
    f: TestFunction,
    delta: float,
    order: int = 1,
    domain_cap: float = 10.0,
    grid_size: int = 64,
) -> float:
    """Grid supremum of |forward difference of given order| with step <= delta.

    This is a lower bound on the true modulus (the supremum is scanned on
    a finite grid of steps h in (0, delta] and points x in [0, domain_cap]);
    the refinement study in the test suite shows the grid values are stable
    for the built-in corpus.
    """
    if delta <= 0:
        raise DomainError(f"modulus needs delta > 0, got {delta}")
    if order not in (1, 2):
        raise DomainError(f"modulus order must be 1 or 2, got {order}")
    signs = [(-1) ** (order - i) * math.comb(order, i) for i in range(order + 1)]
    best = 0.0
    xs = np.linspace(0.0, domain_cap, 8 * grid_size + 1)
    for j in range(1, grid_size + 1):
        h = delta * j / grid_size
        for x in xs:
            diff = sum(s * f.eval(float(x) + i * h) for i, s in enumerate(signs))
            best = max(best, abs(diff))
    return best


def _exp_shift(p: JainParams, x: float) -> float:
    # beta(2-beta)(1 - e^{-nx}) / (n(1-beta)): the first central moment
    return (
        p.beta
        * (2 - p.beta)
        * (1 - math.exp(-p.n * x))
        / (p.n * (1 - p.beta))
    )


def smoothness_bound_peetre_radius(p: JainParams, x: float) -> float:
    """The radius delta_n = mu_2(x) + shift(x)^2 entering the sup-norm bound."""
    mu2 = central_moment_derived(2).eval(x, p.beta, p.n)
    return mu2 + _exp_shift(p, x) ** 2


def smoothness_bound_check(
    p: JainParams,
    f: TestFunction,
    x: float,
    C: float,
    cfg: SeriesQuadConfig,
    grid_size: int = 48,
) -> tuple[float, float, bool]:
    """Check  |P_n f (x) - f(x)| <= C w2(f, sqrt(delta_n)) + w(f, shift).

    Requires beta > 0 and bounded continuous f.  The constant C is a free
    parameter reported empirically, never asserted to a universal value;
    use :func:`minimal_smoothness_constant` for the smallest C that makes
    the inequality hold at this point.
    """
    if not p.beta > 0:
        raise DomainError("the smoothness bound requires beta > 0")
    if not f.is_bounded:
        raise DomainError("the smoothness bound applies to bounded f only")
    cap = max(10.0, 4.0 * x)
    shift = _exp_shift(p, x)
    radius = math.sqrt(smoothness_bound_peetre_radius(p, x))
    w2 = modulus_of_continuity(f, radius, order=2, domain_cap=cap, grid_size=grid_size)
    w1 = modulus_of_continuity(f, shift, order=1, domain_cap=cap, grid_size=grid_size)
    lhs = abs(apply_phillips(p, f, x, cfg) - f.eval(x))
    rhs = C * w2 + w1
    return lhs, rhs, lhs <= rhs


def minimal_smoothness_constant(
    p: JainParams,
    f: TestFunction,
    x: float,
    cfg: SeriesQuadConfig,
    grid_size: int = 48,
) -> float:
    """Smallest C for which the sup-norm smoothness bound holds at x."""
    lhs, rhs_at_zero, _ = smoothness_bound_check(p, f, x, 0.0, cfg, grid_size)
    excess = lhs - rhs_at_zero  # rhs at C = 0 is the plain modulus term
    if excess <= 0:
        return 0.0
    cap = max(10.0, 4.0 * x)
    radius = math.sqrt(smoothness_bound_peetre_radius(p, x))
    w2 = modulus_of_continuity(f, radius, order=2, domain_cap=cap, grid_size=grid_size)
    if w2 == 0.0:
        return math.inf
    return excess / w2
