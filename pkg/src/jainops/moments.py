"""Closed forms and exact recurrences for the operator moments.

Objects
-------
ratio polynomials ``R_r``
    Degree-r polynomials in the basis index ``k`` generated from
    ``R_0 = 1`` and ``R_1 = [(1-beta) k + beta(2-beta)/(1-beta)] / n``
    by the three-term recurrence

        n^2 R_{r+2}(k) = n [ (1-beta)(k-1) + r+2 ] R_{r+1}(k)
                         + beta (r+2) (k-1) R_r(k).

    At beta = 0 they reduce to the rising factorials (k)_r / n^r, the
    classical integral-weight ratios.  For beta > 0 they are the rapidly
    attained large-k form of the integral ratios
    <L_{n,k-1}, t^r>/<L_{n,k-1}, 1>, and they are the coefficient
    sequence whose basis series generates every closed moment formula in
    this module.

jain moments
    ``B(t^r, x)`` for the sampling operator, degree <= 5.

t moments ``T_r``
    Images of t^r under the integral operator, the pair
    poly(x) + coeff * exp(-n x).

exponential-free moments ``f_r``
    ``T_r + [(beta/n)^r (r+1-beta)/(1-beta) - delta_{r,0}] exp(-n x)``;
    pure polynomials satisfying their own recurrence.

central moments ``mu_r``
    Images of (t-x)^r, both by exact binomial construction (the trusted
    route) and from a fixed reference table that is known to deviate from
    the construction in three coefficients (see
    ``central_moment_discrepancy``).

Everything here is exact rational arithmetic; every builder is cached and
returns immutable values.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError, RangeError
from .exactpoly import ExactPoly, ExpPoly

_HALF = Fraction(1, 2)


def _bp(coeffs) -> ExactPoly:
    return ExactPoly.beta_series(coeffs)


def _sym():
    # fresh handles; ExactPoly values are immutable so sharing would be
    # fine, but locals keep the formulas below readable
    return (
        ExactPoly.main(),
        ExactPoly.beta(),
        ExactPoly.ninv(),
        ExactPoly.one_minus_beta(),
    )


# ---------------------------------------------------------------------------
# ratio polynomials in the basis index
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def ratio_poly_closed(r: int) -> ExactPoly:
    """Tabulated closed form of R_r (main symbol = basis index k), r <= 5."""
    if not 0 <= r <= 5:
        raise RangeError(f"ratio_poly_closed covers 0 <= r <= 5, got {r}")
    K, B, NI, OMB = _sym()
    if r == 0:
        return ExactPoly.const(1)
    if r == 1:
        return NI * (OMB * K + (B * (2 - B)).over_one_minus_beta())
    if r == 2:
        return NI**2 * (
            OMB**2 * K**2
            + _bp([1, 4, -2]) * K
            + (B**2 * (3 - B)).over_one_minus_beta()
        )
    if r == 3:
        return NI**3 * (
            OMB**3 * K**3
            + 3 * _bp([1, 1, -3, 1]) * K**2
            + (_bp([2, 4, 6, -12, 3]) * K).over_one_minus_beta()
            + (B**3 * (4 - B)).over_one_minus_beta()
        )
    if r == 4:
        return NI**4 * (
            OMB**4 * K**4
            + 2 * _bp([3, -2, -7, 8, -2]) * K**3
            + _bp([11, 16, 6, -24, 6]) * K**2
            + (2 * _bp([3, 5, 5, 5, -10, 2]) * K).over_one_minus_beta()
            + (B**4 * (5 - B)).over_one_minus_beta()
        )
    return NI**5 * (
        OMB**5 * K**5
        + 5 * OMB**3 * _bp([2, 2, -1]) * K**4
        + 5 * OMB * _bp([7, 8, 0, -8, 2]) * K**3
        + (5 * _bp([10, 6, -3, -8, -12, 12, -2]) * K**2).over_one_minus_beta()
        + (_bp([24, 36, 30, 20, 15, -30, 5]) * K).over_one_minus_beta()
        + (B**5 * (6 - B)).over_one_minus_beta()
    )


@lru_cache(maxsize=None)
def ratio_poly_recur(r: int) -> ExactPoly:
    """R_r generated by the exact three-term recurrence; defined for all r >= 0."""
    if r < 0:
        raise RangeError(f"ratio_poly_recur needs r >= 0, got {r}")
    if r <= 1:
        return ratio_poly_closed(r)
    K, B, NI, OMB = _sym()
    j = r - 2
    return NI * ((OMB * (K - 1) + (j + 2)) * ratio_poly_recur(r - 1)) + NI**2 * (
        (j + 2) * B * (K - 1) * ratio_poly_recur(r - 2)
    )


# ---------------------------------------------------------------------------
# sampling-operator (Jain) moments
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def jain_moment_closed(r: int) -> ExactPoly:
    """B(t^r, x) for the sampling operator (main symbol = x), r <= 5."""
    if not 0 <= r <= 5:
        raise RangeError(f"jain_moment_closed covers 0 <= r <= 5, got {r}")
    X, B, NI, OMB = _sym()
    if r == 0:
        return ExactPoly.const(1)
    if r == 1:
        return X.over_one_minus_beta()
    if r == 2:
        return (X**2).over_one_minus_beta(2) + (X * NI).over_one_minus_beta(3)
    if r == 3:
        return (
            (X**3).over_one_minus_beta(3)
            + (3 * X**2 * NI).over_one_minus_beta(4)
            + (_bp([1, 2]) * X * NI**2).over_one_minus_beta(5)
        )
    if r == 4:
        return (
            (X**4).over_one_minus_beta(4)
            + (6 * X**3 * NI).over_one_minus_beta(5)
            + (_bp([7, 8]) * X**2 * NI**2).over_one_minus_beta(6)
            + (_bp([1, 8, 6]) * X * NI**3).over_one_minus_beta(7)
        )
    return (
        (X**5).over_one_minus_beta(5)
        + (10 * X**4 * NI).over_one_minus_beta(6)
        + (5 * _bp([5, 4]) * X**3 * NI**2).over_one_minus_beta(7)
        + (15 * _bp([1, 4, 2]) * X**2 * NI**3).over_one_minus_beta(8)
        + (_bp([1, 22, 58, 24]) * X * NI**4).over_one_minus_beta(9)
    )


# ---------------------------------------------------------------------------
# integral-operator raw moments
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def t_moment_closed(r: int) -> ExpPoly:
    """Tabulated T_r (main symbol = x), r <= 3."""
    if not 0 <= r <= 3:
        raise RangeError(f"t_moment_closed covers 0 <= r <= 3, got {r}")
    X, B, NI, OMB = _sym()
    if r == 0:
        return ExpPoly(1, 0)
    if r == 1:
        tail = (B * (2 - B) * NI).over_one_minus_beta()
        return ExpPoly(X + tail, -tail)
    if r == 2:
        tail = (B**2 * (3 - B) * NI**2).over_one_minus_beta()
        return ExpPoly(
            X**2 + (2 * _bp([1, 2, -1]) * X * NI).over_one_minus_beta() + tail,
            -tail,
        )
    tail = (B**3 * (4 - B) * NI**3).over_one_minus_beta()
    return ExpPoly(
        X**3
        + (3 * _bp([2, 2, -1]) * X**2 * NI).over_one_minus_beta()
        + (3 * _bp([2, 4, 1, -4, 1]) * X * NI**2).over_one_minus_beta(2)
        + tail,
        -tail,
    )


@lru_cache(maxsize=None)
def t_moment_general(r: int) -> ExpPoly:
    """T_r for any r with an available moment table (currently r <= 5).

    Built by expanding R_r in powers of the basis index and substituting
    the sampling-operator moments:

        T_r = sum_{s>=1} c_s n^s B(t^s, .) + c_0 (1 - exp(-n x))
              + delta_{r,0} exp(-n x),

    where c_s is the k^s coefficient of R_r.  The trailing term is the
    operator's separate exp(-n x) f(0) contribution, which only the r = 0
    monomial sees.
    """
    if r < 0:
        raise RangeError(f"t_moment_general needs r >= 0, got {r}")
    coeffs = ratio_poly_recur(r).main_coefficients()
    degree = max(coeffs)
    if degree > 5:
        raise RangeError(
            f"t_moment_general({r}) needs sampling moments of degree {degree}; "
            "jain_moment_closed stops at 5"
        )
    poly = ExactPoly()
    for s, c_s in coeffs.items():
        if s > 0:
            poly = poly + c_s.times_n_power(s) * jain_moment_closed(s)
    c_0 = coeffs.get(0, ExactPoly())
    poly = poly + c_0
    exp_coeff = -c_0 + (1 if r == 0 else 0)
    return ExpPoly(poly, exp_coeff)


# ---------------------------------------------------------------------------
# exponential-free moment polynomials
# ---------------------------------------------------------------------------


def expfree_coefficient(j: int, r: int) -> ExactPoly:
    """The beta-polynomial multiplying C(r,j) x^{r-j} / (n(1-beta))^j."""
    if j == 0:
        return ExactPoly.const(1)
    if j == 1:
        return _bp([r - 1, 2, -1])
    if j == 2:
        return _bp([(r - 1) * (r - 2), 4 * (r - 2), 7 - 2 * r, -4, 1])
    if (j, r) == (3, 4):
        return _bp([6, 12, 6, -8, -6, 6, -1])
    if (j, r) == (3, 5):
        return _bp([24, 36, 6, -20, -3, 6, -1])
    if (j, r) == (4, 5):
        return _bp([24, 48, 48, -8, -31, 8, 14, -8, 1])
    raise RangeError(f"no tabulated expfree coefficient for j={j}, r={r}")


@lru_cache(maxsize=None)
def expfree_moment_closed(r: int) -> ExactPoly:
    """Closed form of f_r (main symbol = x), r <= 5."""
    if not 0 <= r <= 5:
        raise RangeError(f"expfree_moment_closed covers 0 <= r <= 5, got {r}")
    X, B, NI, OMB = _sym()
    if r == 0:
        return ExactPoly.const(1)
    total = ExactPoly()
    for j in range(r):
        total = total + (
            math.comb(r, j) * expfree_coefficient(j, r) * X ** (r - j) * NI**j
        ).over_one_minus_beta(j)
    return total + (B**r * NI**r * (r + 1 - B)).over_one_minus_beta()


def f_recurrence_coefficient(j: int, r: int) -> ExactPoly:
    """Weight of f_{r-j-1} in the one-step recurrence for f_r (2 <= r <= 5).

    These are the unique values making the recurrence exact; they were
    solved for from the closed forms and are pinned by the test suite.
    Three entries of the commonly quoted table differ from them -- see
    ``f_recurrence_coefficient_quoted``.
    """
    if not (2 <= r <= 5 and 1 <= j <= r - 1):
        raise RangeError(f"no recurrence coefficient for j={j}, r={r}")
    if j == 1:
        return (r - 1) * _bp([r - 2, 4, -1])
    if j == 2:
        return (r - 1) * (r - 2) * _bp([2, 2 * r - 5, 1])
    if (j, r) == (3, 4):
        return 6 * _bp([1, 6, -1])
    if (j, r) == (3, 5):
        return 12 * _bp([3, 12, -2])
    return 12 * _bp([4, 7, 2])  # (j, r) == (4, 5)


def f_recurrence_coefficient_quoted(j: int, r: int) -> ExactPoly:
    """Commonly quoted variant of the recurrence table, kept for comparison.

    It differs from the exact table in the j = 2 prefactor (quoted as
    (r-2)(r-3) where (r-1)(r-2) is required) and in the (3,5) and (4,5)
    entries; the test suite documents the mismatches.
    """
    if not (2 <= r <= 5 and 1 <= j <= r - 1):
        raise RangeError(f"no recurrence coefficient for j={j}, r={r}")
    if j == 1:
        return (r - 1) * _bp([r - 2, 4, -1])
    if j == 2:
        return (r - 2) * (r - 3) * _bp([2, 2 * r - 5, 1])
    if (j, r) == (3, 4):
        return 6 * _bp([1, 6, -1])
    if (j, r) == (3, 5):
        return 12 * _bp([3, 10, -2])
    return 48 * _bp([1, 1, 1])  # (j, r) == (4, 5)


@lru_cache(maxsize=None)
def expfree_moment_recur(r: int, quoted_table: bool = False) -> ExactPoly:
    """f_r from f_{r-1}, ..., f_0 via the one-step recurrence, 2 <= r <= 5."""
    if not 2 <= r <= 5:
        raise RangeError(f"expfree_moment_recur covers 2 <= r <= 5, got {r}")
    X, B, NI, OMB = _sym()
    table = f_recurrence_coefficient_quoted if quoted_table else f_recurrence_coefficient

    def f_of(m: int) -> ExactPoly:
        if m < 2:
            return expfree_moment_closed(m)
        return expfree_moment_recur(m, quoted_table)

    lead = X + ((2 * (r - 1) + B * (2 - B)) * NI).over_one_minus_beta()
    total = lead * f_of(r - 1)
    for j in range(1, r):
        weight = ((-1) ** j * B ** (j - 1) * table(j, r) * NI ** (j + 1))
        total = total + weight.over_one_minus_beta(j + 1) * f_of(r - j - 1)
    return total


# ---------------------------------------------------------------------------
# central moments
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def central_moment_exp_coefficient(r: int) -> ExactPoly:
    """The polynomial F_r(x) multiplying (1 - exp(-n x)) in mu_r, r >= 1."""
    if r < 1:
        raise RangeError(f"central_moment_exp_coefficient needs r >= 1, got {r}")
    X, B, NI, OMB = _sym()
    total = ExactPoly()
    for s in range(r):
        total = total + (
            (-1) ** s
            * math.comb(r, s)
            * (B * NI) ** (r - s)
            * (r + 1 - s - B)
            * X**s
        ).over_one_minus_beta()
    return total


@lru_cache(maxsize=None)
def central_moment_derived(r: int) -> ExpPoly:
    """mu_r by exact binomial expansion over the raw moments (trusted route)."""
    if r < 0:
        raise RangeError(f"central_moment_derived needs r >= 0, got {r}")
    X = ExactPoly.main()
    total = ExpPoly(0, 0)
    for j in range(r + 1):
        total = total + math.comb(r, j) * (-X) ** (r - j) * t_moment_general(j)
    return total


@lru_cache(maxsize=None)
def central_moment_closed(r: int) -> ExpPoly:
    """mu_r from the fixed reference table, 1 <= r <= 5.

    The table agrees with ``central_moment_derived`` exactly for
    r in {1, 2}.  For r in {3, 4, 5} one printed coefficient per order
    deviates from the exact construction; the derived route is
    authoritative and ``central_moment_discrepancy`` exposes the exact
    difference rather than silently patching the table.
    """
    if not 1 <= r <= 5:
        raise RangeError(f"central_moment_closed covers 1 <= r <= 5, got {r}")
    X, B, NI, OMB = _sym()
    F = central_moment_exp_coefficient(r)
    if r == 1:
        return ExpPoly(F, -F)
    if r == 2:
        poly = (2 * _bp([1, 2, -1]) * X * NI).over_one_minus_beta()
        return ExpPoly(poly + F, -F)
    if r == 3:
        poly = (3 * B * (B - 2) * X**2 * NI).over_one_minus_beta() + (
            3 * _bp([2, 4, 1, -1, 1]) * X * NI**2
        ).over_one_minus_beta(2)
        return ExpPoly(poly + F, -F)
    if r == 4:
        poly = (
            (4 * B * (2 - B) * X**3 * NI).over_one_minus_beta()
            + (2 * _bp([10, 8, -13, 6, 3]) * X**2 * NI**2).over_one_minus_beta(2)
            + (4 * _bp([6, 12, 6, -8, -6, 6, -1]) * X * NI**3).over_one_minus_beta(3)
        )
        return ExpPoly(poly + F, -F)
    poly = (
        (5 * B * (B - 2) * X**4 * NI).over_one_minus_beta()
        + (10 * B**2 * _bp([3, -4, 1]) * X**3 * NI**2).over_one_minus_beta(2)
        + (10 * _bp([12, 12, -6, -4, 9, -6, 1]) * X**2 * NI**3).over_one_minus_beta(3)
        + (
            5 * _bp([23, 38, 27, -12, -25, 8, 14, -8, 1]) * X * NI**4
        ).over_one_minus_beta(4)
    )
    return ExpPoly(poly + F, -F)


def central_moment_discrepancy(r: int) -> ExpPoly:
    """Exact difference (reference table) - (binomial construction)."""
    return central_moment_closed(r) - central_moment_derived(r)


# ---------------------------------------------------------------------------
# large-n asymptotics
# ---------------------------------------------------------------------------


def large_n_limit(expr: ExpPoly | ExactPoly, scale: int = 1) -> ExactPoly:
    """Pointwise limit of n^scale * expr as n grows, for fixed x > 0.

    Exponential parts vanish in the limit and are dropped; of the scaled
    polynomial part only the n-free terms survive.  Raises DomainError if
    positive powers of n remain (the limit would diverge).
    """
    poly = expr.poly_part if isinstance(expr, ExpPoly) else expr
    scaled = poly.times_n_power(scale)
    if scaled.min_ninv_degree() < 0:
        raise DomainError("expression grows with n; the limit diverges")
    kept = {key: c for key, c in scaled.terms.items() if key[2] == 0}
    return ExactPoly(kept, scaled.denom_pow)


@lru_cache(maxsize=None)
def asymptotic_derivative_coefficients() -> tuple[ExactPoly, ExactPoly]:
    """Coefficients (A, C) of f'(x) and f''(x) in lim n [P_n f - f](x).

    Derived exactly from the central moments: A = lim n mu_1 and
    C = (lim n mu_2) / 2, giving A = beta(2-beta)/(1-beta) and
    C = x/(1-beta).  (A frequently quoted variant of the second
    coefficient, (1+2 beta-beta^2) x/(1-beta), is the limit of
    n [T_2 - x^2] instead; it double-counts the first-moment drift and is
    inconsistent with the central moments, so it is not used.)
    """
    a_coeff = large_n_limit(central_moment_derived(1))
    c_coeff = _HALF * large_n_limit(central_moment_derived(2))
    return a_coeff, c_coeff
