"""Exact rational polynomial arithmetic for the moment identities.

An :class:`ExactPoly` is a polynomial over exact rationals in three commuting
symbols, divided by a power of ``(1 - beta)``::

    p = ( sum_t  c_t * main^a * beta^b * ninv^e ) / (1 - beta)^m

``main`` is either the basis index ``k`` or the evaluation point ``x`` --
the owning code fixes the binding and the type does not care.  ``ninv``
stands for ``1/n``; the operator index ``n`` only ever enters the moment
formulas through its reciprocal, so no ``n`` denominators are needed.

Canonical form: no zero coefficients are stored and ``denom_pow`` is
minimal (while ``m > 0`` the numerator is not divisible by ``(1 - beta)``),
so equality is a plain comparison of the term maps.  Instances are
immutable; every operation returns a new canonical value.

``ninv`` exponents may be negative: a negative exponent stands for a
positive power of ``n``.  Such powers arise only transiently while
assembling differential-identity residuals (for example when an identity
multiplies a moment by ``n^2``); every stored moment object is a genuine
polynomial in ``1/n``.

An :class:`ExpPoly` is the pair ``p(x) + q(x) * exp(-n*x)`` of two
ExactPoly values in ``x``, the shape taken by the integral-operator
moments.  For the raw moments ``q`` is constant in ``x``; the central
moments need an ``x``-dependent ``q``, so that is allowed.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import DomainError

Key = tuple[int, int, int]  # (deg_main, deg_beta, deg_ninv)

_ZERO = Fraction(0)


def _coerce(value):
    if isinstance(value, ExactPoly):
        return value
    if isinstance(value, (int, Fraction)):
        return ExactPoly({(0, 0, 0): Fraction(value)})
    return NotImplemented


def _div_one_minus_beta(terms: dict[Key, Fraction]) -> dict[Key, Fraction] | None:
    """Divide the term map by (1 - beta), or return None if not divisible.

    Grouping by (deg_main, deg_ninv) reduces the question to univariate
    division in beta; synthetic division at beta = 1 gives quotient
    coefficients as the running partial sums, and exact divisibility means
    each group's coefficients telescope to zero.
    """
    groups: dict[tuple[int, int], dict[int, Fraction]] = {}
    for (a, b, e), coeff in terms.items():
        groups.setdefault((a, e), {})[b] = coeff
    quotient: dict[Key, Fraction] = {}
    for (a, e), beta_coeffs in groups.items():
        degree = max(beta_coeffs)
        running = _ZERO
        for b in range(degree):
            running += beta_coeffs.get(b, _ZERO)
            if running:
                quotient[(a, b, e)] = running
        if running + beta_coeffs[degree] != 0:
            return None
    return quotient


def _mul_one_minus_beta_pow(terms: dict[Key, Fraction], power: int) -> dict[Key, Fraction]:
    """Multiply a term map by the expanded (1 - beta)^power."""
    if power == 0:
        return dict(terms)
    out: dict[Key, Fraction] = {}
    for i in range(power + 1):
        factor = Fraction(math.comb(power, i)) * (-1) ** i
        for (a, b, e), coeff in terms.items():
            key = (a, b + i, e)
            acc = out.get(key, _ZERO) + coeff * factor
            if acc:
                out[key] = acc
            elif key in out:
                del out[key]
    return out


class ExactPoly:
    __slots__ = ("terms", "denom_pow")

    def __init__(self, terms: dict[Key, Fraction] | None = None, denom_pow: int = 0):
        clean: dict[Key, Fraction] = {}
        if terms:
            for key, value in terms.items():
                frac = Fraction(value)
                if frac:
                    clean[key] = frac
        if not clean:
            denom_pow = 0
        while denom_pow > 0:
            reduced = _div_one_minus_beta(clean)
            if reduced is None:
                break
            clean = reduced
            denom_pow -= 1
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "denom_pow", denom_pow)

    def __setattr__(self, name, value):  # immutable after construction
        raise AttributeError("ExactPoly is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def const(cls, value) -> "ExactPoly":
        return cls({(0, 0, 0): Fraction(value)})

    @classmethod
    def main(cls, degree: int = 1) -> "ExactPoly":
        return cls({(degree, 0, 0): Fraction(1)})

    @classmethod
    def beta(cls, degree: int = 1) -> "ExactPoly":
        return cls({(0, degree, 0): Fraction(1)})

    @classmethod
    def ninv(cls, degree: int = 1) -> "ExactPoly":
        return cls({(0, 0, degree): Fraction(1)})

    @classmethod
    def beta_series(cls, coeffs) -> "ExactPoly":
        """Polynomial in beta only, from the coefficient list [c0, c1, ...]."""
        return cls({(0, b, 0): Fraction(c) for b, c in enumerate(coeffs)})

    @classmethod
    def one_minus_beta(cls) -> "ExactPoly":
        return cls({(0, 0, 0): Fraction(1), (0, 1, 0): Fraction(-1)})

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        m = max(self.denom_pow, other.denom_pow)
        left = _mul_one_minus_beta_pow(self.terms, m - self.denom_pow)
        right = _mul_one_minus_beta_pow(other.terms, m - other.denom_pow)
        for key, coeff in right.items():
            acc = left.get(key, _ZERO) + coeff
            if acc:
                left[key] = acc
            elif key in left:
                del left[key]
        return ExactPoly(left, m)

    __radd__ = __add__

    def __neg__(self):
        flipped = {key: -coeff for key, coeff in self.terms.items()}
        return ExactPoly(flipped, self.denom_pow)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, ExpPoly):
            return NotImplemented  # handled by ExpPoly.__rmul__
        other = _coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Key, Fraction] = {}
        for (a1, b1, e1), c1 in self.terms.items():
            for (a2, b2, e2), c2 in other.terms.items():
                key = (a1 + a2, b1 + b2, e1 + e2)
                acc = out.get(key, _ZERO) + c1 * c2
                if acc:
                    out[key] = acc
                elif key in out:
                    del out[key]
        return ExactPoly(out, self.denom_pow + other.denom_pow)

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise DomainError("negative powers of ExactPoly are not defined")
        result = ExactPoly.const(1)
        for _ in range(exponent):
            result = result * self
        return result

    def __bool__(self):
        return bool(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self.denom_pow == other.denom_pow and self.terms == other.terms

    def __hash__(self):
        return hash((frozenset(self.terms.items()), self.denom_pow))

    def __repr__(self):
        return f"ExactPoly({self.to_text()!r})"

    # -- calculus and structure ---------------------------------------

    def over_one_minus_beta(self, power: int = 1) -> "ExactPoly":
        """Divide by (1 - beta)^power (raises the shared denominator)."""
        return ExactPoly(self.terms, self.denom_pow + power)

    def times_n_power(self, power: int) -> "ExactPoly":
        """Multiply by n^power by shifting the ninv exponents."""
        if power == 0:
            return self
        shifted = {(a, b, e - power): c for (a, b, e), c in self.terms.items()}
        return ExactPoly(shifted, self.denom_pow)

    def diff_main(self) -> "ExactPoly":
        out = {}
        for (a, b, e), c in self.terms.items():
            if a:
                out[(a - 1, b, e)] = c * a
        return ExactPoly(out, self.denom_pow)

    def diff_beta(self) -> "ExactPoly":
        """Exact derivative in beta, accounting for the (1-beta) denominator."""
        dnum = {}
        for (a, b, e), c in self.terms.items():
            if b:
                key = (a, b - 1, e)
                acc = dnum.get(key, _ZERO) + c * b
                if acc:
                    dnum[key] = acc
                elif key in dnum:
                    del dnum[key]
        numerator = ExactPoly(_mul_one_minus_beta_pow(dnum, 1)) + ExactPoly(
            {k: v * self.denom_pow for k, v in self.terms.items()}
        )
        return ExactPoly(numerator.terms, numerator.denom_pow + self.denom_pow + 1)

    def at_beta_zero(self) -> "ExactPoly":
        kept = {key: c for key, c in self.terms.items() if key[1] == 0}
        return ExactPoly(kept, 0)

    def max_main_degree(self) -> int:
        return max((a for (a, _, _) in self.terms), default=0)

    def min_ninv_degree(self) -> int:
        return min((e for (_, _, e) in self.terms), default=0)

    def main_coefficients(self) -> dict[int, "ExactPoly"]:
        """Split into {main degree: coefficient poly free of main}."""
        split: dict[int, dict[Key, Fraction]] = {}
        for (a, b, e), c in self.terms.items():
            split.setdefault(a, {})[(0, b, e)] = c
        return {a: ExactPoly(tmap, self.denom_pow) for a, tmap in split.items()}

    def main_coefficient_floats(self, beta: float, n: float) -> list[float]:
        """Dense float coefficients [c_0, ..., c_deg] of the main variable.

        Fast path for series evaluation: collapses beta and ninv at the
        given parameter values so the polynomial can be Horner-evaluated
        at many main values.
        """
        if beta == 1.0 and self.denom_pow > 0:
            raise DomainError("beta = 1 lies outside the domain (denominator vanishes)")
        coeffs = [0.0] * (self.max_main_degree() + 1)
        for (a, b, e), c in self.terms.items():
            coeffs[a] += float(c) * beta**b * n ** (-e)
        scale = (1.0 - beta) ** self.denom_pow
        return [c / scale for c in coeffs]

    def eval(self, main: float, beta: float, n: float) -> float:
        """Floating-point value at the point (main, beta, n)."""
        if beta == 1.0 and self.denom_pow > 0:
            raise DomainError("beta = 1 lies outside the domain (denominator vanishes)")
        total = 0.0
        for (a, b, e), c in self.terms.items():
            total += float(c) * main**a * beta**b * n ** (-e)
        return total / (1.0 - beta) ** self.denom_pow

    def eval_exact(self, main, beta, n) -> Fraction:
        """Exact rational value at a rational point."""
        main, beta, n = Fraction(main), Fraction(beta), Fraction(n)
        if beta == 1 and self.denom_pow > 0:
            raise DomainError("beta = 1 lies outside the domain (denominator vanishes)")
        total = Fraction(0)
        for (a, b, e), c in self.terms.items():
            total += c * main**a * beta**b * n ** (-e)
        return total / (1 - beta) ** self.denom_pow

    # -- serialization -------------------------------------------------

    def to_text(self, main_name: str = "k") -> str:
        """Canonical text form: sorted monomials, explicit rational coefficients."""
        header = f"denom (1-beta)^{self.denom_pow}"
        if not self.terms:
            return header + "\n0"
        lines = [header]
        for (a, b, e) in sorted(self.terms, reverse=True):
            parts = [str(self.terms[(a, b, e)])]
            for name, exp in ((main_name, a), ("beta", b), ("ninv", e)):
                if exp == 1:
                    parts.append(name)
                elif exp != 0:
                    parts.append(f"{name}^{exp}")
            lines.append(" * ".join(parts))
        return "\n".join(lines)


class ExpPoly:
    """The expression poly_part(x) + exp_coeff(x) * exp(-n*x)."""

    __slots__ = ("poly_part", "exp_coeff")

    def __init__(self, poly_part=None, exp_coeff=None):
        poly = _coerce(poly_part if poly_part is not None else 0)
        expc = _coerce(exp_coeff if exp_coeff is not None else 0)
        if poly is NotImplemented or expc is NotImplemented:
            raise TypeError("ExpPoly parts must be ExactPoly or rational scalars")
        object.__setattr__(self, "poly_part", poly)
        object.__setattr__(self, "exp_coeff", expc)

    def __setattr__(self, name, value):
        raise AttributeError("ExpPoly is immutable")

    def __add__(self, other):
        if not isinstance(other, ExpPoly):
            coerced = _coerce(other)
            if coerced is NotImplemented:
                return NotImplemented
            other = ExpPoly(coerced, 0)
        return ExpPoly(self.poly_part + other.poly_part, self.exp_coeff + other.exp_coeff)

    __radd__ = __add__

    def __neg__(self):
        return ExpPoly(-self.poly_part, -self.exp_coeff)

    def __sub__(self, other):
        if not isinstance(other, ExpPoly):
            coerced = _coerce(other)
            if coerced is NotImplemented:
                return NotImplemented
            other = ExpPoly(coerced, 0)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, ExpPoly):
            raise TypeError(
                "ExpPoly * ExpPoly would produce exp(-2*n*x) terms, which this "
                "representation cannot hold"
            )
        factor = _coerce(other)
        if factor is NotImplemented:
            return NotImplemented
        return ExpPoly(self.poly_part * factor, self.exp_coeff * factor)

    __rmul__ = __mul__

    def times_n_power(self, power: int) -> "ExpPoly":
        return ExpPoly(
            self.poly_part.times_n_power(power), self.exp_coeff.times_n_power(power)
        )

    def diff_x(self) -> "ExpPoly":
        """Exact x-derivative: (p + q e^{-nx})' = p' + (q' - n q) e^{-nx}."""
        return ExpPoly(
            self.poly_part.diff_main(),
            self.exp_coeff.diff_main() - self.exp_coeff.times_n_power(1),
        )

    def at_beta_zero(self) -> "ExpPoly":
        return ExpPoly(self.poly_part.at_beta_zero(), self.exp_coeff.at_beta_zero())

    @property
    def is_zero(self) -> bool:
        return self.poly_part.is_zero and self.exp_coeff.is_zero

    def eval(self, x: float, beta: float, n: float) -> float:
        value = self.poly_part.eval(x, beta, n)
        if self.exp_coeff:
            value += self.exp_coeff.eval(x, beta, n) * math.exp(-n * x)
        return value

    def __eq__(self, other):
        if not isinstance(other, ExpPoly):
            return NotImplemented
        return self.poly_part == other.poly_part and self.exp_coeff == other.exp_coeff

    def __hash__(self):
        return hash((self.poly_part, self.exp_coeff))

    def __repr__(self):
        return f"ExpPoly({self.to_text()!r})"

    def to_text(self, main_name: str = "x") -> str:
        return (
            "poly part:\n"
            + self.poly_part.to_text(main_name)
            + "\nexp(-n*x) coefficient:\n"
            + self.exp_coeff.to_text(main_name)
        )


# Thin functional aliases for the core ring operations.

def poly_add(a: ExactPoly, b: ExactPoly) -> ExactPoly:
    return a + b


def poly_sub(a: ExactPoly, b: ExactPoly) -> ExactPoly:
    return a - b


def poly_mul(a: ExactPoly, b: ExactPoly) -> ExactPoly:
    return a * b


def poly_eval(p: ExactPoly, main: float, beta: float, n: float) -> float:
    return p.eval(main, beta, n)
