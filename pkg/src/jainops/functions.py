"""Test functions fed to the operators.

A :class:`TestFunction` bundles the evaluation callable with the metadata
the operators need: boundedness (drives series-widening for polynomially
growing functions and the sup-norm based checks), optional polynomial
coefficients (switches the integral operator onto its exact
inner-product route), and optional first/second derivatives for the
asymptotic experiments.

The built-in corpus matches the function names accepted by the command
line interface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional


@dataclass
class TestFunction:
    eval: Callable[[float], float]
    label: str
    is_bounded: bool
    sup_norm_hint: Optional[float] = None
    poly_coeffs: Optional[tuple[float, ...]] = None
    d1: Optional[Callable[[float], float]] = None
    d2: Optional[Callable[[float], float]] = None
    # integral-ratio cache keyed by (n, beta, k, quad tolerance); values are
    # deterministic, so concurrent recomputation is harmless
    _moment_cache: dict = field(default_factory=dict, repr=False, compare=False)


def monomial(r: int) -> TestFunction:
    """t^r as a TestFunction (bounded only for r = 0)."""
    coeffs = (0.0,) * r + (1.0,)
    return TestFunction(
        eval=lambda t, _r=r: t**_r,
        label=f"t^{r}",
        is_bounded=(r == 0),
        sup_norm_hint=1.0 if r == 0 else None,
        poly_coeffs=coeffs,
        d1=(lambda t, _r=r: _r * t ** (_r - 1)) if r >= 1 else (lambda t: 0.0),
        d2=(lambda t, _r=r: _r * (_r - 1) * t ** (_r - 2)) if r >= 2 else (lambda t: 0.0),
    )


def _make_const() -> TestFunction:
    return TestFunction(
        eval=lambda t: 1.0,
        label="const",
        is_bounded=True,
        sup_norm_hint=1.0,
        poly_coeffs=(1.0,),
        d1=lambda t: 0.0,
        d2=lambda t: 0.0,
    )


def _make_linear() -> TestFunction:
    f = monomial(1)
    f.label = "linear"
    return f


def _make_square() -> TestFunction:
    f = monomial(2)
    f.label = "square"
    return f


def _make_cube() -> TestFunction:
    f = monomial(3)
    f.label = "cube"
    return f


def _make_exp_neg() -> TestFunction:
    return TestFunction(
        eval=lambda t: math.exp(-t),
        label="exp-neg",
        is_bounded=True,
        sup_norm_hint=1.0,
        d1=lambda t: -math.exp(-t),
        d2=lambda t: math.exp(-t),
    )


def _make_sin() -> TestFunction:
    return TestFunction(
        eval=math.sin,
        label="sin",
        is_bounded=True,
        sup_norm_hint=1.0,
        d1=math.cos,
        d2=lambda t: -math.sin(t),
    )


def _make_abs_sin() -> TestFunction:
    # continuous and bounded but not differentiable at multiples of pi
    return TestFunction(
        eval=lambda t: abs(math.sin(t)),
        label="abs-sin",
        is_bounded=True,
        sup_norm_hint=1.0,
    )


_FACTORIES = {
    "const": _make_const,
    "linear": _make_linear,
    "square": _make_square,
    "cube": _make_cube,
    "exp-neg": _make_exp_neg,
    "sin": _make_sin,
    "abs-sin": _make_abs_sin,
}

BUILTIN_NAMES = tuple(_FACTORIES)

#: Bounded continuous members of the corpus (the class the sup-norm
#: smoothness bound applies to).
BOUNDED_BUILTIN_NAMES = ("const", "exp-neg", "sin", "abs-sin")


def builtin_function(name: str) -> TestFunction:
    """A fresh TestFunction from the built-in corpus."""
    try:
        factory = _FACTORIES[name]
    except KeyError:
        raise KeyError(
            f"unknown test function {name!r}; choose from {', '.join(BUILTIN_NAMES)}"
        ) from None
    return factory()
