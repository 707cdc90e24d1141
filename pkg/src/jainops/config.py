"""Numeric evaluation settings.

A single :class:`SeriesQuadConfig` value governs every truncated series and
every quadrature in the package, so experiments can be tightened or loosened
in one place.  The defaults are chosen so that the series tails are far below
the 1e-9/1e-10 tolerances used by the verification suite.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .errors import DomainError

#: Name of the environment variable pointing at an optional key=value file
#: overriding the defaults (used by the command line interface).
CONFIG_ENV_VAR = "JPK_CONFIG"


@dataclass(frozen=True)
class SeriesQuadConfig:
    """Truncation and quadrature controls.

    k_max          hard cap on basis-series truncation indices
    tail_tol       absolute tail-mass tolerance for basis series
    quad_rel_tol   relative tolerance for half-line quadrature
    quad_max_subdiv  subdivision limit handed to the adaptive integrator
    """

    k_max: int = 20000
    tail_tol: float = 1e-12
    quad_rel_tol: float = 1e-10
    quad_max_subdiv: int = 200

    def __post_init__(self):
        if self.k_max < 1:
            raise DomainError(f"k_max must be >= 1, got {self.k_max}")
        if not self.tail_tol > 0:
            raise DomainError(f"tail_tol must be > 0, got {self.tail_tol}")
        if not self.quad_rel_tol > 0:
            raise DomainError(f"quad_rel_tol must be > 0, got {self.quad_rel_tol}")
        if self.quad_max_subdiv < 1:
            raise DomainError(
                f"quad_max_subdiv must be >= 1, got {self.quad_max_subdiv}"
            )


_FIELD_PARSERS = {
    "k_max": int,
    "tail_tol": float,
    "quad_rel_tol": float,
    "quad_max_subdiv": int,
}


def load_config(path: str | None = None) -> SeriesQuadConfig:
    """Build a config from a simple ``key=value`` file.

    When ``path`` is None the file named by the JPK_CONFIG environment
    variable is used, if set; otherwise the defaults are returned.  Blank
    lines and ``#`` comments are ignored.  Unknown keys raise ValueError.
    """
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR)
    if path is None:
        return SeriesQuadConfig()
    overrides = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in _FIELD_PARSERS:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
            overrides[key] = _FIELD_PARSERS[key](value)
    return SeriesQuadConfig(**overrides)
