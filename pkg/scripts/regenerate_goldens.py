#!/usr/bin/env python3
"""Regenerate the canonical symbolic golden files under tests/golden/.

Run from the repository root after an intentional change to the moment
tables; the test suite compares freshly serialized objects against these
files byte for byte.
"""

from pathlib import Path

from jainops import (
    central_moment_closed,
    central_moment_derived,
    expfree_moment_closed,
    ratio_poly_closed,
    t_moment_closed,
)

GOLDEN_DIR = Path(__file__).resolve().parent.parent / "tests" / "golden"


def main():
    GOLDEN_DIR.mkdir(parents=True, exist_ok=True)
    for r in range(6):
        (GOLDEN_DIR / f"ratio_poly_r{r}.txt").write_text(
            ratio_poly_closed(r).to_text("k") + "\n"
        )
        (GOLDEN_DIR / f"expfree_moment_r{r}.txt").write_text(
            expfree_moment_closed(r).to_text("x") + "\n"
        )
    for r in range(4):
        (GOLDEN_DIR / f"t_moment_r{r}.txt").write_text(
            t_moment_closed(r).to_text("x") + "\n"
        )
    for r in range(1, 6):
        (GOLDEN_DIR / f"central_moment_r{r}.txt").write_text(
            central_moment_derived(r).to_text("x") + "\n"
        )
        (GOLDEN_DIR / f"central_moment_reference_r{r}.txt").write_text(
            central_moment_closed(r).to_text("x") + "\n"
        )
    print(f"wrote golden files to {GOLDEN_DIR}")


if __name__ == "__main__":
    main()
