import pytest

from jainops import SeriesQuadConfig

# Shared parameter grids used by the operator-level checks.
STANDARD_NS = (1.0, 5.0, 20.0)
STANDARD_BETAS = (0.0, 0.25, 0.5, 0.75)
STANDARD_XS = (0.1, 1.0, 5.0)

MOMENT_NS = (2.0, 8.0, 32.0)
MOMENT_BETAS = (0.0, 0.25, 0.5, 0.75)
MOMENT_XS = (0.1, 1.0, 4.0)


@pytest.fixture(scope="session")
def cfg():
    return SeriesQuadConfig()
