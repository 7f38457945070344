import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from levyfluct import brownian, build_evaluator  # noqa: E402


@pytest.fixture(scope="session")
def bm_evaluator():
    """Standard Brownian motion, gamma = 0.5: W = 2 sinh, Z = cosh."""
    return build_evaluator(brownian(0.0, 1.0), gamma=0.5, x_max=8.0)
