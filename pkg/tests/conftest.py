import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))  # make oracles importable

from collapsi import solver


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    solver.warmup()
