import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rectiscope import DiscreteMeasure


def random_cloud(rng: np.random.Generator, count: int, m: int, n: int = 1,
                 spread: float = 1.0) -> DiscreteMeasure:
    pts = rng.uniform(-spread, spread, (count, m))
    weights = rng.uniform(0.5, 1.5, count)
    return DiscreteMeasure(pts, weights, n)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
