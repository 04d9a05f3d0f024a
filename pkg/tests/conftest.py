import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from pencilspec import Pencil, Problem, validate_bc  # noqa: E402
from pencilspec.harness import sample_bc, sample_condition_pencil  # noqa: E402


def make(b, c, rows, L=1.0):
    return Problem(Pencil(b, c, L), validate_bc(rows))


DIRICHLET = [[1, 0, 0, 0], [0, 1, 0, 0]]
EX2_A = [[1, 0, 2, 0], [0, 1, 0, 0]]
EX2_B = [[1, 0, 0, 0], [0, 1, 0, -2]]


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def random_problem(rng):
    def draw():
        return Problem(sample_condition_pencil(rng), sample_bc(rng))

    return draw
