import os
import sys

import numpy as np
import pytest

# Ensure repo root is on sys.path for imports like 'src.*' and 'packages.*'
ROOT = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)

from src.data.dimacs import CnfFormula  # noqa: E402

INSTANCES = os.path.join(ROOT, "data", "instances")
TEST_DATA = os.path.join(os.path.dirname(__file__), "data")


def _random_instance(rng, width: int, max_clauses: int) -> CnfFormula:
    m = int(rng.integers(1, max_clauses + 1))
    n_vars = int(rng.integers(width, 5))
    clauses = []
    for _ in range(m):
        vars_ = rng.integers(1, n_vars + 1, size=width)
        signs = rng.choice([-1, 1], size=width)
        clauses.append([int(v * s) for v, s in zip(vars_, signs)])
    return CnfFormula.from_int_clauses(n_vars, clauses)


def build_corpus(seed: int = 20240101):
    rng = np.random.default_rng(seed)
    corpus = [_random_instance(rng, 3, 3) for _ in range(100)]
    corpus += [_random_instance(rng, 2, 4) for _ in range(100)]
    return corpus


CORPUS_SIZE = 200


@pytest.fixture(scope="session")
def corpus():
    return build_corpus()


@pytest.fixture
def instance_path():
    return lambda name: os.path.join(INSTANCES, name)


@pytest.fixture
def test_data():
    return lambda name: os.path.join(TEST_DATA, name)


@pytest.fixture
def example11():
    return CnfFormula.from_int_clauses(3, [[1, 2, 3], [1, 2, -3]])


@pytest.fixture
def example5():
    return CnfFormula.from_int_clauses(2, [[1, 2], [-1, 2]])


@pytest.fixture
def example1():
    return CnfFormula.from_int_clauses(3, [[1, 2, 3], [1, -2, 3], [1, 2, -3]])


@pytest.fixture
def unsat8():
    import itertools

    clauses = [[s1 * 1, s2 * 2, s3 * 3] for s1, s2, s3 in itertools.product((1, -1), repeat=3)]
    return CnfFormula.from_int_clauses(3, clauses)


@pytest.fixture
def unsat2():
    return CnfFormula.from_int_clauses(2, [[1, 2], [1, -2], [-1, 2], [-1, -2]])
