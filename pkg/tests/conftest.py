import itertools
import json
from pathlib import Path

import numpy as np
import pytest

from hilbertflat import build_polytope, polytope_from_dict

FIXTURES = Path(__file__).parent / "fixtures"


def load_fixture(name):
    with open(FIXTURES / name, encoding="utf-8") as fh:
        return polytope_from_dict(json.load(fh))


@pytest.fixture(scope="session")
def interval():
    return build_polytope([[-1.0], [1.0]])


@pytest.fixture(scope="session")
def triangle():
    return build_polytope([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])


@pytest.fixture(scope="session")
def square():
    return build_polytope([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


@pytest.fixture(scope="session")
def pentagon():
    angles = [2.0 * np.pi * k / 5.0 + np.pi / 2.0 for k in range(5)]
    return build_polytope([[np.cos(a), np.sin(a)] for a in angles])


@pytest.fixture(scope="session")
def cube():
    return build_polytope([list(map(float, v)) for v in itertools.product((0, 1), repeat=3)])


@pytest.fixture(scope="session")
def simplex3():
    return build_polytope([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])


@pytest.fixture(scope="session")
def nested_2d():
    return (load_fixture("nested_s_2d.json"), load_fixture("nested_c1_2d.json"),
            load_fixture("nested_c2_2d.json"))


@pytest.fixture(scope="session")
def nested_3d():
    return (load_fixture("nested_s_3d.json"), load_fixture("nested_c1_3d.json"),
            load_fixture("nested_c2_3d.json"))


def interior_points(P, count, seed, margin=1e-3):
    """Uniform interior points with min facet slack > margin."""
    rng = np.random.default_rng(seed)
    lo, hi = P.bounding_box()
    out = []
    while len(out) < count:
        X = rng.uniform(lo, hi, size=(4 * count, P.dimension))
        out.extend(X[P.slacks(X).min(axis=1) > margin])
    return np.array(out[:count])
