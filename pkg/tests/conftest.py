from importlib.resources import files

import pytest

from cauchy_euler import sc2
from cauchy_euler.complex_core import Complex2

DATA = files("cauchy_euler") / "data"


def load(name):
    return sc2.load(DATA / name)


def order(name):
    return sc2.parse_order((DATA / name).read_text())


@pytest.fixture
def tetrahedron():
    return Complex2.from_triangles([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])


@pytest.fixture
def triangle():
    return Complex2.from_triangles([(0, 1, 2)], {0: (0, 0), 1: (1, 0), 2: (0, 1)})
