import pytest

from toricsym import families
from toricsym.fan import Lattice, build_surface_fan


@pytest.fixture
def std2():
    return Lattice.standard(2)


@pytest.fixture
def p2_fan(std2):
    return build_surface_fan(std2, [(1, 0), (0, 1), (-1, -1)])


@pytest.fixture
def square_fan(std2):
    return build_surface_fan(std2, [(1, 0), (-1, 0), (0, 1), (0, -1)])


@pytest.fixture
def hexagon_n1():
    return families.dp6("n1")


@pytest.fixture
def hexagon_n2():
    return families.dp6("n2")
