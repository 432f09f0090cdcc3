# shared quivers for the test suite

from pathlib import Path

import pytest

from quiverstab.core.quiver import Quiver, kronecker_quiver, path_quiver

QUIVERS_DIR = Path(__file__).resolve().parent.parent / "quivers"


@pytest.fixture
def k2():
    return kronecker_quiver(2)


@pytest.fixture
def k3():
    return kronecker_quiver(3)


@pytest.fixture
def s2():
    """Two vertices, two arrows in each direction."""
    return Quiver(((0, 2), (2, 0)))


@pytest.fixture
def a2():
    return path_quiver(2)


@pytest.fixture
def path3():
    return path_quiver(3)


@pytest.fixture
def hyperbolic():
    """1 => 2 -> 3: a double arrow followed by a single one."""
    return Quiver.from_arrows(3, [(0, 1), (0, 1), (1, 2)])


@pytest.fixture
def jordan():
    """One vertex with one loop."""
    return Quiver(((1,),), allow_loops=True)


@pytest.fixture
def quivers_dir():
    return QUIVERS_DIR
