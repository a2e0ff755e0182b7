import pytest
from gmpy2 import mpq

from mahler.algebra.poly import Poly, RationalFunction
from mahler.auxpoly.verify import SystemSeries
from mahler.mahler_system.system import MahlerSystem


def make_m_system():
    return MahlerSystem(Poly.const(1), [[Poly.const(1)]], [Poly.x()], RationalFunction(Poly([0, 0, 1])))


@pytest.fixture(scope="session")
def m_system():
    return make_m_system()


@pytest.fixture(scope="session")
def m_series(m_system):
    return SystemSeries(m_system, [mpq(0)])
