"""
Unit tests for Kac polynomials computed from Hua's generating function.

Core claims:
    - Known Kac polynomials of small quivers (Kronecker, double Kronecker, A2, Jordan)
    - The log, decomposition and evaluation routes agree exactly
    - Hua grid coefficients for a single vertex
    - Divisible vectors and oversized grids are rejected
    - Kac's theorem on every small loop-free quiver: A_d != 0 exactly on roots,
      deg A_d = 1 - <d, d>, nonnegative coefficients, independence of orientation
"""

import itertools
import math

import pytest

from quiverstab.core.errors import InfeasibleError, InputError
from quiverstab.core.hua import (
    hua_coefficients,
    hua_cost,
    kac_polynomial,
    kac_polynomial_decomposition_route,
)
from quiverstab.core.quiver import Quiver, euler_form, root_type
from quiverstab.core.series import RATQ_ONE, QPolynomial, RationalQ
from quiverstab.core.state import ComputationSettings

ROUTES = ["log", "decomposition", "eval"]


# -- Helpers -----------------------------------------------------------------

def _small_quivers(max_vertices=3, max_arrows=3):
    """Loop-free quivers with at most max_arrows arrows and connected underlying graph."""
    for n in range(2, max_vertices + 1):
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
        for size in range(n - 1, max_arrows + 1):
            for arrows in itertools.combinations_with_replacement(pairs, size):
                quiver = Quiver.from_arrows(n, arrows)
                graph = quiver.underlying_graph()
                if all(graph.degree(v) for v in graph.nodes):
                    yield quiver


def _vectors(n, max_norm=5):
    for d in itertools.product(range(max_norm + 1), repeat=n):
        if 0 < sum(d) <= max_norm and math.gcd(*d) == 1:
            yield d


# == 1. Known values =========================================================

class TestKnownPolynomials:
    @pytest.mark.parametrize("route", ROUTES)
    def test_kronecker(self, k2, route):
        assert kac_polynomial(k2, (1, 1), route) == QPolynomial((1, 1))

    @pytest.mark.parametrize("route", ROUTES)
    def test_three_arrows(self, k3, route):
        assert kac_polynomial(k3, (1, 1), route) == QPolynomial((1, 1, 1))
        assert kac_polynomial(k3, (2, 1), route) == QPolynomial((1, 1, 1))

    def test_a2(self, a2):
        assert kac_polynomial(a2, (1, 1)) == QPolynomial((1,))
        assert kac_polynomial(a2, (2, 1)).is_zero()

    def test_double_kronecker(self, s2):
        assert kac_polynomial(s2, (1, 1)) == QPolynomial((1, 1, 1, 1))

    def test_real_root_of_kronecker(self, k2):
        assert kac_polynomial(k2, (1, 2)) == QPolynomial((1,))

    def test_jordan_quiver(self, jordan):
        assert kac_polynomial(jordan, (1,)) == QPolynomial((0, 1))

    def test_printing(self, k2):
        assert str(kac_polynomial(k2, (1, 1))) == "q + 1"


# == 2. Routes agree =========================================================

class TestRoutes:
    @pytest.mark.parametrize("quiver_name, d", [
        ("k2", (1, 2)),
        ("k3", (3, 2)),
        ("s2", (2, 1)),
        ("hyperbolic", (1, 1, 1)),
        ("hyperbolic", (2, 2, 1)),
        ("path3", (1, 1, 1)),
    ])
    def test_all_routes_agree(self, request, quiver_name, d):
        quiver = request.getfixturevalue(quiver_name)
        log = kac_polynomial(quiver, d, "log")
        assert kac_polynomial(quiver, d, "eval") == log
        assert kac_polynomial_decomposition_route(quiver, d) == log

    def test_auto_switches_to_evaluation(self, k3):
        settings = ComputationSettings(auto_eval_cells=4)
        assert kac_polynomial(k3, (2, 1), "auto", settings) == QPolynomial((1, 1, 1))

    def test_default_route_from_settings(self, k2):
        settings = ComputationSettings(kac_route="decomposition")
        assert kac_polynomial(k2, (1, 1), settings=settings) == QPolynomial((1, 1))

    def test_unknown_route(self, k2):
        with pytest.raises(InputError):
            kac_polynomial(k2, (1, 1), "series")


# == 3. Hua grid =============================================================

class TestHuaGrid:
    def test_single_vertex(self):
        grid = hua_coefficients(Quiver(((0,),)), (1,))
        assert grid.coefficient((0,)) == RATQ_ONE
        assert grid.coefficient((1,)) == RationalQ((-1,), ((1, 1),))

    def test_cells(self, k2):
        grid = hua_coefficients(k2, (2, 1))
        assert len(grid.cells) == 6

    def test_cost(self, k2):
        # partitions of 0, 1, 2 at the first vertex, of 0, 1 at the second
        assert hua_cost(k2, (2, 1)) == 4 * 2

    def test_cap(self, k3):
        settings = ComputationSettings(partition_tuple_cap=5)
        with pytest.raises(InfeasibleError):
            kac_polynomial(k3, (2, 1), settings=settings)


# == 4. Rejected inputs ======================================================

class TestRejectedInputs:
    def test_divisible(self, k2):
        with pytest.raises(InputError, match="Let d be an indivisible vector"):
            kac_polynomial(k2, (2, 2))

    def test_zero(self, k2):
        with pytest.raises(InputError):
            kac_polynomial(k2, (0, 0))

    def test_wrong_length(self, k2):
        with pytest.raises(InputError, match="dimension mismatch"):
            kac_polynomial(k2, (1, 1, 1))


# == 5. Kac's theorem on small quivers =======================================

@pytest.mark.slow
class TestKacTheorem:
    def test_small_quivers(self):
        for quiver in _small_quivers():
            reversed_ = quiver.reversed_arrow(*quiver.arrow_list()[0])
            for d in _vectors(quiver.n_vertices):
                poly = kac_polynomial(quiver, d)
                is_root = root_type(quiver, d) != "not_root"
                assert (not poly.is_zero()) == is_root, (quiver.arrows, d)
                if is_root:
                    assert poly.degree == 1 - euler_form(quiver, d, d)
                    assert all(c >= 0 for c in poly.coeffs)
                    if all(d):
                        assert kac_polynomial(reversed_, d) == poly
