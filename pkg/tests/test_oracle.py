"""
Unit tests for the brute-force oracles.

Core claims:
    - Exact interpolation recovers polynomials and rejects inconsistent data
    - Thin counts agree with Hua's formula on every small quiver
    - Finite-field censuses count absolutely indecomposable classes correctly, matching thin counts
    - Census polynomials agree with Hua's formula on small roots
"""

import itertools
import random

import numpy as np
import pytest

from quiverstab.core.errors import InfeasibleError, InputError, InvariantError
from quiverstab.core.hua import kac_polynomial
from quiverstab.core.oracle import (
    brute_force_kac,
    census,
    census_kac_values,
    det_mod,
    general_linear_group,
    interpolate,
    inverse_mod,
    thin_kac,
)
from quiverstab.core.quiver import Quiver, crawley_boevey
from quiverstab.core.series import QPolynomial
from quiverstab.core.state import ComputationSettings

QUIET = ComputationSettings(show_progress=False)


# -- Helpers -----------------------------------------------------------------

def _small_quivers(max_vertices: int = 4, max_arrows: int = 4):
    """Loop-free quivers up to relabelling, as arrow lists on range(n)."""
    for n in range(1, max_vertices + 1):
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
        seen = set()
        for k in range(max_arrows + 1):
            for arrows in itertools.combinations_with_replacement(pairs, k):
                key = min(
                    tuple(sorted((perm[i], perm[j]) for i, j in arrows))
                    for perm in itertools.permutations(range(n))
                )
                if key not in seen:
                    seen.add(key)
                    yield Quiver.from_arrows(n, key)


def _thin_vectors(n: int):
    return [v for v in itertools.product((0, 1), repeat=n) if any(v)]


# == 1. Interpolation ========================================================

class TestInterpolation:
    def test_quadratic(self):
        assert interpolate([(0, 1), (1, 2), (2, 5)], 2) == QPolynomial((1, 0, 1))

    def test_extra_points_are_checked(self):
        assert interpolate([(0, 1), (1, 2), (2, 3)], 1) == QPolynomial((1, 1))
        with pytest.raises(InvariantError):
            interpolate([(0, 1), (1, 2), (2, 5)], 1)

    def test_insufficient_points(self):
        with pytest.raises(InputError, match="insufficient points"):
            interpolate([(2, 3)], 1)

    def test_repeated_abscissa(self):
        with pytest.raises(InputError):
            interpolate([(2, 3), (2, 3)], 1)

    def test_recovers_random_polynomials(self):
        rng = random.Random(3)
        for _ in range(20):
            p = QPolynomial(tuple(rng.randint(-9, 9) for _ in range(rng.randint(1, 6))))
            xs = rng.sample(range(-10, 11), 8)
            assert interpolate([(x, p(x)) for x in xs], 5) == p


# == 2. Thin representations =================================================

class TestThin:
    def test_kronecker(self, k2):
        assert thin_kac(k2, (1, 1)) == QPolynomial((1, 1))

    def test_crawley_boevey_kronecker(self, k2):
        cb = crawley_boevey(k2, (0, 1))
        assert thin_kac(cb, (1, 1, 1)) == QPolynomial((1, 1))

    @pytest.mark.parametrize("quiver_name, d", [
        ("k3", (1, 1)),
        ("s2", (1, 1)),
        ("hyperbolic", (1, 1, 1)),
        ("path3", (1, 1, 1)),
    ])
    def test_agrees_with_hua(self, request, quiver_name, d):
        quiver = request.getfixturevalue(quiver_name)
        assert thin_kac(quiver, d) == kac_polynomial(quiver, d)

    @pytest.mark.slow
    def test_agrees_with_hua_on_every_small_quiver(self):
        checked = 0
        for quiver in _small_quivers():
            for d in _thin_vectors(quiver.n_vertices):
                assert thin_kac(quiver, d) == kac_polynomial(quiver, d, settings=QUIET), (quiver.arrows, d)
                checked += 1
        assert checked > 1000

    def test_not_thin(self, k2):
        with pytest.raises(InputError):
            thin_kac(k2, (2, 1))


# == 3. Linear algebra over F_p ==============================================

class TestModularLinearAlgebra:
    def test_gl_order(self):
        elements, inverses = general_linear_group(2, 2)
        assert len(elements) == 6
        products = np.matmul(elements, inverses) % 2
        assert np.all(products == np.eye(2, dtype=np.int64))

    def test_determinant(self):
        assert det_mod(np.array([[[1, 2], [3, 4]]]), 5)[0] == 3

    def test_singular_inverse(self):
        with pytest.raises(InvariantError):
            inverse_mod(np.array([[[1, 1], [1, 1]]]), 3)


# == 4. Censuses =============================================================

class TestCensus:
    def test_kronecker_over_f2(self, k2):
        result = census(k2, (1, 1), 2, QUIET)
        assert (result.total, result.classes, result.group_order) == (4, 4, 1)
        assert result.absolutely_indecomposable == 3
        assert sum(result.orbit_sizes) == result.total

    def test_kronecker_over_f3(self, k2):
        result = census(k2, (1, 1), 3, QUIET)
        assert result.classes == 5
        assert result.absolutely_indecomposable == 4

    def test_values_and_polynomial(self, k2):
        assert census_kac_values(k2, (1, 1), [2, 3], QUIET) == {2: 3, 3: 4}
        assert brute_force_kac(k2, (1, 1), [2, 3], QUIET) == QPolynomial((1, 1))

    @pytest.mark.parametrize("q", [2, 3])
    @pytest.mark.parametrize("quiver_name, d", [
        ("a2", (1, 1)),
        ("k3", (1, 1)),
        ("s2", (1, 1)),
        ("path3", (1, 1, 1)),
        ("path3", (1, 0, 1)),
        ("hyperbolic", (1, 1, 1)),
        ("hyperbolic", (0, 1, 1)),
    ])
    def test_matches_thin_counts(self, request, quiver_name, d, q):
        quiver = request.getfixturevalue(quiver_name)
        assert census(quiver, d, q, QUIET).absolutely_indecomposable == thin_kac(quiver, d)(q)

    def test_crawley_boevey_matches_thin_counts(self, k2):
        cb = crawley_boevey(k2, (0, 1))
        for q in (2, 3):
            assert census(cb, (1, 1, 1), q, QUIET).absolutely_indecomposable == thin_kac(cb, (1, 1, 1))(q)

    def test_non_prime_field(self, k2):
        with pytest.raises(InputError):
            census(k2, (1, 1), 4, QUIET)

    def test_census_cap(self, k3):
        settings = ComputationSettings(census_cap=10, show_progress=False)
        with pytest.raises(InfeasibleError):
            census(k3, (2, 1), 2, settings)

    def test_too_few_primes(self, k3):
        with pytest.raises(InputError, match="insufficient points"):
            brute_force_kac(k3, (2, 1), [2, 3], QUIET)


@pytest.mark.slow
class TestCensusAgreesWithHua:
    def test_three_arrows(self, k3):
        assert brute_force_kac(k3, (2, 1), [2, 3, 5], QUIET) == kac_polynomial(k3, (2, 1))

    def test_double_kronecker_thin(self, s2):
        assert brute_force_kac(s2, (1, 1), [2, 3, 5, 7], QUIET) == kac_polynomial(s2, (1, 1))

    def test_double_kronecker_pointwise(self, s2):
        hua = kac_polynomial(s2, (2, 1))
        values = census_kac_values(s2, (2, 1), [2, 3], QUIET)
        assert values == {p: hua(p) for p in (2, 3)}
