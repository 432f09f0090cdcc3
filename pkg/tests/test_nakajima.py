"""
Unit tests for the Crawley-Boevey route to Nakajima quiver varieties.

Core claims:
    - The limit series on Q_w with (d, 1) equals the Nakajima limit series
    - Hypothesis flags and the applicable stabilization statement
    - Kac polynomials A_(n,n,1) of CB(K2, (0,1)) match the Hilbert scheme series
    - The Hilbert coefficient identity and its a >= k limit
    - Conditional multiplicity bounds from the equivariant series
"""

import random

import pytest

from quiverstab.core.errors import InputError
from quiverstab.core.hua import kac_polynomial
from quiverstab.core.nakajima import (
    NakajimaInstance,
    hilbert_coefficient_identity_check,
    hilbert_limit,
    hilbert_series,
    multiplicity_bound_report,
    nakajima_kac_sweep,
    nakajima_limit_series,
)
from quiverstab.core.quiver import Quiver, crawley_boevey
from quiverstab.core.series import QPolynomial, partition_gf
from quiverstab.core.stabilize import limit_series


# -- Helpers -----------------------------------------------------------------

def _random_instance(rng: random.Random) -> NakajimaInstance:
    n = rng.randint(1, 3)
    arrows = [(i, j) for i in range(n) for j in range(n) if i != j and rng.random() < 0.5]
    quiver = Quiver.from_arrows(n, arrows)
    framing = [rng.randint(0, 2) for _ in range(n)]
    framing[rng.randrange(n)] += 1
    delta = [rng.randint(0, 2) for _ in range(n)]
    delta[rng.randrange(n)] += 1
    d = [rng.randint(0, 4) for _ in range(n)]
    return NakajimaInstance(quiver, tuple(framing), tuple(d), tuple(delta))


# == 1. Instances ============================================================

class TestInstance:
    def test_cb_vectors(self, k2):
        inst = NakajimaInstance(k2, (0, 1), (0, 0), (1, 1))
        assert inst.cb_quiver == crawley_boevey(k2, (0, 1))
        assert inst.cb_d == (0, 0, 1)
        assert inst.cb_delta == (1, 1, 0)

    def test_rejects_zero_framing_and_delta(self, k2):
        with pytest.raises(InputError):
            NakajimaInstance(k2, (0, 0), (0, 0), (1, 1))
        with pytest.raises(InputError):
            NakajimaInstance(k2, (0, 1), (0, 0), (0, 0))

    def test_kronecker_example_has_no_mode(self, k2):
        inst = NakajimaInstance(k2, (0, 1), (0, 0), (1, 1))
        assert inst.hypotheses["delta_imaginary"]
        assert inst.hypotheses["weak_star"]
        assert not inst.hypotheses["strict_star"]
        assert inst.mode is None

    def test_strict_mode(self, k3):
        inst = NakajimaInstance(k3, (1, 0), (0, 0), (1, 1))
        assert inst.mode == "ii"

    def test_weak_mode(self, hyperbolic):
        inst = NakajimaInstance(hyperbolic, (0, 0, 1), (6, 7, 3), (1, 1, 0))
        assert inst.mode == "i"


# == 2. Limit series =========================================================

class TestLimitSeries:
    def test_kronecker(self, k2):
        inst = NakajimaInstance(k2, (0, 1), (0, 0), (1, 1))
        assert nakajima_limit_series(inst, 3).coeffs == partition_gf(2, 3).coeffs

    def test_matches_cb_limit_on_random_instances(self):
        rng = random.Random(20240611)
        for _ in range(10):
            inst = _random_instance(rng)
            cb_limit = limit_series(inst.cb_quiver, inst.cb_d, inst.cb_delta, 20)
            assert cb_limit == nakajima_limit_series(inst, 20)


# == 3. Hilbert schemes ======================================================

class TestHilbert:
    def test_small_coefficients(self):
        series = hilbert_series(2, 1, (2, 4))
        assert series.coefficient(1, 2) == 2
        assert series.coefficient(2, 2) == 2
        assert series.coefficient(2, 4) == 5

    def test_needs_two_points(self):
        with pytest.raises(InputError):
            hilbert_series(1)

    @pytest.mark.slow
    def test_kac_polynomials_of_cb_kronecker(self, k2):
        cb = crawley_boevey(k2, (0, 1))
        assert kac_polynomial(cb, (2, 2, 1)) == QPolynomial((2, 2, 1))
        for n in range(1, 5):
            poly = kac_polynomial(cb, (n, n, 1))
            column = hilbert_series(2, 1, (n, n)).q_column(n)
            assert poly.top_coefficients(n) == column

    @pytest.mark.slow
    def test_identity_suite(self):
        for b in range(4):
            for k in range(11):
                for a in range(13):
                    check = hilbert_coefficient_identity_check(b, k, a)
                    assert check.equal, (b, k, a)
                    if a >= k:
                        assert check.limit_equal
                        assert check.lhs == partition_gf(b + 1, k).coefficient(k)

    def test_identity_small(self):
        check = hilbert_coefficient_identity_check(1, 2, 0)
        assert (check.lhs, check.rhs) == (2, 2)
        assert check.limit_equal is None
        assert hilbert_limit(1, 2) == 5

    def test_identity_rejects_negative(self):
        with pytest.raises(InputError):
            hilbert_coefficient_identity_check(1, -1, 0)


# == 4. Sweeps on the Crawley-Boevey quiver ==================================

@pytest.mark.slow
class TestNakajimaSweep:
    def test_kronecker_example(self, k2):
        inst = NakajimaInstance(k2, (0, 1), (0, 0), (1, 1))
        report = nakajima_kac_sweep(inst, range(5), depth=2)
        assert report.mode == "nakajima"
        assert [r.coefficients[2] for r in report.rows[1:]] == [0, 2, 4, 5]
        assert report.stabilized[:2] == (1, 2)
        assert report.limit_coefficients == (1, 2, 5)
        assert report.hypotheses["mode"] is None
        assert any("neither" in flag for flag in report.flags)


# == 5. Multiplicity bounds ==================================================

class TestMultiplicityBound:
    @pytest.mark.parametrize("d, half, bound", [
        ((3, 3, 1), 3, 10),
        ((1, 1, 1), 1, 2),
        ((1, 0, 0), 0, 1),
    ])
    def test_hyperbolic(self, hyperbolic, d, half, bound):
        report = multiplicity_bound_report(hyperbolic, d)
        assert (report.half_norm, report.bound) == (half, bound)
        assert report.conditional

    def test_negative_half_norm(self, a2):
        assert multiplicity_bound_report(a2, (2, 0)).bound == 0

    def test_loops_rejected(self, jordan):
        with pytest.raises(InputError):
            multiplicity_bound_report(jordan, (1,))
