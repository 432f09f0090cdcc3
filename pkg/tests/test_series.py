"""
Unit tests for exact polynomials, truncated series and rational functions in q.

Core claims:
    - QPolynomial arithmetic, evaluation, printing and top coefficients
    - Truncated series inverse, logarithm, exponential and powers agree
    - Partition generating functions carry the known partition counts
    - Bivariate products expand prod (1 - t^a q^b)^(-c)
    - RationalQ normalises common factors and converts back to polynomials exactly
"""

import random
from fractions import Fraction

import pytest
import sympy

from quiverstab.core.errors import InputError, InvariantError
from quiverstab.core.series import (
    Q_ONE,
    Q_SYMBOL,
    Q_VAR,
    RATQ_ONE,
    QPolynomial,
    RationalQ,
    TruncatedSeries,
    bivariate_product,
    partition_gf,
    partitions_exact_parts_gf,
    phi,
    phi_dim,
    ratq_evaluate,
    ratq_from_polynomial,
    ratq_mul,
    ratq_sum,
    ratq_to_polynomial,
    series_exp,
    series_inv,
    series_log,
    series_mul,
    series_pow,
)


# == 1. Polynomials ==========================================================

class TestQPolynomial:
    def test_printing(self):
        assert str(QPolynomial((1, 1))) == "q + 1"
        assert str(Q_VAR**2 + 1) == "q**2 + 1"

    def test_zero_polynomial(self):
        zero = QPolynomial((0, 0))
        assert zero.is_zero()
        assert zero.degree == -1

    def test_arithmetic(self):
        p = Q_VAR + 1
        assert p * p == QPolynomial((1, 2, 1))
        assert p - p == QPolynomial()
        assert 3 - p == QPolynomial((2, -1))
        assert p(Fraction(1, 2)) == Fraction(3, 2)

    def test_top_coefficients(self):
        p = QPolynomial((1, 2, 3))
        assert p.top_coefficients(2) == (3, 2, 1)
        assert p.top_coefficients(4) == (3, 2, 1, 0, 0)

    def test_integrality(self):
        assert QPolynomial((Fraction(4, 2),)).coeffs == (2,)
        with pytest.raises(InvariantError):
            QPolynomial((Fraction(1, 2),)).as_integral()

    def test_shift(self):
        assert Q_ONE.shifted(2) == Q_VAR**2
        with pytest.raises(InputError):
            Q_ONE.shifted(-1)

    def test_sympy_round_trip(self):
        expr = (Q_SYMBOL + 1) ** 3
        p = QPolynomial.from_sympy(expr)
        assert p.coeffs == (1, 3, 3, 1)
        assert sympy.expand(p.to_sympy() - expr) == 0

    def test_phi(self):
        assert phi(0) == Q_ONE
        assert phi(2) == QPolynomial((1, -1, -1, 1))
        assert phi_dim((1, 1)) == phi(1) * phi(1)


# == 2. Truncated series =====================================================

class TestTruncatedSeries:
    def test_geometric_inverse(self):
        one_minus_q = TruncatedSeries(4, (1, -1))
        assert series_inv(one_minus_q).coeffs == (1, 1, 1, 1, 1)

    def test_log_of_geometric(self):
        geometric = series_inv(TruncatedSeries(4, (1, -1)))
        log = series_log(geometric)
        assert log.coeffs == (0, 1, Fraction(1, 2), Fraction(1, 3), Fraction(1, 4))

    def test_exp_inverts_log(self):
        f = TruncatedSeries(6, (1, 3, -2, 5))
        assert series_exp(series_log(f)) == f

    def test_negative_power(self):
        f = TruncatedSeries(5, (1, -1, 2))
        assert series_pow(f, -1) == series_inv(f)
        assert series_pow(f, 3) == f * f * f

    def test_invalid_operations(self):
        with pytest.raises(InputError):
            series_inv(TruncatedSeries(3, (0, 1)))
        with pytest.raises(InputError):
            series_log(TruncatedSeries(3, (2, 1)))
        with pytest.raises(InputError):
            series_exp(TruncatedSeries(3, (1, 1)))

    def test_truncation(self):
        f = TruncatedSeries(3, (1, 2, 3, 4, 5))
        assert f.coeffs == (1, 2, 3, 4)
        assert f.truncate(1).coeffs == (1, 2)
        with pytest.raises(InputError):
            f.truncate(5)
        with pytest.raises(InputError):
            f.coefficient(4)

    def test_mixed_orders_truncate_to_the_smaller(self):
        assert (TruncatedSeries(2, (1,)) + TruncatedSeries(5, (1,))).order == 2


# == 3. Partition generating functions =======================================

class TestPartitionSeries:
    def test_partition_numbers(self):
        assert partition_gf(1, 6).coeffs == (1, 1, 2, 3, 5, 7, 11)

    def test_two_colours(self):
        assert partition_gf(2, 5).coeffs == (1, 2, 5, 10, 20, 36)

    def test_zero_colours(self):
        assert partition_gf(0, 3).coeffs == (1, 0, 0, 0)

    def test_exactly_two_parts(self):
        assert partitions_exact_parts_gf(2, 6).coeffs == (0, 0, 1, 1, 2, 2, 3)
        assert partitions_exact_parts_gf(5, 3).coeffs == (0, 0, 0, 0)


# == 4. Bivariate products ===================================================

class TestBivariate:
    def test_single_factor(self):
        series = bivariate_product([(0, 1, 1)], (0, 3))
        assert series.grid == ((1, 1, 1, 1),)

    def test_diagonal(self):
        series = bivariate_product([(1, 1, 1)], (2, 2))
        assert [series.coefficient(k, k) for k in range(3)] == [1, 1, 1]
        assert series.coefficient(1, 2) == 0
        assert series.q_column(1) == (0, 1, 0)

    def test_factor_needs_q(self):
        with pytest.raises(InputError):
            bivariate_product([(1, 0, 1)], (2, 2))

    def test_outside_orders(self):
        with pytest.raises(InputError):
            bivariate_product([], (1, 1)).coefficient(2, 0)


# == 5. Rational functions ===================================================

class TestRationalQ:
    def test_cancellation(self):
        x = RationalQ((1, 0, -1), ((1, 1),))
        assert x.denominator == ()
        assert ratq_to_polynomial(x) == QPolynomial((1, 1))

    def test_leading_zeros_become_shift(self):
        x = RationalQ((0, 0, 3))
        assert (x.numerator, x.shift) == ((3,), 2)

    def test_sum_to_one(self):
        total = ratq_sum([RationalQ((1,), ((1, 1),)), RationalQ((0, -1), ((1, 1),))])
        assert total == RATQ_ONE

    def test_product(self):
        product = ratq_mul(RationalQ((1,), ((1, 1),)), ratq_from_polynomial(QPolynomial((1, -1))))
        assert product == RATQ_ONE

    def test_not_a_polynomial(self):
        with pytest.raises(InvariantError, match="not a polynomial"):
            ratq_to_polynomial(RationalQ((1,), ((1, 1),)))
        with pytest.raises(InvariantError, match="not a polynomial"):
            ratq_to_polynomial(RationalQ((1,), (), -1))

    def test_evaluation(self):
        assert ratq_evaluate(RationalQ((1,), ((1, 1),)), 2) == -1
        assert ratq_evaluate(RationalQ((1,), ((2, 1),), 1), 3) == Fraction(-3, 8)
        with pytest.raises(InputError):
            ratq_evaluate(RATQ_ONE, 1)

    def test_sum_matches_evaluation(self):
        items = [
            RationalQ((1, 2), ((1, 2),), -1),
            RationalQ((-3,), ((2, 1),), 2),
            RationalQ((5, 0, 1), ((1, 1), (3, 1)), 0),
        ]
        total = ratq_sum(items)
        for q0 in (2, 3, 7):
            assert ratq_evaluate(total, q0) == sum(ratq_evaluate(x, q0) for x in items)


# == 6. Properties ===========================================================

class TestSeriesProperties:
    @pytest.mark.parametrize("colours", range(5))
    def test_colours_multiply(self, colours):
        single = partition_gf(1, 30)
        product = TruncatedSeries.one(30)
        for _ in range(colours):
            product = series_mul(product, single)
        assert partition_gf(colours, 30) == product

    def test_exp_inverts_log_on_random_series(self):
        rng = random.Random(5)
        for _ in range(20):
            order = rng.randint(1, 12)
            coeffs = (1,) + tuple(rng.randint(-5, 5) for _ in range(order))
            f = TruncatedSeries(order, coeffs)
            assert series_exp(series_log(f)) == f

    def test_polynomials_survive_rational_embedding(self):
        rng = random.Random(9)
        for _ in range(20):
            p = QPolynomial(tuple(rng.randint(-4, 4) for _ in range(rng.randint(0, 7))))
            assert ratq_to_polynomial(ratq_from_polynomial(p)) == p
            # q^k p(q) phi_k(q) / prod_{i<=k} (1 - q^i) cancels back to q^k p(q)
            k = rng.randint(0, 3)
            embedded = RationalQ((p * phi(k)).coeffs, tuple((i, 1) for i in range(1, k + 1)), k)
            assert ratq_to_polynomial(embedded) == p.shifted(k)
