# exact polynomial, power series and rational-function arithmetic in q

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import sympy

from quiverstab.core.errors import InputError, InvariantError

Q_SYMBOL = sympy.Symbol("q")
T_SYMBOL = sympy.Symbol("t")


def _trim(coeffs: Sequence) -> tuple:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _convolve(a: Sequence, b: Sequence, limit: int | None = None) -> list:
    if not a or not b:
        return []
    size = len(a) + len(b) - 1
    if limit is not None:
        size = min(size, limit)
    out = [0] * size
    for i, x in enumerate(a):
        if x == 0 or i >= size:
            continue
        for j, y in enumerate(b[: size - i]):
            out[i + j] += x * y
    return out


def _normalize_number(x):
    """Collapse integral Fractions to int so that polynomials compare cleanly."""
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x.numerator)
    return x


def _to_rational(x):
    if isinstance(x, Fraction):
        return sympy.Rational(x.numerator, x.denominator)
    return sympy.Integer(x)


##########################################################################
#   Polynomials
##########################################################################

@dataclass(frozen=True)
class QPolynomial:
    """
    Polynomial in q with exact integer or rational coefficients.

    ``coeffs[k]`` is the coefficient of q^k; trailing zeros are stripped so the
    zero polynomial has no coefficients at all.
    """
    coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(
            self, "coeffs", _trim(_normalize_number(c) for c in self.coeffs)
        )

    @property
    def degree(self) -> int:
        """Degree, -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, k: int):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return 0

    def top_coefficients(self, depth: int) -> tuple:
        """a_0..a_depth read from the top: a_i is the coefficient of q^(deg - i)."""
        return tuple(self.coefficient(self.degree - i) for i in range(depth + 1))

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs)

    def as_integral(self) -> "QPolynomial":
        if not self.is_integral():
            raise InvariantError(f"non-integral coefficients in {self}")
        return self

    def shifted(self, k: int) -> "QPolynomial":
        """Multiply by q^k, k >= 0."""
        if k < 0:
            raise InputError("polynomial shifts must be nonnegative")
        if self.is_zero():
            return self
        return QPolynomial((0,) * k + self.coeffs)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        other = _as_polynomial(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return QPolynomial(
            tuple(self.coefficient(i) + other.coefficient(i) for i in range(n))
        )

    __radd__ = __add__

    def __neg__(self):
        return QPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-_as_polynomial(other))

    def __rsub__(self, other):
        return _as_polynomial(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QPolynomial(tuple(c * other for c in self.coeffs))
        other = _as_polynomial(other)
        return QPolynomial(tuple(_convolve(self.coeffs, other.coeffs)))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = Q_ONE
        for _ in range(n):
            result = result * self
        return result

    def to_sympy(self, symbol=Q_SYMBOL):
        return sympy.Add(*[_to_rational(c) * symbol**k for k, c in enumerate(self.coeffs)])

    @classmethod
    def from_sympy(cls, expr, symbol=Q_SYMBOL) -> "QPolynomial":
        poly = sympy.Poly(sympy.expand(expr), symbol)
        coeffs = [0] * (poly.degree() + 1) if not poly.is_zero else []
        for (k,), c in poly.terms():
            c = sympy.Rational(c)
            coeffs[k] = Fraction(int(c.p), int(c.q))
        return cls(tuple(coeffs))

    def __str__(self):
        return str(self.to_sympy())


Q_ONE = QPolynomial((1,))
Q_VAR = QPolynomial((0, 1))


def _as_polynomial(x) -> QPolynomial:
    if isinstance(x, QPolynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return QPolynomial((x,))
    raise TypeError(f"cannot use {type(x).__name__} as a polynomial")


@lru_cache(maxsize=None)
def phi(n: int) -> QPolynomial:
    """phi_n(q) = prod_{i=1}^{n} (1 - q^i); phi(0) = 1."""
    if n < 0:
        raise InputError("phi needs a nonnegative index")
    result = Q_ONE
    for i in range(1, n + 1):
        result = result * QPolynomial((1,) + (0,) * (i - 1) + (-1,))
    return result


def phi_dim(d: Sequence[int]) -> QPolynomial:
    result = Q_ONE
    for x in d:
        result = result * phi(x)
    return result


##########################################################################
#   Truncated power series
##########################################################################

@dataclass(frozen=True)
class TruncatedSeries:
    """Power series in q known modulo q^(order+1)."""
    order: int
    coeffs: tuple

    def __post_init__(self):
        if self.order < 0:
            raise InputError("series order must be nonnegative")
        c = [_normalize_number(x) for x in self.coeffs[: self.order + 1]]
        c += [0] * (self.order + 1 - len(c))
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls(order, (1,))

    @classmethod
    def from_polynomial(cls, p: QPolynomial, order: int) -> "TruncatedSeries":
        return cls(order, p.coeffs)

    def coefficient(self, k: int):
        if k > self.order:
            raise InputError(f"coefficient {k} is beyond the truncation order {self.order}")
        return self.coeffs[k]

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise InputError("truncation cannot widen a series")
        return TruncatedSeries(order, self.coeffs)

    def __add__(self, other):
        return series_add(self, other)

    def __sub__(self, other):
        return series_add(self, -other)

    def __neg__(self):
        return TruncatedSeries(self.order, tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries(self.order, tuple(c * other for c in self.coeffs))
        return series_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return series_pow(self, n)


def series_add(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    order = min(f.order, g.order)
    return TruncatedSeries(order, tuple(f.coeffs[i] + g.coeffs[i] for i in range(order + 1)))


def series_mul(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    order = min(f.order, g.order)
    return TruncatedSeries(order, tuple(_convolve(f.coeffs, g.coeffs, order + 1)))


def series_inv(f: TruncatedSeries) -> TruncatedSeries:
    c0 = f.coeffs[0]
    if c0 == 0:
        raise InputError("series with zero constant term is not invertible")
    inv0 = Fraction(1) / c0
    g = [inv0]
    for n in range(1, f.order + 1):
        acc = sum(f.coeffs[k] * g[n - k] for k in range(1, n + 1))
        g.append(-acc * inv0)
    return TruncatedSeries(f.order, tuple(g))


def series_log(f: TruncatedSeries) -> TruncatedSeries:
    """
    Logarithm of a series with constant term 1.

    Computed as the integral of f'/f, which agrees with the truncated
    expansion sum_k (-1)^(k+1) (f-1)^k / k.
    """
    if f.coeffs[0] != 1:
        raise InputError("log needs constant term 1")
    inv = series_inv(f).coeffs
    deriv = [k * f.coeffs[k] for k in range(1, f.order + 1)]
    quotient = _convolve(deriv, inv, f.order)
    out = [0] + [Fraction(quotient[k - 1]) / k if k - 1 < len(quotient) else 0
                 for k in range(1, f.order + 1)]
    return TruncatedSeries(f.order, tuple(out))


def series_exp(f: TruncatedSeries) -> TruncatedSeries:
    if f.coeffs[0] != 0:
        raise InputError("exp needs constant term 0")
    g = [Fraction(1)]
    for n in range(1, f.order + 1):
        acc = sum(k * f.coeffs[k] * g[n - k] for k in range(1, n + 1))
        g.append(Fraction(acc) / n)
    return TruncatedSeries(f.order, tuple(g))


def series_pow(f: TruncatedSeries, n: int) -> TruncatedSeries:
    if n < 0:
        return series_pow(series_inv(f), -n)
    result = TruncatedSeries.one(f.order)
    base = f
    while n:
        if n & 1:
            result = series_mul(result, base)
        base = series_mul(base, base)
        n >>= 1
    return result


# ---------------------------------------------------------
# Partition generating functions
# ---------------------------------------------------------

@lru_cache(maxsize=None)
def partition_gf(colors: int, order: int) -> TruncatedSeries:
    """p^l(q) = prod_{k>=1} (1 - q^k)^(-l), truncated at q^order."""
    if colors < 0:
        raise InputError("number of colors must be nonnegative")
    base = series_inv(TruncatedSeries.from_polynomial(phi(order), order))
    return series_pow(base, colors)


def partitions_exact_parts_gf(n: int, order: int) -> TruncatedSeries:
    """q^n / phi_n(q): partitions into exactly n parts."""
    if n < 0:
        raise InputError("number of parts must be nonnegative")
    if n > order:
        return TruncatedSeries(order, ())
    inv = series_inv(TruncatedSeries.from_polynomial(phi(n), order))
    return TruncatedSeries(order, (0,) * n + inv.coeffs)


##########################################################################
#   Bivariate series in (t, q)
##########################################################################

@dataclass(frozen=True)
class BivariateSeries:
    """Series in t and q truncated at t^orders[0], q^orders[1]; grid[k][m] is t^k q^m."""
    orders: tuple[int, int]
    grid: tuple

    def coefficient(self, k: int, m: int):
        nt, nq = self.orders
        if not (0 <= k <= nt and 0 <= m <= nq):
            raise InputError(f"coefficient t^{k} q^{m} is outside orders {self.orders}")
        return self.grid[k][m]

    def q_column(self, m: int) -> tuple:
        """Coefficients of t^0..t^Nt at q^m."""
        return tuple(self.grid[k][m] for k in range(self.orders[0] + 1))


def bivariate_product(factors: Iterable[tuple[int, int, int]], orders: tuple[int, int]) -> BivariateSeries:
    """
    Expand prod (1 - t^a q^b)^(-c) up to the given orders.

    Parameters
    ----------
    factors : iterable of (a, b, c)
        t exponent, q exponent (b >= 1) and multiplicity c >= 0.
    orders : (Nt, Nq)
    """
    nt, nq = orders
    if nt < 0 or nq < 0:
        raise InputError("orders must be nonnegative")
    grid = [[0] * (nq + 1) for _ in range(nt + 1)]
    grid[0][0] = 1
    for a, b, c in factors:
        if b < 1:
            raise InputError("every factor needs a positive q exponent")
        if a < 0 or c < 0:
            raise InputError("t exponents and multiplicities must be nonnegative")
        # multiply by 1/(1 - t^a q^b) c times, in place
        for _ in range(c):
            for k in range(a, nt + 1):
                for m in range(b, nq + 1):
                    grid[k][m] += grid[k - a][m - b]
    return BivariateSeries((nt, nq), tuple(tuple(row) for row in grid))


##########################################################################
#   Rational functions N(q) q^s / prod (1 - q^k)
##########################################################################

def _divide_one_minus(coeffs: list, k: int) -> list | None:
    """Exact quotient of coeffs by (1 - q^k), or None."""
    n = len(coeffs)
    if n <= k:
        return None
    m = [0] * (n - k)
    for i in range(n - k):
        m[i] = coeffs[i] + (m[i - k] if i >= k else 0)
    for i in range(n - k, n):
        carry = m[i - k] if i >= k else 0
        if coeffs[i] + carry != 0:
            return None
    return m


def _times_one_minus(coeffs: list, k: int, times: int = 1) -> list:
    out = list(coeffs)
    for _ in range(times):
        nxt = out + [0] * k
        for i in range(len(out)):
            nxt[i + k] -= out[i]
        out = nxt
    return out


@dataclass(frozen=True)
class RationalQ:
    """
    q^shift * N(q) / prod_k (1 - q^k)^m_k.

    ``denominator`` is a sorted tuple of (k, m_k) pairs. Construction
    normalizes: low zero coefficients move into ``shift`` and every factor
    that divides the numerator exactly is cancelled.
    """
    numerator: tuple = ()
    denominator: tuple = ()
    shift: int = 0

    def __post_init__(self):
        coeffs = list(_trim(_normalize_number(c) for c in self.numerator))
        shift = self.shift
        if not coeffs:
            object.__setattr__(self, "numerator", ())
            object.__setattr__(self, "denominator", ())
            object.__setattr__(self, "shift", 0)
            return
        lead = 0
        while coeffs[lead] == 0:
            lead += 1
        coeffs = coeffs[lead:]
        shift += lead

        denom = Counter()
        for k, mult in self.denominator:
            if k < 1 or mult < 0:
                raise InputError("denominator factors need k >= 1 and nonnegative multiplicity")
            denom[k] += mult
        for k in sorted(denom):
            while denom[k] > 0:
                quotient = _divide_one_minus(coeffs, k)
                if quotient is None:
                    break
                coeffs = quotient
                denom[k] -= 1
        object.__setattr__(self, "numerator", _trim(coeffs))
        object.__setattr__(self, "denominator", tuple(sorted((k, m) for k, m in denom.items() if m)))
        object.__setattr__(self, "shift", shift)

    def is_zero(self) -> bool:
        return not self.numerator

    def __add__(self, other):
        return ratq_add(self, other)

    def __sub__(self, other):
        return ratq_add(self, -other)

    def __neg__(self):
        return RationalQ(tuple(-c for c in self.numerator), self.denominator, self.shift)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return RationalQ(tuple(c * other for c in self.numerator), self.denominator, self.shift)
        return ratq_mul(self, other)

    __rmul__ = __mul__


RATQ_ZERO = RationalQ()
RATQ_ONE = RationalQ((1,))


def ratq_from_polynomial(p: QPolynomial) -> RationalQ:
    return RationalQ(p.coeffs)


def ratq_mul(x: RationalQ, y: RationalQ) -> RationalQ:
    if x.is_zero() or y.is_zero():
        return RATQ_ZERO
    denom = Counter(dict(x.denominator))
    denom.update(dict(y.denominator))
    return RationalQ(
        tuple(_convolve(x.numerator, y.numerator)),
        tuple(denom.items()),
        x.shift + y.shift,
    )


def ratq_sum(items: Iterable[RationalQ]) -> RationalQ:
    """Sum over a common denominator (the lcm of the factor multisets)."""
    items = [x for x in items if not x.is_zero()]
    if not items:
        return RATQ_ZERO
    common = Counter()
    for x in items:
        for k, m in x.denominator:
            common[k] = max(common[k], m)
    base_shift = min(x.shift for x in items)
    total = []
    for x in items:
        coeffs = list(x.numerator)
        own = dict(x.denominator)
        for k, m in common.items():
            coeffs = _times_one_minus(coeffs, k, m - own.get(k, 0))
        coeffs = [0] * (x.shift - base_shift) + coeffs
        if len(coeffs) > len(total):
            total += [0] * (len(coeffs) - len(total))
        for i, c in enumerate(coeffs):
            total[i] += c
    return RationalQ(tuple(total), tuple(common.items()), base_shift)


def ratq_add(x: RationalQ, y: RationalQ) -> RationalQ:
    return ratq_sum((x, y))


def ratq_to_polynomial(x: RationalQ) -> QPolynomial:
    """Exact conversion; anything left in the denominator is an error."""
    if x.is_zero():
        return QPolynomial()
    if x.denominator:
        raise InvariantError(f"not a polynomial: denominator factors {x.denominator} remain")
    if x.shift < 0:
        raise InvariantError(f"not a polynomial: negative power q^{x.shift}")
    return QPolynomial((0,) * x.shift + x.numerator)


def ratq_evaluate(x: RationalQ, q0: int) -> Fraction:
    """Exact value at an integer q0 >= 2."""
    if q0 < 2:
        raise InputError("evaluation point must be at least 2")
    value = Fraction(q0) ** x.shift * QPolynomial(x.numerator)(Fraction(q0))
    for k, m in x.denominator:
        value /= Fraction(1 - q0**k) ** m
    return value
