# Kac polynomials from Hua's generating function

import itertools
import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from quiverstab.core.errors import InfeasibleError, InputError, InvariantError
from quiverstab.core.partitions import partition_pairing, partitions_of
from quiverstab.core.quiver import Quiver, dim_vector, euler_form, is_indivisible
from quiverstab.core.series import (
    RATQ_ONE,
    QPolynomial,
    RationalQ,
    ratq_sum,
    ratq_to_polynomial,
)
from quiverstab.core.state import (
    VALID_KAC_ROUTES,
    ComputationSettings,
    check_choice,
    resolve_settings,
)

LOGGER = logging.getLogger(__name__)

# (q - 1) as a rational function
_Q_MINUS_ONE = RationalQ((-1, 1))


@dataclass(frozen=True)
class HuaGrid:
    """Coefficients c_e of X^e in P_Q for every 0 <= e <= target."""
    target: tuple[int, ...]
    cells: dict

    def coefficient(self, e: Sequence[int]) -> RationalQ:
        return self.cells[tuple(e)]


def _cells_below(d: Sequence[int]):
    return itertools.product(*(range(x + 1) for x in d))


def _proper_cells(e: Sequence[int]):
    """Cells f with 0 < f < e."""
    e = tuple(e)
    for f in _cells_below(e):
        if any(f) and f != e:
            yield f


def _minus(e, f) -> tuple[int, ...]:
    return tuple(x - y for x, y in zip(e, f))


def _inverse_phi_at_inverse(r: int, denoms: Counter) -> tuple[int, int]:
    """
    Fold 1/phi_r(q^{-1}) = prod_{j<=r} -q^j / (1 - q^j) into ``denoms``.

    Returns the sign and q-shift contributed.
    """
    for j in range(1, r + 1):
        denoms[j] += 1
    return (-1) ** r, r * (r + 1) // 2


##########################################################################
#   Hua grid
##########################################################################

@lru_cache(maxsize=None)
def _vertex_terms(m: int) -> tuple:
    """Per partition of m: (partition, sign, shift, denominators) of 1/b_pi(q^{-1})."""
    out = []
    for p in partitions_of(m):
        sign, shift, denoms = 1, 0, Counter()
        for r in p.multiplicities.values():
            s, sh = _inverse_phi_at_inverse(r, denoms)
            sign *= s
            shift += sh
        out.append((p, sign, shift, tuple(sorted(denoms.items()))))
    return tuple(out)


def _edge_weights(quiver: Quiver) -> list[tuple[int, int, int]]:
    """(i, j, a_ij) for i <= j with a_ij the number of edges between i and j."""
    n = quiver.n_vertices
    a = quiver.arrows
    weights = []
    for i in range(n):
        for j in range(i, n):
            w = a[i][i] if i == j else a[i][j] + a[j][i]
            if w:
                weights.append((i, j, w))
    return weights


@lru_cache(maxsize=None)
def _cell_terms(quiver: Quiver, cell: tuple[int, ...]) -> tuple:
    """
    Collected terms of c_cell as ((shift, denominators), coefficient) pairs.
    """
    weights = _edge_weights(quiver)
    n = quiver.n_vertices
    terms = Counter()
    for combo in itertools.product(*(_vertex_terms(m) for m in cell)):
        parts = [entry[0] for entry in combo]
        exponent = 0
        for i in range(n):
            exponent -= partition_pairing(parts[i], parts[i])
        for i, j, w in weights:
            exponent += w * partition_pairing(parts[i], parts[j])
        sign = 1
        shift = exponent
        denoms = Counter()
        for _, s, sh, dn in combo:
            sign *= s
            shift += sh
            for k, mult in dn:
                denoms[k] += mult
        terms[(shift, tuple(sorted(denoms.items())))] += sign
    LOGGER.debug("cell %s: %d distinct terms", cell, len(terms))
    return tuple(sorted((key, c) for key, c in terms.items() if c))


@lru_cache(maxsize=None)
def hua_cell(quiver: Quiver, cell: tuple[int, ...]) -> RationalQ:
    if not any(cell):
        return RATQ_ONE
    return ratq_sum(
        RationalQ((c,), denoms, shift) for (shift, denoms), c in _cell_terms(quiver, cell)
    )


def hua_cost(quiver: Quiver, target: Sequence[int]) -> int:
    """Number of partition tuples summed over the whole grid below target."""
    target = dim_vector(quiver, target)
    cost = 1
    for x in target:
        cost *= sum(len(partitions_of(k)) for k in range(x + 1))
    return cost


def _check_cost(quiver: Quiver, target, settings: ComputationSettings) -> None:
    cost = hua_cost(quiver, target)
    if cost > settings.partition_tuple_cap:
        raise InfeasibleError(
            f"Hua grid below {tuple(target)} needs {cost} partition tuples "
            f"(cap {settings.partition_tuple_cap})"
        )


def hua_coefficients(
    quiver: Quiver,
    target: Sequence[int],
    settings: Optional[ComputationSettings] = None,
) -> HuaGrid:
    settings = resolve_settings(settings)
    target = dim_vector(quiver, target)
    _check_cost(quiver, target, settings)
    cells = {}
    for e in _cells_below(target):
        cells[e] = hua_cell(quiver, e)
    LOGGER.info("Hua grid below %s: %d cells", target, len(cells))
    return HuaGrid(target, cells)


##########################################################################
#   Logarithm
##########################################################################

def _euler_log(values: dict, d: tuple[int, ...], total: Callable):
    """
    [X^d] log P from the coefficients of P.

    Uses M_e = |e| c_e - sum_{0<f<e} M_f c_{e-f}, where M_e = |e| [X^e] log P.
    """
    cells = sorted((e for e in _cells_below(d) if any(e)), key=sum)
    m = {}
    for e in cells:
        acc = [values[e] * sum(e)]
        for f in _proper_cells(e):
            acc.append(-(m[f] * values[_minus(e, f)]))
        m[e] = total(acc)
    return m[d] * Fraction(1, sum(d))


def _kac_vector(quiver: Quiver, d: Sequence[int]) -> tuple[int, ...]:
    d = dim_vector(quiver, d)
    if not any(d):
        raise InputError("Kac polynomials need a nonzero dimension vector")
    if not is_indivisible(d):
        raise InputError(f"Let d be an indivisible vector: {d} is divisible")
    return d


def _grid_size(d: Sequence[int]) -> int:
    size = 1
    for x in d:
        size *= x + 1
    return size


def kac_polynomial(
    quiver: Quiver,
    d: Sequence[int],
    route: Optional[str] = None,
    settings: Optional[ComputationSettings] = None,
) -> QPolynomial:
    """
    A_d(q) = (q - 1) [X^d] log P_Q.

    Parameters
    ----------
    route : "log", "decomposition", "eval" or "auto"
        Defaults to ``settings.kac_route``. "auto" takes the exact
        logarithm for small grids and evaluation plus interpolation above
        ``settings.auto_eval_cells`` cells.
    """
    settings = resolve_settings(settings)
    d = _kac_vector(quiver, d)
    route = check_choice(route or settings.kac_route, VALID_KAC_ROUTES, "Kac route")
    if route == "auto":
        route = "eval" if _grid_size(d) > settings.auto_eval_cells else "log"
    LOGGER.info("Kac polynomial of %s via the %s route", d, route)

    if route == "decomposition":
        return kac_polynomial_decomposition_route(quiver, d, settings)
    if route == "eval":
        return _kac_polynomial_eval(quiver, d, settings)

    grid = hua_coefficients(quiver, d, settings)
    log_coefficient = _euler_log(grid.cells, d, ratq_sum)
    return ratq_to_polynomial(log_coefficient * _Q_MINUS_ONE).as_integral()


# ---------------------------------------------------------
# Evaluation route
# ---------------------------------------------------------

def _evaluate_terms(terms: tuple, q0: int, denominators: dict) -> Fraction:
    value = Fraction(0)
    for (shift, denoms), c in terms:
        term = Fraction(c) * Fraction(q0) ** shift
        for k, mult in denoms:
            if k not in denominators:
                denominators[k] = Fraction(1 - q0**k)
            term /= denominators[k] ** mult
        value += term
    return value


def _kac_polynomial_eval(quiver: Quiver, d: tuple[int, ...], settings: ComputationSettings) -> QPolynomial:
    # imported here: the oracle module is the home of exact interpolation
    from quiverstab.core.oracle import interpolate

    _check_cost(quiver, d, settings)
    bound = max(0, 1 - euler_form(quiver, d, d))
    terms = {e: _cell_terms(quiver, e) for e in _cells_below(d) if any(e)}
    points = []
    # bound + 1 points determine the polynomial, one more checks it
    for q0 in range(2, bound + 4):
        denominators = {}
        values = {e: _evaluate_terms(t, q0, denominators) for e, t in terms.items()}
        value = (q0 - 1) * _euler_log(values, d, sum)
        if value.denominator != 1:
            raise InvariantError(f"A_{d}({q0}) = {value} is not an integer")
        points.append((q0, int(value)))
    return interpolate(points, bound).as_integral()


# ---------------------------------------------------------
# Decomposition route
# ---------------------------------------------------------

def _chains(remaining: tuple[int, ...], upper: tuple[int, ...]):
    """Chains remaining = d^1 + d^2 + ... with upper >= d^1 >= d^2 >= ... > 0."""
    if not any(remaining):
        yield ()
        return
    limits = [min(r, u) for r, u in zip(remaining, upper)]
    for part in itertools.product(*(range(x + 1) for x in limits)):
        if not any(part):
            continue
        for rest in _chains(_minus(remaining, part), part):
            yield (part,) + rest


@lru_cache(maxsize=None)
def _chain_coefficient(quiver: Quiver, alpha: tuple[int, ...]) -> RationalQ:
    """Sum over chains of alpha of q^{-sum <d^k,d^k>} / prod_k phi_{d^k - d^{k+1}}(q^{-1})."""
    euler = quiver.euler_matrix()
    zero = (0,) * len(alpha)
    terms = []
    for chain in _chains(alpha, alpha):
        shift = -sum(int(np.array(x) @ euler @ np.array(x)) for x in chain)
        sign = 1
        denoms = Counter()
        for k, part in enumerate(chain):
            nxt = chain[k + 1] if k + 1 < len(chain) else zero
            for r in _minus(part, nxt):
                s, sh = _inverse_phi_at_inverse(r, denoms)
                sign *= s
                shift += sh
        terms.append(RationalQ((sign,), tuple(denoms.items()), shift))
    return ratq_sum(terms)


def kac_polynomial_decomposition_route(
    quiver: Quiver,
    d: Sequence[int],
    settings: Optional[ComputationSettings] = None,
) -> QPolynomial:
    """
    A_d through the expansion sum_l (-1)^(l+1)/l sum over compositions
    d = alpha^1 + ... + alpha^l of the product of chain coefficients.
    Exponential in |d|; meant as a cross-check of the log route.
    """
    settings = resolve_settings(settings)
    d = _kac_vector(quiver, d)
    _check_cost(quiver, d, settings)
    cells = sorted((e for e in _cells_below(d) if any(e)), key=sum)
    c = {e: _chain_coefficient(quiver, e) for e in cells}

    # compositions[e]: sum over ordered compositions of e into l nonzero parts
    compositions = dict(c)
    total = [c[d]]
    for l in range(2, sum(d) + 1):
        nxt = {}
        for e in cells:
            products = [compositions[f] * c[_minus(e, f)]
                        for f in _proper_cells(e) if f in compositions]
            if products:
                nxt[e] = ratq_sum(products)
        compositions = nxt
        if d in compositions:
            total.append(compositions[d] * Fraction((-1) ** (l + 1), l))
    return ratq_to_polynomial(ratq_sum(total) * _Q_MINUS_ONE).as_integral()
