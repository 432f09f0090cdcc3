# stabilization of Kac coefficients along d + n delta

import itertools
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np
from tqdm import tqdm

from quiverstab.config.computation import (
    DEFAULT_EPSILON,
    DEFAULT_SWEEP_DEPTH,
    MIN_STABLE_ROWS,
)
from quiverstab.core.errors import InfeasibleError, InputError
from quiverstab.core.hua import hua_cost, kac_polynomial
from quiverstab.core.quiver import (
    Quiver,
    check_star,
    dim_vector,
    euler_form,
    form_matrix,
    is_indivisible,
    is_symmetric,
    support,
)
from quiverstab.core.series import (
    TruncatedSeries,
    partition_gf,
    phi,
    series_inv,
    series_mul,
)
from quiverstab.core.state import (
    VALID_SWEEP_MODES,
    ComputationSettings,
    NearMaxDecomposition,
    NearMaxReport,
    SweepReport,
    SweepRow,
    check_choice,
    resolve_settings,
)

LOGGER = logging.getLogger(__name__)


def _tau(d: Sequence[int], delta: Sequence[int], n: int) -> tuple[int, ...]:
    return tuple(x + n * y for x, y in zip(d, delta))


##########################################################################
#   Bounds and pairing maxima
##########################################################################

def stab_bound_Mn(
    quiver: Quiver,
    d: Sequence[int],
    delta: Sequence[int],
    n: int,
    form: str = "euler",
) -> Fraction:
    """
    Closed-form upper bound M_n for the pairing maximum at tau = d + n delta.

    Parameters
    ----------
    form : str
        "euler" for symmetric quivers (cohomology), "cartan" for Kac coefficients.

    Returns
    -------
    Fraction
        max{ max_i <e_i, tau>(1 - 1/tau_i), -(min_i tau_i)(min_{j in supp delta} tau_j) }
    """
    d = dim_vector(quiver, d)
    delta = dim_vector(quiver, delta)
    if not any(delta):
        raise InputError("delta must be nonzero")
    tau = _tau(d, delta, n)
    zero = [i for i, x in enumerate(tau) if x == 0]
    if zero:
        raise InputError(f"the bound needs tau_i > 0 at every vertex, tau = {tau}")
    pairings = form_matrix(quiver, form) @ np.array(tau)
    first = max(Fraction(int(pairings[i])) * (1 - Fraction(1, tau[i])) for i in range(len(tau)))
    second = -min(tau) * min(tau[j] for j in support(delta))
    return max(first, Fraction(second))


def _subvector_grid(tau: tuple[int, ...], settings: ComputationSettings) -> int:
    size = math.prod(x + 1 for x in tau)
    if size > settings.enumeration_cap:
        raise InfeasibleError(f"{size} subvectors of {tau} exceed the enumeration cap {settings.enumeration_cap}")
    return size


def _pairings_by_first_entry(matrix: np.ndarray, tau: tuple[int, ...]):
    """Yield (V, <V, tau - V>) chunks over all 0 <= V <= tau, lex order, chunked on V_0."""
    t = np.array(tau, dtype=np.int64)
    rest_shape = [x + 1 for x in tau[1:]]
    rest = np.indices(rest_shape).reshape(len(rest_shape), -1).T if rest_shape else np.zeros((1, 0), dtype=np.int64)
    for v0 in range(tau[0] + 1):
        v = np.hstack([np.full((len(rest), 1), v0, dtype=np.int64), rest])
        values = np.einsum("ij,jk,ik->i", v, matrix, t - v)
        yield v, values


def max_pairing(
    quiver: Quiver,
    tau: Sequence[int],
    form: str = "euler",
    settings: Optional[ComputationSettings] = None,
) -> tuple[int, tuple[int, ...]]:
    """
    Maximum of <v, tau - v> over 0 < v < tau.

    Ties go to the lexicographically greatest v, so S2 at tau = (1, 1)
    reports v = (1, 0) rather than (0, 1).
    """
    settings = resolve_settings(settings)
    tau = dim_vector(quiver, tau)
    size = _subvector_grid(tau, settings)
    if size < 3:
        raise InputError(f"{tau} has no proper nonzero subvector")
    matrix = form_matrix(quiver, form)
    best, argmax = None, None
    zero = (0,) * len(tau)
    for v, values in _pairings_by_first_entry(matrix, tau):
        keys = [tuple(int(x) for x in row) for row in v]
        for key, value in zip(keys, values):
            if key == zero or key == tau:
                continue
            if best is None or value >= best:
                best, argmax = int(value), key
    return best, argmax


def min_hn_codim(
    quiver: Quiver,
    tau: Sequence[int],
    settings: Optional[ComputationSettings] = None,
) -> int:
    """Smallest codimension of a proper Harder-Narasimhan stratum of Rep_tau."""
    return -max_pairing(quiver, tau, "euler", settings)[0]


def multi_part_max(
    quiver: Quiver,
    tau: Sequence[int],
    form: str = "euler",
    max_parts: int = 4,
    settings: Optional[ComputationSettings] = None,
) -> int:
    """
    max over tau = d^1 + ... + d^l, 2 <= l <= max_parts, of
    form(tau, tau) - sum_k form(d^k, d^k).
    """
    settings = resolve_settings(settings)
    tau = dim_vector(quiver, tau)
    if max_parts < 2:
        raise InputError("decompositions need at least two parts")
    _subvector_grid(tau, settings)
    matrix = form_matrix(quiver, form)
    vectors = sorted(v for v in itertools.product(*(range(x + 1) for x in tau)) if any(v))
    square = {v: int(np.array(v) @ matrix @ np.array(v)) for v in vectors}
    budget = [settings.enumeration_cap]

    @lru_cache(maxsize=None)
    def best(remaining: tuple, top: int, parts: int):
        # max of -sum square over multisets of at most `parts` vectors with index <= top
        budget[0] -= 1
        if budget[0] < 0:
            raise InfeasibleError(f"decomposition search for {tau} exceeds the enumeration cap")
        if not any(remaining):
            return 0
        if parts == 0:
            return None
        result = None
        for idx in range(top, -1, -1):
            v = vectors[idx]
            if any(a > b for a, b in zip(v, remaining)):
                continue
            tail = best(tuple(b - a for a, b in zip(v, remaining)), idx, parts - 1)
            if tail is not None and (result is None or tail - square[v] > result):
                result = tail - square[v]
        return result

    whole = vectors.index(tau)
    candidates = []
    for idx in range(len(vectors)):
        if idx == whole:
            continue
        v = vectors[idx]
        if any(a > b for a, b in zip(v, tau)):
            continue
        tail = best(tuple(b - a for a, b in zip(v, tau)), idx, max_parts - 1)
        if tail is not None and any(tuple(b - a for a, b in zip(v, tau))):
            candidates.append(tail - square[v])
    if not candidates:
        raise InputError(f"{tau} has no decomposition into two or more parts")
    return square[tau] + max(candidates)


##########################################################################
#   Limit series
##########################################################################

def _inverse_phi_series(n: int, order: int) -> TruncatedSeries:
    return series_inv(TruncatedSeries.from_polynomial(phi(n), order))


def equivariant_poincare(d: Sequence[int], order: int) -> TruncatedSeries:
    """(1 - q) prod_i 1/phi_{d_i}(q); in degree convention deg q = 2."""
    if not any(d):
        raise InputError("equivariant series need a nonzero vector")
    result = TruncatedSeries(order, (1, -1))
    for x in d:
        result = series_mul(result, _inverse_phi_series(x, order))
    return result


def limit_series(
    quiver: Quiver,
    d: Sequence[int],
    delta: Sequence[int],
    order: int,
) -> TruncatedSeries:
    """(1 - q) p^{|supp delta|}(q) / prod_{i not in supp delta} phi_{d_i}(q)."""
    d = dim_vector(quiver, d)
    delta = dim_vector(quiver, delta)
    supp = set(support(delta))
    result = series_mul(TruncatedSeries(order, (1, -1)), partition_gf(len(supp), order))
    for i, x in enumerate(d):
        if i not in supp:
            result = series_mul(result, _inverse_phi_series(x, order))
    return result


##########################################################################
#   Sweeps
##########################################################################

def _sweep_row(job: tuple) -> SweepRow:
    """Worker for one n; module level so process pools can pickle it."""
    quiver, n, tau, mode, depth, form, route, settings_dict = job
    settings = ComputationSettings(**settings_dict)
    if not any(tau) or not is_indivisible(tau):
        return SweepRow(n=n, tau=tau, indivisible=False, skipped=True)

    pairing = None
    if 3 <= math.prod(x + 1 for x in tau) <= settings.enumeration_cap:
        pairing = max_pairing(quiver, tau, form, settings)[0]

    if mode == "cohomology":
        series = equivariant_poincare(tau, depth)
        return SweepRow(
            n=n, tau=tau, indivisible=True, skipped=False,
            degree=1 - euler_form(quiver, tau, tau),
            coefficients=tuple(series.coeffs), max_pairing=pairing,
        )

    poly = kac_polynomial(quiver, tau, route, settings)
    LOGGER.info("n=%d tau=%s A=%s", n, tau, poly)
    return SweepRow(
        n=n, tau=tau, indivisible=True, skipped=False,
        degree=poly.degree if not poly.is_zero() else None,
        coefficients=poly.top_coefficients(depth) if not poly.is_zero() else (0,) * (depth + 1),
        polynomial=poly, max_pairing=pairing,
    )


def _stabilization(rows: list[SweepRow], depth: int) -> tuple[tuple, tuple]:
    """Per i: start of the constant tail, and the value when the tail is long enough."""
    window = max(MIN_STABLE_ROWS, math.ceil(len(rows) / 3))
    starts, values = [], []
    for i in range(depth + 1):
        column = [r.coefficients[i] for r in rows]
        if not column:
            starts.append(None)
            values.append(None)
            continue
        k = len(column) - 1
        while k > 0 and column[k - 1] == column[-1]:
            k -= 1
        starts.append(rows[k].n)
        values.append(column[-1] if len(column) - k >= window else None)
    return tuple(starts), tuple(values)


def _certified_thresholds(
    rows: list[SweepRow],
    delta: tuple[int, ...],
    depth: int,
    criterion,
) -> tuple:
    """Per i: earliest n such that every later computed row satisfies criterion(row, i)."""
    supp = support(delta)
    out = []
    for i in range(depth + 1):
        threshold = None
        for row in reversed(rows):
            if criterion(row, i) and all(row.tau[j] >= i for j in supp):
                threshold = row.n
            else:
                break
        out.append(threshold)
    return tuple(out)


def _verdicts(stabilized: tuple, limit: tuple) -> tuple:
    out = []
    for value, target in zip(stabilized, limit):
        if value is None:
            out.append("not_stabilized_in_range")
        elif value == target:
            out.append("matches_limit")
        elif value < target:
            out.append("below_limit")
        else:
            out.append("exceeds_limit")
    return tuple(out)


def kac_sweep(
    quiver: Quiver,
    d: Sequence[int],
    delta: Sequence[int],
    n_range: Sequence[int],
    depth: int = DEFAULT_SWEEP_DEPTH,
    mode: str = "kac",
    limit: Optional[TruncatedSeries] = None,
    settings: Optional[ComputationSettings] = None,
) -> SweepReport:
    """
    Track the top coefficients a_0..a_depth along tau = d + n delta.

    Parameters
    ----------
    mode : str
        "kac" (Kac polynomials, certified under strict Cartan (star)),
        "conjecture" (weak Cartan (star) with (d, e_i) < 0, no certification)
        or "cohomology" (equivariant series of Rep_tau, Euler bound, symmetric quivers).
    limit : TruncatedSeries, optional
        Series compared against; defaults to limit_series(Q, d, delta).

    Returns
    -------
    SweepReport
    """
    settings = resolve_settings(settings)
    check_choice(mode, VALID_SWEEP_MODES, "sweep mode")
    if quiver.has_loops:
        raise InputError("sweeps need a quiver without loops")
    d = dim_vector(quiver, d)
    delta = dim_vector(quiver, delta)
    if not any(delta):
        raise InputError("delta must be nonzero")
    if depth < 0:
        raise InputError("depth must be nonnegative")
    n_values = tuple(sorted(set(int(n) for n in n_range)))
    if not n_values or n_values[0] < 0:
        raise InputError("n range must be a nonempty range of nonnegative integers")
    form = "euler" if mode == "cohomology" else "cartan"

    hypotheses = _sweep_hypotheses(quiver, d, delta, mode)
    flags = [f"hypothesis '{name}' fails" for name, ok in hypotheses.items() if not ok]
    for flag in flags:
        LOGGER.warning("sweep %s along %s: %s", d, delta, flag)

    taus = [_tau(d, delta, n) for n in n_values]
    if mode != "cohomology":
        largest = max((t for t in taus if any(t) and is_indivisible(t)), key=sum, default=None)
        if largest is not None:
            cost = hua_cost(quiver, largest)
            if cost > settings.partition_tuple_cap:
                raise InfeasibleError(
                    f"sweep needs a Hua grid of {cost} partition tuples at {largest} "
                    f"(cap {settings.partition_tuple_cap})"
                )

    settings_dict = settings.as_dict()
    settings_dict["show_progress"] = False
    jobs = [(quiver, n, tau, mode, depth, form, settings.kac_route, settings_dict)
            for n, tau in zip(n_values, taus)]
    progress = dict(total=len(jobs), disable=not settings.show_progress, desc="sweep", unit="n")
    if settings.threads > 1:
        with ProcessPoolExecutor(max_workers=settings.threads) as pool:
            rows = list(tqdm(pool.map(_sweep_row, jobs), **progress))
    else:
        rows = [_sweep_row(job) for job in tqdm(jobs, **progress)]

    rows = [replace(r, m_n=stab_bound_Mn(quiver, d, delta, r.n, form))
            if not r.skipped and all(r.tau) else r for r in rows]
    computed = [r for r in rows if not r.skipped]
    for r in computed:
        if r.polynomial is not None and not r.polynomial.is_zero():
            expected = 1 - euler_form(quiver, r.tau, r.tau)
            if r.degree != expected or r.coefficients[0] != 1:
                flags.append(f"row n={r.n}: degree {r.degree} (expected {expected}), a_0 = {r.coefficients[0]}")

    if limit is None:
        limit = limit_series(quiver, d, delta, depth)
    limit_coeffs = tuple(limit.coefficient(i) for i in range(depth + 1))
    starts, stabilized = _stabilization(computed, depth)

    if mode == "kac" and hypotheses.get("strict_star_cartan"):
        certified = _certified_thresholds(
            computed, delta, depth,
            lambda row, i: row.max_pairing is not None and row.max_pairing < -i,
        )
    elif mode == "cohomology" and hypotheses.get("symmetric") and hypotheses.get("strict_star_euler"):
        certified = _certified_thresholds(
            computed, delta, depth,
            lambda row, i: row.m_n is not None and row.m_n < -i,
        )
    else:
        certified = (None,) * (depth + 1)

    verdicts = _verdicts(stabilized, limit_coeffs)
    if mode == "kac" and hypotheses.get("strict_star_cartan"):
        flags += [f"a_{i} stabilized at {v} but the limit is {t}"
                  for i, (v, t) in enumerate(zip(stabilized, limit_coeffs)) if v is not None and v != t]
    if mode == "conjecture":
        flags += [f"a_{i} exceeds the conditional bound {t}"
                  for i, (v, t) in enumerate(zip(stabilized, limit_coeffs)) if v is not None and v > t]

    return SweepReport(
        quiver=quiver,
        d=d,
        delta=delta,
        mode=mode,
        form=form,
        n_values=n_values,
        depth=depth,
        rows=tuple(rows),
        limit=limit,
        stabilization_index=starts,
        stabilized=stabilized,
        certified=certified,
        verdicts=verdicts,
        hypotheses=hypotheses,
        flags=tuple(flags),
    )


def _sweep_hypotheses(quiver: Quiver, d: tuple, delta: tuple, mode: str) -> dict:
    if mode == "cohomology":
        return {
            "symmetric": is_symmetric(quiver),
            "strict_star_euler": check_star(quiver, delta, "euler", "strict").overall,
        }
    if mode == "kac":
        return {"strict_star_cartan": check_star(quiver, delta, "cartan", "strict").overall}
    cartan = form_matrix(quiver, "cartan")
    return {
        "weak_star_cartan": check_star(quiver, delta, "cartan", "weak").overall,
        "d_negative": bool(np.all(cartan @ np.array(d) < 0)),
    }


##########################################################################
#   Near-maximal decompositions
##########################################################################

def near_max_decompositions(
    quiver: Quiver,
    d: Sequence[int],
    delta: Sequence[int],
    n: int,
    M: int,
    epsilon: float = DEFAULT_EPSILON,
    settings: Optional[ComputationSettings] = None,
) -> NearMaxReport:
    """
    Two-part decompositions tau = v + (tau - v) with Cartan pairing above -M.

    Each is annotated with the part dominating (n - epsilon sqrt(n)) delta,
    if any, and the pairing of delta with the other part.
    """
    settings = resolve_settings(settings)
    d = dim_vector(quiver, d)
    delta = dim_vector(quiver, delta)
    tau = _tau(d, delta, n)
    cartan = form_matrix(quiver, "cartan")
    hypotheses = {
        "weak_star_cartan": check_star(quiver, delta, "cartan", "weak").overall,
        "tau_negative": bool(np.all(cartan @ np.array(tau) < 0)),
    }
    flags = tuple(f"hypothesis '{name}' fails" for name, ok in hypotheses.items() if not ok)
    for flag in flags:
        LOGGER.warning("near-maximal decompositions of %s: %s", tau, flag)

    threshold = n - epsilon * math.sqrt(n)
    _subvector_grid(tau, settings)
    found = []
    for v, values in _pairings_by_first_entry(cartan, tau):
        for row, value in zip(v, values):
            first = tuple(int(x) for x in row)
            second = tuple(a - b for a, b in zip(tau, first))
            if not any(first) or not any(second) or first < second:
                continue
            if value <= -M:
                continue
            dominant = None
            for part in (first, second):
                if all(part[i] - threshold * delta[i] >= 0 for i in range(len(tau))):
                    dominant = part
                    break
            remainder = None
            if dominant is not None:
                other = second if dominant == first else first
                remainder = int(np.array(delta) @ cartan @ np.array(other))
            found.append(NearMaxDecomposition(first, second, int(value), dominant, remainder))
    return NearMaxReport(tau, threshold, tuple(found), hypotheses, flags)
