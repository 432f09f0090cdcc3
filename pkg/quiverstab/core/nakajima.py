# Nakajima quiver varieties through the Crawley-Boevey quiver

import logging
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Optional, Sequence

import numpy as np

from quiverstab.core.errors import InputError
from quiverstab.core.partitions import p_at_most
from quiverstab.core.quiver import (
    Quiver,
    cb_dimension_vector,
    check_star,
    crawley_boevey,
    dim_vector,
    form_matrix,
    root_type,
    support,
)
from quiverstab.core.series import (
    BivariateSeries,
    TruncatedSeries,
    bivariate_product,
    partition_gf,
    phi,
    series_inv,
    series_mul,
)
from quiverstab.core.stabilize import equivariant_poincare, kac_sweep
from quiverstab.core.state import (
    ComputationSettings,
    IdentityCheck,
    MultiplicityBound,
    SweepReport,
)

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class NakajimaInstance:
    quiver: Quiver
    framing: tuple[int, ...]
    d: tuple[int, ...]
    delta: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "framing", dim_vector(self.quiver, self.framing))
        object.__setattr__(self, "d", dim_vector(self.quiver, self.d))
        object.__setattr__(self, "delta", dim_vector(self.quiver, self.delta))
        if not any(self.framing):
            raise InputError("the framing w must be nonzero")
        if not any(self.delta):
            raise InputError("delta must be nonzero")

    @cached_property
    def cb_quiver(self) -> Quiver:
        return crawley_boevey(self.quiver, self.framing)

    @property
    def cb_d(self) -> tuple[int, ...]:
        return cb_dimension_vector(self.d)

    @property
    def cb_delta(self) -> tuple[int, ...]:
        return self.delta + (0,)

    @cached_property
    def hypotheses(self) -> dict:
        cartan = form_matrix(self.quiver, "cartan")
        return {
            "delta_imaginary": root_type(self.quiver, self.delta) == "imaginary",
            "weak_star": check_star(self.quiver, self.delta, "cartan", "weak").overall,
            "strict_star": check_star(self.quiver, self.delta, "cartan", "strict").overall,
            "d_negative": bool(np.all(cartan @ np.array(self.d) < 0)),
            "framing_meets_delta": bool(set(support(self.framing)) & set(support(self.delta))),
        }

    @property
    def mode(self) -> Optional[str]:
        """Which stabilization statement applies: "ii", "i" or None."""
        h = self.hypotheses
        if h["delta_imaginary"] and h["strict_star"] and h["framing_meets_delta"]:
            return "ii"
        if h["delta_imaginary"] and h["weak_star"] and h["d_negative"]:
            return "i"
        return None


def nakajima_limit_series(inst: NakajimaInstance, order: int) -> TruncatedSeries:
    """p^{|supp delta|}(q) / prod_{i not in supp delta} phi_{d_i}(q)."""
    supp = set(support(inst.delta))
    result = partition_gf(len(supp), order)
    for i, x in enumerate(inst.d):
        if i not in supp:
            result = series_mul(result, series_inv(TruncatedSeries.from_polynomial(phi(x), order)))
    return result


def nakajima_kac_sweep(
    inst: NakajimaInstance,
    n_range: Sequence[int],
    depth: int,
    settings: Optional[ComputationSettings] = None,
) -> SweepReport:
    """Kac sweep of (d + n delta, 1) on the Crawley-Boevey quiver."""
    limit = nakajima_limit_series(inst, depth)
    report = kac_sweep(
        inst.cb_quiver, inst.cb_d, inst.cb_delta, n_range, depth,
        mode="kac", limit=limit, settings=settings,
    )
    mode = inst.mode
    flags = list(report.flags)
    if mode is None:
        flags.append("neither stabilization statement applies to this instance")
    for i, (value, target) in enumerate(zip(report.stabilized, report.limit_coefficients)):
        if value is None:
            continue
        if mode == "ii" and value != target:
            flags.append(f"a_{i} stabilized at {value}, expected equality with {target}")
        if mode == "i" and value > target:
            flags.append(f"a_{i} stabilized at {value}, above the bound {target}")
    for flag in flags[len(report.flags):]:
        LOGGER.warning("Nakajima sweep: %s", flag)
    hypotheses = {**report.hypotheses, **inst.hypotheses, "mode": mode}
    return replace(report, mode="nakajima", hypotheses=hypotheses, flags=tuple(flags))


##########################################################################
#   Hilbert schemes of points
##########################################################################

def hilbert_series(r: int, b: Optional[int] = None, orders: tuple[int, int] = (4, 4)) -> BivariateSeries:
    """prod_{m>=1} (1 - t^{m-1} q^m)^{-1} (1 - t^m q^m)^{-b}; b defaults to r - 1."""
    if r < 2:
        raise InputError("r must be at least 2")
    if b is None:
        b = r - 1
    if b < 0:
        raise InputError("b must be nonnegative")
    nq = orders[1]
    factors = []
    for m in range(1, nq + 1):
        factors.append((m - 1, m, 1))
        factors.append((m, m, b))
    return bivariate_product(factors, orders)


def hilbert_limit(b: int, k: int) -> int:
    """Coefficient k of p^{b+1}."""
    return partition_gf(b + 1, k).coefficient(k)


def hilbert_coefficient_identity_check(b: int, k: int, a: int) -> IdentityCheck:
    """
    Compare [t^k q^{k+a}] of the Hilbert product with
    sum_{m+n=k} p_{<=a}(m) [q^n] p^b(q).
    """
    if k < 0 or a < 0 or b < 0:
        raise InputError("b, k and a must be nonnegative")
    series = hilbert_series(max(2, b + 1), b, (k, k + a))
    lhs = series.coefficient(k, k + a)
    colored = partition_gf(b, k)
    rhs = sum(p_at_most(a, m) * colored.coefficient(k - m) for m in range(k + 1))
    return IdentityCheck(b=b, k=k, a=a, lhs=lhs, rhs=rhs, limit=hilbert_limit(b, k))


def multiplicity_bound_report(quiver: Quiver, d: Sequence[int]) -> MultiplicityBound:
    """
    1 - (d, d)/2 and the coefficient there of (1 - q) prod_i 1/phi_{d_i}(q).

    Conditional: the bound relies on Kirwan surjectivity for zero framing.
    """
    if quiver.has_loops:
        raise InputError("multiplicity bounds need a quiver without loops")
    d = dim_vector(quiver, d)
    cartan = form_matrix(quiver, "cartan")
    norm = int(np.array(d) @ cartan @ np.array(d))
    if norm % 2:
        raise InputError(f"(d, d) = {norm} is odd")
    half = 1 - norm // 2
    if half < 0:
        return MultiplicityBound(half_norm=half, bound=0)
    return MultiplicityBound(half_norm=half, bound=equivariant_poincare(d, half).coefficient(half))
