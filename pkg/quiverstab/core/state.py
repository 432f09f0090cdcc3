# Settings object and dataclasses used to store results

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import param

from quiverstab.core.errors import InputError
from quiverstab.core.series import QPolynomial, TruncatedSeries

LOGGER = logging.getLogger(__name__)

# ----------------------------------------
# Objects used to store results
# ----------------------------------------

@dataclass(frozen=True)
class SupportComponents:
    components: tuple[frozenset, ...]
    # (k, l) -> graph distance between components k < l, None when disconnected
    distances: dict

    def min_distance(self) -> Optional[int]:
        values = [d for d in self.distances.values() if d is not None]
        return min(values) if values else None


@dataclass(frozen=True)
class StarReport:
    form_used: str
    strictness: str
    dist_interpretation: str
    left_pairings: tuple[int, ...]    # <e_i, delta> (Cartan: (e_i, delta))
    right_pairings: tuple[int, ...]   # <delta, e_i>
    left_ok: tuple[bool, ...]
    right_ok: tuple[bool, ...]
    components: SupportComponents
    component_ok: bool

    @property
    def overall(self) -> bool:
        return all(self.left_ok) and all(self.right_ok) and self.component_ok


@dataclass(frozen=True)
class SweepRow:
    n: int
    tau: tuple[int, ...]
    indivisible: bool
    skipped: bool
    degree: Optional[int] = None
    coefficients: Optional[tuple] = None      # a_0..a_K from the top
    polynomial: Optional[QPolynomial] = None
    max_pairing: Optional[int] = None
    m_n: Optional[Fraction] = None


@dataclass(frozen=True)
class SweepReport:
    quiver: object
    d: tuple[int, ...]
    delta: tuple[int, ...]
    mode: str
    form: str
    n_values: tuple[int, ...]
    depth: int
    rows: tuple[SweepRow, ...]
    limit: TruncatedSeries
    stabilization_index: tuple       # per i: first n of the constant tail, or None
    stabilized: tuple                # per i: value, or None when not stabilized
    certified: tuple                 # per i: certified threshold n*, or None
    verdicts: tuple                  # per i
    hypotheses: dict = field(default_factory=dict)
    flags: tuple[str, ...] = ()

    @property
    def limit_coefficients(self) -> tuple:
        return tuple(self.limit.coefficient(i) for i in range(self.depth + 1))

    def stabilized_values(self) -> tuple:
        return self.stabilized

    def computed_rows(self) -> tuple[SweepRow, ...]:
        return tuple(r for r in self.rows if not r.skipped)

    def to_rows(self) -> list[dict]:
        out = []
        for row in self.rows:
            certified = [i for i, n_star in enumerate(self.certified)
                         if n_star is not None and not row.skipped and row.n >= n_star]
            out.append({
                "n": row.n,
                "tau": row.tau,
                "indivisible": row.indivisible,
                "deg": row.degree,
                "coefficients": row.coefficients,
                "certified": certified,
                "verdict": _row_verdict(row, self.limit_coefficients),
            })
        return out


def _row_verdict(row: SweepRow, limit: tuple) -> str:
    if row.skipped:
        return "skipped"
    symbols = []
    for a, b in zip(row.coefficients, limit):
        symbols.append("=" if a == b else ("<" if a < b else ">"))
    return "".join(symbols)


@dataclass(frozen=True)
class NearMaxDecomposition:
    larger: tuple[int, ...]
    smaller: tuple[int, ...]
    pairing: int
    dominant: Optional[tuple[int, ...]]
    remainder_pairing: Optional[int]

    @property
    def conclusion_holds(self) -> bool:
        return self.dominant is not None and self.remainder_pairing == 0


@dataclass(frozen=True)
class NearMaxReport:
    tau: tuple[int, ...]
    threshold: float
    decompositions: tuple[NearMaxDecomposition, ...]
    hypotheses: dict
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class CensusResult:
    q: int
    total: int
    classes: int
    indecomposable: int
    absolutely_indecomposable: int
    group_order: int
    orbit_sizes: tuple[int, ...]
    end_dimensions: dict
    elapsed_seconds: float


@dataclass(frozen=True)
class IdentityCheck:
    b: int
    k: int
    a: int
    lhs: int
    rhs: int
    limit: int

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs

    @property
    def limit_applies(self) -> bool:
        return self.a >= self.k

    @property
    def limit_equal(self) -> Optional[bool]:
        if not self.limit_applies:
            return None
        return self.lhs == self.limit == self.rhs


@dataclass(frozen=True)
class MultiplicityBound:
    half_norm: int
    bound: int
    # depends on an unproven surjectivity statement for zero framing
    conditional: bool = True


# ----------------------------------------
#   Valid entries for string inputs
# ----------------------------------------

VALID_FORMS = ["euler", "cartan"]
VALID_STRICTNESS = ["strict", "weak"]
VALID_DIST_INTERPRETATIONS = ["proof", "literal"]
VALID_KAC_ROUTES = ["auto", "log", "decomposition", "eval"]
VALID_SWEEP_MODES = ["cohomology", "kac", "conjecture"]
ROOT_TYPES = ["real", "imaginary", "not_root"]


def check_choice(value: str, valid: list[str], what: str) -> str:
    if value not in valid:
        raise InputError(f"unknown {what} '{value}', expected one of {', '.join(valid)}")
    return value


# ----------------------------------------
#   Computation settings
# ----------------------------------------

class ComputationSettings(param.Parameterized):
    # ---------------------------------
    # Feasibility caps
    # ---------------------------------
    enumeration_cap = param.Integer(
        default=10**7,
        bounds=(1, None),
        doc="Maximum number of subvectors or decompositions enumerated by brute force",
    )

    census_cap = param.Integer(
        default=10**7,
        bounds=(1, None),
        doc="Maximum number of representations enumerated by a census",
    )

    orbit_cap = param.Integer(
        default=10**5,
        bounds=(1, None),
        doc="Maximum order of the acting group in a census",
    )

    end_dim_cap = param.Integer(
        default=8,
        bounds=(0, None),
        doc="Maximum dimension of an endomorphism algebra enumerated elementwise",
    )

    partition_tuple_cap = param.Integer(
        default=2 * 10**6,
        bounds=(1, None),
        doc="Maximum number of partition tuples summed for one Hua grid",
    )

    # ---------------------------------
    # Execution
    # ---------------------------------
    threads = param.Integer(
        default=1,
        bounds=(1, None),
        doc="Worker processes used by sweeps",
    )

    kac_route = param.ObjectSelector(
        default="auto",
        objects=VALID_KAC_ROUTES,
        doc="How Kac polynomials are extracted from the Hua grid",
    )

    auto_eval_cells = param.Integer(
        default=200,
        bounds=(1, None),
        doc="Grid size above which the 'auto' route evaluates at integers and interpolates",
    )

    show_progress = param.Boolean(
        default=False,
        doc="Draw progress bars on standard error",
    )

    def __init__(self, **params):
        # Import here to keep config free of core imports
        from quiverstab.config.computation import (
            DEFAULT_ENUMERATION_CAP,
            DEFAULT_CENSUS_CAP,
            DEFAULT_ORBIT_CAP,
            DEFAULT_END_DIM_CAP,
            DEFAULT_PARTITION_TUPLE_CAP,
            DEFAULT_THREADS,
            DEFAULT_KAC_ROUTE,
            AUTO_EVAL_CELLS,
        )

        defaults = {
            "enumeration_cap": DEFAULT_ENUMERATION_CAP,
            "census_cap": DEFAULT_CENSUS_CAP,
            "orbit_cap": DEFAULT_ORBIT_CAP,
            "end_dim_cap": DEFAULT_END_DIM_CAP,
            "partition_tuple_cap": DEFAULT_PARTITION_TUPLE_CAP,
            "threads": DEFAULT_THREADS,
            "auto_eval_cells": AUTO_EVAL_CELLS,
        }
        for name, value in defaults.items():
            if value is None or value < ComputationSettings.param[name].bounds[0]:
                raise ValueError(f"DEFAULT value {value!r} for '{name}' is out of bounds")
            params.setdefault(name, value)

        if "kac_route" not in params:
            if DEFAULT_KAC_ROUTE in VALID_KAC_ROUTES:
                params["kac_route"] = DEFAULT_KAC_ROUTE
            else:
                LOGGER.warning(
                    "DEFAULT_KAC_ROUTE='%s' is invalid. Falling back to 'auto'.",
                    DEFAULT_KAC_ROUTE,
                )
                params["kac_route"] = "auto"

        super().__init__(**params)

    def override_caps(self, cap: int) -> None:
        """Apply one cap to every enumeration limit (the cli --cap flag)."""
        self.enumeration_cap = cap
        self.census_cap = cap
        self.orbit_cap = cap
        self.partition_tuple_cap = cap

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in self.param if name != "name"}


def resolve_settings(settings: Optional[ComputationSettings]) -> ComputationSettings:
    return settings if settings is not None else ComputationSettings()
