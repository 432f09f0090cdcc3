# quivers, dimension vectors, bilinear forms and root-theoretic checks

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import networkx as nx
import numpy as np

from quiverstab.config.computation import (
    GENERIC_CHARACTER_MAX_NORM,
    ROOT_DESCENT_FACTOR,
)
from quiverstab.core.errors import InputError, InvariantError
from quiverstab.core.series import Q_ONE, QPolynomial
from quiverstab.core.state import (
    VALID_DIST_INTERPRETATIONS,
    VALID_FORMS,
    VALID_STRICTNESS,
    StarReport,
    SupportComponents,
    check_choice,
)

LOGGER = logging.getLogger(__name__)

CB_LABEL = "∞"

##########################################################################
#   Quivers
##########################################################################

@dataclass(frozen=True)
class Quiver:
    """
    Quiver given by its arrow-count matrix.

    ``arrows[i][j]`` is the number of arrows i -> j. Loops are rejected
    unless ``allow_loops`` is set.
    """
    arrows: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] = ()
    allow_loops: bool = False

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.arrows)
        n = len(rows)
        if n == 0:
            raise InputError("a quiver needs at least one vertex")
        if any(len(row) != n for row in rows):
            raise InputError("arrow matrix must be square")
        if any(x < 0 for row in rows for x in row):
            raise InputError("arrow counts must be nonnegative")
        if not self.allow_loops and any(rows[i][i] for i in range(n)):
            raise InputError("loops are not permitted on this quiver")
        labels = tuple(self.labels) if self.labels else tuple(str(i + 1) for i in range(n))
        if len(labels) != n:
            raise InputError("one label per vertex is required")
        if len(set(labels)) != n:
            raise InputError("vertex labels must be unique")
        object.__setattr__(self, "arrows", rows)
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_arrows(cls, n: int, arrows, labels=(), allow_loops=False) -> "Quiver":
        matrix = [[0] * n for _ in range(n)]
        for i, j in arrows:
            if not (0 <= i < n and 0 <= j < n):
                raise InputError(f"arrow {i}->{j} references an unknown vertex")
            matrix[i][j] += 1
        return cls(tuple(tuple(r) for r in matrix), tuple(labels), allow_loops)

    @property
    def n_vertices(self) -> int:
        return len(self.arrows)

    @property
    def has_loops(self) -> bool:
        return any(self.arrows[i][i] for i in range(self.n_vertices))

    def adjacency(self) -> np.ndarray:
        return np.array(self.arrows, dtype=np.int64)

    def euler_matrix(self) -> np.ndarray:
        return np.eye(self.n_vertices, dtype=np.int64) - self.adjacency()

    def cartan_matrix(self) -> np.ndarray:
        e = self.euler_matrix()
        return e + e.T

    def arrow_list(self) -> list[tuple[int, int]]:
        """Arrows with multiplicity, in row-major order."""
        return [(i, j) for i in range(self.n_vertices) for j in range(self.n_vertices)
                for _ in range(self.arrows[i][j])]

    def underlying_graph(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(range(self.n_vertices))
        graph.add_edges_from(self.arrow_list())
        return graph

    def reversed_arrow(self, i: int, j: int) -> "Quiver":
        """Reverse one arrow i -> j."""
        if self.arrows[i][j] == 0:
            raise InputError(f"no arrow {i}->{j} to reverse")
        matrix = [list(r) for r in self.arrows]
        matrix[i][j] -= 1
        matrix[j][i] += 1
        return Quiver(tuple(tuple(r) for r in matrix), self.labels, self.allow_loops)


def kronecker_quiver(m: int) -> Quiver:
    """Two vertices with m arrows 1 -> 2."""
    return Quiver(((0, m), (0, 0)))


def path_quiver(n: int) -> Quiver:
    """Equioriented path 1 -> 2 -> ... -> n."""
    return Quiver.from_arrows(n, [(i, i + 1) for i in range(n - 1)])


# --------------------------------------------------
# Dimension vectors
# --------------------------------------------------

def dim_vector(quiver: Quiver, d: Sequence[int]) -> tuple[int, ...]:
    d = tuple(int(x) for x in d)
    if len(d) != quiver.n_vertices:
        raise InputError(
            f"dimension mismatch: vector of length {len(d)} on a quiver with {quiver.n_vertices} vertices"
        )
    if any(x < 0 for x in d):
        raise InputError("dimension vectors must be nonnegative")
    return d


def support(d: Sequence[int]) -> tuple[int, ...]:
    return tuple(i for i, x in enumerate(d) if x)


def norm(d: Sequence[int]) -> int:
    return sum(d)


def simple(quiver: Quiver, i: int) -> tuple[int, ...]:
    return tuple(int(k == i) for k in range(quiver.n_vertices))


def is_indivisible(d: Sequence[int]) -> bool:
    if not any(d):
        raise InputError("the zero vector has no divisibility")
    return math.gcd(*d) == 1


# --------------------------------------------------
# Bilinear forms
# --------------------------------------------------

def euler_form(quiver: Quiver, d: Sequence[int], v: Sequence[int]) -> int:
    d = np.array(dim_vector(quiver, d))
    v = np.array(dim_vector(quiver, v))
    return int(d @ quiver.euler_matrix() @ v)


def cartan_form(quiver: Quiver, d: Sequence[int], v: Sequence[int]) -> int:
    return euler_form(quiver, d, v) + euler_form(quiver, v, d)


def form_matrix(quiver: Quiver, form: str) -> np.ndarray:
    check_choice(form, VALID_FORMS, "form")
    return quiver.euler_matrix() if form == "euler" else quiver.cartan_matrix()


def is_symmetric(quiver: Quiver) -> bool:
    a = quiver.adjacency()
    return bool(np.array_equal(a, a.T))


def quadratic_growth(quiver: Quiver, d: Sequence[int], delta: Sequence[int]) -> tuple[int, int, int]:
    """Coefficients of <d+n delta, d+n delta> as c0 + c1 n + c2 n^2."""
    return (
        euler_form(quiver, d, d),
        euler_form(quiver, d, delta) + euler_form(quiver, delta, d),
        euler_form(quiver, delta, delta),
    )


##########################################################################
#   Condition (star)
##########################################################################

def support_components(quiver: Quiver, delta: Sequence[int]) -> SupportComponents:
    delta = dim_vector(quiver, delta)
    graph = nx.Graph(quiver.underlying_graph())
    sub = graph.subgraph(support(delta))
    components = tuple(
        sorted((frozenset(c) for c in nx.connected_components(sub)), key=min)
    )
    distances = {}
    for k, source in enumerate(components):
        lengths = nx.multi_source_dijkstra_path_length(graph, set(source))
        for l in range(k + 1, len(components)):
            reached = [lengths[v] for v in components[l] if v in lengths]
            distances[(k, l)] = min(reached) if reached else None
    return SupportComponents(components, distances)


def check_star(
    quiver: Quiver,
    delta: Sequence[int],
    form: str = "cartan",
    strictness: str = "strict",
    dist_interpretation: str = "proof",
) -> StarReport:
    """
    Evaluate condition (star) for delta.

    Parameters
    ----------
    form : "euler" or "cartan"
        With the Cartan form both inequalities read (e_i, delta) against 0.
    strictness : "strict" or "weak"
    dist_interpretation : "proof" or "literal"
        Maximum distance between support components: 2 (edge or common
        neighbour) for "proof", 1 for "literal".
    """
    check_choice(form, VALID_FORMS, "form")
    check_choice(strictness, VALID_STRICTNESS, "strictness")
    check_choice(dist_interpretation, VALID_DIST_INTERPRETATIONS, "distance interpretation")
    delta = dim_vector(quiver, delta)
    if not any(delta):
        raise InputError("condition (star) needs a nonzero delta")

    vec = np.array(delta)
    if form == "euler":
        left = tuple(int(x) for x in quiver.euler_matrix() @ vec)    # <e_i, delta>
        right = tuple(int(x) for x in vec @ quiver.euler_matrix())   # <delta, e_i>
    else:
        left = right = tuple(int(x) for x in quiver.cartan_matrix() @ vec)

    if strictness == "strict":
        ok = lambda x: x < 0
    else:
        ok = lambda x: x <= 0

    comps = support_components(quiver, delta)
    max_dist = 2 if dist_interpretation == "proof" else 1
    component_ok = all(d is not None and d <= max_dist for d in comps.distances.values())

    return StarReport(
        form_used=form,
        strictness=strictness,
        dist_interpretation=dist_interpretation,
        left_pairings=left,
        right_pairings=right,
        left_ok=tuple(ok(x) for x in left),
        right_ok=tuple(ok(x) for x in right),
        components=comps,
        component_ok=component_ok,
    )


##########################################################################
#   Roots
##########################################################################

def _connected_support(quiver: Quiver, d: Sequence[int]) -> bool:
    supp = support(d)
    if not supp:
        return False
    return nx.is_connected(quiver.underlying_graph().subgraph(supp))


def root_type(quiver: Quiver, d: Sequence[int]) -> str:
    """
    Classify d as "real", "imaginary" or "not_root" by reflection descent.

    Reflect at the first vertex with (d, e_i) > 0 until a simple root, a
    negative entry or the fundamental set is reached.
    """
    if quiver.has_loops:
        raise InputError("root classification needs a quiver without loops")
    d = list(dim_vector(quiver, d))
    if not any(d):
        raise InputError("root classification needs a nonzero vector")
    cartan = quiver.cartan_matrix()

    for step in range(ROOT_DESCENT_FACTOR * sum(d) + 1):
        if sum(d) == 1:
            return "real"
        if not _connected_support(quiver, d):
            return "not_root"
        pairings = cartan @ np.array(d)
        positive = [i for i, x in enumerate(pairings) if x > 0]
        if not positive:
            return "imaginary"
        i = positive[0]
        d[i] -= int(pairings[i])
        LOGGER.debug("descent step %d: reflect at %d -> %s", step, i, d)
        if d[i] < 0:
            return "not_root"
    raise InvariantError("reflection descent exceeded its iteration cap")


##########################################################################
#   Characters
##########################################################################

@dataclass(frozen=True)
class Character:
    weights: tuple[int, ...]

    def __call__(self, d: Sequence[int]) -> int:
        return sum(c * x for c, x in zip(self.weights, d))


def slope(chi: Character, d: Sequence[int]) -> Fraction:
    if not any(d):
        raise InputError("slope of the zero vector is undefined")
    return Fraction(chi(d), sum(d))


def _proper_subvectors(d: Sequence[int]) -> np.ndarray:
    vectors = [v for v in itertools.product(*(range(x + 1) for x in d))
               if any(v) and tuple(v) != tuple(d)]
    return np.array(vectors, dtype=np.int64).reshape(len(vectors), len(d))


def _is_generic_on(subvectors: np.ndarray, d: np.ndarray, weights: np.ndarray) -> bool:
    # slope(v) == slope(d)  <=>  chi(v) |d| == chi(d) |v|
    lhs = (subvectors @ weights) * int(d.sum())
    rhs = int(weights @ d) * subvectors.sum(axis=1)
    return bool(np.all(lhs != rhs))


def is_generic(quiver: Quiver, d: Sequence[int], chi: Character) -> bool:
    d = dim_vector(quiver, d)
    if len(chi.weights) != len(d):
        raise InputError("character and dimension vector lengths differ")
    return _is_generic_on(_proper_subvectors(d), np.array(d), np.array(chi.weights))


def generic_character(quiver: Quiver, d: Sequence[int]) -> Character:
    """
    First generic character by increasing max-norm, lexicographic within a norm.
    """
    d = dim_vector(quiver, d)
    if not is_indivisible(d):
        raise InputError(f"no generic character exists for the divisible vector {d}")
    subvectors = _proper_subvectors(d)
    dv = np.array(d)
    n = len(d)
    for m in range(1, GENERIC_CHARACTER_MAX_NORM + 1):
        for weights in itertools.product(range(-m, m + 1), repeat=n):
            if max(abs(w) for w in weights) != m:
                continue
            if _is_generic_on(subvectors, dv, np.array(weights)):
                LOGGER.debug("generic character for %s: %s", d, weights)
                return Character(tuple(weights))
    raise InvariantError(f"no generic character found up to max-norm {GENERIC_CHARACTER_MAX_NORM}")


##########################################################################
#   Derived quivers
##########################################################################

def double_quiver(quiver: Quiver) -> Quiver:
    a = quiver.adjacency()
    return Quiver(tuple(tuple(int(x) for x in row) for row in a + a.T),
                  quiver.labels, quiver.allow_loops)


def framed_quiver(quiver: Quiver) -> Quiver:
    """Add a vertex 1_i and one arrow 1_i -> i for every vertex i."""
    n = quiver.n_vertices
    matrix = [[0] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for j in range(n):
            matrix[i][j] = quiver.arrows[i][j]
        matrix[n + i][i] = 1
    labels = quiver.labels + tuple(f"1_{label}" for label in quiver.labels)
    return Quiver(tuple(tuple(r) for r in matrix), labels, quiver.allow_loops)


def crawley_boevey(quiver: Quiver, w: Sequence[int]) -> Quiver:
    """Append a vertex with w_i arrows to each vertex i."""
    w = dim_vector(quiver, w)
    if not any(w):
        raise InputError("the framing w must be nonzero")
    matrix = [list(row) + [0] for row in quiver.arrows]
    matrix.append(list(w) + [0])
    return Quiver(tuple(tuple(r) for r in matrix), quiver.labels + (CB_LABEL,), quiver.allow_loops)


def cb_dimension_vector(d: Sequence[int]) -> tuple[int, ...]:
    return tuple(d) + (1,)


# --------------------------------------------------
# Finite field counts
# --------------------------------------------------

def finite_field_counts(quiver: Quiver, d: Sequence[int]) -> tuple[QPolynomial, QPolynomial]:
    """|Rep_d(F_q)| and |GL_d(F_q)| as polynomials in q."""
    d = dim_vector(quiver, d)
    exponent = sum(quiver.arrows[i][j] * d[i] * d[j]
                   for i in range(quiver.n_vertices) for j in range(quiver.n_vertices))
    rep_count = Q_ONE.shifted(exponent)
    gl_count = Q_ONE
    for x in d:
        for k in range(x):
            gl_count = gl_count * (Q_ONE.shifted(x) - Q_ONE.shifted(k))
    return rep_count, gl_count
