# independent ground truth: thin counts and finite-field censuses

import itertools
import logging
import time
from collections import Counter
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import networkx as nx
import numpy as np
import sympy
from sympy.polys.domains import GF
from sympy.polys.matrices import DomainMatrix
from tqdm import tqdm

from quiverstab.core.errors import InfeasibleError, InputError, InvariantError
from quiverstab.core.quiver import Quiver, dim_vector, euler_form, support
from quiverstab.core.series import Q_SYMBOL, QPolynomial
from quiverstab.core.state import CensusResult, ComputationSettings, resolve_settings

LOGGER = logging.getLogger(__name__)

# residues are multiplied in int64; products stay below 2^30
MAX_FIELD_SIZE = 2**15

# End elements checked per numpy batch
END_BATCH = 1 << 16


##########################################################################
#   Interpolation
##########################################################################

def interpolate(points: Iterable[tuple[int, int]], degree_bound: int) -> QPolynomial:
    """
    Polynomial of degree <= degree_bound through the points, exactly.

    The first degree_bound + 1 points determine it; any further point must
    lie on it.
    """
    points = [(int(x), Fraction(y)) for x, y in points]
    xs = [x for x, _ in points]
    if len(set(xs)) != len(xs):
        raise InputError("interpolation points need distinct abscissae")
    if degree_bound < 0:
        raise InputError("degree bound must be nonnegative")
    if len(points) < degree_bound + 1:
        raise InputError(
            f"insufficient points: {len(points)} given, {degree_bound + 1} needed"
        )
    base = points[: degree_bound + 1]
    expr = sympy.interpolate(
        [(x, sympy.Rational(y.numerator, y.denominator)) for x, y in base], Q_SYMBOL
    )
    poly = QPolynomial.from_sympy(expr)
    for x, y in points[degree_bound + 1:]:
        if poly(Fraction(x)) != y:
            raise InvariantError(
                f"point ({x}, {y}) is not on the degree <= {degree_bound} interpolant {poly}"
            )
    return poly


##########################################################################
#   Thin representations
##########################################################################

def thin_kac(quiver: Quiver, d: Sequence[int]) -> QPolynomial:
    """
    Kac polynomial of a thin vector: sum over arrow subsets S inside supp d
    that connect supp d of (q-1)^(|S| + 1 - |supp d|).
    """
    d = dim_vector(quiver, d)
    if any(x > 1 for x in d):
        raise InputError(f"thin counts need entries 0 or 1, got {d}")
    supp = support(d)
    if not supp:
        raise InputError("thin counts need a nonzero vector")
    inside = set(supp)
    arrows = [(i, j) for i, j in quiver.arrow_list() if i in inside and j in inside]

    exponents = Counter()
    for size in range(len(arrows) + 1):
        for subset in itertools.combinations(arrows, size):
            graph = nx.MultiGraph()
            graph.add_nodes_from(supp)
            graph.add_edges_from(subset)
            if nx.is_connected(graph):
                exponents[size + 1 - len(supp)] += 1

    expr = sum(count * (Q_SYMBOL - 1) ** k for k, count in exponents.items())
    return QPolynomial.from_sympy(sympy.expand(expr)).as_integral()


##########################################################################
#   Matrices over F_p
##########################################################################

def _permutation_sign(perm: tuple[int, ...]) -> int:
    inversions = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
    return -1 if inversions % 2 else 1


def det_mod(matrices: np.ndarray, p: int) -> np.ndarray:
    """Batched determinant mod p by the Leibniz expansion."""
    batch, n = matrices.shape[0], matrices.shape[1]
    if n == 0:
        return np.ones(batch, dtype=np.int64)
    out = np.zeros(batch, dtype=np.int64)
    for perm in itertools.permutations(range(n)):
        term = np.ones(batch, dtype=np.int64)
        for row, col in enumerate(perm):
            term = (term * matrices[:, row, col]) % p
        out = (out + _permutation_sign(perm) * term) % p
    return out


def inverse_mod(matrices: np.ndarray, p: int) -> np.ndarray:
    """Batched inverse mod p through the adjugate; all inputs must be invertible."""
    batch, n = matrices.shape[0], matrices.shape[1]
    det = det_mod(matrices, p)
    if np.any(det == 0):
        raise InvariantError("singular matrix in a general linear group")
    inv_table = np.array([0] + [pow(x, -1, p) for x in range(1, p)], dtype=np.int64)
    adj = np.zeros_like(matrices)
    for i in range(n):
        for j in range(n):
            minor = np.delete(np.delete(matrices, j, axis=1), i, axis=2)
            cof = det_mod(minor, p)
            adj[:, i, j] = (cof if (i + j) % 2 == 0 else -cof) % p
    return (adj * inv_table[det][:, None, None]) % p


def general_linear_group(n: int, p: int) -> tuple[np.ndarray, np.ndarray]:
    """All elements of GL_n(F_p) and their inverses, shape (|G|, n, n)."""
    if n == 0:
        empty = np.zeros((1, 0, 0), dtype=np.int64)
        return empty, empty
    grid = np.indices((p,) * (n * n)).reshape(n * n, -1).T.reshape(-1, n, n).astype(np.int64)
    elements = grid[det_mod(grid, p) != 0]
    return elements, inverse_mod(elements, p)


def _gl_order(n: int, p: int) -> int:
    order = 1
    for k in range(n):
        order *= p**n - p**k
    return order


def _matrix_power_mod(x: np.ndarray, k: int, p: int) -> np.ndarray:
    n = x.shape[1]
    result = np.broadcast_to(np.eye(n, dtype=np.int64), x.shape).copy()
    for _ in range(k):
        result = np.matmul(result, x) % p
    return result


##########################################################################
#   Census
##########################################################################

class _RepresentationSpace:
    """Index <-> matrix tuple encoding of Rep_d(F_p) in base p."""

    def __init__(self, quiver: Quiver, d: tuple[int, ...], p: int):
        self.p = p
        self.d = d
        self.blocks = []   # (source, target, offset)
        offset = 0
        for i, j in quiver.arrow_list():
            if d[i] and d[j]:
                self.blocks.append((i, j, offset))
                offset += d[i] * d[j]
        self.length = offset
        self.total = p**offset
        self.powers = p ** np.arange(offset, dtype=np.int64)

    def decode(self, index: int) -> list[np.ndarray]:
        digits = (index // self.powers) % self.p
        return [digits[off: off + self.d[i] * self.d[j]].reshape(self.d[j], self.d[i])
                for i, j, off in self.blocks]

    def encode(self, matrices: list[np.ndarray]) -> np.ndarray:
        """Batched: list of (batch, d_j, d_i) arrays to indices."""
        if not matrices:
            return np.zeros(1, dtype=np.int64)
        flat = np.concatenate([m.reshape(m.shape[0], -1) for m in matrices], axis=1)
        return flat @ self.powers


def _endomorphism_basis(space: _RepresentationSpace, matrices: list[np.ndarray]) -> tuple[np.ndarray, list]:
    """Basis of End(V) over F_p as rows of block-flattened (f_i) vectors."""
    p, d = space.p, space.d
    offsets, size = {}, 0
    for i, x in enumerate(d):
        if x:
            offsets[i] = size
            size += x * x

    rows = []
    for (i, j, _), b in zip(space.blocks, matrices):
        # (f_j b - b f_i)[r][c] = 0
        for r in range(d[j]):
            for c in range(d[i]):
                row = [0] * size
                for s in range(d[j]):
                    row[offsets[j] + r * d[j] + s] += int(b[s][c])
                for s in range(d[i]):
                    row[offsets[i] + s * d[i] + c] -= int(b[r][s])
                rows.append([x % p for x in row])

    if not rows:
        basis = np.eye(size, dtype=np.int64)
    else:
        field = GF(p)
        matrix = DomainMatrix([[field(x) for x in row] for row in rows], (len(rows), size), field)
        null = matrix.nullspace().to_list()
        basis = np.array([[int(field.to_sympy(x)) % p for x in row] for row in null],
                         dtype=np.int64).reshape(len(null), size)
    return basis, [(i, offsets[i], d[i]) for i in offsets]


def _classify_endomorphisms(basis: np.ndarray, layout: list, p: int) -> tuple[bool, bool]:
    """(indecomposable, absolutely indecomposable) from the elements of End(V)."""
    dim = basis.shape[0]
    indecomposable = absolutely = True
    coefficient_grid = itertools.product(range(p), repeat=dim)
    while indecomposable or absolutely:
        chunk = np.array(list(itertools.islice(coefficient_grid, END_BATCH)), dtype=np.int64)
        if chunk.size == 0:
            break
        elements = (chunk.reshape(-1, dim) @ basis) % p
        invertible = np.ones(len(elements), dtype=bool)
        nilpotent = np.ones(len(elements), dtype=bool)
        shifted_nilpotent = np.zeros(len(elements), dtype=bool)
        blocks = [elements[:, off: off + n * n].reshape(-1, n, n) for _, off, n in layout]
        for x, (_, _, n) in zip(blocks, layout):
            invertible &= det_mod(x, p) != 0
            nilpotent &= np.all(_matrix_power_mod(x, n, p) == 0, axis=(1, 2))
        for lam in range(p):
            ok = np.ones(len(elements), dtype=bool)
            for x, (_, _, n) in zip(blocks, layout):
                y = (x - lam * np.eye(n, dtype=np.int64)) % p
                ok &= np.all(_matrix_power_mod(y, n, p) == 0, axis=(1, 2))
            shifted_nilpotent |= ok
        indecomposable &= bool(np.all(invertible | nilpotent))
        absolutely &= bool(np.all(shifted_nilpotent))
    return indecomposable, absolutely and indecomposable


def census(
    quiver: Quiver,
    d: Sequence[int],
    q: int,
    settings: Optional[ComputationSettings] = None,
) -> CensusResult:
    """
    Enumerate Rep_d(F_q), split it into GL_d-orbits and classify each class
    through its endomorphism algebra.
    """
    settings = resolve_settings(settings)
    d = dim_vector(quiver, d)
    if not any(d):
        raise InputError("a census needs a nonzero dimension vector")
    if not sympy.isprime(q) or q >= MAX_FIELD_SIZE:
        raise InputError(f"census fields must be prime and below {MAX_FIELD_SIZE}, got {q}")
    started = time.perf_counter()

    space = _RepresentationSpace(quiver, d, q)
    if space.total > settings.census_cap:
        raise InfeasibleError(f"{space.total} representations exceed the census cap {settings.census_cap}")
    group_order = 1
    for x in d:
        group_order *= _gl_order(x, q)
    if group_order > settings.orbit_cap:
        raise InfeasibleError(f"group of order {group_order} exceeds the orbit cap {settings.orbit_cap}")

    # product group, one element per row
    vertices = [i for i, x in enumerate(d) if x]
    groups = {i: general_linear_group(d[i], q) for i in vertices}
    index_grid = np.indices([len(groups[i][0]) for i in vertices]).reshape(len(vertices), -1)
    acting = {i: (groups[i][0][idx], groups[i][1][idx]) for i, idx in zip(vertices, index_grid)}

    visited = np.zeros(space.total, dtype=bool)
    orbit_sizes, end_dims = [], Counter()
    indecomposable = absolutely = 0
    pointer = 0
    with tqdm(total=space.total, disable=not settings.show_progress,
              desc=f"census q={q}", unit="rep") as bar:
        while True:
            # every index below pointer is visited; pointer only moves forward
            while pointer < space.total and visited[pointer]:
                pointer += 1
            if pointer == space.total:
                break
            rep = space.decode(pointer)
            images = [np.matmul(np.matmul(acting[j][0], b), acting[i][1]) % q
                      for (i, j, _), b in zip(space.blocks, rep)]
            orbit = np.unique(space.encode(images))
            visited[orbit] = True
            orbit_sizes.append(len(orbit))
            bar.update(len(orbit))

            basis, layout = _endomorphism_basis(space, rep)
            end_dims[basis.shape[0]] += 1
            if basis.shape[0] > settings.end_dim_cap:
                raise InfeasibleError(
                    f"End algebra of dimension {basis.shape[0]} exceeds the cap {settings.end_dim_cap}"
                )
            indec, absolute = _classify_endomorphisms(basis, layout, q)
            indecomposable += indec
            absolutely += absolute

    if sum(orbit_sizes) != space.total:
        raise InvariantError("orbit sizes do not add up to the number of representations")

    result = CensusResult(
        q=q,
        total=space.total,
        classes=len(orbit_sizes),
        indecomposable=indecomposable,
        absolutely_indecomposable=absolutely,
        group_order=group_order,
        orbit_sizes=tuple(orbit_sizes),
        end_dimensions=dict(sorted(end_dims.items())),
        elapsed_seconds=time.perf_counter() - started,
    )
    LOGGER.info(
        "census %s over F_%d: %d reps, %d classes, %d indecomposable, %d absolutely",
        d, q, result.total, result.classes, result.indecomposable, result.absolutely_indecomposable,
    )
    return result


def census_kac_values(
    quiver: Quiver,
    d: Sequence[int],
    primes: Iterable[int],
    settings: Optional[ComputationSettings] = None,
) -> dict[int, int]:
    """Absolutely indecomposable counts at each prime."""
    return {p: census(quiver, d, p, settings).absolutely_indecomposable for p in primes}


def brute_force_kac(
    quiver: Quiver,
    d: Sequence[int],
    primes: Sequence[int],
    settings: Optional[ComputationSettings] = None,
) -> QPolynomial:
    d = dim_vector(quiver, d)
    bound = max(0, 1 - euler_form(quiver, d, d))
    primes = list(primes)
    if len(primes) < bound + 1:
        raise InputError(
            f"insufficient points: degree bound {bound} needs {bound + 1} primes, got {len(primes)}"
        )
    values = census_kac_values(quiver, d, primes, settings)
    poly = interpolate(sorted(values.items()), bound)
    if not poly.is_integral():
        raise InvariantError(f"census values {values} interpolate to a non-integral {poly}")
    return poly
