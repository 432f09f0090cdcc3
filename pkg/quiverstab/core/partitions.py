# integer partitions and the partition statistics entering Hua's formula

from collections import Counter
from dataclasses import dataclass
from functools import cached_property, lru_cache

from sympy.utilities.iterables import partitions as _sympy_partitions

from quiverstab.core.errors import InputError
from quiverstab.core.series import Q_ONE, QPolynomial, phi


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing tuple of positive parts."""
    parts: tuple[int, ...] = ()

    def __post_init__(self):
        if any(p <= 0 for p in self.parts):
            raise InputError(f"partition parts must be positive: {self.parts}")
        object.__setattr__(self, "parts", tuple(sorted(self.parts, reverse=True)))

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __len__(self):
        return len(self.parts)

    @cached_property
    def multiplicities(self) -> dict[int, int]:
        """r_i: number of parts equal to i."""
        return dict(Counter(self.parts))

    @cached_property
    def dual(self) -> "Partition":
        return Partition(_dual_parts(self.parts))


@lru_cache(maxsize=None)
def _dual_parts(parts: tuple[int, ...]) -> tuple[int, ...]:
    if not parts:
        return ()
    return tuple(sum(1 for p in parts if p >= k) for k in range(1, parts[0] + 1))


@lru_cache(maxsize=None)
def partitions_of(m: int) -> tuple[Partition, ...]:
    """All partitions of m in decreasing lexicographic order."""
    if m < 0:
        raise InputError("cannot partition a negative integer")
    if m == 0:
        return (Partition(),)
    found = []
    for block in _sympy_partitions(m):
        # sympy reuses the dict between iterations
        parts = []
        for part, count in block.items():
            parts += [part] * count
        found.append(tuple(sorted(parts, reverse=True)))
    return tuple(Partition(p) for p in sorted(found, reverse=True))


def partition_pairing(first: Partition, second: Partition) -> int:
    """<pi1, pi2> = sum_i (pi1')_i (pi2')_i."""
    return sum(a * b for a, b in zip(first.dual.parts, second.dual.parts))


def b_poly(partition: Partition) -> QPolynomial:
    """b_pi(q) = prod_i phi_{r_i}(q)."""
    result = Q_ONE
    for r in partition.multiplicities.values():
        result = result * phi(r)
    return result


@lru_cache(maxsize=None)
def p_exact(n: int, m: int) -> int:
    """Number of partitions of m into exactly n parts."""
    if n < 0 or m < 0:
        raise InputError("p_exact needs nonnegative arguments")
    if n == 0 or m == 0:
        return int(n == m)
    if n > m:
        return 0
    return sum(1 for p in partitions_of(m) if len(p) == n)


def p_at_most(a: int, m: int) -> int:
    """Partitions of m into at most a parts."""
    return sum(p_exact(j, m) for j in range(min(a, m) + 1))
