"""
Generators, words, ordered monomials and generator orders.

Letters are addressed either by `GenIndex(i, j)` (1-based) or by their
row-major flat index (i - 1) * n + (j - 1). Exponent vectors are always laid
out in row-major order, whatever the active generator order is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from qcoord.core.exceptions import (
    DimensionMismatchError,
    OrderConstraintError,
    ParameterError,
)


class GenIndex(NamedTuple):
    i: int
    j: int

    def flat(self, n: int) -> int:
        return (self.i - 1) * n + (self.j - 1)

    @classmethod
    def from_flat(cls, k: int, n: int) -> GenIndex:
        return cls(k // n + 1, k % n + 1)

    def __str__(self) -> str:
        return f"t[{self.i},{self.j}]"


Word = Tuple[GenIndex, ...]
Weight = Tuple[int, ...]


def check_index(idx: Tuple[int, int], n: int) -> GenIndex:
    i, j = idx
    if not (1 <= i <= n and 1 <= j <= n):
        raise ParameterError(f"generator index ({i},{j}) out of range for n={n}")
    return GenIndex(i, j)


class Region(str, Enum):
    N_MINUS = "N-"
    H = "H"
    N_PLUS = "N+"


def region(idx: Tuple[int, int], n: int) -> Region:
    """Position of t[i,j] relative to the antidiagonal j = n + 1 - i."""
    i, j = idx
    if j > n + 1 - i:
        return Region.N_MINUS
    if j == n + 1 - i:
        return Region.H
    return Region.N_PLUS


_BLOCK = {Region.N_MINUS: 0, Region.H: 1, Region.N_PLUS: 2}


def antidiagonal_degree(exps: Sequence[int], n: int) -> int:
    return sum(exps[(i - 1) * n + (n - i)] for i in range(1, n + 1))


############################################################################
# generator orders
############################################################################
class OrderKind(str, Enum):
    STANDARD = "standard-any"
    OPPOSITE = "opposite-constrained"


@dataclass(frozen=True)
class GenOrder:
    """A total order on the generators; `sequence` lists flat indices, lowest first."""

    n: int
    sequence: Tuple[int, ...]
    kind: OrderKind = OrderKind.STANDARD
    rank: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        size = self.n * self.n
        if self.n < 1 or sorted(self.sequence) != list(range(size)):
            raise ParameterError(
                f"order must list every generator of the {self.n}x{self.n} matrix exactly once"
            )
        rank = [0] * size
        for r, k in enumerate(self.sequence):
            rank[k] = r
        object.__setattr__(self, "rank", tuple(rank))
        if self.kind == OrderKind.OPPOSITE:
            self._check_blocks()

    def _check_blocks(self):
        last_block = 0
        for k in self.sequence:
            block = _BLOCK[region(GenIndex.from_flat(k, self.n), self.n)]
            if block < last_block:
                raise OrderConstraintError(
                    f"{GenIndex.from_flat(k, self.n)} ({region(GenIndex.from_flat(k, self.n), self.n).value}) "
                    "is ranked after a generator of a later block; "
                    "opposite orders need N- before H before N+"
                )
            last_block = block

    @classmethod
    def from_indices(
        cls,
        n: int,
        indices: Iterable[Tuple[int, int]],
        kind: OrderKind = OrderKind.STANDARD,
    ) -> GenOrder:
        return cls(n, tuple(check_index(idx, n).flat(n) for idx in indices), kind)

    @property
    def name(self) -> str:
        return "opposite" if self.kind == OrderKind.OPPOSITE else "rowmajor"

    def rank_of(self, idx: GenIndex) -> int:
        return self.rank[idx.flat(self.n)]

    def indices(self) -> List[GenIndex]:
        return [GenIndex.from_flat(k, self.n) for k in self.sequence]


def row_major_order(n: int) -> GenOrder:
    """(1,1) < (1,2) < ... < (n,n)."""
    return GenOrder(n, tuple(range(n * n)))


def make_opposite_order(
    n: int, within_block: Optional[Callable[[GenIndex], Any]] = None
) -> GenOrder:
    """
    Build an order with N- < H < N+; `within_block` orders generators inside
    each block (row-major when omitted).
    """
    if n < 1:
        raise ParameterError(f"dimension must be positive, got {n}")
    secondary = within_block or (lambda idx: idx.flat(n))
    ordered = sorted(
        (GenIndex.from_flat(k, n) for k in range(n * n)),
        key=lambda idx: (_BLOCK[region(idx, n)], secondary(idx)),
    )
    return GenOrder(n, tuple(idx.flat(n) for idx in ordered), OrderKind.OPPOSITE)


############################################################################
# weights
############################################################################
def weight(word: Sequence[Tuple[int, int]], n: int) -> Weight:
    """(k, d_11, d_12, ..., d_nn): length, then letter counts in row-major layout."""
    counts = [0] * (n * n)
    for idx in word:
        counts[check_index(idx, n).flat(n)] += 1
    return (len(word), *counts)


def lex_compare(a: Sequence[int], b: Sequence[int]) -> int:
    if len(a) != len(b):
        raise DimensionMismatchError(
            f"cannot compare weights of length {len(a)} and {len(b)}"
        )
    a, b = tuple(a), tuple(b)
    return (a > b) - (a < b)


def format_word(word: Sequence[Tuple[int, int]]) -> str:
    return " ".join(str(GenIndex(*idx)) for idx in word) if word else "1"


############################################################################
# ordered monomials
############################################################################
@dataclass(frozen=True)
class NormalMonomial:
    exps: Tuple[int, ...]
    dpower: int = 0

    @classmethod
    def one(cls, n: int) -> NormalMonomial:
        return cls((0,) * (n * n))

    @classmethod
    def generator(cls, idx: Tuple[int, int], n: int) -> NormalMonomial:
        exps = [0] * (n * n)
        exps[check_index(idx, n).flat(n)] = 1
        return cls(tuple(exps))

    @property
    def n(self) -> int:
        return math.isqrt(len(self.exps))

    @property
    def degree(self) -> int:
        return sum(self.exps)

    @property
    def weight(self) -> Weight:
        return (self.degree, *self.exps)

    def exponent(self, idx: Tuple[int, int]) -> int:
        return self.exps[GenIndex(*idx).flat(self.n)]

    def sort_key(self) -> Tuple:
        return (self.degree, self.exps, self.dpower)

    def letters(self, order: Optional[GenOrder] = None) -> Tuple[int, ...]:
        """Flat letters of the ordered word, lowest rank first."""
        sequence = order.sequence if order is not None else range(len(self.exps))
        return tuple(k for k in sequence for _ in range(self.exps[k]))

    def word(self, order: Optional[GenOrder] = None) -> Word:
        n = self.n
        return tuple(GenIndex.from_flat(k, n) for k in self.letters(order))

    def format(self, order: Optional[GenOrder] = None) -> str:
        n = self.n
        sequence = order.sequence if order is not None else range(len(self.exps))
        factors = []
        for k in sequence:
            e = self.exps[k]
            if e:
                name = str(GenIndex.from_flat(k, n))
                factors.append(name if e == 1 else f"{name}^{e}")
        if self.dpower:
            factors.append("D" if self.dpower == 1 else f"D^{self.dpower}")
        return " ".join(factors) if factors else "1"

    def __str__(self) -> str:
        return self.format()
