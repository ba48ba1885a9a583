"""(0,2)-matrices as bitmasks, the T0 predicate, and T0 enumeration.

A strictly upper triangular (0,2)-matrix on ``n`` strands is stored as an
integer whose bit ``pair_index(n, i, j)`` is set iff ``M(i,j) = 2``.  Pairs are
numbered lexicographically: (1,2), (1,3), ..., (1,n), (2,3), ...
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .braid import PairCountMatrix
from .errors import InvalidMatrix, NonZeroDiagonal, StrandCountTooLarge

MAX_ENUM_STRANDS = 7


@lru_cache(maxsize=None)
def pair_list(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(itertools.combinations(range(1, n + 1), 2))


@lru_cache(maxsize=None)
def _index_table(n: int) -> dict[tuple[int, int], int]:
    return {p: b for b, p in enumerate(pair_list(n))}


def pair_index(n: int, i: int, j: int) -> int:
    if i > j:
        i, j = j, i
    return _index_table(n)[(i, j)]


def pair_bit(n: int, i: int, j: int) -> int:
    return 1 << pair_index(n, i, j)


@dataclass(frozen=True, order=True)
class UpperMask:
    """Support of a strictly upper triangular (0,2)-matrix."""

    n: int
    bits: int = 0

    def __post_init__(self):
        if self.bits < 0 or self.bits >> (self.n * (self.n - 1) // 2):
            raise InvalidMatrix(f"mask {self.bits:#x} has bits outside n={self.n}")

    @classmethod
    def from_pairs(cls, n: int, pairs) -> "UpperMask":
        bits = 0
        for i, j in pairs:
            if i == j or not (1 <= i <= n and 1 <= j <= n):
                raise InvalidMatrix(f"pair ({i},{j}) invalid for n={n}")
            bits |= pair_bit(n, i, j)
        return cls(n, bits)

    @classmethod
    def parse(cls, n: int, text: str) -> "UpperMask":
        """Parse the pair-list form ``"1-2,1-3,2-3"``."""
        pairs = []
        for tok in text.replace(" ", "").split(","):
            if not tok:
                continue
            try:
                a, b = tok.split("-")
                pairs.append((int(a), int(b)))
            except ValueError as exc:
                raise InvalidMatrix(f"bad pair token {tok!r}") from exc
        return cls.from_pairs(n, pairs)

    def pairs(self) -> list[tuple[int, int]]:
        return [p for b, p in enumerate(pair_list(self.n)) if self.bits >> b & 1]

    def __contains__(self, pair) -> bool:
        return bool(self.bits & pair_bit(self.n, *pair))

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def to_text(self) -> str:
        return ",".join(f"{i}-{j}" for i, j in self.pairs())

    def to_matrix(self, value: int = 2) -> PairCountMatrix:
        return PairCountMatrix.from_pairs(self.n, {p: value for p in self.pairs()})

    def reverse(self) -> "UpperMask":
        n = self.n
        return UpperMask.from_pairs(n, [(n + 1 - j, n + 1 - i) for i, j in self.pairs()])

    def __or__(self, other: "UpperMask") -> "UpperMask":
        return UpperMask(self.n, self.bits | other.bits)

    def __and__(self, other: "UpperMask") -> "UpperMask":
        return UpperMask(self.n, self.bits & other.bits)

    def __sub__(self, other: "UpperMask") -> "UpperMask":
        return UpperMask(self.n, self.bits & ~other.bits)

    def issubset(self, other: "UpperMask") -> bool:
        return self.bits & ~other.bits == 0

    def bandwidth(self) -> int:
        return max((j - i for i, j in self.pairs()), default=0)

    def span(self) -> tuple[int, int] | None:
        """Smallest index window ``(lo, hi)`` containing every set pair."""
        ps = self.pairs()
        if not ps:
            return None
        return min(i for i, _ in ps), max(j for _, j in ps)

    def restrict(self, lo: int, hi: int) -> "UpperMask":
        """The part of the mask inside the window ``lo..hi``, re-indexed from 1."""
        m = hi - lo + 1
        return UpperMask.from_pairs(
            m, [(i - lo + 1, j - lo + 1) for i, j in self.pairs() if lo <= i and j <= hi]
        )

    def shift(self, n: int, offset: int) -> "UpperMask":
        return UpperMask.from_pairs(n, [(i + offset - 1, j + offset - 1) for i, j in self.pairs()])


def _support(M) -> tuple[int, set[tuple[int, int]]]:
    """Size and symmetric-closure support (pairs ``i<j``) of a mask or matrix."""
    if isinstance(M, UpperMask):
        return M.n, set(M.pairs())
    if not isinstance(M, PairCountMatrix):
        M = PairCountMatrix.from_rows(M)
    if not M.has_zero_diagonal():
        raise NonZeroDiagonal("matrix has a non-zero diagonal entry")
    n = M.n
    return n, {
        (i + 1, j + 1)
        for i in range(n)
        for j in range(i + 1, n)
        if M[i, j] != 0 or M[j, i] != 0
    }


def t0_violation(M) -> tuple[int, int, int] | None:
    """First triple ``i<j<k`` (1-based) breaking T0, or ``None``."""
    n, sup = _support(M)
    for i, j, k in itertools.combinations(range(1, n + 1), 3):
        if (i, k) in sup and (i, j) not in sup and (j, k) not in sup:
            return (i, j, k)
    return None


def is_t0(M) -> bool:
    return t0_violation(M) is None


def m02(M: PairCountMatrix) -> UpperMask:
    """Support of ``M`` as a (0,2)-mask (every non-zero entry replaced with 2)."""
    n, sup = _support(M)
    return UpperMask.from_pairs(n, sup)


def reverse_matrix(M):
    if isinstance(M, UpperMask):
        return M.reverse()
    if not isinstance(M, PairCountMatrix):
        M = PairCountMatrix.from_rows(M)
    return M.reverse()


def _check_enum_n(n: int) -> None:
    if n < 1:
        raise InvalidMatrix(f"n must be positive, got {n}")
    if n > MAX_ENUM_STRANDS:
        raise StrandCountTooLarge(f"T0 enumeration is limited to n <= {MAX_ENUM_STRANDS}")


@lru_cache(maxsize=None)
def _t0_masks(n: int) -> tuple[int, ...]:
    # Pairs are decided column by column, bottom row first, so that when (i,k)
    # is set every (i,j) and (j,k) with i<j<k is already fixed.
    order = sorted(pair_list(n), key=lambda p: (p[1], -p[0]))
    bit = _index_table(n)
    checks = []
    for i, k in order:
        between = [(bit[(i, j)], bit[(j, k)]) for j in range(i + 1, k)]
        checks.append((bit[(i, k)], between))
    out: list[int] = []

    def rec(pos: int, bits: int) -> None:
        if pos == len(checks):
            out.append(bits)
            return
        b, between = checks[pos]
        rec(pos + 1, bits)
        for x, y in between:
            if not (bits >> x & 1) and not (bits >> y & 1):
                return
        rec(pos + 1, bits | (1 << b))

    rec(0, 0)
    out.sort()
    return tuple(out)


def enumerate_t0(n: int) -> Iterator[UpperMask]:
    """All T0 (0,2)-masks on ``n`` strands in increasing bitset order."""
    _check_enum_n(n)
    for bits in _t0_masks(n):
        yield UpperMask(n, bits)


def count_t0(n: int) -> int:
    _check_enum_n(n)
    return len(_t0_masks(n))
