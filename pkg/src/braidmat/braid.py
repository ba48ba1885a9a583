"""Braid words and their pair-count matrices.

Conventions
-----------
* A word is read top to bottom.  Letter ``k`` (``1 <= k <= n-1``) is one
  crossing between the strands currently at positions ``k`` and ``k+1``.
* Strands are labelled ``1..n`` by their position at the top, counted from
  the left.  Positions in letters are 1-based; matrix rows are 0-based
  tuples, so the count for labels ``i, j`` lives at ``entries[i-1][j-1]``
  (or ``M.entry(i, j)``).
* Sign convention for diagrams: a crossing is *positive* when the strand
  entering from the left position passes over (``Over.LEFT``).  Everything
  downstream (``U(b) = C(b)`` for positive diagrams, the crossing-matrix
  realizer) only needs the convention to be fixed, not which one it is.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InvalidMatrix, InvalidWord, MismatchedStrandCount, OffsetOutOfRange

MAX_STRANDS = 16


def _check_n(n: int) -> None:
    if not isinstance(n, int) or not 1 <= n <= MAX_STRANDS:
        raise InvalidWord(f"strand count must be in 1..{MAX_STRANDS}, got {n!r}")


class Over(enum.Enum):
    """Which strand passes over at a crossing."""

    LEFT = "+"
    RIGHT = "-"

    @property
    def positive(self) -> bool:
        return self is Over.LEFT


@dataclass(frozen=True)
class PairCountMatrix:
    """Square zero-diagonal integer matrix indexed by strand labels."""

    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.entries)
        for r, row in enumerate(self.entries):
            if len(row) != n:
                raise InvalidMatrix("matrix is not square")

    @classmethod
    def zeros(cls, n: int) -> "PairCountMatrix":
        return cls(tuple((0,) * n for _ in range(n)))

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "PairCountMatrix":
        return cls(tuple(tuple(int(x) for x in row) for row in rows))

    @classmethod
    def from_pairs(cls, n: int, values: dict[tuple[int, int], int], symmetric: bool = True):
        """Build from ``{(i, j): value}`` with 1-based labels."""
        rows = [[0] * n for _ in range(n)]
        for (i, j), v in values.items():
            rows[i - 1][j - 1] = v
            if symmetric:
                rows[j - 1][i - 1] = v
        return cls.from_rows(rows)

    @property
    def n(self) -> int:
        return len(self.entries)

    def entry(self, i: int, j: int) -> int:
        return self.entries[i - 1][j - 1]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def rows(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def transpose(self) -> "PairCountMatrix":
        return PairCountMatrix(tuple(zip(*self.entries)))

    def reverse(self) -> "PairCountMatrix":
        return PairCountMatrix(tuple(tuple(reversed(r)) for r in reversed(self.entries)))

    def __add__(self, other: "PairCountMatrix") -> "PairCountMatrix":
        if other.n != self.n:
            raise MismatchedStrandCount(f"{self.n} != {other.n}")
        return PairCountMatrix(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries))
        )

    def __sub__(self, other: "PairCountMatrix") -> "PairCountMatrix":
        if other.n != self.n:
            raise MismatchedStrandCount(f"{self.n} != {other.n}")
        return PairCountMatrix(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries))
        )

    def scale(self, c: int) -> "PairCountMatrix":
        return PairCountMatrix(tuple(tuple(c * a for a in r) for r in self.entries))

    def total(self) -> int:
        return sum(map(sum, self.entries))

    def is_symmetric(self) -> bool:
        return self.entries == tuple(zip(*self.entries))

    def has_zero_diagonal(self) -> bool:
        return all(self.entries[i][i] == 0 for i in range(self.n))

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for r in self.entries for x in r)

    def is_even(self) -> bool:
        return all(x % 2 == 0 for r in self.entries for x in r)

    def to_json(self) -> dict:
        return {"n": self.n, "matrix": self.rows()}

    @classmethod
    def from_json(cls, data) -> "PairCountMatrix":
        if isinstance(data, str):
            data = json.loads(data)
        if isinstance(data, dict):
            m = cls.from_rows(data["matrix"])
            if "n" in data and data["n"] != m.n:
                raise InvalidMatrix(f"field n={data['n']} disagrees with a {m.n}x{m.n} matrix")
            return m
        return cls.from_rows(data)

    def __str__(self) -> str:
        return "\n".join(" ".join(f"{x:3d}" for x in r) for r in self.entries)


@dataclass(frozen=True)
class ProjectionWord:
    """A braid projection: crossing positions without over/under data."""

    n: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        _check_n(self.n)
        object.__setattr__(self, "letters", tuple(int(k) for k in self.letters))
        for k in self.letters:
            if not 1 <= k <= self.n - 1:
                raise InvalidWord(f"letter {k} out of range for n={self.n}")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def to_text(self) -> str:
        return " ".join(map(str, self.letters))

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "ProjectionWord":
        try:
            letters = [int(t) for t in text.split()]
        except ValueError as exc:
            raise InvalidWord(f"bad projection token in {text!r}") from exc
        if n is None:
            n = max(letters, default=0) + 1
        return cls(n, tuple(letters))


@dataclass(frozen=True)
class DiagramWord:
    """A braid diagram: crossing positions with over/under flags."""

    n: int
    letters: tuple[tuple[int, Over], ...] = ()

    def __post_init__(self):
        _check_n(self.n)
        letters = tuple((int(k), Over(o)) for k, o in self.letters)
        object.__setattr__(self, "letters", letters)
        for k, _ in letters:
            if not 1 <= k <= self.n - 1:
                raise InvalidWord(f"letter {k} out of range for n={self.n}")

    def __len__(self) -> int:
        return len(self.letters)

    def is_positive(self) -> bool:
        return all(o.positive for _, o in self.letters)

    def to_text(self) -> str:
        return " ".join(f"{o.value}{k}" for k, o in self.letters)

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "DiagramWord":
        letters = []
        for tok in text.split():
            if tok[0] not in "+-" or not tok[1:].isdigit():
                raise InvalidWord(f"bad diagram token {tok!r}")
            letters.append((int(tok[1:]), Over(tok[0])))
        if n is None:
            n = max((k for k, _ in letters), default=0) + 1
        return cls(n, tuple(letters))


def permutation(w: ProjectionWord) -> tuple[int, ...]:
    """Labels at positions ``1..n`` after running the word (``[p-1]`` for position ``p``)."""
    perm = list(range(1, w.n + 1))
    for k in w.letters:
        perm[k - 1], perm[k] = perm[k], perm[k - 1]
    return tuple(perm)


def is_pure(w: ProjectionWord) -> bool:
    return permutation(w) == tuple(range(1, w.n + 1))


def _count(n: int, letters: Iterable[int]) -> list[list[int]]:
    counts = [[0] * n for _ in range(n)]
    perm = list(range(n))
    for k in letters:
        a, b = perm[k - 1], perm[k]
        counts[a][b] += 1
        counts[b][a] += 1
        perm[k - 1], perm[k] = b, a
    return counts


def cn_matrix(w: ProjectionWord) -> PairCountMatrix:
    """Number of crossings between each pair of strands."""
    return PairCountMatrix.from_rows(_count(w.n, w.letters))


def concat(a: ProjectionWord, b: ProjectionWord) -> ProjectionWord:
    if a.n != b.n:
        raise MismatchedStrandCount(f"cannot concatenate {a.n}- and {b.n}-strand words")
    return ProjectionWord(a.n, a.letters + b.letters)


def concat_all(n: int, words: Sequence[ProjectionWord]) -> ProjectionWord:
    out = ProjectionWord(n)
    for w in words:
        out = concat(out, w)
    return out


def mirror(w: ProjectionWord) -> ProjectionWord:
    """Left-right reflection; its CN matrix is the reversed matrix."""
    return ProjectionWord(w.n, tuple(w.n - k for k in w.letters))


def embed(w: ProjectionWord, n: int, offset: int) -> ProjectionWord:
    """Place ``w`` on strands ``offset .. offset + w.n - 1`` of an ``n``-strand braid."""
    if offset < 1 or w.n + offset - 1 > n:
        raise OffsetOutOfRange(f"cannot place {w.n} strands at offset {offset} inside {n}")
    return ProjectionWord(n, tuple(k + offset - 1 for k in w.letters))


def forget(d: DiagramWord) -> ProjectionWord:
    return ProjectionWord(d.n, tuple(k for k, _ in d.letters))


def _over_counts(d: DiagramWord, signed: bool) -> PairCountMatrix:
    n = d.n
    counts = [[0] * n for _ in range(n)]
    perm = list(range(n))
    for k, over in d.letters:
        left, right = perm[k - 1], perm[k]
        top, bottom = (left, right) if over is Over.LEFT else (right, left)
        counts[top][bottom] += (1 if over.positive else -1) if signed else 1
        perm[k - 1], perm[k] = right, left
    return PairCountMatrix.from_rows(counts)


def ou_matrix(d: DiagramWord) -> PairCountMatrix:
    """Entry ``(i, j)`` counts crossings where strand ``i`` is over strand ``j``."""
    return _over_counts(d, signed=False)


def crossing_matrix(d: DiagramWord) -> PairCountMatrix:
    """Signed over-counts: positive minus negative crossings with ``i`` over ``j``."""
    return _over_counts(d, signed=True)
