"""Graphs on the grid alignment of a (0,2)-mask, and T-structures.

A vertex ``(i, j)`` sits at every set pair of the mask.  A horizontal edge
joins ``(i, k)`` and ``(i, j)`` with ``k < j``; it is stored as the *left*
pointer of ``(i, j)``.  A vertical edge joins ``(i, j)`` and ``(l, j)`` with
``i < l``; it is stored as the *down* pointer of ``(i, j)``.  Each vertex has
at most one of each, so following pointers gives the unique horizontal and
vertical paths.

A graph has a T-structure when

C1  every vertex ``(i, j)`` has path lengths summing to ``j - i - 1``;
C2  if ``(i, j)`` has left ``k`` and down ``l`` and ``(i, k)`` has down ``m``,
    then ``m == l`` and ``(l, j)`` has left ``k``;
C3  if ``(i, j)`` has left ``k`` and down ``l`` and ``(l, j)`` has left ``m``,
    then ``m == k`` and ``(i, k)`` has down ``l``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import InvalidParameters, VertexNotFound
from .matrices import UpperMask, enumerate_t0

Vertex = tuple[int, int]


@dataclass(frozen=True)
class GridAlignment:
    n: int
    vertices: frozenset[Vertex]

    @classmethod
    def of(cls, mask: UpperMask) -> "GridAlignment":
        return cls(mask.n, frozenset(mask.pairs()))


@dataclass
class GridGraph:
    """Vertices of a grid alignment plus left and down pointers."""

    n: int
    vertices: frozenset[Vertex]
    left: dict[Vertex, int] = field(default_factory=dict)
    down: dict[Vertex, int] = field(default_factory=dict)

    def __post_init__(self):
        self.vertices = frozenset(tuple(v) for v in self.vertices)
        for (i, j), k in self.left.items():
            if (i, j) not in self.vertices or (i, k) not in self.vertices or not k < j:
                raise InvalidParameters(f"bad horizontal edge ({i},{k})-({i},{j})")
        for (i, j), l in self.down.items():
            if (i, j) not in self.vertices or (l, j) not in self.vertices or not i < l:
                raise InvalidParameters(f"bad vertical edge ({i},{j})-({l},{j})")

    @classmethod
    def empty(cls, mask: UpperMask) -> "GridGraph":
        return cls(mask.n, frozenset(mask.pairs()))

    @property
    def alignment(self) -> GridAlignment:
        return GridAlignment(self.n, self.vertices)

    def hedges(self) -> list[tuple[Vertex, Vertex]]:
        return sorted(((i, k), (i, j)) for (i, j), k in self.left.items())

    def vedges(self) -> list[tuple[Vertex, Vertex]]:
        return sorted(((i, j), (l, j)) for (i, j), l in self.down.items())

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "vertices": [list(v) for v in sorted(self.vertices)],
            "hedges": [[list(a), list(b)] for a, b in self.hedges()],
            "vedges": [[list(a), list(b)] for a, b in self.vedges()],
        }

    @classmethod
    def from_json(cls, data) -> "GridGraph":
        if isinstance(data, str):
            data = json.loads(data)
        verts = frozenset(tuple(v) for v in data["vertices"])
        n = int(data.get("n", max((j for _, j in verts), default=1)))
        left: dict[Vertex, int] = {}
        down: dict[Vertex, int] = {}
        for a, b in data.get("hedges", []):
            a, b = tuple(a), tuple(b)
            if a[0] != b[0] or a[1] == b[1]:
                raise InvalidParameters(f"edge {a}-{b} is not horizontal")
            lo, hi = sorted((a, b), key=lambda v: v[1])
            if hi in left:
                raise InvalidParameters(f"vertex {hi} has two left edges")
            left[hi] = lo[1]
        for a, b in data.get("vedges", []):
            a, b = tuple(a), tuple(b)
            if a[1] != b[1] or a[0] == b[0]:
                raise InvalidParameters(f"edge {a}-{b} is not vertical")
            top, bottom = sorted((a, b))
            if top in down:
                raise InvalidParameters(f"vertex {top} has two down edges")
            down[top] = bottom[0]
        return cls(n, verts, left, down)


def paths(g: GridGraph, v: Vertex) -> tuple[int, int]:
    """Lengths ``(horizontal, vertical)`` of the maximal paths leaving ``v``."""
    v = tuple(v)
    if v not in g.vertices:
        raise VertexNotFound(v)
    h, (i, j) = 0, v
    while (i, j) in g.left:
        j = g.left[(i, j)]
        h += 1
    vert, (i, j) = 0, v
    while (i, j) in g.down:
        i = g.down[(i, j)]
        vert += 1
    return h, vert


@dataclass
class TReport:
    c1: list = field(default_factory=list)
    c2: list = field(default_factory=list)
    c3: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.c1 or self.c2 or self.c3)

    def to_json(self) -> dict:
        def part(ws):
            return {"pass": not ws, "witnesses": ws}

        return {"C1": part(self.c1), "C2": part(self.c2), "C3": part(self.c3), "ok": self.ok}


def check_t_structure(g: GridGraph) -> TReport:
    """Evaluate C1, C2 and C3; failing vertices and edges are listed as witnesses."""
    rep = TReport()
    for v in sorted(g.vertices):
        i, j = v
        h, vert = paths(g, v)
        if h + vert != j - i - 1:
            rep.c1.append({"vertex": [i, j], "horizontal": h, "vertical": vert, "needed": j - i - 1})
        if v not in g.left or v not in g.down:
            continue
        k, l = g.left[v], g.down[v]
        m = g.down.get((i, k))
        if m is not None and not (m == l and g.left.get((l, j)) == k):
            rep.c2.append({"vertex": [i, j], "left": k, "down": l, "m": m})
        m = g.left.get((l, j))
        if m is not None and not (m == k and g.down.get((i, k)) == l):
            rep.c3.append({"vertex": [i, j], "left": k, "down": l, "m": m})
    return rep


def has_t_structure(g: GridGraph) -> bool:
    return check_t_structure(g).ok


def find_t_structure(mask: UpperMask) -> GridGraph | None:
    """Backtracking search for a graph on ``mask`` with a T-structure.

    Vertices are visited bottom row first and left to right within a row, so
    the left and down neighbours of a vertex are settled before it is; C1 is
    then an exact check on the spot, and C2/C3 only read settled pointers.
    """
    verts = sorted(mask.pairs(), key=lambda v: (-v[0], v[1]))
    vset = set(verts)
    hlen: dict[Vertex, int] = {}
    vlen: dict[Vertex, int] = {}
    left: dict[Vertex, int] = {}
    down: dict[Vertex, int] = {}

    def options(v: Vertex):
        i, j = v
        lefts = [None] + [k for k in range(i + 1, j) if (i, k) in vset]
        downs = [None] + [l for l in range(i + 1, j) if (l, j) in vset]
        need = j - i - 1
        for k in lefts:
            h = 0 if k is None else hlen[(i, k)] + 1
            for l in downs:
                vv = 0 if l is None else vlen[(l, j)] + 1
                if h + vv == need:
                    yield k, l, h, vv

    def local_ok(v: Vertex, k, l) -> bool:
        if k is None or l is None:
            return True
        i, j = v
        m = down.get((i, k))
        if m is not None and not (m == l and left.get((l, j)) == k):
            return False
        m = left.get((l, j))
        if m is not None and not (m == k and down.get((i, k)) == l):
            return False
        return True

    def rec(pos: int) -> bool:
        if pos == len(verts):
            return True
        v = verts[pos]
        for k, l, h, vv in options(v):
            if not local_ok(v, k, l):
                continue
            hlen[v], vlen[v] = h, vv
            if k is not None:
                left[v] = k
            if l is not None:
                down[v] = l
            if rec(pos + 1):
                return True
            left.pop(v, None)
            down.pop(v, None)
        return False

    if not rec(0):
        return None
    return GridGraph(mask.n, frozenset(verts), dict(left), dict(down))


def one_per_long_diagonal(mask: UpperMask) -> bool:
    """At most one set pair on each diagonal ``j - i = d`` with ``d >= 3``."""
    seen = set()
    for i, j in mask.pairs():
        d = j - i
        if d >= 3:
            if d in seen:
                return False
            seen.add(d)
    return True


@dataclass
class ConjectureProbe:
    n: int
    t0_total: int
    hypothesis: int
    with_t_structure: int
    realized: int
    failures: list[str]
    no_t_realizable: list[str]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "t0_total": self.t0_total,
            "one_per_long_diagonal": self.hypothesis,
            "with_t_structure": self.with_t_structure,
            "realized": self.realized,
            "failures": self.failures,
            "realizable_without_t_structure": len(self.no_t_realizable),
            "examples_without_t_structure": self.no_t_realizable[:10],
        }


def probe_conjecture(n: int = 6, budget: int | None = None) -> ConjectureProbe:
    """Does a T-structure imply realizability?  A report over all T0 masks on ``n`` strands.

    Masks meeting the one-per-long-diagonal hypothesis and having a
    T-structure are run through the realizer.  Realizable masks (of any shape)
    with no T-structure are collected as counterexamples to the converse.
    """
    from .errors import BraidMatError
    from .realizer import realize_mask

    total = hyp = with_t = realized = 0
    failures: list[str] = []
    no_t: list[str] = []
    for mask in enumerate_t0(n):
        total += 1
        g = find_t_structure(mask)
        hyp_ok = one_per_long_diagonal(mask)
        hyp += hyp_ok
        try:
            realize_mask(mask, budget)
            ok = True
        except BraidMatError:
            ok = False
        if g is None:
            if ok:
                no_t.append(mask.to_text())
            continue
        if hyp_ok:
            with_t += 1
            if ok:
                realized += 1
            else:
                failures.append(mask.to_text())
    return ConjectureProbe(n, total, hyp, with_t, realized, failures, no_t)
