"""BW-ladder diagrams, ladder moves L1-L9, and search for a W-ladder form.

An edge is a triple ``(kind, a, b)``: ``("B", i, j)`` is a black edge (a hook
between the strands at positions ``i < j``) and ``("W", k, k+1)`` a white
edge (one crossing of the strands at ``k, k+1``).  Diagrams are read top to
bottom.

The search works on a normalised shape: white edges on top, black edges
below them.  A macro step picks a black edge, rearranges the white word by
commutations (L3) so that the black edge's two strands become neighbours at
some level, carries the black edge up to that level (L2, L5-L9) and splits
it with L1.  Every macro expands into elementary moves, so traces replay
with :func:`apply_move` alone.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .braid import PairCountMatrix, ProjectionWord
from .errors import BlackEdgePresent, BudgetExhausted, IllegalMove, IndexOutOfRange, InvalidWord
from .matrices import UpperMask

DEFAULT_BUDGET = 10**6
MAX_DOWNSETS = 4096

Edge = tuple  # ("B", i, j) or ("W", k, k + 1)


def Black(i: int, j: int) -> Edge:
    if not i < j:
        raise InvalidWord(f"black edge needs i < j, got ({i},{j})")
    return ("B", i, j)


def White(k: int) -> Edge:
    return ("W", k, k + 1)


def edge_text(e: Edge) -> str:
    return f"B{e[1]}.{e[2]}" if e[0] == "B" else f"W{e[1]}"


@dataclass(frozen=True)
class LadderDiagram:
    n: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        edges = tuple(tuple(e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        for e in edges:
            kind, a, b = e
            if kind == "B":
                ok = 1 <= a < b <= self.n
            elif kind == "W":
                ok = b == a + 1 and 1 <= a <= self.n - 1
            else:
                ok = False
            if not ok:
                raise InvalidWord(f"edge {e!r} invalid for n={self.n}")

    def __len__(self) -> int:
        return len(self.edges)

    def to_text(self) -> str:
        return " ".join(edge_text(e) for e in self.edges)

    @classmethod
    def parse(cls, text: str, n: int) -> "LadderDiagram":
        edges = []
        for tok in text.split():
            try:
                if tok[0] == "B":
                    i, j = tok[1:].split(".")
                    edges.append(("B", int(i), int(j)))
                elif tok[0] == "W":
                    edges.append(White(int(tok[1:])))
                else:
                    raise ValueError
            except ValueError as exc:
                raise InvalidWord(f"bad ladder token {tok!r}") from exc
        return cls(n, tuple(edges))

    def black_count(self) -> int:
        return sum(1 for e in self.edges if e[0] == "B")


@dataclass(frozen=True)
class LadderEval:
    perm: tuple[int, ...]
    counts: PairCountMatrix


class Move(NamedTuple):
    move: str
    index: int
    dir: str = "fwd"

    def to_json(self) -> dict:
        return {"move": self.move, "index": self.index, "dir": self.dir}


def trace_to_json(trace: Sequence[Move]) -> str:
    return json.dumps([m.to_json() for m in trace])


def trace_from_json(text: str) -> list[Move]:
    return [Move(d["move"], int(d["index"]), d["dir"]) for d in json.loads(text)]


def b_ladder_of(mask: UpperMask, multiplicity: dict[tuple[int, int], int] | None = None) -> LadderDiagram:
    """One black edge per set pair, sorted by ``(i, j)``; repeated per ``multiplicity``."""
    edges = []
    for i, j in mask.pairs():
        reps = 1 if multiplicity is None else multiplicity.get((i, j), 1)
        edges.extend([Black(i, j)] * reps)
    return LadderDiagram(mask.n, tuple(edges))


def eval_edges(n: int, edges: Iterable[Edge]) -> tuple[tuple[int, ...], list[list[int]]]:
    perm = list(range(1, n + 1))
    counts = [[0] * n for _ in range(n)]
    for kind, a, b in edges:
        x, y = perm[a - 1] - 1, perm[b - 1] - 1
        inc = 2 if kind == "B" else 1
        counts[x][y] += inc
        counts[y][x] += inc
        if kind == "W":
            perm[a - 1], perm[b - 1] = perm[b - 1], perm[a - 1]
    return tuple(perm), counts


def eval(D: LadderDiagram) -> LadderEval:  # noqa: A001 - domain name
    perm, counts = eval_edges(D.n, D.edges)
    return LadderEval(perm, PairCountMatrix.from_rows(counts))


def is_w_ladder(D: LadderDiagram) -> bool:
    return all(e[0] == "W" for e in D.edges)


def to_projection_word(D: LadderDiagram) -> ProjectionWord:
    if not is_w_ladder(D):
        raise BlackEdgePresent("diagram still has black edges")
    return ProjectionWord(D.n, tuple(e[1] for e in D.edges))


# --- ladder moves ---------------------------------------------------------

MOVE_IDS = tuple(f"L{i}" for i in range(1, 10))


def _rewrite(edges: Sequence[Edge], p: int, move: str, direction: str):
    """Replacement for the window starting at ``p``, as ``(width, new_edges)``, or None."""
    e = edges[p] if p < len(edges) else None
    f = edges[p + 1] if p + 1 < len(edges) else None
    if e is None:
        return None
    fwd = direction == "fwd"

    if move == "L1":
        if fwd:
            if e[0] == "B" and e[2] == e[1] + 1:
                return 1, (White(e[1]), White(e[1]))
        elif f is not None and e[0] == f[0] == "W" and e[1] == f[1]:
            return 2, (Black(e[1], e[2]),)
        return None
    if f is None:
        return None
    if move == "L2":
        if e[0] == f[0] == "B":
            return 2, (f, e)
        return None
    if move == "L3":
        if e[0] == f[0] == "W" and abs(e[1] - f[1]) > 1:
            return 2, (f, e)
        return None
    if move == "L4":
        g = edges[p + 2] if p + 2 < len(edges) else None
        if g is None or not (e[0] == f[0] == g[0] == "W") or e[1] != g[1]:
            return None
        i = e[1]
        if fwd and f[1] == i + 1:
            return 3, (White(i + 1), White(i), White(i + 1))
        if not fwd and f[1] == i - 1:
            return 3, (White(i - 1), White(i), White(i - 1))
        return None

    # the remaining moves mix one black and one white edge
    if fwd:
        if move in ("L5", "L6", "L8") and e[0] == "B" and f[0] == "W":
            blk, k = e, f[1]
        elif move in ("L7", "L9") and e[0] == "W" and f[0] == "B":
            blk, k = f, e[1]
        else:
            return None
    else:
        if move in ("L7", "L9") and e[0] == "B" and f[0] == "W":
            blk, k = e, f[1]
        elif move in ("L5", "L6", "L8") and e[0] == "W" and f[0] == "B":
            blk, k = f, e[1]
        else:
            return None
    _, i, j = blk
    w = White(k)

    if move == "L5":
        if j < k or k + 1 < i or i < k < k + 1 < j:
            return 2, (f, e)
        return None
    if move == "L6":
        # B(i,j) W(i) <-> W(i) B(i+1,j), i+1 < j
        if fwd and k == i and i + 1 < j:
            return 2, (w, Black(i + 1, j))
        if not fwd and k == i - 1 and i < j:
            return 2, (Black(i - 1, j), w)
        return None
    if move == "L7":
        # W(i) B(i,j) <-> B(i+1,j) W(i), i+1 < j
        if fwd and k == i and i + 1 < j:
            return 2, (Black(i + 1, j), w)
        if not fwd and k == i - 1 and i < j:
            return 2, (w, Black(i - 1, j))
        return None
    if move == "L8":
        # B(i,j) W(j-1) <-> W(j-1) B(i,j-1), i < j-1
        if fwd and k == j - 1 and i < j - 1:
            return 2, (w, Black(i, j - 1))
        if not fwd and k == j and i < j:
            return 2, (Black(i, j + 1), w)
        return None
    if move == "L9":
        # W(j-1) B(i,j) <-> B(i,j-1) W(j-1), i < j-1
        if fwd and k == j - 1 and i < j - 1:
            return 2, (Black(i, j - 1), w)
        if not fwd and k == j and i < j:
            return 2, (w, Black(i, j + 1))
        return None
    raise IllegalMove(f"unknown move {move!r}")


def legal_moves(D: LadderDiagram) -> list[Move]:
    out = []
    for p in range(len(D.edges)):
        for move in MOVE_IDS:
            for direction in ("fwd", "bwd"):
                if _rewrite(D.edges, p, move, direction) is not None:
                    out.append(Move(move, p, direction))
    return out


def _apply(edges: list, move: Move) -> list:
    if move.move not in MOVE_IDS or move.dir not in ("fwd", "bwd"):
        raise IllegalMove(f"unknown move {move!r}")
    if not 0 <= move.index < len(edges):
        raise IllegalMove(f"move index {move.index} out of range")
    r = _rewrite(edges, move.index, move.move, move.dir)
    if r is None:
        raise IllegalMove(f"{move.move} {move.dir} does not apply at {move.index}")
    width, new = r
    return list(edges[: move.index]) + list(new) + list(edges[move.index + width :])


def apply_move(D: LadderDiagram, move: Move) -> LadderDiagram:
    move = Move(*move)
    return LadderDiagram(D.n, tuple(_apply(list(D.edges), move)))


def replay(D: LadderDiagram, trace: Iterable[Move]) -> LadderDiagram:
    edges = list(D.edges)
    for m in trace:
        edges = _apply(edges, Move(*m))
    return LadderDiagram(D.n, tuple(edges))


INVERSE_DIR = {"fwd": "bwd", "bwd": "fwd"}


def inverse_move(D: LadderDiagram, move: Move) -> Move:
    """The move undoing ``move`` on the diagram it produced."""
    move = Move(*move)
    return Move(move.move, move.index, INVERSE_DIR[move.dir])


# --- B-to-W macros ----------------------------------------------------------


def _check_kl(k: int, l: int, n: int) -> None:
    if not 1 <= k < l <= n:
        raise IndexOutOfRange(f"need 1 <= k < l <= n, got k={k}, l={l}, n={n}")


def btow_row(k: int, l: int, n: int) -> list[Edge]:
    """White edges equivalent to the row run ``B(k,k+1) ... B(k,l)``."""
    _check_kl(k, l, n)
    up = [White(t) for t in range(k, l)]
    return up + up[::-1]


def btow_col(k: int, l: int, n: int) -> list[Edge]:
    """White edges equivalent to the column run ``B(l-1,l) ... B(k,l)``."""
    _check_kl(k, l, n)
    down = [White(t) for t in range(l - 1, k - 1, -1)]
    return down + down[::-1]


# --- elementary transport of a black edge ---------------------------------


def _step_up(edges: list, p: int, trace: list) -> tuple[list, int]:
    """Move the black edge at ``p`` above ``edges[p-1]``; returns new edges and index."""
    above, blk = edges[p - 1], edges[p]
    _, i, j = blk
    if above[0] == "B":
        moves = [Move("L2", p - 1, "fwd")]
    else:
        k = above[1]
        if k == i and j == i + 1:
            # no single move passes a length-one hook over its own crossing
            moves = [Move("L1", p, "fwd"), Move("L1", p - 1, "bwd")]
        elif k == i:
            moves = [Move("L7", p - 1, "fwd")]
        elif k == j - 1:
            moves = [Move("L9", p - 1, "fwd")]
        elif k == i - 1:
            moves = [Move("L6", p - 1, "bwd")]
        elif k == j:
            moves = [Move("L8", p - 1, "bwd")]
        else:
            moves = [Move("L5", p - 1, "bwd")]
    for m in moves:
        edges = _apply(edges, m)
    trace.extend(moves)
    return edges, p - 1


def _step_down(edges: list, p: int, trace: list) -> tuple[list, int]:
    blk, below = edges[p], edges[p + 1]
    _, i, j = blk
    if below[0] == "B":
        moves = [Move("L2", p, "fwd")]
    else:
        k = below[1]
        if k == i and j == i + 1:
            moves = [Move("L1", p, "fwd"), Move("L1", p + 1, "bwd")]
        elif k == i:
            moves = [Move("L6", p, "fwd")]
        elif k == j - 1:
            moves = [Move("L8", p, "fwd")]
        elif k == i - 1:
            moves = [Move("L7", p, "bwd")]
        elif k == j:
            moves = [Move("L9", p, "bwd")]
        else:
            moves = [Move("L5", p, "fwd")]
    for m in moves:
        edges = _apply(edges, m)
    trace.extend(moves)
    return edges, p + 1


def normalize(D: LadderDiagram) -> tuple[LadderDiagram, list[Move]]:
    """Sink every black edge below all white edges."""
    edges = list(D.edges)
    trace: list[Move] = []
    p = len(edges) - 1
    while p >= 0:
        if edges[p][0] == "B":
            q = p
            while q + 1 < len(edges) and edges[q + 1][0] == "W":
                edges, q = _step_down(edges, q, trace)
        p -= 1
    return LadderDiagram(D.n, tuple(edges)), trace


# --- the macro planner ------------------------------------------------------


class Insertion(NamedTuple):
    """Macro step: split the hook on strands ``pair`` at a rearranged level.

    ``black`` is the index of the hook among the black edges, ``downset`` the
    set of white letters (bitmask over the current white word) moved above
    the insertion level, and ``k`` the position of the new crossing pair.
    """

    black: int
    downset: int
    k: int


def _preds(word: Sequence[int]) -> list[int]:
    preds = []
    for s, x in enumerate(word):
        m = 0
        for t in range(s):
            if abs(word[t] - x) <= 1:
                m |= 1 << t
        preds.append(m)
    return preds


def adjacent_levels(
    word: Sequence[int], n: int, a: int, b: int, limit: int = MAX_DOWNSETS, first: bool = False
) -> list[tuple[int, int]]:
    """Prefixes (up to commutation) of the white word after which labels a, b are neighbours.

    Returns ``(downset, k)`` pairs in breadth-first order of prefix size.
    """
    preds = _preds(word)
    L = len(word)
    start = tuple(range(1, n + 1))
    frontier = {0: start}
    seen = 1
    out = []
    while frontier:
        nxt = {}
        for ds, perm in frontier.items():
            pa, pb = perm.index(a), perm.index(b)
            if abs(pa - pb) == 1:
                out.append((ds, min(pa, pb) + 1))
                if first:
                    return out
            for s in range(L):
                bit = 1 << s
                if ds & bit or preds[s] & ~ds:
                    continue
                nds = ds | bit
                if nds in nxt:
                    continue
                k = word[s]
                q = list(perm)
                q[k - 1], q[k] = q[k], q[k - 1]
                nxt[nds] = tuple(q)
                seen += 1
                if seen > limit:
                    break
            if seen > limit:
                break
        frontier = nxt if seen <= limit else {}
    return out


def insert_pair(word: Sequence[int], downset: int, k: int) -> tuple[int, ...]:
    top = [x for s, x in enumerate(word) if downset >> s & 1]
    rest = [x for s, x in enumerate(word) if not downset >> s & 1]
    return tuple(top + [k, k] + rest)


def trace_normal_form(word: Sequence[int]) -> tuple[int, ...]:
    """Lexicographically least word reachable by commutations (L3)."""
    preds = _preds(word)
    done = 0
    out = []
    L = len(word)
    for _ in range(L):
        best = None
        for s in range(L):
            if done >> s & 1 or preds[s] & ~done:
                continue
            if best is None or word[s] < word[best]:
                best = s
        done |= 1 << best
        out.append(word[best])
    return tuple(out)


def _split(D: LadderDiagram):
    """White word and black hooks (as label pairs) of a normalised diagram."""
    word = []
    p = 0
    while p < len(D.edges) and D.edges[p][0] == "W":
        word.append(D.edges[p][1])
        p += 1
    blacks = D.edges[p:]
    if any(e[0] != "B" for e in blacks):
        raise ValueError("diagram is not normalised")
    perm = list(range(1, D.n + 1))
    for k in word:
        perm[k - 1], perm[k] = perm[k], perm[k - 1]
    pairs = [tuple(sorted((perm[i - 1], perm[j - 1]))) for _, i, j in blacks]
    return tuple(word), pairs


@dataclass
class PlanResult:
    word: tuple[int, ...]
    plan: list[Insertion]
    nodes: int = 0


def plan_greedy(D: LadderDiagram, order: Sequence[int] | None = None) -> PlanResult | None:
    """Split the hooks one by one, shortest first, each at the first level found.

    ``D`` must be normalised.  ``order`` fixes the processing order of the
    black edges (indices among the black edges); the default is by length
    ``j - i`` then by position in the diagram.
    """
    word, pairs = _split(D)
    blacks = [e for e in D.edges if e[0] == "B"]
    if order is None:
        order = sorted(range(len(blacks)), key=lambda t: (blacks[t][2] - blacks[t][1], t))
    remaining = list(range(len(blacks)))
    plan = []
    for t in order:
        a, b = pairs[t]
        found = adjacent_levels(word, D.n, a, b, first=True)
        if not found:
            return None
        ds, k = found[0]
        plan.append(Insertion(remaining.index(t), ds, k))
        remaining.remove(t)
        word = insert_pair(word, ds, k)
    return PlanResult(word, plan)


def plan_search(D: LadderDiagram, budget: int = DEFAULT_BUDGET) -> PlanResult | None:
    """Depth-first search over insertion macros with a table of failed states.

    Children are tried shortest hook first.  Returns None when the macro
    space is exhausted; raises BudgetExhausted past ``budget`` nodes.
    """
    word, pairs = _split(D)
    failed: set = set()
    nodes = 0

    def key(w, rem):
        return trace_normal_form(w), tuple(sorted(rem))

    def rec(w, rem):
        nonlocal nodes
        if not rem:
            return []
        kk = key(w, rem)
        if kk in failed:
            return None
        nodes += 1
        if nodes > budget:
            raise BudgetExhausted(nodes)
        children = []
        for t in sorted(range(len(rem)), key=lambda t: (rem[t][1] - rem[t][0], t)):
            a, b = rem[t]
            seen = set()
            for ds, k in adjacent_levels(w, D.n, a, b):
                nw = insert_pair(w, ds, k)
                nrem = rem[:t] + rem[t + 1 :]
                ck = key(nw, nrem)
                if ck in seen:
                    continue
                seen.add(ck)
                children.append((Insertion(t, ds, k), nw, nrem))
        for step, nw, nrem in children:
            sub = rec(nw, nrem)
            if sub is not None:
                return [step] + sub
        failed.add(kk)
        return None

    plan = rec(word, list(pairs))
    if plan is None:
        return None
    w = word
    for step in plan:
        w = insert_pair(w, step.downset, step.k)
    return PlanResult(w, plan, nodes)


def execute_plan(D: LadderDiagram, plan: Sequence[Insertion]) -> tuple[LadderDiagram, list[Move]]:
    """Expand macro steps into elementary ladder moves on a normalised diagram."""
    edges = list(D.edges)
    trace: list[Move] = []
    for step in plan:
        nw = sum(1 for e in edges if e[0] == "W")
        # commute the chosen letters to the top of the white word (L3 swaps)
        target = [s for s in range(nw) if step.downset >> s & 1]
        target += [s for s in range(nw) if not step.downset >> s & 1]
        ids = list(range(nw))
        for pos in range(nw):
            cur = ids.index(target[pos])
            while cur > pos:
                m = Move("L3", cur - 1, "fwd")
                edges = _apply(edges, m)
                trace.append(m)
                ids[cur - 1], ids[cur] = ids[cur], ids[cur - 1]
                cur -= 1
        # bring the chosen hook to the top of the black block, then up to the level
        p = nw + step.black
        while p > nw:
            edges, p = _step_up(edges, p, trace)
        level = bin(step.downset).count("1")
        while p > level:
            edges, p = _step_up(edges, p, trace)
        blk = edges[p]
        if blk[2] != blk[1] + 1 or blk[1] != step.k:
            raise IllegalMove(f"planned split at {step.k} but hook is {edge_text(blk)}")
        m = Move("L1", p, "fwd")
        edges = _apply(edges, m)
        trace.append(m)
    return LadderDiagram(D.n, tuple(edges)), trace


def search_w_form(
    D: LadderDiagram, budget: int = DEFAULT_BUDGET, greedy_first: bool = True
) -> tuple[LadderDiagram, list[Move]] | None:
    """Find ladder moves turning ``D`` into a W-ladder diagram.

    Returns ``(w_ladder, trace)`` with ``replay(D, trace) == w_ladder``, or
    None if the macro space is exhausted.  A None result proves nothing
    about realizability.
    """
    N, trace = normalize(D)
    result = plan_greedy(N) if greedy_first else None
    if result is None:
        result = plan_search(N, budget)
    if result is None:
        return None
    W, more = execute_plan(N, result.plan)
    return W, trace + more


def realize_by_ladder(D: LadderDiagram, budget: int = DEFAULT_BUDGET) -> PlanResult | None:
    """Word-level shortcut of :func:`search_w_form` for pure diagrams (no trace)."""
    N, _ = normalize(D)
    return plan_greedy(N) or plan_search(N, budget)
