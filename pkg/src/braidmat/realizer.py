"""Realizing CN, OU and crossing matrices by pure braids, with certificates.

The (0,2) support of a target is realized by layers, cheapest first:

``window``
    support inside an index window narrower than ``n``: realize the smaller
    instance and pad with idle strands;
``band``
    every entry within distance 2 of the diagonal: ladder macros on the
    B-ladder diagram;
``formation`` / ``sum``
    the support is a formation, or splits into a formation (or window piece)
    plus a T0 remainder realized recursively; pure pieces concatenate;
``ladder``
    macro search from the B-ladder diagram of the whole support;
``wordsearch``
    exhaustive depth-first search over projection words with a table of
    failed states (a complete decision procedure, kept as the last resort).

Entries larger than 2 are reached by inflation: one crossing of the pair is
replaced by an odd run of crossings at the same position.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import formations, ladder
from .braid import (
    DiagramWord,
    Over,
    PairCountMatrix,
    ProjectionWord,
    cn_matrix,
    concat,
    crossing_matrix,
    embed,
    forget,
    is_pure,
    ou_matrix,
)
from .errors import (
    BudgetExhausted,
    DecompositionFailed,
    InvalidMatrix,
    NonZeroDiagonal,
    NotT0,
    RealizationFailed,
    SumNotT0,
)
from .matrices import UpperMask, enumerate_t0, is_t0, m02, t0_violation

DEFAULT_BUDGET = ladder.DEFAULT_BUDGET
MAX_PEEL_CANDIDATES = 24
LAYERS = ("empty", "window", "band", "formation", "sum", "ladder", "wordsearch")


def default_budget() -> int:
    env = os.environ.get("BRAIDMAT_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


# --- decomposition trees ------------------------------------------------------


@dataclass(frozen=True)
class Node:
    """One step of a realization: its support, its word, and how it was built."""

    kind: str
    mask: UpperMask
    word: ProjectionWord
    children: tuple["Node", ...] = ()
    info: str = ""
    nodes: int = 0

    def leaves(self) -> list["Node"]:
        if self.kind in ("sum", "window"):
            return [leaf for c in self.children for leaf in c.leaves()]
        return [self]

    def leaf_kinds(self) -> list[str]:
        return sorted({leaf.kind for leaf in self.leaves()})

    def to_json(self) -> dict:
        d = {"kind": self.kind, "mask": self.mask.to_text(), "n": self.mask.n}
        if self.info:
            d["info"] = self.info
        if self.children:
            d["children"] = [c.to_json() for c in self.children]
        return d

    def total_nodes(self) -> int:
        return self.nodes + sum(c.total_nodes() for c in self.children)


def _sum_node(mask: UpperMask, parts: Sequence[Node]) -> Node:
    word = ProjectionWord(mask.n)
    for p in parts:
        word = concat(word, p.word)
    return Node("sum", mask, word, tuple(parts))


def _window_node(mask: UpperMask, lo: int, sub: Node) -> Node:
    return Node("window", mask, embed(sub.word, mask.n, lo), (sub,), info=f"offset={lo}")


# --- exhaustive word search ---------------------------------------------------


def word_search(target: PairCountMatrix, budget: int | None = None) -> tuple[ProjectionWord | None, int]:
    """Depth-first search for a pure word with CN matrix ``target``.

    Returns ``(word or None, nodes)``.  Failed states are keyed by the vector
    of crossings used so far, which also fixes the current permutation.
    Raises BudgetExhausted past ``budget`` nodes.
    """
    n = target.n
    budget = default_budget() if budget is None else budget
    idx = {}
    need = []
    for i in range(n):
        for j in range(i + 1, n):
            if target[i, j]:
                idx[(i, j)] = idx[(j, i)] = len(need)
                need.append(target[i, j])
    length = sum(need)
    used = [0] * len(need)
    perm = list(range(n))
    letters: list[int] = []
    failed: set = set()
    nodes = 0

    def rec() -> bool:
        nonlocal nodes
        if len(letters) == length:
            return perm == sorted(perm)
        key = tuple(used)
        if key in failed:
            return False
        nodes += 1
        if nodes > budget:
            raise BudgetExhausted(nodes)
        for k in range(n - 1):
            t = idx.get((perm[k], perm[k + 1]))
            if t is None or used[t] == need[t]:
                continue
            used[t] += 1
            perm[k], perm[k + 1] = perm[k + 1], perm[k]
            letters.append(k + 1)
            if rec():
                return True
            letters.pop()
            perm[k], perm[k + 1] = perm[k + 1], perm[k]
            used[t] -= 1
        failed.add(key)
        return False

    found = rec()
    return (ProjectionWord(n, tuple(letters)) if found else None), nodes


# --- layered realization of (0,2) supports -------------------------------------

_memo: dict[tuple[int, int, int], Node | None] = {}


def clear_memo() -> None:
    _memo.clear()


def _formation_leaf(mask: UpperMask, f: formations.Formation) -> Node:
    return Node("formation", mask, formations.realize(f), info=f.to_text())


def _band_leaf(mask: UpperMask, budget: int) -> Node | None:
    D = ladder.b_ladder_of(mask)
    try:
        res = ladder.realize_by_ladder(D, budget)
    except BudgetExhausted:
        return None
    if res is None:
        return None
    return Node("band", mask, ProjectionWord(mask.n, res.word), nodes=res.nodes)


def _window_split_pieces(mask: UpperMask) -> list[tuple[UpperMask, int, int]]:
    n = mask.n
    out = []
    for width in range(2, n):
        for lo in range(1, n - width + 2):
            hi = lo + width - 1
            inside = UpperMask.from_pairs(n, [(i, j) for i, j in mask.pairs() if lo <= i and j <= hi])
            if inside.bits and inside.bits != mask.bits:
                out.append((inside, lo, hi))
    return out


def _constructive(mask: UpperMask, budget: int) -> Node | None:
    """Layers window, band, formation and peel; memoized per support."""
    key = (mask.n, mask.bits, budget)
    if key in _memo:
        return _memo[key]
    _memo[key] = None  # guards against re-entry while this support is open
    node = _constructive_uncached(mask, budget)
    _memo[key] = node
    return node


def _constructive_uncached(mask: UpperMask, budget: int) -> Node | None:
    n = mask.n
    if not mask.bits:
        return Node("empty", mask, ProjectionWord(n))
    span = mask.span()
    lo, hi = span
    if hi - lo + 1 < n:
        sub = _constructive(mask.restrict(lo, hi), budget)
        if sub is not None:
            return _window_node(mask, lo, sub)
        return None
    exact = formations.exact_formations(mask)
    if exact:
        return _formation_leaf(mask, exact[0])
    if mask.bandwidth() <= 2:
        leaf = _band_leaf(mask, budget)
        if leaf is not None:
            return leaf
    return _peel(mask, budget)


def _peel_candidates(mask: UpperMask) -> list[tuple[UpperMask, object]]:
    cands = []
    if 2 <= mask.n <= formations.MAX_FORMATION_STRANDS:
        seen = set()
        for f in formations.detect(mask):
            bits = formations.formation_matrix(f).bits
            if bits in seen or bits == mask.bits:
                continue
            seen.add(bits)
            cands.append((UpperMask(mask.n, bits), f))
    for piece, lo, hi in _window_split_pieces(mask):
        cands.append((piece, (lo, hi)))
    # larger piece first; formations before windows at equal size
    cands.sort(key=lambda c: (-len(c[0]), 0 if isinstance(c[1], formations.Formation) else 1))
    return cands


def _peel(mask: UpperMask, budget: int) -> Node | None:
    tried = 0
    for piece, how in _peel_candidates(mask):
        rest = mask - piece
        if not is_t0(rest):
            continue
        tried += 1
        if tried > MAX_PEEL_CANDIDATES:
            break
        if isinstance(how, formations.Formation):
            leaf = _formation_leaf(piece, how)
        else:
            lo, hi = how
            sub = _constructive(piece.restrict(lo, hi), budget)
            if sub is None:
                continue
            leaf = _window_node(piece, lo, sub)
        other = _constructive(rest, budget)
        if other is None:
            continue
        return _sum_node(mask, [leaf, other])
    return None


def peel_decompose(mask: UpperMask, budget: int | None = None) -> Node:
    """Decomposition tree of a T0 support into realizable pieces.

    Leaves are formations (including reverses), window embeddings, band
    pieces or empty; their supports partition ``mask``.
    """
    v = t0_violation(mask)
    if v is not None:
        raise NotT0(v)
    node = _constructive(mask, default_budget() if budget is None else budget)
    if node is None:
        raise DecompositionFailed(f"no constructive decomposition for {mask.to_text()}")
    return node


def split_tree(mask: UpperMask, parts: Iterable[UpperMask], budget: int | None = None) -> Node:
    """Realize a given partition of ``mask`` piece by piece and sum the results."""
    parts = list(parts)
    acc = 0
    for p in parts:
        if p.bits & acc:
            raise InvalidMatrix("pieces overlap")
        acc |= p.bits
    if acc != mask.bits:
        raise InvalidMatrix("pieces do not cover the mask")
    return _sum_node(mask, [realize_mask(p, budget)[0] for p in parts])


def realize_mask(mask: UpperMask, budget: int | None = None) -> tuple[Node, str]:
    """Realize a T0 (0,2) support; returns the tree and the layer that closed it."""
    budget = default_budget() if budget is None else budget
    v = t0_violation(mask)
    if v is not None:
        raise NotT0(v)
    node = _constructive(mask, budget)
    if node is not None:
        return node, node.kind
    try:
        res = ladder.realize_by_ladder(ladder.b_ladder_of(mask), budget)
    except BudgetExhausted:
        res = None
    if res is not None:
        return Node("ladder", mask, ProjectionWord(mask.n, res.word), nodes=res.nodes), "ladder"
    try:
        word, nodes = word_search(mask.to_matrix(), budget)
    except BudgetExhausted as exc:
        raise RealizationFailed(f"search budget exhausted for {mask.to_text()}") from exc
    if word is None:
        raise RealizationFailed(f"no pure word realizes {mask.to_text()}")
    return Node("wordsearch", mask, word, nodes=nodes), "wordsearch"


def inflate(word: ProjectionWord, target: PairCountMatrix) -> ProjectionWord:
    """Raise each pair's crossing count to ``target`` by odd runs at one crossing.

    ``word`` must cross every pair that ``target`` needs, with the same parity.
    """
    n = word.n
    base = cn_matrix(word)
    done = set()
    perm = list(range(n))
    letters = []
    for k in word.letters:
        a, b = perm[k - 1], perm[k]
        pair = (min(a, b), max(a, b))
        reps = 1
        if pair not in done:
            done.add(pair)
            have = base[pair]
            diff = target[pair] - have
            if diff < 0 or diff % 2:
                raise InvalidMatrix(f"cannot inflate pair {pair} from {have} to {target[pair]}")
            reps = 1 + diff
        letters.extend([k] * reps)
        perm[k - 1], perm[k] = b, a
    if cn_matrix(ProjectionWord(n, tuple(letters))) != target:
        raise InvalidMatrix("target needs a pair the word never crosses")
    return ProjectionWord(n, tuple(letters))


# --- certificates ------------------------------------------------------------


@dataclass
class Certificate:
    target: PairCountMatrix
    kind: str  # "CN", "OU" or "Crossing"
    witness: ProjectionWord | DiagramWord
    method: dict = field(default_factory=dict)
    verified: bool = False

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "target": self.target.to_json(),
            "n": self.witness.n,
            "word": self.witness.to_text(),
            "method": self.method,
            "verified": self.verified,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data) -> "Certificate":
        if isinstance(data, str):
            data = json.loads(data)
        kind = data["kind"]
        n = int(data["n"])
        if kind == "CN":
            w = ProjectionWord.parse(data["word"], n)
        else:
            w = DiagramWord.parse(data["word"], n)
        return cls(PairCountMatrix.from_json(data["target"]), kind, w, data.get("method", {}), bool(data.get("verified")))


def verify_certificate(c: Certificate) -> bool:
    """Recompute the witness's matrix and check the side conditions of its kind."""
    try:
        w = c.witness
        if w.n != c.target.n:
            return False
        if c.kind == "CN":
            return isinstance(w, ProjectionWord) and is_pure(w) and cn_matrix(w) == c.target
        if not isinstance(w, DiagramWord) or not is_pure(forget(w)):
            return False
        if c.kind == "OU":
            return ou_matrix(w) == c.target
        if c.kind == "Crossing":
            return w.is_positive() and crossing_matrix(w) == c.target and ou_matrix(w) == c.target
    except Exception:
        return False
    return False


def _as_matrix(M) -> PairCountMatrix:
    if isinstance(M, UpperMask):
        return M.to_matrix()
    if not isinstance(M, PairCountMatrix):
        M = PairCountMatrix.from_rows(M)
    return M


def _check_basic(M: PairCountMatrix, symmetric: bool) -> None:
    if not M.has_zero_diagonal():
        raise NonZeroDiagonal("target has a non-zero diagonal entry")
    if not M.is_nonnegative():
        raise InvalidMatrix("target has a negative entry")
    if symmetric and not M.is_symmetric():
        raise InvalidMatrix("target is not symmetric")


def realize_cn(M, budget: int | None = None) -> Certificate:
    """Pure projection word whose CN matrix is the even symmetric T0 matrix ``M``."""
    M = _as_matrix(M)
    _check_basic(M, symmetric=True)
    if not M.is_even():
        raise InvalidMatrix("target has an odd entry; no pure projection exists")
    v = t0_violation(M)
    if v is not None:
        raise NotT0(v)
    node, layer = realize_mask(m02(M), budget)
    word = inflate(node.word, M)
    cert = Certificate(
        M,
        "CN",
        word,
        {
            "layer": layer,
            "leaves": node.leaf_kinds(),
            "tree": node.to_json(),
            "nodes": node.total_nodes(),
        },
    )
    cert.verified = verify_certificate(cert)
    if not cert.verified:
        raise RealizationFailed(f"witness failed verification for\n{M}")
    return cert


def _diagram(word: ProjectionWord, over_quota: PairCountMatrix | None) -> DiagramWord:
    """Assign over/under flags along ``word``.

    With ``over_quota`` the first ``quota(i,j)`` crossings of ``i`` and ``j``
    put ``i`` on top; without it every crossing is positive.
    """
    if over_quota is None:
        return DiagramWord(word.n, tuple((k, Over.LEFT) for k in word.letters))
    perm = list(range(word.n))
    seen: dict[tuple[int, int], int] = {}
    letters = []
    for k in word.letters:
        a, b = perm[k - 1], perm[k]
        i, j = min(a, b), max(a, b)
        c = seen.get((i, j), 0)
        top = i if c < over_quota[i, j] else j
        seen[(i, j)] = c + 1
        letters.append((k, Over.LEFT if top == a else Over.RIGHT))
        perm[k - 1], perm[k] = b, a
    return DiagramWord(word.n, tuple(letters))


def realize_ou(M, budget: int | None = None) -> Certificate:
    """Pure diagram whose OU matrix is ``M`` (needs ``M + M^T`` even and T0)."""
    M = _as_matrix(M)
    _check_basic(M, symmetric=False)
    S = M + M.transpose()
    if not S.is_even():
        raise InvalidMatrix("M + M^T has an odd entry; no pure diagram exists")
    v = t0_violation(S)
    if v is not None:
        raise SumNotT0(v)
    base = realize_cn(S, budget)
    d = _diagram(base.witness, M)
    cert = Certificate(M, "OU", d, dict(base.method, projection=base.witness.to_text()))
    cert.verified = verify_certificate(cert)
    if not cert.verified:
        raise RealizationFailed("OU witness failed verification")
    return cert


def realize_crossing(M, budget: int | None = None) -> Certificate:
    """Positive pure diagram whose crossing matrix (and OU matrix) is ``M``."""
    M = _as_matrix(M)
    _check_basic(M, symmetric=True)
    v = t0_violation(M)
    if v is not None:
        raise NotT0(v)
    base = realize_cn(M.scale(2), budget)
    d = _diagram(base.witness, None)
    cert = Certificate(M, "Crossing", d, dict(base.method, projection=base.witness.to_text()))
    cert.verified = verify_certificate(cert)
    if not cert.verified:
        raise RealizationFailed("crossing witness failed verification")
    return cert


# --- exhaustive verification runs ----------------------------------------------


@dataclass
class Row:
    mask: str
    method: str
    leaves: str
    length: int
    nodes: int
    micros: int
    verified: bool
    status: str = "verified"

    CSV_HEADER = "mask,method,leaves,word_length,nodes_expanded,micros,verified"

    def csv(self, timing: bool = True) -> str:
        micros = self.micros if timing else 0
        return f'"{self.mask}",{self.method},{self.leaves},{self.length},{self.nodes},{micros},{int(self.verified)}'


@dataclass
class TheoremReport:
    n: int
    total: int
    verified: int
    rows: list[Row]
    seconds: float

    @property
    def ok(self) -> bool:
        return self.verified == self.total

    def layer_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for r in self.rows:
            out[r.method] = out.get(r.method, 0) + 1
        return dict(sorted(out.items()))

    def max_micros(self) -> int:
        return max((r.micros for r in self.rows), default=0)

    def summary(self) -> dict:
        return {
            "n": self.n,
            "total": self.total,
            "verified": self.verified,
            "unknown": self.total - self.verified if self.n >= 7 else 0,
            "failed": self.total - self.verified if self.n < 7 else 0,
            "layers": self.layer_counts(),
            "seconds": round(self.seconds, 3),
            "max_micros": self.max_micros(),
        }

    def csv(self, timing: bool = True) -> str:
        lines = [Row.CSV_HEADER] + [r.csv(timing) for r in self.rows]
        return "\n".join(lines) + "\n"


def _run_one(args) -> Row:
    n, bits, budget = args
    mask = UpperMask(n, bits)
    t0 = time.perf_counter()
    try:
        cert = realize_cn(mask.to_matrix(), budget)
    except (RealizationFailed, BudgetExhausted):
        micros = int((time.perf_counter() - t0) * 1e6)
        status = "unknown" if n >= 7 else "failed"
        return Row(mask.to_text(), status, "", 0, 0, micros, False, status)
    micros = int((time.perf_counter() - t0) * 1e6)
    # independent re-check: rebuild the certificate from its JSON form
    ok = verify_certificate(Certificate.from_json(cert.to_json()))
    return Row(
        mask.to_text(),
        cert.method["layer"],
        "+".join(cert.method["leaves"]),
        len(cert.witness),
        cert.method["nodes"],
        micros,
        ok,
    )


def verify_theorem(n: int, budget: int | None = None, workers: int = 1) -> TheoremReport:
    """Realize and re-verify every T0 (0,2)-matrix on ``n`` strands."""
    budget = default_budget() if budget is None else budget
    jobs = [(n, m.bits, budget) for m in enumerate_t0(n)]
    t0 = time.perf_counter()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(_run_one, jobs, chunksize=64))
    else:
        rows = [_run_one(j) for j in jobs]
    seconds = time.perf_counter() - t0
    return TheoremReport(n, len(rows), sum(r.verified for r in rows), rows, seconds)


def verify_theorem_n6(budget: int | None = None, workers: int = 1) -> TheoremReport:
    return verify_theorem(6, budget, workers)
