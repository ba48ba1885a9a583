"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run ``python3 tests/test_acceptance.py`` for the bare report, or through
pytest, where the lines are printed past output capture.
"""

from __future__ import annotations

import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from gen import (  # noqa: E402
    random_crossing_target,
    random_ladder,
    random_ou_target,
    random_pure_word,
    random_word,
)

from braidmat import formations, ladder, tstructure  # noqa: E402
from braidmat.braid import (  # noqa: E402
    Over,
    cn_matrix,
    concat,
    crossing_matrix,
    forget,
    is_pure,
    ou_matrix,
)
from braidmat.matrices import count_t0  # noqa: E402
from braidmat.realizer import (  # noqa: E402
    realize_crossing,
    realize_ou,
    verify_theorem,
)

EXPECTED_COUNTS = {1: 1, 2: 2, 3: 7, 4: 40, 5: 357, 6: 4824, 7: 96428}


def report(num: int, ok: bool, detail: str, capsys=None) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {detail}"
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)


def check_counts():
    from braidmat import matrices

    matrices._t0_masks.cache_clear()
    t = time.perf_counter()
    small = {n: count_t0(n) for n in range(1, 7)}
    t_small = time.perf_counter() - t
    t = time.perf_counter()
    c7 = count_t0(7)
    t7 = time.perf_counter() - t
    got = {**small, 7: c7}
    ok = got == EXPECTED_COUNTS and t_small < 5 and t7 < 60
    return ok, f"counts {list(got.values())}; n<=6 in {t_small:.2f}s, n=7 in {t7:.2f}s"


def check_theorem():
    parts = []
    ok = True
    for n, want in ((4, 40), (5, 357), (6, 4824)):
        r = verify_theorem(n)
        ok = ok and r.verified == r.total == want
        if n == 6:
            ok = ok and r.seconds < 600
            parts.append(f"n=6 {r.verified}/{r.total} in {r.seconds:.1f}s (layers {r.layer_counts()})")
        else:
            parts.append(f"n={n} {r.verified}/{r.total}")
    return ok, "; ".join(parts)


def check_ladder_moves(pairs: int = 10_000, seed: int = 3):
    rng = random.Random(seed)
    seen: dict[tuple[str, str], int] = {}
    done = bad = 0
    while done < pairs:
        n = rng.randint(2, 7)
        D = random_ladder(rng, n, rng.randint(1, 9))
        moves = ladder.legal_moves(D)
        if not moves:
            continue
        # pick a move class uniformly first, so rare moves are exercised too
        classes = sorted({(m.move, m.dir) for m in moves})
        cls = rng.choice(classes)
        m = rng.choice([m for m in moves if (m.move, m.dir) == cls])
        E = ladder.apply_move(D, m)
        if ladder.eval(E) != ladder.eval(D):
            bad += 1
        if ladder.apply_move(E, ladder.inverse_move(E, m)) != D:
            bad += 1
        seen[cls] = seen.get(cls, 0) + 1
        done += 1
    covered = len(seen) == 2 * len(ladder.MOVE_IDS)
    return bad == 0 and covered, f"{done} pairs, {len(seen)}/18 move-direction classes, {bad} failures"


def check_formations(max_n: int = 9):
    total = bad = 0
    families = set()
    for n in range(2, max_n + 1):
        for f in formations.enumerate_formations(n, include_reverse=True):
            w = formations.realize(f)
            total += 1
            families.add((f.family, f.variant))
            if not (is_pure(w) and cn_matrix(w) == formations.formation_matrix(f).to_matrix()):
                bad += 1
    return bad == 0, f"{total} descriptors over {len(families)} family variants (n<=9), {bad} failures"


def check_purity_and_sums(count: int = 10_000, seed: int = 5):
    rng = random.Random(seed)
    bad_even = bad_sum = 0
    pure_seen = 0
    for _ in range(count):
        n = rng.randint(2, 8)
        w = random_word(rng, n, rng.randint(0, 14))
        if rng.random() < 0.5:
            w = random_pure_word(rng, n, rng.randint(0, 10))
        pure_seen += is_pure(w)
        if is_pure(w) != cn_matrix(w).is_even():
            bad_even += 1
    for _ in range(count):
        n = rng.randint(2, 8)
        a = random_pure_word(rng, n, rng.randint(0, 10))
        b = random_word(rng, n, rng.randint(0, 10))
        if cn_matrix(concat(a, b)) != cn_matrix(a) + cn_matrix(b):
            bad_sum += 1
    ok = bad_even == 0 and bad_sum == 0
    return ok, f"{count} words ({pure_seen} pure) parity failures {bad_even}; {count} products additivity failures {bad_sum}"


def check_ou(count: int = 200, seed: int = 7):
    rng = random.Random(seed)
    bad = 0
    for _ in range(count):
        M = random_ou_target(rng, 6)
        d = realize_ou(M).witness
        if not (is_pure(forget(d)) and ou_matrix(d) == M):
            bad += 1
    return bad == 0, f"{count} random 6x6 targets, {bad} failures"


def check_crossing(count: int = 200, seed: int = 11):
    rng = random.Random(seed)
    bad = 0
    for _ in range(count):
        M = random_crossing_target(rng, 6)
        d = realize_crossing(M).witness
        ok = (
            all(o is Over.LEFT for _, o in d.letters)
            and is_pure(forget(d))
            and crossing_matrix(d) == M
            and ou_matrix(d) == M
        )
        bad += not ok
    return bad == 0, f"{count} random 6x6 targets, {bad} failures"


def _fixture_graphs():
    GG = tstructure.GridGraph
    square = GG(
        4,
        frozenset({(1, 3), (1, 4), (2, 3), (2, 4)}),
        left={(1, 4): 3, (2, 4): 3},
        down={(1, 4): 2, (1, 3): 2},
    )
    c1_bad = GG(4, frozenset({(1, 4)}))
    c2_bad = GG(
        6,
        frozenset({(2, 4), (2, 6), (3, 4), (5, 6)}),
        left={(2, 6): 4},
        down={(2, 6): 5, (2, 4): 3},
    )
    c3_bad = GG(
        5,
        frozenset({(1, 2), (1, 5), (3, 5), (3, 4)}),
        left={(1, 5): 2, (3, 5): 4},
        down={(1, 5): 3},
    )
    return square, c1_bad, c2_bad, c3_bad


def _spec_fixtures_ok() -> bool:
    GG = tstructure.GridGraph
    empty = tstructure.check_t_structure(GG(3, frozenset()))
    single = tstructure.check_t_structure(GG(2, frozenset({(1, 2)})))
    lone = tstructure.check_t_structure(GG(4, frozenset({(1, 4)})))
    return empty.ok and single.ok and not lone.ok and [w["vertex"] for w in lone.c1] == [[1, 4]]


def check_tstructure(max_n: int = 8, samples: int = 600, seed: int = 13):
    rng = random.Random(seed)
    pool = []
    for n in range(2, max_n + 1):
        pool.extend(formations.enumerate_formations(n, families=("H", "L1", "L2", "L3"), include_reverse=True))
    rest = []
    for n in range(2, max_n + 1):
        rest.extend(formations.enumerate_formations(n, families=("R", "C", "RC", "AlphaPair", "CSharpR")))
    chosen = rng.sample(pool, min(samples // 2, len(pool))) + rng.sample(rest, samples - min(samples // 2, len(pool)))
    missing = [f for f in chosen if tstructure.find_t_structure(formations.formation_matrix(f)) is None]
    square, c1_bad, c2_bad, c3_bad = _fixture_graphs()
    rs = [tstructure.check_t_structure(g) for g in (square, c1_bad, c2_bad, c3_bad)]
    fixtures = (
        rs[0].ok
        and rs[1].c1 and not rs[1].c2 and not rs[1].c3
        and rs[2].c2 and not rs[2].c3
        and rs[3].c3 and not rs[3].c2
        and _spec_fixtures_ok()
    )
    ok = not missing and bool(fixtures) and len(chosen) >= 500
    return ok, f"{len(chosen)} formation matrices, {len(missing)} without T-structure; C1/C2/C3 fixtures {'ok' if fixtures else 'wrong'}"


CRITERIA = {
    1: check_counts,
    2: check_theorem,
    3: check_ladder_moves,
    4: check_formations,
    5: check_purity_and_sums,
    6: check_ou,
    7: check_crossing,
    8: check_tstructure,
}


@pytest.mark.parametrize("num", sorted(CRITERIA))
def test_criterion(num, capsys):
    ok, detail = CRITERIA[num]()
    report(num, ok, detail, capsys)
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for num, fn in CRITERIA.items():
        ok, detail = fn()
        report(num, ok, detail)
        failed += not ok
    sys.exit(1 if failed else 0)
