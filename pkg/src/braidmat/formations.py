"""Snake, hang-glider and loupe formations: supports, detection, realization.

Every family is described by a :class:`Formation` carrying its parameters,
optional-entry flags and a ``reverse`` bit (the reversed matrix, realized by
the mirrored word).  :func:`realize` lays out the B-ladder diagram in the
order used by the family's construction and then shortens the hooks with
ladder macros (shortest hook first), falling back to the macro search.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterator

from . import ladder
from .braid import ProjectionWord, mirror
from .errors import InvalidParameters
from .ladder import Black, LadderDiagram
from .matrices import UpperMask

MAX_FORMATION_STRANDS = 9

FAMILIES = ("R", "C", "RC", "AlphaPair", "CSharpR", "H", "L1", "L2", "L3")
ALPHA_VARIANTS = ("c-r", "c-rc", "rc-r", "rc-rc")
SHARP_VARIANTS = ("1", "2")

# parameter names per family / variant, in canonical order
_PARAMS = {
    "R": ("k", "J"),
    "C": ("I", "l"),
    "RC": ("k", "l", "J", "I"),
    ("AlphaPair", "c-r"): ("k", "l", "m"),
    ("AlphaPair", "c-rc"): ("k", "l", "m", "J2", "I2"),
    ("AlphaPair", "rc-r"): ("k", "l", "m", "J1", "I1"),
    ("AlphaPair", "rc-rc"): ("k", "l", "m", "J1", "I1", "J2", "I2"),
    "CSharpR": ("k", "l", "m"),
    "H": ("k", "l", "m"),
    "L1": ("k", "l"),
    "L2": ("k", "l"),
    "L3": ("k", "l"),
}

_FLAGS = {
    "H": ("km", "ml", "lo", "hi", "top", "bot"),
    "L1": ("a", "b", "top", "bot", "minus"),
    "L2": ("a", "b", "minus"),
    "L3": ("a", "b", "minus"),
}


@dataclass(frozen=True, order=True)
class Formation:
    family: str
    n: int
    params: tuple[tuple[str, int], ...]
    variant: str = ""
    flags: tuple[str, ...] = ()
    reverse: bool = False

    @classmethod
    def make(cls, family: str, n: int, variant: str = "", flags=(), reverse: bool = False, **params):
        names = _param_names(family, variant)
        if set(params) != set(names):
            raise InvalidParameters(f"{family} {variant} needs parameters {names}, got {sorted(params)}")
        f = cls(
            family,
            n,
            tuple((p, int(params[p])) for p in names),
            variant,
            tuple(sorted(set(flags))),
            bool(reverse),
        )
        _validate(f)
        return f

    @property
    def p(self) -> dict[str, int]:
        return dict(self.params)

    def reversed(self) -> "Formation":
        return Formation(self.family, self.n, self.params, self.variant, self.flags, not self.reverse)

    def to_text(self) -> str:
        parts = [self.family, f"n={self.n}"]
        if self.variant:
            parts.append(f"variant={self.variant}")
        parts += [f"{k}={v}" for k, v in self.params]
        if self.flags:
            parts.append("flags=" + ",".join(self.flags))
        if self.reverse:
            parts.append("reverse=1")
        return " ".join(parts)

    @classmethod
    def parse(cls, text: str, n: int | None = None) -> "Formation":
        toks = text.split()
        if not toks:
            raise InvalidParameters("empty formation descriptor")
        family, kv = toks[0], {}
        for t in toks[1:]:
            if "=" not in t:
                raise InvalidParameters(f"bad descriptor token {t!r}")
            k, v = t.split("=", 1)
            kv[k] = v
        flags = [x for x in kv.pop("flags", "").split(",") if x]
        variant = kv.pop("variant", "")
        reverse = kv.pop("reverse", "0") not in ("0", "false", "")
        nn = int(kv.pop("n")) if "n" in kv else n
        if nn is None:
            raise InvalidParameters("descriptor needs n")
        try:
            params = {k: int(v) for k, v in kv.items()}
        except ValueError as exc:
            raise InvalidParameters(str(exc)) from exc
        return cls.make(family, nn, variant=variant, flags=flags, reverse=reverse, **params)

    def __str__(self) -> str:
        return self.to_text()


def _param_names(family: str, variant: str) -> tuple[str, ...]:
    if family in ("AlphaPair",):
        if variant not in ALPHA_VARIANTS:
            raise InvalidParameters(f"AlphaPair variant must be one of {ALPHA_VARIANTS}")
        return _PARAMS[(family, variant)]
    if family == "CSharpR" and variant not in SHARP_VARIANTS:
        raise InvalidParameters(f"CSharpR variant must be one of {SHARP_VARIANTS}")
    if family not in _PARAMS:
        raise InvalidParameters(f"unknown family {family!r}")
    if family != "CSharpR" and variant:
        raise InvalidParameters(f"{family} takes no variant")
    return _PARAMS[family]


def _rc_ok(k: int, l: int, J: int, I: int) -> bool:
    return k < J < l and k < I < l and I - J <= 1


def _validate(f: Formation) -> None:
    n, p = f.n, f.p
    if not 2 <= n <= MAX_FORMATION_STRANDS:
        raise InvalidParameters(f"formations are supported for 2 <= n <= {MAX_FORMATION_STRANDS}")
    allowed = _FLAGS.get(f.family, ())
    bad = [x for x in f.flags if x not in allowed]
    if bad:
        raise InvalidParameters(f"{f.family} does not take flags {bad}")
    fam = f.family
    ok = True
    if fam == "R":
        ok = 1 <= p["k"] < p["J"] <= n
    elif fam == "C":
        ok = 1 <= p["I"] < p["l"] <= n
    elif fam == "RC":
        ok = p["k"] >= 1 and p["l"] <= n and _rc_ok(p["k"], p["l"], p["J"], p["I"])
    elif fam == "AlphaPair":
        k, l, m = p["k"], p["l"], p["m"]
        a1, a2 = f.variant.split("-")
        ok = 1 <= k < l <= m <= n
        if a1 == "rc":
            ok = ok and _rc_ok(k, l, p["J1"], p["I1"])
        if a2 == "r":
            ok = ok and m >= l
        else:
            ok = ok and _rc_ok(l - 1, m, p["J2"], p["I2"])
    elif fam == "CSharpR":
        k, l, m = p["k"], p["l"], p["m"]
        need = 1 if f.variant == "1" else 2
        ok = 1 <= k and l - k >= 2 and m - l >= need and m <= n
    elif fam == "H":
        k, l, m = p["k"], p["l"], p["m"]
        ok = 1 <= k < m and m + 1 < l <= n
        # the top/bot add-ons need their neighbouring entry, else T0 fails
        if "top" in f.flags:
            ok = ok and k >= 2 and (m >= k + 2 or "km" in f.flags)
        if "bot" in f.flags:
            ok = ok and l + 1 <= n and (l - 1 >= m + 2 or "ml" in f.flags)
    elif fam in ("L1", "L2", "L3"):
        k, l = p["k"], p["l"]
        ok = 1 <= k and l <= n and l >= k + (3 if fam == "L1" else 4)
        if "top" in f.flags:
            ok = ok and k >= 2
        if "bot" in f.flags:
            ok = ok and l + 1 <= n
        if "minus" in f.flags and ("top" in f.flags or "bot" in f.flags):
            ok = False
    if not ok:
        raise InvalidParameters(f"inadmissible parameters: {f.to_text()}")


# --- supports in construction order ----------------------------------------


def _row(k: int, a: int, b: int) -> list[tuple[int, int]]:
    return [(k, j) for j in range(a, b + 1)]


def _col(l: int, a: int, b: int) -> list[tuple[int, int]]:
    return [(i, l) for i in range(a, b + 1)]


def _rc_order(k: int, l: int, J: int, I: int) -> list[tuple[int, int]]:
    return _row(k, k + 1, J) + [(k, l)] + _col(l, I, l - 1)


def _layout(f: Formation) -> list[tuple[int, int]]:
    """Pairs of the un-reversed formation, in the order of its B-ladder diagram."""
    p, fl = f.p, set(f.flags)
    fam = f.family
    if fam == "R":
        return _row(p["k"], p["k"] + 1, p["J"])
    if fam == "C":
        return _col(p["l"], p["I"], p["l"] - 1)
    if fam == "RC":
        return _rc_order(p["k"], p["l"], p["J"], p["I"])
    if fam == "AlphaPair":
        k, l, m = p["k"], p["l"], p["m"]
        a1, a2 = f.variant.split("-")
        first = _col(l, k, l - 1) if a1 == "c" else _rc_order(k, l, p["J1"], p["I1"])
        second = _row(l - 1, l, m) if a2 == "r" else _rc_order(l - 1, m, p["J2"], p["I2"])
        return first + [q for q in second if q != (l - 1, l)]
    if fam == "CSharpR":
        k, l, m = p["k"], p["l"], p["m"]
        extra = [(l - 2, l + 1)] + ([(l - 2, l + 2)] if f.variant == "2" else [])
        return _col(l, k, l - 1) + extra + _row(l - 1, l + 1, m)
    if fam == "H":
        k, l, m = p["k"], p["l"], p["m"]
        out = [(k - 1, k + 1)] if "top" in fl else []
        out += [(k, l)] + _row(k, k + 1, m - 1)
        out += [(k, m)] if "km" in fl else []
        out += [(k, m + 1)]
        out += [(m - 1, m + 1)] if "lo" in fl else []
        out += [(m, m + 1)]
        out += [(m, m + 2)] if "hi" in fl else []
        out += [(m, l)]
        out += [(m + 1, l)] if "ml" in fl else []
        out += _col(l, m + 2, l - 1)
        out += [(l - 1, l + 1)] if "bot" in fl else []
        return _dedupe(out)
    k, l = p["k"], p["l"]
    if fam == "L1":
        s = [(k, k + 1)] + _row(k, k + 3, l) + [(k + 2, j) for j in range(l, k + 2, -1)]
        head = [(k, k + 2)] if "a" in fl else []
        tail = [(k + 1, k + 3)] if "b" in fl else []
        out = ([(k - 1, k + 1)] if "top" in fl else []) + head + s + tail
        out += [(k + 2, l + 1)] if "bot" in fl else []
    elif fam == "L2":
        s = [(k, k + 1), (k, k + 2)] + _row(k, k + 4, l) + [(k + 3, j) for j in range(l, k + 3, -1)]
        out = ([(k, k + 3)] if "a" in fl else []) + s + ([(k + 2, k + 4)] if "b" in fl else [])
    else:  # L3
        s = [(k, k + 1)] + _row(k, k + 4, l) + _row(k + 2, k + 4, l)
        s += [(k + 3, j) for j in range(l, k + 3, -1)]
        out = ([(k, k + 2)] if "a" in fl else []) + s + ([(k + 1, k + 4)] if "b" in fl else [])
    if "minus" in fl:
        out = [q for q in out if q != (k, l)]
    return _dedupe(out)


def _dedupe(pairs):
    seen, out = set(), []
    for q in pairs:
        if q not in seen:
            seen.add(q)
            out.append(q)
    return out


def formation_matrix(f: Formation) -> UpperMask:
    _validate(f)
    mask = UpperMask.from_pairs(f.n, _layout(f))
    return mask.reverse() if f.reverse else mask


def formation_ladder(f: Formation) -> LadderDiagram:
    """B-ladder diagram of the un-reversed formation in construction order."""
    return LadderDiagram(f.n, tuple(Black(i, j) for i, j in _layout(f)))


@lru_cache(maxsize=None)
def _realize_forward(f: Formation) -> ProjectionWord:
    p = f.p
    if f.family == "R":
        return ladder.to_projection_word(LadderDiagram(f.n, tuple(ladder.btow_row(p["k"], p["J"], f.n))))
    if f.family == "C":
        return ladder.to_projection_word(LadderDiagram(f.n, tuple(ladder.btow_col(p["I"], p["l"], f.n))))
    result = ladder.realize_by_ladder(formation_ladder(f))
    if result is None:
        raise InvalidParameters(f"ladder shortening failed for {f.to_text()}")
    return ProjectionWord(f.n, result.word)


def realize(f: Formation) -> ProjectionWord:
    """A pure projection word whose CN matrix is the formation's (0,2)-matrix."""
    _validate(f)
    base = Formation(f.family, f.n, f.params, f.variant, f.flags, False)
    w = _realize_forward(base)
    return mirror(w) if f.reverse else w


# --- enumeration and detection -----------------------------------------------


def _flag_sets(family: str) -> list[tuple[str, ...]]:
    if family == "H":
        opt = ("km", "ml", "lo", "hi")
        base = [c for r in range(5) for c in combinations(opt, r)]
        cors = [(), ("top",), ("bot",), ("top", "bot")]
        return [b + c for c in cors for b in base]
    if family == "L1":
        base = [c for r in range(3) for c in combinations(("a", "b"), r)]
        cors = [(), ("top",), ("bot",), ("top", "bot"), ("minus",)]
        return [b + c for c in cors for b in base]
    if family in ("L2", "L3"):
        base = [c for r in range(3) for c in combinations(("a", "b"), r)]
        return [b + c for c in [(), ("minus",)] for b in base]
    return [()]


def _rc_params(k: int, l: int):
    for J in range(k + 1, l):
        for I in range(k + 1, l):
            if I - J <= 1:
                yield J, I


def _param_values(family: str, variant: str, n: int):
    """Candidate parameter dicts; :func:`_validate` has the final word."""
    r = range(1, n + 1)
    if family == "R":
        return ({"k": k, "J": J} for k in r for J in range(k + 1, n + 1))
    if family == "C":
        return ({"I": I, "l": l} for l in r for I in range(1, l))
    if family == "RC":
        return (
            {"k": k, "l": l, "J": J, "I": I}
            for k in r
            for l in range(k + 2, n + 1)
            for J, I in _rc_params(k, l)
        )
    if family == "AlphaPair":
        a1, a2 = variant.split("-")

        def gen():
            for k in r:
                for l in range(k + 1, n + 1):
                    firsts = [{}] if a1 == "c" else [{"J1": J, "I1": I} for J, I in _rc_params(k, l)]
                    for m in range(l, n + 1):
                        seconds = [{}] if a2 == "r" else [{"J2": J, "I2": I} for J, I in _rc_params(l - 1, m)]
                        for x in firsts:
                            for y in seconds:
                                yield {"k": k, "l": l, "m": m, **x, **y}

        return gen()
    if family in ("CSharpR", "H"):
        return ({"k": k, "l": l, "m": m} for k in r for l in r for m in r)
    return ({"k": k, "l": l} for k in r for l in range(k + 1, n + 1))


def enumerate_formations(n: int, families=FAMILIES, include_reverse: bool = False) -> Iterator[Formation]:
    """Every admissible descriptor on ``n`` strands (all parameters and flags)."""
    if not 2 <= n <= MAX_FORMATION_STRANDS:
        raise InvalidParameters(f"formations are supported for 2 <= n <= {MAX_FORMATION_STRANDS}")
    for fam in families:
        variants = ALPHA_VARIANTS if fam == "AlphaPair" else SHARP_VARIANTS if fam == "CSharpR" else ("",)
        for variant in variants:
            for flags in _flag_sets(fam):
                for params in _param_values(fam, variant, n):
                    try:
                        f = Formation.make(fam, n, variant=variant, flags=flags, **params)
                    except InvalidParameters:
                        continue
                    yield f
                    if include_reverse:
                        yield f.reversed()


@lru_cache(maxsize=None)
def _catalogue(n: int) -> tuple[tuple[int, Formation], ...]:
    out = [(formation_matrix(f).bits, f) for f in enumerate_formations(n, include_reverse=True)]
    return tuple(out)


def _rank(f: Formation) -> tuple:
    return (FAMILIES.index(f.family), f.variant, f.params, f.flags, f.reverse)


def detect(M: UpperMask) -> list[Formation]:
    """All descriptors whose support fits under ``M``, in family-then-parameter order."""
    if M.n > MAX_FORMATION_STRANDS:
        raise InvalidParameters(f"detection is limited to n <= {MAX_FORMATION_STRANDS}")
    if M.n < 2:
        return []
    found = [f for bits, f in _catalogue(M.n) if bits & ~M.bits == 0]
    return sorted(found, key=_rank)


def exact_formations(M: UpperMask) -> list[Formation]:
    """Descriptors whose support is exactly ``M``."""
    if not 2 <= M.n <= MAX_FORMATION_STRANDS:
        return []
    return sorted((f for bits, f in _catalogue(M.n) if bits == M.bits), key=_rank)
