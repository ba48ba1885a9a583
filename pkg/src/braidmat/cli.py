"""Command-line entry point: ``braidmat <command> ...``.

Exit codes: 0 on success, 1 on a domain error (a JSON error object is
written to stderr), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import ladder, tstructure
from .braid import (
    DiagramWord,
    PairCountMatrix,
    ProjectionWord,
    cn_matrix,
    crossing_matrix,
    forget,
    is_pure,
    ou_matrix,
    permutation,
)
from .errors import BraidMatError, InvalidMatrix, NotT0
from .matrices import UpperMask, count_t0, enumerate_t0, t0_violation
from .realizer import (
    Certificate,
    default_budget,
    realize_cn,
    realize_crossing,
    realize_ou,
    verify_certificate,
    verify_theorem,
)


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _emit(text: str, out: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def load_matrix(path: str, n: int | None = None, fmt: str | None = None) -> PairCountMatrix:
    """A JSON matrix for ``.json`` files (or ``fmt='json'``), else a pair list."""
    text = _read(path)
    if fmt is None:
        fmt = "json" if path.endswith(".json") else "pairs"
    if fmt == "json":
        try:
            return PairCountMatrix.from_json(text)
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, BraidMatError):
                raise
            raise InvalidMatrix(f"not a JSON matrix: {exc}") from exc
    if n is None:
        raise UsageError("pair-list input needs --n")
    return UpperMask.parse(n, " ".join(text.split())).to_matrix()


def load_word(path: str, n: int | None) -> ProjectionWord | DiagramWord:
    text = _read(path).strip()
    if any(tok[:1] in "+-" for tok in text.split()):
        return DiagramWord.parse(text, n)
    return ProjectionWord.parse(text, n)


def load_ladder(path: str, n: int | None) -> ladder.LadderDiagram:
    text = _read(path).strip()
    if text.startswith("{"):
        data = json.loads(text)
        return ladder.LadderDiagram.parse(data["edges"], int(data["n"]))
    if n is None:
        raise UsageError("text ladder input needs --n")
    return ladder.LadderDiagram.parse(text, n)


# --- commands ------------------------------------------------------------------


def cmd_matrix(args) -> int:
    w = load_word(args.word, args.n)
    proj = forget(w) if isinstance(w, DiagramWord) else w
    out = {
        "n": w.n,
        "length": len(w),
        "permutation": list(permutation(proj)),
        "pure": is_pure(proj),
        "cn": cn_matrix(proj).rows(),
    }
    if isinstance(w, DiagramWord):
        out["ou"] = ou_matrix(w).rows()
        out["crossing"] = crossing_matrix(w).rows()
    _emit(_dump(out), args.out)
    return 0


def cmd_t0(args) -> int:
    M = load_matrix(args.matrix, args.n, args.input_format)
    v = t0_violation(M)
    if v is not None:
        raise NotT0(v)
    _emit(_dump({"n": M.n, "t0": True}), args.out)
    return 0


def cmd_enumerate(args) -> int:
    if args.count_only:
        _emit(str(count_t0(args.n)), args.out)
        return 0
    masks = list(enumerate_t0(args.n))
    if args.format == "json":
        text = _dump({"n": args.n, "count": len(masks), "masks": [m.to_text() for m in masks]})
    else:
        text = "\n".join(m.to_text() for m in masks)
    _emit(text, args.out)
    return 0


def cmd_realize(args) -> int:
    M = load_matrix(args.matrix, args.n, args.input_format)
    fn = {"cn": realize_cn, "ou": realize_ou, "crossing": realize_crossing}[args.kind]
    cert = fn(M, args.budget)
    _emit(_dump(cert.to_json()), args.out)
    return 0


def cmd_verify(args) -> int:
    try:
        cert = Certificate.from_json(_read(args.certificate))
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InvalidMatrix(f"malformed certificate: {exc}") from exc
    ok = verify_certificate(cert)
    _emit(_dump({"kind": cert.kind, "verified": ok}), args.out)
    if not ok:
        sys.stderr.write(json.dumps({"error": "CertificateRejected", "message": "witness does not match target"}) + "\n")
        return 1
    return 0


def cmd_theorem6(args) -> int:
    report = verify_theorem(args.n, args.budget, args.workers)
    timing = not args.no_timing
    if args.format == "json":
        summary = report.summary()
        if not timing:
            summary.pop("seconds")
            summary.pop("max_micros")
        text = _dump(summary)
    else:
        text = report.csv(timing)
    _emit(text, args.out)
    if not args.out and args.format == "csv":
        s = report.summary()
        sys.stderr.write(f"{s['verified']}/{s['total']} verified\n")
    return 0 if report.ok else 1


def cmd_ladder(args) -> int:
    D = load_ladder(args.ladder, args.n)
    if args.action == "eval":
        ev = ladder.eval(D)
        out = {"n": D.n, "permutation": list(ev.perm), "counts": ev.counts.rows(), "w_ladder": ladder.is_w_ladder(D)}
    elif args.action == "apply":
        if not args.moves:
            raise UsageError("ladder apply needs --moves")
        trace = ladder.trace_from_json(_read(args.moves))
        E = ladder.replay(D, trace)
        out = {"n": E.n, "edges": E.to_text()}
    else:
        res = ladder.search_w_form(D, args.budget)
        if res is None:
            out = {"n": D.n, "found": False}
        else:
            W, trace = res
            out = {
                "n": D.n,
                "found": True,
                "edges": W.to_text(),
                "word": ladder.to_projection_word(W).to_text(),
                "trace": [m.to_json() for m in trace],
            }
    _emit(_dump(out), args.out)
    return 0


def cmd_tstructure(args) -> int:
    if args.probe:
        _emit(_dump(tstructure.probe_conjecture(args.n or 6, args.budget).to_json()), args.out)
        return 0
    if not args.matrix:
        raise UsageError("tstructure needs a matrix file or --probe")
    M = load_matrix(args.matrix, args.n, args.input_format)
    mask = UpperMask.from_pairs(
        M.n, [(i + 1, j + 1) for i in range(M.n) for j in range(i + 1, M.n) if M[i, j] or M[j, i]]
    )
    if args.check:
        g = tstructure.GridGraph.from_json(_read(args.check))
        if g.vertices != frozenset(mask.pairs()):
            raise InvalidMatrix("graph vertices do not match the matrix support")
        out = tstructure.check_t_structure(g).to_json()
    else:
        g = tstructure.find_t_structure(mask)
        out = {"found": g is not None, "graph": g.to_json() if g is not None else None}
    _emit(_dump(out), args.out)
    return 0


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="braidmat", description="CN-matrix realization toolkit for pure braids.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, matrix_input=False):
        sp.add_argument("--n", type=int, help="strand count (needed for text inputs)")
        sp.add_argument("--out", help="write output here instead of stdout")
        if matrix_input:
            sp.add_argument(
                "--input-format",
                choices=("json", "pairs"),
                help="matrix file format; default by extension (.json is JSON, else pair list)",
            )

    budget = dict(type=int, default=None, help="search budget in nodes (default: $BRAIDMAT_BUDGET or 10^6)")

    sp = sub.add_parser("matrix", help="CN (and OU/crossing) matrices of a word file")
    sp.add_argument("word")
    common(sp)
    sp.set_defaults(func=cmd_matrix)

    sp = sub.add_parser("t0", help="check the T0 condition")
    sp.add_argument("matrix")
    common(sp, True)
    sp.set_defaults(func=cmd_t0)

    sp = sub.add_parser("enumerate", help="list T0 (0,2)-masks")
    common(sp)
    sp.add_argument("--count-only", action="store_true")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("realize", help="realize a matrix and print a certificate")
    sp.add_argument("matrix")
    sp.add_argument("--kind", choices=("cn", "ou", "crossing"), default="cn")
    sp.add_argument("--budget", **budget)
    common(sp, True)
    sp.set_defaults(func=cmd_realize)

    sp = sub.add_parser("verify", help="check a certificate file")
    sp.add_argument("certificate")
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("theorem6", help="realize and verify every T0 mask (n=6 by default)")
    common(sp)
    sp.set_defaults(n=6)
    sp.add_argument("--budget", **budget)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--no-timing", action="store_true", help="zero the timing columns for byte-stable output")
    sp.set_defaults(func=cmd_theorem6)

    sp = sub.add_parser("ladder", help="evaluate, rewrite or search ladder diagrams")
    sp.add_argument("action", choices=("eval", "apply", "search"))
    sp.add_argument("ladder")
    sp.add_argument("--moves", help="JSON move trace for 'apply'")
    sp.add_argument("--budget", **budget)
    common(sp)
    sp.set_defaults(func=cmd_ladder)

    sp = sub.add_parser("tstructure", help="find or check a T-structure")
    sp.add_argument("matrix", nargs="?")
    sp.add_argument("--check", help="graph JSON to check instead of searching")
    sp.add_argument("--probe", action="store_true", help="check whether T-structure masks are realizable, over all T0 masks")
    sp.add_argument("--budget", **budget)
    common(sp, True)
    sp.set_defaults(func=cmd_tstructure)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "budget", None) is None and hasattr(args, "budget"):
        args.budget = default_budget()
    if getattr(args, "workers", 1) < 1:
        parser.print_usage(sys.stderr)
        sys.stderr.write("braidmat: error: --workers must be positive\n")
        return 2
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"braidmat: error: {exc}\n")
        return 2
    except BraidMatError as exc:
        sys.stderr.write(json.dumps(exc.to_dict()) + "\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
