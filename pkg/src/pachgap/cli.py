"""Command-line front door.

Every subcommand writes one JSON (or CSV) report and exits 0 iff all checks
in it hold. Library errors map to the exit codes in :mod:`pachgap.errors`
and are reported as a JSON object on stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__, sweep
from .budget import Budgets
from .coboundary import parse_complex
from .complex_maps import embedding_bundle
from .errors import GenericPositionError, PachgapError, ParameterError
from .expander import expansion_csv
from .extraction import (MAX_EXACT_CLASS, MAX_EXACT_CLASSES, extract_box, largest_extracted,
                         max_box_exact, parse_hypergraph)
from .fq import check_prime
from .lattice import build_subspace_lattice, to_json


def _json_default(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (set, frozenset, tuple)):
        return list(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, default=_json_default, ensure_ascii=False) + "\n"


def _emit(text: str, out: str | None, name: str | None = None):
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    if name is not None:
        path.mkdir(parents=True, exist_ok=True)
        path = path / name
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _budgets(args) -> Budgets:
    over = {}
    for key in ("subsets", "partitions", "chains", "cochain_bits"):
        v = getattr(args, f"budget_{key}", None)
        if v is not None:
            over[key] = v
    return Budgets.from_env(**over)


def _check_dq(args):
    if args.d < 1:
        raise ParameterError(f"d must be >= 1, got {args.d}")
    check_prime(args.q)


def _wrap(doc: dict, args) -> dict:
    return {"version": __version__, "command": args.command, "seed": args.seed, **doc}


def cmd_lattice(args) -> int:
    _check_dq(args)
    rep = sweep.lattice_section(args.d, args.q, args.seed)
    L = build_subspace_lattice(args.d + 1, args.q)
    rep["lattice"] = json.loads(to_json(L))
    _emit(dumps(_wrap(rep, args)), args.out)
    return 0 if rep["ok"] else 1


def cmd_expansion(args) -> int:
    _check_dq(args)
    rep, recs = sweep.expansion_section(args.d, args.q, _budgets(args))
    _emit(expansion_csv(recs), args.out)
    if not rep["ok"]:
        sys.stderr.write(dumps({"error": "InvariantViolation", "rows": rep["rows"]}))
    return 0 if rep["ok"] else 1


def cmd_map(args) -> int:
    _check_dq(args)
    rep, M = sweep.map_section(args.d, args.q, args.seed, args.verify_mode, args.extra, _budgets(args))
    rep["bundle"] = json.loads(embedding_bundle(M.L, M.E))
    _emit(dumps(_wrap(rep, args)), args.out)
    return 0 if rep["ok"] else 1


def cmd_tau(args) -> int:
    _check_dq(args)
    b = _budgets(args)
    _, M = sweep.map_section(args.d, args.q, args.seed, args.verify_mode, 0, b)
    rep = sweep.tau_section(M, args.n, args.seed, b, args.chain_n)
    _emit(dumps(_wrap(rep, args)), args.out)
    return 0 if rep["ok"] else 1


def _read_input(args) -> str:
    if args.input is None:
        raise ParameterError("--input is required")
    if args.input == "-":
        return sys.stdin.read()
    try:
        return Path(args.input).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParameterError(f"cannot read {args.input}: {exc.strerror}") from None


def cmd_hk(args) -> int:
    X = parse_complex(_read_input(args))
    ks = None if args.k is None else [args.k]
    rep = sweep.hk_section(X, ks, _budgets(args))
    _emit(dumps(_wrap(rep, args)), args.out)
    return 0 if rep["ok"] else 1


def cmd_extract(args) -> int:
    F = parse_hypergraph(_read_input(args))
    r = extract_box(F, args.m) if args.m is not None else largest_extracted(F)
    doc = {"sizes": list(F.sizes), "edges": len(F.edges), "m": r.m,
           "box": [list(Z) for Z in r.witness] if r.witness else None}
    ok = r.box is None or F.is_complete_box(r.box)
    if len(F.classes) <= MAX_EXACT_CLASSES and max(F.sizes) <= MAX_EXACT_CLASS:
        ex = max_box_exact(F)
        doc["exact_m"] = ex.m
        doc["exact_box"] = [list(Z) for Z in ex.witness] if ex.witness else None
        ok = ok and r.m <= ex.m
    doc["ok"] = ok
    _emit(dumps(_wrap(doc, args)), args.out)
    return 0 if ok else 1


def cmd_baseline(args) -> int:
    rep = sweep.baseline_section(args.seed, args.n, args.count)
    _emit(dumps(_wrap(rep, args)), args.out)
    return 0 if rep["ok"] else 1


def cmd_all(args) -> int:
    rep = sweep.run_all(args.seed, args.verify_mode, _budgets(args))
    rep["command"] = "all"
    if args.out is None:
        _emit(dumps(rep), None)
    else:
        _emit(dumps(rep), args.out, "report.json")
        _, recs = sweep.expansion_section(2, 2, _budgets(args))
        _emit(expansion_csv(recs), args.out, "expansion_fano.csv")
    return 0 if rep["ok"] else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pachgap", description="Exact checks for lattice-based selection bounds.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, dq=True):
        if dq:
            sp.add_argument("--d", type=int, default=2, help="target dimension; the lattice is L(d+1, q)")
            sp.add_argument("--q", type=int, default=2, help="prime field size")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", help="output file (directory for 'all'); default stdout")
        sp.add_argument("--verify-mode", choices=("sampled", "exhaustive"), default="exhaustive")
        sp.add_argument("--budget-subsets", type=int)
        sp.add_argument("--budget-partitions", type=int)
        sp.add_argument("--budget-chains", type=int)
        sp.add_argument("--budget-cochain-bits", type=int)
        return sp

    sp = common(sub.add_parser("lattice", help="build, validate and serialize L(d+1, q)"))
    sp.set_defaults(func=cmd_lattice)
    sp = common(sub.add_parser("expansion", help="CSV of min vertex expansion and lower bounds over m"))
    sp.set_defaults(func=cmd_expansion)
    sp = common(sub.add_parser("map", help="generic embedding and coatom cover sweep"))
    sp.add_argument("--extra", type=int, default=1000, help="seeded extra sweep points")
    sp.set_defaults(func=cmd_map)
    sp = common(sub.add_parser("tau", help="homogeneous box search with counting checks"))
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--chain-n", type=int, help="n for the arithmetic chain (default (2d)^d)")
    sp.set_defaults(func=cmd_tau)
    sp = common(sub.add_parser("hk", help="coboundary expansion of a complex file"), dq=False)
    sp.add_argument("--input", help="one top face per line; '-' for stdin")
    sp.add_argument("--k", type=int)
    sp.set_defaults(func=cmd_hk)
    sp = common(sub.add_parser("extract", help="box extraction on a hypergraph file"), dq=False)
    sp.add_argument("--input", help="'classes: ...' header then one edge per line; '-' for stdin")
    sp.add_argument("--m", type=int)
    sp.set_defaults(func=cmd_extract)
    sp = common(sub.add_parser("baseline", help="affine interval and first-selection baselines"), dq=False)
    sp.add_argument("--n", type=int, default=4)
    sp.add_argument("--count", type=int, default=20)
    sp.set_defaults(func=cmd_baseline)
    sp = common(sub.add_parser("all", help="full verification sweep"), dq=False)
    sp.set_defaults(func=cmd_all)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PachgapError as exc:
        diag = {"error": type(exc).__name__, "message": str(exc), "exit_code": exc.exit_code}
        if isinstance(exc, GenericPositionError) and exc.family is not None:
            diag["family"] = exc.family
        sys.stderr.write(dumps(diag))
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
