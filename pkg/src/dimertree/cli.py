"""Command-line front end.

Subcommands: validate, weights, polygon, diag, resolve, reduce, oracle, all.
Exit status 0 when every requested check passes, 1 on a failed check, 2 on
bad input, 3 on an internal invariant breach.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import checkerboard as cb
from . import diagonals as dg
from . import mutation as mu
from . import oracle as orc
from . import syzygy as sy
from .linalg import DEFAULT_PRIME, FieldError, parse_field_spec
from .quiver import QuiverError, load_quiver, validate_dimer_tree, weight_report

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_BAD_INPUT = 2
EXIT_INTERNAL = 3


class _CheckFailure(Exception):
    pass


def _default_field() -> str:
    return os.environ.get("DIMERTREE_FIELD", str(DEFAULT_PRIME))


def _load(path: str):
    try:
        return load_quiver(path)
    except (OSError, QuiverError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_BAD_INPUT)


def _require_valid(q):
    report = validate_dimer_tree(q)
    if not report.ok:
        for c in report.failed():
            print(f"FAIL {c.name}: {c.detail}", file=sys.stderr)
        raise SystemExit(EXIT_BAD_INPUT)
    return report


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_validate(args) -> int:
    q = _load(args.quiver)
    report = validate_dimer_tree(q)
    for c in report.checks:
        mark = "pass" if c.passed else "FAIL"
        detail = f"  ({c.detail})" if c.detail else ""
        print(f"{mark}  {c.name}{detail}")
    for p in report.structure.problems:
        print(f"note  {p}")
    print(f"cycles: {len(report.structure.cycles)}  "
          f"boundary arrows: {len(report.structure.boundary_arrows)}  "
          f"interior arrows: {len(report.structure.interior_arrows)}")
    return EXIT_OK if report.ok else EXIT_CHECK_FAILED


def cmd_weights(args) -> int:
    q = _load(args.quiver)
    report = _require_valid(q)
    wr = weight_report(q, report.structure)
    if args.format == "structured":
        doc = {
            "total_weight": wr.total_weight,
            "half": wr.half,
            "entries": [{
                "arrow": e.arrow,
                "weight": e.weight,
                "coweight": e.coweight,
                "cycle_path": list(e.cycle_path.arrows),
                "cocycle_path": list(e.cocycle_path.arrows),
            } for e in wr.entries],
        }
        _emit(json.dumps(doc, indent=2, default=str) + "\n", args.out)
        return EXIT_OK
    rows = [(e.cycle_path.pretty(q), e.weight, e.arrow) for e in wr.entries]
    width = max(len(r[0]) for r in rows)
    print(f"{'cycle path':<{width}}  weight  arrow")
    for path, w, arrow in rows:
        print(f"{path:<{width}}  {w:>6}  {arrow}")
    print(f"total weight: {wr.total_weight}  (polygon size 2N with N={wr.half})")
    return EXIT_OK


def cmd_polygon(args) -> int:
    q = _load(args.quiver)
    report = _require_valid(q)
    try:
        cp = cb.build_checkerboard(q, seed_arrow=args.seed,
                                   structure=report.structure)
    except cb.CheckerboardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    val = cb.validate_checkerboard(cp, q, report.structure)
    for c in val.checks:
        mark = "pass" if c.passed else "FAIL"
        print(f"{mark}  {c.name}" + (f"  ({c.detail})" if c.detail else ""),
              file=sys.stderr if not c.passed else sys.stdout)
    if args.format != "text":
        _emit(cb.render(cp, args.format), args.out)
    else:
        print(f"polygon size: {cp.size}")
        for v, line in sorted(cp.lines.items(), key=lambda kv: str(kv[0])):
            print(f"  line {v}: ({line.tail},{line.head})  "
                  f"crossings {', '.join(line.crossings)}")
    return EXIT_OK if val.ok else EXIT_CHECK_FAILED


def cmd_diag(args) -> int:
    if args.size is not None:
        if args.size % 2 != 0 or args.size < 6:
            print("error: --size must be an even number >= 6", file=sys.stderr)
            return EXIT_BAD_INPUT
        n = args.size // 2
    else:
        if not args.quiver:
            print("error: need --size 2N or a quiver file", file=sys.stderr)
            return EXIT_BAD_INPUT
        q = _load(args.quiver)
        report = _require_valid(q)
        n = weight_report(q, report.structure).half
    tq = dg.ar_quiver(n)
    if args.format == "dot":
        _emit(dg.translation_quiver_dot(tq), args.out)
        return EXIT_OK
    if args.format == "structured":
        doc = {
            "n": n,
            "diagonals": [[d.tail, d.head] for d in tq.nodes],
            "arrows": [[[s.tail, s.head], [t.tail, t.head]]
                       for s, t in tq.arrows],
            "tau": {f"{x.tail},{x.head}": [tx.tail, tx.head]
                    for x, tx in sorted(tq.tau.items())},
            "meshes": [{
                "target": [m.target.tail, m.target.head],
                "tau_target": [m.tau_target.tail, m.tau_target.head],
                "middles": [[d.tail, d.head] for d in m.middles],
            } for m in tq.meshes],
        }
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
        return EXIT_OK
    print(f"2N = {2 * n}: {len(tq.nodes)} 2-diagonals, {len(tq.arrows)} pivots, "
          f"{len(tq.tau_orbits())} rotation-square orbits")
    print(f"translation axiom: {'pass' if tq.check_translation_axiom() else 'FAIL'}")
    for m in tq.meshes:
        mids = " + ".join(str(d) for d in m.middles)
        print(f"  mesh at {m.target}: {m.tau_target} -> {mids} -> {m.target}")
    bij = dg.arc_bijection_report(n)
    print(f"boundary-arc bijection: {'pass' if bij.ok else 'FAIL ' + bij.detail}")
    return EXIT_OK if tq.check_translation_axiom() and bij.ok else EXIT_CHECK_FAILED


def _parse_diagonal(spec: str, n: int) -> dg.TwoDiagonal:
    try:
        a, b = (int(x) for x in spec.split(","))
        return dg.make_diagonal(a, b, n)
    except (ValueError, dg.DiagonalError) as exc:
        print(f"error: bad diagonal {spec!r}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_BAD_INPUT)


def cmd_resolve(args) -> int:
    q = _load(args.quiver)
    report = _require_valid(q)
    cp = cb.build_checkerboard(q, structure=report.structure)
    d = _parse_diagonal(args.diagonal, cp.half)
    trace = sy.resolution(cp, d, steps=args.steps)
    if args.format == "structured":
        doc = {
            "diagonal": [d.tail, d.head],
            "minimal_period": trace.minimal_period,
            "gluing_ok": trace.gluing_ok,
            "steps": [{"diagonal": [s.diagonal.tail, s.diagonal.head],
                       "P1": list(s.p1), "P0": list(s.p0)}
                      for s in trace.steps],
        }
        _emit(json.dumps(doc, indent=2, default=str) + "\n", args.out)
    else:
        for i, s in enumerate(trace.steps):
            print(f"step {i}: {s.diagonal}  P1={list(s.p1)}  P0={list(s.p0)}")
        print(f"minimal period: {trace.minimal_period}  "
              f"gluing: {'pass' if trace.gluing_ok else 'FAIL'}")
    return EXIT_OK if trace.gluing_ok else EXIT_CHECK_FAILED


def cmd_reduce(args) -> int:
    q = _load(args.quiver)
    _require_valid(q)
    try:
        trace = mu.reduce_to_cycle(q)
    except mu.ReductionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.trace is not None and args.trace:
            _emit(mu.trace_to_json(exc.trace), args.trace)
        return EXIT_INTERNAL
    if args.trace:
        _emit(mu.trace_to_json(trace), args.trace)
    print(f"moves: {len(trace.steps)}")
    for s in trace.steps:
        print(f"  {s.move.kind} at {s.move.site}  [{s.move.equivalence}] "
              f"weight {s.move.weight_before}->{s.move.weight_after}")
    print(f"final: single cycle of length {trace.final_cycle_length}")
    return EXIT_OK


ORACLE_CHECKS = ("schurian", "extension", "radicals", "boundary-ext", "all")


def cmd_oracle(args) -> int:
    q = _load(args.quiver)
    _require_valid(q)
    try:
        field = parse_field_spec(args.field)
    except FieldError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    ab = orc.build_algebra(q, field, max_cap=args.cap)
    print(f"algebra over {field.name}: dimension {ab.dimension}, "
          f"stabilization length {ab.stabilization_length}")
    items = []
    if args.check in ("schurian", "all"):
        ok, counter = orc.schurian_check(ab)
        items.append(orc.CheckItem("schurian", ok, "; ".join(counter)))
    if args.check in ("extension", "all"):
        for e in ab.weights.entries:
            items.append(orc.CheckItem(
                f"extension_right[{e.arrow}]",
                orc.extension_lemma_check(ab, e.arrow, "right")))
            items.append(orc.CheckItem(
                f"extension_left[{e.arrow}]",
                orc.extension_lemma_check(ab, e.arrow, "left")))
    if args.check in ("radicals", "all"):
        items.extend(orc.radical_presentation_check(ab).items)
        items.extend(orc.radical_ext_arrow_check(ab).items)
        items.extend(orc.radical_indecomposability_check(ab).items)
    if args.check in ("boundary-ext", "all"):
        items.extend(orc.boundary_vanishing_check(ab).items)
    failed = [i for i in items if not i.passed]
    for i in items:
        mark = "pass" if i.passed else "FAIL"
        print(f"{mark}  {i.name}" + (f"  ({i.detail})" if i.detail else ""))
    print(f"{len(items) - len(failed)}/{len(items)} oracle checks passed")
    return EXIT_OK if not failed else EXIT_CHECK_FAILED


def cmd_all(args) -> int:
    q = _load(args.quiver)
    report = validate_dimer_tree(q)
    status = EXIT_OK

    def note(name, ok, detail=""):
        nonlocal status
        print(f"{'pass' if ok else 'FAIL'}  {name}"
              + (f"  ({detail})" if detail else ""))
        if not ok:
            status = EXIT_CHECK_FAILED

    note("dimer_tree_validation", report.ok,
         "; ".join(c.name for c in report.failed()))
    if not report.ok:
        return EXIT_CHECK_FAILED
    wr = weight_report(q, report.structure)
    note("total_weight_even", wr.total_weight % 2 == 0,
         f"total {wr.total_weight}")
    cp = cb.build_checkerboard(q, structure=report.structure)
    val = cb.validate_checkerboard(cp, q, report.structure)
    note("checkerboard", val.ok, "; ".join(c.name for c in val.failed()))
    tq = dg.ar_quiver(cp.half)
    note("translation_quiver", tq.check_translation_axiom())
    field = parse_field_spec(args.field)
    ab = orc.build_algebra(q, field)
    rep = orc.full_oracle_report(ab)
    note(f"oracle[{field.name}]", rep.ok,
         "; ".join(i.name for i in rep.failed())[:200])
    cons = sy.radical_consistency_check(cp, ab)
    note("model_oracle_consistency", cons.ok,
         "; ".join(i.name for i in cons.failed())[:200])
    periods_ok = True
    gluing_ok = True
    for d in dg.enumerate_diagonals(cp.half):
        tr = sy.resolution(cp, d)
        gluing_ok = gluing_ok and tr.gluing_ok
        periods_ok = periods_ok and tr.minimal_period in (cp.half, 2 * cp.half)
    note("resolution_gluing", gluing_ok)
    note("resolution_periods", periods_ok)
    try:
        trace = mu.reduce_to_cycle(q)
        note("reduction", trace.final_cycle_length == wr.half,
             f"final length {trace.final_cycle_length}")
    except mu.ReductionError as exc:
        note("reduction", False, str(exc))
    return status


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dimertree",
        description="Dimer tree quivers: weights, checkerboard polygons, "
                    "syzygy combinatorics, mutation, and the path-algebra oracle.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("validate", help="structural axioms of the input quiver")
    sp.add_argument("quiver")
    sp.set_defaults(fn=cmd_validate)

    sp = sub.add_parser("weights", help="cycle paths, weights and total weight")
    sp.add_argument("quiver")
    sp.add_argument("--format", choices=("text", "structured"), default="text")
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_weights)

    sp = sub.add_parser("polygon", help="build and validate the checkerboard polygon")
    sp.add_argument("quiver")
    sp.add_argument("--format", choices=("text", "structured", "svg", "dot"),
                    default="text")
    sp.add_argument("--seed", help="boundary arrow to start the construction")
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_polygon)

    sp = sub.add_parser("diag", help="2-diagonals and their translation quiver")
    sp.add_argument("quiver", nargs="?")
    sp.add_argument("--size", type=int, help="polygon size 2N")
    sp.add_argument("--format", choices=("text", "structured", "dot"),
                    default="text")
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_diag)

    sp = sub.add_parser("resolve", help="periodic projective resolution of a diagonal")
    sp.add_argument("quiver")
    sp.add_argument("--diagonal", required=True, metavar="A,B")
    sp.add_argument("--steps", type=int, default=None)
    sp.add_argument("--format", choices=("text", "structured"), default="text")
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_resolve)

    sp = sub.add_parser("reduce", help="reduce to a single cycle by equivalences")
    sp.add_argument("quiver")
    sp.add_argument("--trace", help="write the move trace to this file")
    sp.set_defaults(fn=cmd_reduce)

    sp = sub.add_parser("oracle", help="path-algebra checks over a chosen field")
    sp.add_argument("quiver")
    sp.add_argument("--check", choices=ORACLE_CHECKS, default="all")
    sp.add_argument("--field", default=_default_field(),
                    help="prime p or Q (default from DIMERTREE_FIELD)")
    sp.add_argument("--cap", type=int, default=None,
                    help="path-length cap for the basis build (default 4x arrows)")
    sp.set_defaults(fn=cmd_oracle)

    sp = sub.add_parser("all", help="full pipeline and consistency suite")
    sp.add_argument("quiver")
    sp.add_argument("--field", default=_default_field())
    sp.set_defaults(fn=cmd_all)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SystemExit:
        raise
    except (QuiverError, cb.CheckerboardError, dg.DiagonalError,
            sy.SyzygyError, FieldError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (orc.OracleError, mu.MutationError, mu.ReductionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    raise SystemExit(main())
