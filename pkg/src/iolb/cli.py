"""Command-line front end.

    iolb analyze PROGRAM [--set N=100 --s 10] [--trace] [--json OUT]
    iolb pebble CDAG --s 3 [--variant nr] [--no-slide] [--parts FILE --mode standard]
    iolb partition CDAG --s 3 [--variant hk] [--parts FILE]
    iolb instantiate PROGRAM --set N=5 --set T=3 [-o OUT]
    iolb check [--seed 0] [--count 50] [--mutate]

Exit codes: 0 success, 1 usage, 2 input error, 3 cap exceeded, 4 check failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import asymbound as ab
from .checks import run_all
from .dfgraph import VertexCapExceeded, classify_edges, instantiate, parse_program
from .paramlp import ParametricArityError
from .pathfind import MAX_LEN, analyze_program
from .pebblelab import (FLEXIBLE, HK, NR, STANDARD, STD, CalculationError, CapExceeded,
                        CDAGError, Partition, decompose, hmin_bruteforce, min_io, parse_cdag,
                        parse_moves, partition_from_calculation, validate_calculation,
                        verify_partition)
from .polyset import ParseError

OK, USAGE, INPUT_ERROR, CAP_EXCEEDED, CHECK_FAILED = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _binding(pairs) -> dict:
    out = {}
    for p in pairs or ():
        name, sep, val = p.partition("=")
        if not sep or not name.strip():
            raise UsageError(f"--set expects NAME=VALUE, got {p!r}")
        try:
            v = int(val)
        except ValueError:
            raise UsageError(f"--set {name}: {val!r} is not an integer") from None
        if v < 1:
            raise UsageError(f"--set {name}: bindings must be positive")
        out[name.strip()] = v
    return out


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise ValueError(f"cannot read {path}: {e.strerror}") from None


def _read_parts(path) -> list:
    parts = []
    for line in _read(path).splitlines():
        line = line.split("#", 1)[0].split()
        if line:
            parts.append(line)
    return parts


def _labelled(label, text, indent="") -> list:
    """First line after the label, continuation lines aligned under it."""
    first, *rest = text.splitlines() or [""]
    pad = " " * (len(indent) + len(label))
    return [indent + label + first] + [pad + r for r in rest]


def _write_json(path, data):
    if path:
        Path(path).write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


# ---- analyze --------------------------------------------------------------------------

def _vertex_report(va) -> tuple:
    lines = [f"  {va.name} (dim {va.dim})"]
    rec = {"name": va.name, "dim": va.dim, "bound": ab.as_json(va.complexity)}
    if va.chosen is None:
        lines.append("    no projection set")
        lines += _labelled("bound: ", ab.render(va.complexity), "    ")
        return lines, rec
    paths = []
    for p, k, t in zip(va.chosen.paths, va.chosen.K, va.tagged):
        flag = "tagged" if t else "untagged"
        lines.append(f"    {p.kind} {p}  subspace {k}  {flag}")
        paths.append({"kind": p.kind, "edges": list(p.names), "subspace": str(k), "tagged": t})
    lines.extend("    " + s for s in va.lp.render().splitlines())
    lines += _labelled("solution: ", va.solution.render(), "    ")
    lines += _labelled("bound: ", ab.render(va.complexity), "    ")
    rec.update({
        "paths": paths,
        "lp": {"basis": [list(map(str, b)) for b in va.lp.basis],
               "rows": [{"support": [i + 1 for i in r.support], "rhs": str(r.rhs), "kind": r.kind}
                        for r in va.lp.rows]},
        "solution": [{"region": [str(c) for c in case.region],
                      "x": [str(x) for x in case.x], "objective": str(case.theta)}
                     for case in va.solution.cases],
    })
    return lines, rec


def cmd_analyze(args, out) -> int:
    spec = parse_program(_read(args.program))
    g = classify_edges(spec)
    trace = [] if args.trace else None
    res = analyze_program(g, args.max_circuit, trace)
    warnings = []
    if not spec.edges:
        warnings.append("program has no edges; the bound is zero")
    lines = [f"program {Path(args.program).name}", "edges"]
    for e in g.edges:
        lines.append(f"  {e.name}: {e.src} -> {e.dst}  {e.cls.value}")
    groups = []
    for grp in res.groups:
        lines.append(f"group {grp.name}: {', '.join(grp.members)}")
        verts = []
        for name in sorted(grp.analysis.vertices):
            vl, rec = _vertex_report(grp.analysis.vertices[name])
            lines.extend(vl)
            verts.append(rec)
        lines += _labelled("group total: ", ab.render(grp.analysis.total), "  ")
        groups.append({"name": grp.name, "members": list(grp.members), "vertices": verts,
                       "total": ab.as_json(grp.analysis.total)})
    for rep in spec.repeats:
        lines.append(f"repeat {rep.factor} x ({', '.join(rep.groups)})")
    lines += _labelled("total: ", ab.render(res.total))
    lines += _labelled("inputs + outputs: ", ab.render(res.io_count))
    report = {"program": Path(args.program).name, "groups": groups,
              "total": ab.as_json(res.total), "io_count": ab.as_json(res.io_count),
              "repeats": [{"factor": r.factor, "groups": list(r.groups)} for r in spec.repeats]}
    binding = _binding(args.set)
    if binding:
        missing = [p for p in spec.params.names if p not in binding]
        if missing:
            raise ValueError(f"parameter {missing[0]} is not bound")
        if args.s is None:
            raise UsageError("evaluating the bound needs --s")
        at = {**binding, ab.CACHE: args.s}
        value = ab.eval_at(res.total, at)
        where = ", ".join(f"{k}={v}" for k, v in sorted(binding.items()))
        lines.append(f"value at {where}, S={args.s}: {value:.6g}")
        report["value"] = {"binding": at, "value": value}
    if trace is not None:
        lines.append("trace")
        lines.extend("  " + t for t in trace)
        report["trace"] = trace
    for w in warnings:
        lines.append("warning: " + w)
    report["warnings"] = warnings
    out.write("\n".join(lines) + "\n")
    _write_json(args.json, report)
    return OK


# ---- pebble ---------------------------------------------------------------------------

def _solve(c, args):
    return min_io(c, args.s, args.variant, not args.no_slide, budget=args.budget,
                  vertex_cap=args.vertex_cap)


def cmd_pebble(args, out) -> int:
    c = parse_cdag(_read(args.cdag))
    lines = [f"cdag {Path(args.cdag).name}: {len(c)} vertices, {len(c.edges)} edges, "
             f"S={args.s}, variant {args.variant}{', no slide' if args.no_slide else ''}"]
    report = {"cdag": Path(args.cdag).name, "S": args.s, "variant": args.variant,
              "slide": not args.no_slide}
    if args.validate:
        calc = parse_moves(_read(args.validate))
        q = validate_calculation(c, args.s, calc, args.variant, not args.no_slide,
                                 implicit_evict=args.implicit_evict)
        lines.append(f"calculation {Path(args.validate).name}: {len(calc)} moves, {q} I/O")
        report["validated"] = {"moves": len(calc), "io": q}
    if args.parts:
        parts = _read_parts(args.parts)
        subs = decompose(c, parts, args.mode)
        total = 0
        report["parts"] = []
        for k, sub in enumerate(subs):
            r = _solve(sub, args)
            total += r.q
            lines.append(f"part {k + 1} ({args.mode}): q = {r.q}{'' if r.optimal else ' (upper bound)'}")
            report["parts"].append({"vertices": parts[k], "q": r.q, "optimal": r.optimal,
                                    "witness": [str(m) for m in r.witness.moves]})
        lines.append(f"sum over parts: {total}")
        report["sum"] = total
    else:
        r = _solve(c, args)
        status = "optimal" if r.optimal else "upper bound, budget exhausted"
        lines.append(f"q = {r.q} ({status})")
        lines.append(f"witness: {r.witness}")
        report.update({"q": r.q, "optimal": r.optimal,
                       "witness": [str(m) for m in r.witness.moves]})
        if not r.optimal:
            report["warnings"] = ["search budget exhausted; q is from a greedy schedule"]
            lines.append("warning: search budget exhausted; q is from a greedy schedule")
    out.write("\n".join(lines) + "\n")
    _write_json(args.json, report)
    return OK


# ---- partition ------------------------------------------------------------------------

def cmd_partition(args, out) -> int:
    c = parse_cdag(_read(args.cdag))
    S = args.s
    bound = 2 * S
    definition = HK if args.variant == HK else NR
    lines = [f"cdag {Path(args.cdag).name}: {len(c)} vertices, S={S}, "
             f"{definition} partitions with bound {bound}"]
    report = {"cdag": Path(args.cdag).name, "S": S, "definition": definition, "bound": bound}
    if args.parts:
        part = Partition.of(_read_parts(args.parts))
        source = Path(args.parts).name
    else:
        r = min_io(c, S, NR, not args.no_slide, budget=args.budget,
                   vertex_cap=args.vertex_cap)
        part = partition_from_calculation(c, S, r.witness)
        source = f"no-recompute calculation with {r.q} I/O"
        report["q"] = r.q
    verdict = verify_partition(c, part, bound, definition)
    lines.append(f"partition from {source}: {part.h} blocks, "
                 f"{'valid' if verdict else 'INVALID'}")
    for k, block in enumerate(part.subsets):
        lines.append(f"  V{k + 1}: {' '.join(sorted(block, key=c.index.get))}")
    for v in verdict.violations:
        lines.append(f"  violation: {v}")
    h = hmin_bruteforce(c, bound, definition, cap=args.vertex_cap)
    lines.append(f"hmin = {h}, lower bound S*(hmin-1) = {S * (h - 1)}")
    report.update({"blocks": [sorted(b, key=c.index.get) for b in part.subsets],
                   "valid": verdict.ok, "violations": [str(v) for v in verdict.violations],
                   "hmin": h, "lower_bound": S * (h - 1)})
    out.write("\n".join(lines) + "\n")
    _write_json(args.json, report)
    return OK if verdict else CHECK_FAILED


# ---- instantiate ----------------------------------------------------------------------

def cmd_instantiate(args, out) -> int:
    spec = parse_program(_read(args.program))
    c = instantiate(spec, _binding(args.set), cap=args.vertex_cap)
    text = c.to_text()
    if args.output:
        Path(args.output).write_text(text)
        out.write(f"wrote {len(c)} vertices and {len(c.edges)} edges to {args.output}\n")
    else:
        out.write(text)
    _write_json(args.json, {"vertices": list(c.ids),
                            "inputs": sorted(c.ids[v] for v in c.inputs),
                            "outputs": sorted(c.ids[v] for v in c.outputs),
                            "edges": [[c.ids[a], c.ids[b]] for a, b in c.edges]})
    return OK


# ---- check ----------------------------------------------------------------------------

def cmd_check(args, out) -> int:
    results = run_all(args.seed, args.count, args.mutate)
    lines = [r.line(timing=args.timing) for r in results]
    failed = [r for r in results if not r.ok]
    for r in failed:
        lines.append(f"counterexamples for {r.name}:")
        for v in r.violations[:3]:
            lines.append("  " + repr(v))
    lines.append("all suites pass" if not failed else f"{len(failed)} suites failed")
    out.write("\n".join(lines) + "\n")
    _write_json(args.json, [{"suite": r.name, "instances": r.cases, "skipped": r.skipped,
                             "violations": [repr(v) for v in r.violations]} for r in results])
    return OK if not failed else CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="also write a machine-readable report")
    common.add_argument("--vertex-cap", type=_positive, default=None)

    game = argparse.ArgumentParser(add_help=False)
    game.add_argument("--s", type=_positive, required=True, help="fast memory size")
    game.add_argument("--no-slide", action="store_true", help="forbid sliding a red pebble")
    game.add_argument("--budget", type=_positive, default=2_000_000,
                      help="A* state budget before falling back to a greedy schedule")
    game.add_argument("--parts", metavar="FILE", help="one part per line, vertex ids separated by spaces")

    p = _Parser(prog="iolb", description="I/O lower bounds for affine programs and pebble games.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", parents=[common], help="derive a symbolic lower bound")
    a.add_argument("program")
    a.add_argument("--set", action="append", metavar="NAME=VALUE")
    a.add_argument("--s", type=_positive, help="evaluate the bound at this cache size")
    a.add_argument("--max-circuit", type=_positive, default=MAX_LEN)
    a.add_argument("--trace", action="store_true")
    a.set_defaults(func=cmd_analyze)

    pb = sub.add_parser("pebble", parents=[common, game], help="exact red/blue pebbling optimum")
    pb.add_argument("cdag")
    pb.add_argument("--variant", choices=(STD, NR), default=STD)
    pb.add_argument("--mode", choices=(STANDARD, FLEXIBLE), default=FLEXIBLE)
    pb.add_argument("--validate", metavar="FILE", help="replay a move list and report its cost")
    pb.add_argument("--implicit-evict", action="store_true",
                    help="let the replayed list leave red-pebble deletions implicit")
    pb.set_defaults(func=cmd_pebble)

    pt = sub.add_parser("partition", parents=[common, game], help="build and check S-partitions")
    pt.add_argument("cdag")
    pt.add_argument("--variant", choices=(HK, NR), default=NR)
    pt.set_defaults(func=cmd_partition)

    i = sub.add_parser("instantiate", parents=[common], help="expand a program into a CDAG")
    i.add_argument("program")
    i.add_argument("--set", action="append", metavar="NAME=VALUE")
    i.add_argument("-o", "--output")
    i.set_defaults(func=cmd_instantiate)

    c = sub.add_parser("check", parents=[common], help="run the randomized theorem suites")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--count", type=_positive, default=50)
    c.add_argument("--mutate", action="store_true", help="use a deliberately broken checker")
    c.add_argument("--timing", action="store_true", help="print suite run times")
    c.set_defaults(func=cmd_check)
    return p


_DEFAULT_CAPS = {"pebble": 14, "partition": 14, "instantiate": 10_000}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if args.vertex_cap is None:
            args.vertex_cap = _DEFAULT_CAPS.get(args.command, 14)
        return args.func(args, out)
    except UsageError as e:
        print(f"iolb: usage error: {e}", file=sys.stderr)
        return USAGE
    except (CapExceeded, VertexCapExceeded, ParametricArityError) as e:
        print(f"iolb: cap exceeded: {e}", file=sys.stderr)
        return CAP_EXCEEDED
    except (ParseError, CDAGError, CalculationError, ValueError) as e:
        print(f"iolb: input error: {e}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
