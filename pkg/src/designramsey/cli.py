"""Command-line entry point.

Exit codes: 0 success, 1 negative verdict, 2 budget exceeded, 64 usage error,
65 malformed or invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import amalgamation, enumeration, morphisms, ramsey
from .errors import BudgetExceeded, DesignError, MalformedInput
from .structures import (
    OrderedDesign,
    decode,
    encode,
    format_design,
    format_structure,
    make_params,
    parse_design,
    parse_map,
    parse_structure,
    validate,
)

EXIT_OK, EXIT_NO, EXIT_BUDGET, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 64, 65


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class Result:
    def __init__(self, code=EXIT_OK, lines=(), record=None):
        self.code = code
        self.lines = list(lines)
        self.record = record or {}


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise MalformedInput(f"cannot read {path}: {e.strerror}") from None


def _design(path) -> OrderedDesign:
    return parse_design(_read(path))


def _vertex_set(text: str, n: int) -> list:
    try:
        verts = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--set must be comma-separated integers: {text}") from None
    if any(not 0 <= v < n for v in verts):
        raise UsageError(f"--set has vertices outside 0..{n - 1}")
    return sorted(set(verts))


def _params(args):
    return make_params(args.k, args.t, args.l)


def _write_or_print(text: str, out, lines: list) -> None:
    if out:
        Path(out).write_text(text)
    else:
        lines.extend(text.rstrip("\n").split("\n"))


def _carrier(d: OrderedDesign, ordered: bool):
    return d if ordered else d.design


# -- subcommands -------------------------------------------------------------


def cmd_validate(args):
    d = parse_design(_read(args.file), strict=False).design
    report = validate(d)
    lines = ["ok"] if report.ok else [str(v) for v in report.violations]
    record = {"ok": report.ok, "violations": [[v.rule, list(v.subset)] for v in report.violations]}
    return Result(EXIT_OK if report.ok else EXIT_NO, lines, record)


def cmd_encode(args):
    text = format_structure(encode(_design(args.file)))
    lines: list = []
    _write_or_print(text, args.out, lines)
    return Result(EXIT_OK, lines, {"structure": text})


def cmd_decode(args):
    text = format_design(decode(parse_structure(_read(args.file))))
    lines: list = []
    _write_or_print(text, args.out, lines)
    return Result(EXIT_OK, lines, {"design": text})


def cmd_closure(args):
    d = _design(args.file).design
    cl = sorted(morphisms.closure_of(d, _vertex_set(args.set, d.n)))
    return Result(EXIT_OK, [" ".join(map(str, cl))], {"closure": cl})


def cmd_closed(args):
    d = _design(args.file).design
    sub = _vertex_set(args.set, d.n)
    closed = morphisms.is_closed(d, sub)
    return Result(EXIT_OK if closed else EXIT_NO, ["closed" if closed else "not closed"], {"closed": closed})


def cmd_copies(args):
    A, B = _design(args.A), _design(args.B)
    copies = morphisms.enumerate_copies(_carrier(A, args.ordered), _carrier(B, args.ordered))
    lines = [" ".join(map(str, c.vertices)) for c in copies] + [f"copies {len(copies)}"]
    return Result(EXIT_OK, lines, {"count": len(copies), "copies": [list(c.vertices) for c in copies]})


def cmd_canon(args):
    d = _design(args.file)
    x = _carrier(d, args.ordered)
    canon = morphisms.canonical_design(x, ordered=args.ordered)
    digest = morphisms.canonical_digest(x, ordered=args.ordered)
    lines = [digest]
    if args.design:
        lines.extend(format_design(canon).rstrip("\n").split("\n"))
    return Result(EXIT_OK, lines, {"digest": digest, "design": format_design(canon)})


def _amalgam_output(problem, result, out):
    cert = amalgamation.certify(problem, result)
    lines: list = []
    _write_or_print(format_design(result.C), out, lines)
    lines += [f"# check {name} {'pass' if ok else 'FAIL'}" for name, ok in cert.items()]
    lines.append("# beta2 " + " ".join(f"{y}->{b}" for y, b in enumerate(result.beta2)))
    record = {
        "design": format_design(result.C),
        "beta1": list(result.beta1),
        "beta2": list(result.beta2),
        "checks": cert,
    }
    return Result(EXIT_OK if all(cert.values()) else EXIT_NO, lines, record)


def _map_tuple(mapping: dict, n: int, name: str) -> tuple:
    if set(mapping) != set(range(n)):
        raise MalformedInput(f"{name} must map every vertex 0..{n - 1} of A")
    return tuple(mapping[a] for a in range(n))


def cmd_amalgam(args):
    A, B1, B2 = (_design(p) for p in (args.A, args.B1, args.B2))
    a1 = _map_tuple(parse_map(_read(args.alpha1)), A.design.n, "alpha1")
    a2 = _map_tuple(parse_map(_read(args.alpha2)), A.design.n, "alpha2")
    c = [_carrier(x, args.ordered) for x in (A, B1, B2)]
    problem = amalgamation.AmalgamProblem(c[0], c[1], c[2], a1, a2)
    return _amalgam_output(problem, amalgamation.free_amalgam(problem), args.out)


def cmd_joint(args):
    B1, B2 = _carrier(_design(args.B1), args.ordered), _carrier(_design(args.B2), args.ordered)
    A = amalgamation.empty_like(B1)
    problem = amalgamation.AmalgamProblem(A, B1, B2, (), ())
    return _amalgam_output(problem, amalgamation.free_amalgam(problem), args.out)


def cmd_axioms(args):
    report = amalgamation.check_class_axioms(_params(args), args.bound, budget=args.budget)
    verdicts = {
        "hereditary": report.hereditary,
        "joint-embedding": report.joint_embedding,
        "amalgamation": report.amalgamation,
    }
    checks = {
        "hereditary": report.hereditary_checks,
        "joint-embedding": report.jep_checks,
        "amalgamation": report.amalgamation_checks,
    }
    lines = [f"structures {report.structures}"]
    lines += [f"{k} {'holds' if v else 'fails'} {checks[k]}" for k, v in verdicts.items()]
    lines += [f"counterexample {c!r}" for c in report.counterexamples[:20]]
    record = {"structures": report.structures, "axioms": verdicts, "checks": checks}
    return Result(EXIT_OK if report.holds() else EXIT_NO, lines, record)


def cmd_orderings(args):
    d = _design(args.file).design
    orders = ramsey.orderings(d, dedupe=args.dedupe, max_n=args.max_n)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for i, o in enumerate(orders):
            (out / f"ordering_{i:05d}.design").write_text(format_design(decode(o)))
    lines = [" ".join(map(str, o.order)) for o in orders] + [f"orderings {len(orders)}"]
    return Result(EXIT_OK, lines, {"count": len(orders), "orders": [list(o.order) for o in orders]})


def cmd_arrow(args):
    C, B, A = (_design(p) for p in (args.C, args.B, args.A))
    inst = ramsey.ArrowInstance.build(C, B, A, args.r)
    verdict = ramsey.arrow_check_instance(inst, budget=args.budget)
    record = {
        "holds": verdict.holds,
        "copies_of_A": len(inst.copies_of_A),
        "copies_of_B": len(inst.copies_of_B),
        "nodes": verdict.nodes,
        "witness": list(verdict.witness) if verdict.witness is not None else None,
    }
    if verdict.holds:
        return Result(EXIT_OK, ["holds"], record)
    lines = [f"{i}:{c}" for i, c in enumerate(verdict.witness)]
    return Result(EXIT_NO, lines, record)


def cmd_enumerate(args):
    census = enumeration.enumerate_partial_designs(
        _params(args), args.n, complete_only=args.complete_only, budget=args.budget
    )
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for i, d in enumerate(census.structures):
            (out / f"class_{i:05d}.design").write_text(format_design(d))
    record = {"n": census.n, "classes": census.unlabeled, "labeled": census.labeled}
    return Result(EXIT_OK, [census.summary()], record)


def cmd_complete(args):
    d = _design(args.file).design
    if args.grow_n is not None:
        found = enumeration.complete_growing(d, args.grow_n, budget=args.budget)
    else:
        found = enumeration.complete_design(d, budget=args.budget)
    if found is None:
        return Result(EXIT_NO, ["no completion"], {"complete": False, "design": None})
    lines: list = []
    _write_or_print(format_design(found), args.out, lines)
    return Result(EXIT_OK, lines, {"complete": True, "design": format_design(found)})


def cmd_count_completions(args):
    count = enumeration.count_completions(_design(args.file).design, budget=args.budget)
    return Result(EXIT_OK, [str(count)], {"count": count})


def cmd_admissible(args):
    ok = enumeration.divisibility_admissible(_params(args), args.n)
    return Result(EXIT_OK if ok else EXIT_NO, ["true" if ok else "false"], {"admissible": ok})


# -- parser ------------------------------------------------------------------


def build_parser() -> Parser:
    parser = Parser(prog="designramsey", description=__doc__.splitlines()[0])
    parser.add_argument("--json", action="store_true", help="emit one JSON record per command")
    sub = parser.add_subparsers(dest="command", parser_class=Parser)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        return p

    def params(p, with_n=False):
        p.add_argument("-k", type=int, required=True)
        p.add_argument("-t", type=int, required=True)
        p.add_argument("-l", type=int, required=True, help="lambda")
        if with_n:
            p.add_argument("-n", type=int, required=True)

    p = add("validate", cmd_validate, "check the lambda bound and block shapes")
    p.add_argument("file")
    for name, func in (("encode", cmd_encode), ("decode", cmd_decode)):
        p = add(name, func, f"{name} between design and structure files")
        p.add_argument("file")
        p.add_argument("-o", "--out")
    for name, func in (("closure", cmd_closure), ("closed", cmd_closed)):
        p = add(name, func, "closure of a vertex set" if name == "closure" else "closedness test")
        p.add_argument("file")
        p.add_argument("--set", required=True)
    p = add("copies", cmd_copies, "list copies of A in B")
    p.add_argument("A")
    p.add_argument("B")
    p.add_argument("--ordered", action="store_true")
    p = add("canon", cmd_canon, "canonical form digest")
    p.add_argument("file")
    p.add_argument("--ordered", action="store_true")
    p.add_argument("--design", action="store_true", help="also print the canonical design file")
    p = add("amalgam", cmd_amalgam, "free amalgam of B1 and B2 over A")
    for name in ("A", "B1", "B2", "alpha1", "alpha2"):
        p.add_argument(name)
    p.add_argument("-o", "--out")
    p.add_argument("--ordered", action="store_true")
    p = add("joint", cmd_joint, "disjoint union (joint embedding)")
    p.add_argument("B1")
    p.add_argument("B2")
    p.add_argument("-o", "--out")
    p.add_argument("--ordered", action="store_true")
    p = add("axioms", cmd_axioms, "audit the amalgamation class axioms")
    params(p)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--budget", type=int)
    p = add("orderings", cmd_orderings, "all linear orderings of a design")
    p.add_argument("file")
    p.add_argument("--dedupe", action="store_true")
    p.add_argument("--max-n", type=int, default=8)
    p.add_argument("--out")
    p = add("arrow", cmd_arrow, "check C -> (B)^A_r")
    p.add_argument("--C", required=True)
    p.add_argument("--B", required=True)
    p.add_argument("--A", required=True)
    p.add_argument("-r", type=int, required=True)
    p.add_argument("--budget", type=int)
    p = add("enumerate", cmd_enumerate, "partial designs up to isomorphism")
    params(p, with_n=True)
    p.add_argument("--complete-only", action="store_true")
    p.add_argument("--out")
    p.add_argument("--budget", type=int)
    p = add("complete", cmd_complete, "complete a partial design")
    p.add_argument("file")
    p.add_argument("--grow-n", type=int)
    p.add_argument("--budget", type=int)
    p.add_argument("-o", "--out")
    p = add("count-completions", cmd_count_completions, "count labelled completions")
    p.add_argument("file")
    p.add_argument("--budget", type=int)
    p = add("admissible", cmd_admissible, "divisibility conditions for n points")
    params(p, with_n=True)
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        if getattr(args, "r", 1) < 1:
            raise UsageError("-r must be positive")
        result = args.func(args)
    except UsageError as e:
        print(f"usage error: {e}", file=stderr)
        return EXIT_USAGE
    except BudgetExceeded as e:
        result = Result(EXIT_BUDGET, [f"budget exceeded: {e}"], {"error": "budget", "message": str(e)})
    except DesignError as e:
        print(f"error: {e}", file=stderr)
        if args.json:
            print(json.dumps({"error": type(e).__name__, "message": str(e)}, sort_keys=True), file=stdout)
        return e.exit_code
    if args.json:
        record = dict(result.record, command=args.command, exit=result.code)
        print(json.dumps(record, sort_keys=True), file=stdout)
    else:
        for line in result.lines:
            print(line, file=stdout)
    return result.code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
