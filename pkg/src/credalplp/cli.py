"""Command-line front end.

Exit codes: 0 success, 1 user error, 2 resource guard exceeded,
3 inconsistent program (credal query aborted).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import bayesnet, grounding, inference, models, syntax
from .errors import (
    UNDEFINED,
    InconsistentProgramError,
    NotAcyclicError,
    PlpSyntaxError,
    ResourceGuardError,
)

EXIT_OK = 0
EXIT_USER = 1
EXIT_RESOURCE = 2
EXIT_INCONSISTENT = 3


def _env_int(name: str, default: int) -> int:
    try:
        return int(os.environ.get(name, default))
    except ValueError:
        return default


def _rat(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def _dec(value: Fraction) -> str:
    return format(float(value), ".6g")


def _parse_rational(text: str) -> Fraction:
    value = Fraction(text)
    if not 0 <= value <= 1:
        raise ValueError(f"{text} outside [0, 1]")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="credalplp",
        description="Exact credal / well-founded inference for probabilistic "
        "logic programs.",
    )
    parser.add_argument(
        "--mode", choices=("text", "machine"), default="text",
        help="output style; machine emits one JSON object",
    )
    parser.add_argument(
        "--max-choices", type=int,
        default=_env_int("CREDALPLP_MAX_CHOICES", inference.DEFAULT_MAX_CHOICES),
        help="cap on choice points (2^n total choices)",
    )
    parser.add_argument(
        "--max-ground-rules", type=int,
        default=_env_int(
            "CREDALPLP_MAX_GROUND_RULES", grounding.DEFAULT_MAX_GROUND_RULES
        ),
        help="cap on emitted ground rules",
    )
    parser.add_argument(
        "--no-timing", action="store_true", help="suppress the timing field"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse and report diagnostics")
    p.add_argument("file")

    p = sub.add_parser("ground", help="dump the active ground program")
    p.add_argument("file")
    p.add_argument("--out", help="write the dump to a file instead of stdout")

    p = sub.add_parser("classify", help="acyclic / stratified / general")
    p.add_argument("file")

    p = sub.add_parser("models", help="models for one total choice")
    p.add_argument("file")
    p.add_argument(
        "--choice", default="",
        help="keep/discard bit per choice point, char i = choice id i",
    )
    p.add_argument("--semantics", choices=("stable", "wf"), default="stable")

    p = sub.add_parser("query", help="probability of a query")
    p.add_argument("file")
    p.add_argument("--q", required=True, help="query assignments")
    p.add_argument("--e", default="", help="evidence assignments")
    p.add_argument("--semantics", choices=("credal", "wf", "auto"), default="auto")
    p.add_argument("--gamma", help="emit YES/NO for P > gamma (exact rational)")
    p.add_argument(
        "--cross-check", action="store_true",
        help="verify the enumeration against brute-force oracles when small",
    )
    p.add_argument(
        "--oracle-limit", type=int, default=models.DEFAULT_EXHAUSTIVE_LIMIT,
        help="atom cap for the exhaustive stable-model oracle",
    )

    p = sub.add_parser("consistency", help="stable model for every total choice?")
    p.add_argument("file")

    p = sub.add_parser("export-bn", help="compile an acyclic program to a BN")
    p.add_argument("file")
    p.add_argument("--out", help="write the export to a file instead of stdout")
    return parser


def _load(path: str) -> syntax.Program:
    with open(path, encoding="utf-8") as handle:
        return syntax.parse_program(handle.read(), filename=path)


def _emit(args, record: dict, text_lines: list[str], started: float):
    if not args.no_timing:
        elapsed = (time.perf_counter() - started) * 1000.0
        record["timing_ms"] = round(elapsed, 3)
        text_lines.append(f"timing_ms: {record['timing_ms']}")
    if args.mode == "machine":
        print(json.dumps(record, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _format_choice(g, choice) -> str:
    return choice.describe(g)


def _cmd_check(args, started) -> int:
    program = _load(args.file)
    diags = syntax.lint_program(program, filename=args.file)
    for diag in diags:
        print(str(diag))
    record = {
        "command": "check",
        "rules": len(program.rules),
        "prob_facts": len(program.prob_facts),
        "warnings": len(diags),
    }
    _emit(args, record, [f"ok: {len(program.rules)} rules, "
                         f"{len(program.prob_facts)} probabilistic facts"], started)
    return EXIT_OK


def _cmd_ground(args, started) -> int:
    g = grounding.ground(_load(args.file), max_rules=args.max_ground_rules)
    dump = grounding.dump_ground(g)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(dump)
    else:
        sys.stdout.write(dump)
    return EXIT_OK


def _cmd_classify(args, started) -> int:
    g = grounding.ground(_load(args.file), max_rules=args.max_ground_rules)
    klass = grounding.classify(grounding.dependency_graph(g))
    lines = [f"classification: {klass.kind}"]
    record = {"command": "classify", "classification": klass.kind}
    if klass.witness is not None:
        cycle = " -> ".join(g.atoms[a] for a in klass.witness)
        lines.append(f"witness cycle: {cycle}")
        record["witness"] = [g.atoms[a] for a in klass.witness]
    _emit(args, record, lines, started)
    return EXIT_OK


def _parse_choice_bits(g, bits: str) -> inference.TotalChoice:
    n = len(g.choice_points)
    if len(bits) != n or any(c not in "01" for c in bits):
        raise ValueError(
            f"--choice needs {n} bits (one per choice point), got {bits!r}"
        )
    kept = tuple(c == "1" for c in bits)
    weight = Fraction(1)
    for cp, k in zip(g.choice_points, kept):
        weight *= cp.prob if k else 1 - cp.prob
    return inference.TotalChoice(kept, weight)


def _cmd_models(args, started) -> int:
    g = grounding.ground(_load(args.file), max_rules=args.max_ground_rules)
    choice = _parse_choice_bits(g, args.choice)
    gc = inference.program_for_choice(g, choice)
    order = sorted(range(g.n_atoms), key=lambda a: g.atoms[a])
    blocks: list[str] = []
    if args.semantics == "wf":
        wf = models.well_founded_model(gc)
        names = {True: "true", False: "false", None: "undefined"}
        blocks.append("\n".join(f"{g.atoms[a]}={names[wf[a]]}" for a in order))
    else:
        for m in models.stable_models(gc):
            blocks.append(
                "\n".join(f"{g.atoms[a]}={'true' if m[a] else 'false'}" for a in order)
            )
    print("\n%%\n".join(blocks))
    return EXIT_OK


def _resolve_semantics(args, klass) -> str:
    if args.semantics != "auto":
        return args.semantics
    if klass.kind in ("acyclic", "stratified"):
        return "point"
    raise ValueError(
        "general program: pick --semantics credal or wf explicitly "
        "(the two semantics disagree on non-stratified programs)"
    )


def _warn_missing(g, query):
    for name in inference.missing_atoms(g, query.q_assignments + query.e_assignments):
        print(
            f"WARNING query atom {name} is not in the active ground program; "
            "it is false in every model",
            file=sys.stderr,
        )


def _cross_check(g, args):
    for choice in inference.total_choices(g, args.max_choices):
        gc = inference.program_for_choice(g, choice)
        if gc.n_atoms > args.oracle_limit:
            continue
        enumerated = sorted(map(tuple, models.stable_models(gc)))
        brute = sorted(map(tuple, models.exhaustive_stable_models(gc, args.oracle_limit)))
        if enumerated != brute:
            raise AssertionError(
                f"stable-model enumeration mismatch for choice {choice}"
            )


def _cmd_query(args, started) -> int:
    g = grounding.ground(_load(args.file), max_rules=args.max_ground_rules)
    klass = grounding.classify(grounding.dependency_graph(g))
    semantics = _resolve_semantics(args, klass)
    query = syntax.parse_query(args.q, args.e)
    _warn_missing(g, query)
    if args.cross_check:
        _cross_check(g, args)

    stats: dict = {}
    record = {
        "command": "query",
        "semantics": semantics,
        "classification": klass.kind,
        "total_choices": 1 << len(g.choice_points),
    }
    lines = [f"classification: {klass.kind}", f"semantics: {semantics}"]

    if semantics == "wf":
        result = inference.wf_query(
            g, query.q_assignments, query.e_assignments or None,
            max_choices=args.max_choices, stats=stats,
        )
        decision_value = result
    else:
        for _, value in query.q_assignments + query.e_assignments:
            if value == "undefined":
                raise ValueError(
                    "undefined assignments are only valid with --semantics wf"
                )
        q_event = models.event_from_assignments(query.q_assignments)
        if query.e_assignments:
            e_event = models.event_from_assignments(query.e_assignments)
            result = inference.credal_conditional(
                g, q_event, e_event, max_choices=args.max_choices, stats=stats
            )
        else:
            result = inference.credal_unconditional(
                g, q_event, max_choices=args.max_choices, stats=stats
            )
        if semantics == "point" and result is not UNDEFINED:
            assert result.lower == result.upper
            result = result.lower
        decision_value = result.lower if isinstance(result, inference.CredalInterval) \
            else result

    if result is UNDEFINED:
        record["result"] = {"type": "undefined"}
        lines.append("result: undefined")
    elif isinstance(result, inference.CredalInterval):
        record["result"] = {
            "type": "interval",
            "lower": _rat(result.lower),
            "upper": _rat(result.upper),
            "lower_decimal": _dec(result.lower),
            "upper_decimal": _dec(result.upper),
        }
        lines.append(
            f"P in [{_rat(result.lower)}, {_rat(result.upper)}] "
            f"({_dec(result.lower)}, {_dec(result.upper)})"
        )
    else:
        record["result"] = {
            "type": "point",
            "value": _rat(result),
            "value_decimal": _dec(result),
        }
        lines.append(f"P = {_rat(result)} ({_dec(result)})")

    record["choices_visited"] = stats.get("choices", 0)
    record["models_visited"] = stats.get("models", 0)
    lines.append(f"choices_visited: {record['choices_visited']}")
    lines.append(f"models_visited: {record['models_visited']}")

    if args.gamma is not None:
        gamma = _parse_rational(args.gamma)
        # the P(E)=0 convention: an undefined conditional decides NO
        decision = "NO" if decision_value is UNDEFINED else (
            "YES" if decision_value > gamma else "NO"
        )
        record["gamma"] = args.gamma
        record["decision"] = decision
        lines.append(f"decision: {decision}")

    _emit(args, record, lines, started)
    return EXIT_OK


def _cmd_consistency(args, started) -> int:
    g = grounding.ground(_load(args.file), max_rules=args.max_ground_rules)
    report = inference.check_consistency(g, max_choices=args.max_choices)
    if report.consistent:
        _emit(args, {"command": "consistency", "consistent": True},
              ["consistent: yes"], started)
        return EXIT_OK
    witness = _format_choice(g, report.witness)
    _emit(
        args,
        {"command": "consistency", "consistent": False, "witness": witness},
        ["consistent: no", f"witness: {witness}"],
        started,
    )
    return EXIT_INCONSISTENT


def _cmd_export_bn(args, started) -> int:
    g = grounding.ground(_load(args.file), max_rules=args.max_ground_rules)
    data = bayesnet.export_bn(bayesnet.compile_bn(g))
    if args.out:
        with open(args.out, "wb") as handle:
            handle.write(data)
    else:
        sys.stdout.buffer.write(data)
    return EXIT_OK


_COMMANDS = {
    "check": _cmd_check,
    "ground": _cmd_ground,
    "classify": _cmd_classify,
    "models": _cmd_models,
    "query": _cmd_query,
    "consistency": _cmd_consistency,
    "export-bn": _cmd_export_bn,
}


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USER if exc.code else EXIT_OK
    started = time.perf_counter()
    try:
        return _COMMANDS[args.command](args, started)
    except PlpSyntaxError as exc:
        for diag in exc.diagnostics:
            print(str(diag), file=sys.stderr)
        return EXIT_USER
    except InconsistentProgramError as exc:
        witness = getattr(exc, "description", str(exc.witness))
        print(f"inconsistent program: no stable model for total choice "
              f"{witness}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except ResourceGuardError as exc:
        print(f"resource guard: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (NotAcyclicError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USER


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
