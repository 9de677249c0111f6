"""Command-line front end.

Exit codes: 0 success, 1 input/validation/syntax error, 2 infeasible path
(``simulate``), 3 coverage not reached within bounds (``generate --strict``).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import __version__
from .core import compile_model, model_info, simulate_path
from .errors import EfsmError, ExprError, ModelError, PathError, UnknownTransition
from .expr import StatementKind, parse, render_tree
from .generation import CoverageCriterion, GenerationOptions, generate
from .model import Diagnostic, has_errors, load_document, parse_document, validate_document

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INFEASIBLE = 2
EXIT_UNCOVERED = 3


class UsageError(Exception):
    pass


def _err(message: str) -> None:
    print(message, file=sys.stderr)


def _print_json(data) -> None:
    print(json.dumps(data, indent=2))


def _read(path: str) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _compile(path: str):
    return compile_model(load_document(_read(path)))


# -- validate -------------------------------------------------------------------


def cmd_validate(args) -> int:
    try:
        doc = parse_document(_read(args.model))
    except ModelError as exc:
        diags = [Diagnostic("error", type(exc).__name__, "document", str(exc))]
    else:
        diags = validate_document(doc)
        if not has_errors(diags):
            try:
                compile_model(doc)
            except EfsmError as exc:
                location = getattr(exc, "transition", None) or "document"
                diags.append(Diagnostic("error", type(exc).__name__, location, str(exc)))

    failed = has_errors(diags)
    if args.json:
        _print_json({"ok": not failed, "diagnostics": [d.to_dict() for d in diags]})
    else:
        for d in diags:
            if d.severity == "error":
                _err(str(d))
            else:
                print(str(d))
        if not failed and not args.quiet:
            print("OK")
    if failed and args.json:
        _err(f"{args.model}: {sum(d.severity == 'error' for d in diags)} error(s)")
    return EXIT_INPUT if failed else EXIT_OK


# -- info ---------------------------------------------------------------------------


def format_info(report) -> str:
    lines = [f"states ({len(report.states)}): {', '.join(report.states)}"]
    lines.append(f"initial state: {report.initial_state}")
    lines.append(f"transitions ({len(report.transitions)}):")
    lines.extend(f"  {name}: {head} -> {tail}" for name, head, tail in report.transitions)
    n_ctx = sum(v.kind == "context" for v in report.variables)
    n_in = len(report.variables) - n_ctx
    lines.append(f"variables ({n_ctx} context, {n_in} input):")
    for v in report.variables:
        domain = f" domain [{v.domain[0]}, {v.domain[1]}]" if v.domain else ""
        lines.append(f"  {v.name}: {v.kind}, initial {v.initial}{domain}")
    lines.append("def/use:")
    for name, defs, c_uses, p_uses in report.def_use:
        lines.append(
            f"  {name}: defs {{{', '.join(defs)}}} c-uses {{{', '.join(c_uses)}}}"
            f" p-uses {{{', '.join(p_uses)}}}"
        )
    return "\n".join(lines)


def cmd_info(args) -> int:
    report = model_info(_compile(args.model))
    if args.json:
        _print_json(report.to_dict())
    else:
        print(format_info(report))
    return EXIT_OK


# -- parse ----------------------------------------------------------------------------


def cmd_parse(args) -> int:
    try:
        tree = parse(StatementKind(args.kind), args.text)
    except ExprError as exc:
        _err(f"error: {exc}")
        return EXIT_INPUT
    print(render_tree(tree))
    return EXIT_OK


# -- simulate -------------------------------------------------------------------------


def parse_inputs(specs: Sequence[str], steps: int) -> list[dict[str, int]]:
    """Turn ``STEP:var=value`` items (1-based steps) into one map per step."""
    data: list[dict[str, int]] = [{} for _ in range(steps)]
    for spec in specs:
        try:
            step_text, assignment = spec.split(":", 1)
            name, value_text = assignment.split("=", 1)
            step, value = int(step_text), int(value_text)
        except ValueError:
            raise UsageError(f"bad input {spec!r}; expected STEP:var=value") from None
        if not 1 <= step <= steps:
            raise UsageError(f"input {spec!r} refers to step {step}, path has {steps} steps")
        data[step - 1][name.strip()] = value
    return data


def format_trace(efsm, trace) -> list[str]:
    header = ", ".join(["State", *efsm.variables])
    lines = [f"Test Path | Tail State Configuration ({header}) | Output"]
    for i, step in enumerate(trace):
        prefix = ", ".join(repr(s.transition) for s in trace[: i + 1])
        lines.append(f"{prefix} | {step.configuration.render()} | {step.output or '-'}")
    return lines


def cmd_simulate(args) -> int:
    efsm = _compile(args.model)
    path = [p.strip() for p in args.path.split(",") if p.strip()]
    if not path:
        raise UsageError("--path must name at least one transition")
    data = parse_inputs(args.inputs or [], len(path))
    failure = None
    try:
        trace = simulate_path(efsm, path, data)
    except UnknownTransition as exc:
        raise UsageError(f"unknown transition {exc.name!r} at step {exc.step + 1}") from None
    except PathError as exc:
        trace, failure = exc.trace, exc

    if args.json:
        out = {"path": path, "data": data, "trace": [s.to_dict() for s in trace], "feasible": failure is None}
        if failure is not None:
            out["error"] = {"kind": type(failure).__name__, "step": failure.step + 1, "transition": failure.transition}
        _print_json(out)
    else:
        print("\n".join(format_trace(efsm, trace)))
    if failure is not None:
        _err(f"{type(failure).__name__} at step {failure.step + 1}: transition {failure.transition!r}")
        return EXIT_INFEASIBLE
    return EXIT_OK


# -- generate -------------------------------------------------------------------------


def cmd_generate(args) -> int:
    efsm = _compile(args.model)
    try:
        options = GenerationOptions(
            criterion=CoverageCriterion(args.criterion),
            max_depth=args.max_depth,
            prune_repeated=args.prune_repeated,
            safety_limit=args.safety_limit,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    suite = generate(efsm, options)
    report = suite.coverage
    summary = (
        f"{suite.criterion.value} coverage {report.summary()} "
        f"({report.fraction:.1%}), {len(suite.cases)} case(s), "
        f"exhausted={'yes' if suite.exhausted else 'no'}"
    )
    if report.uncovered:
        summary += f"; uncovered: {', '.join(report.uncovered)}"

    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(suite.to_json())
    elif args.json:
        sys.stdout.write(suite.to_json())
    else:
        for i, case in enumerate(suite.cases, 1):
            steps = ", ".join(
                f"{t}{json.dumps(d, separators=(',', ':')) if d else ''}"
                for t, d in zip(case.path, case.data)
            )
            print(f"TC {i}: [{steps}] covers {', '.join(case.covered)}")

    strict_fail = args.strict and suite.exhausted and bool(report.uncovered)
    for diag in suite.diagnostics:
        _err(diag)
    if strict_fail:
        _err(summary)
        return EXIT_UNCOVERED
    if not args.quiet and (args.out or not args.json):
        print(summary)
    return EXIT_OK


# -- entry point ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS,
                        help="suppress summaries")

    parser = argparse.ArgumentParser(
        prog="efsmgen", description="EFSM model compiler and test-suite generator."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--json", action="store_true", default=False, help="machine-readable output")
    parser.add_argument("--quiet", action="store_true", default=False, help="suppress summaries")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a model description file")
    p.add_argument("model")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("info", parents=[common], help="print states, transitions and variables")
    p.add_argument("model")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("parse", parents=[common], help="print the parse tree of an expression")
    p.add_argument("--kind", required=True, choices=[k.value for k in StatementKind])
    p.add_argument("text")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("simulate", parents=[common], help="replay a transition path")
    p.add_argument("model")
    p.add_argument("--path", required=True, help="comma-separated transition names")
    p.add_argument("--inputs", nargs="*", metavar="STEP:VAR=VALUE",
                   help="input values, steps numbered from 1")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("generate", parents=[common], help="generate a covering test suite")
    p.add_argument("model")
    p.add_argument("--criterion", default="all-states", choices=[c.value for c in CoverageCriterion])
    p.add_argument("--max-depth", type=int, default=10)
    p.add_argument("--out", help="write the suite JSON to this file")
    p.add_argument("--strict", action="store_true", help="exit 3 if coverage is incomplete")
    p.add_argument("--prune-repeated", action="store_true",
                   help="skip configurations already seen in the search")
    p.add_argument("--safety-limit", type=int, default=100_000, help="maximum search nodes")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        _err(f"error: {exc}")
    except EfsmError as exc:
        _err(f"error: {type(exc).__name__}: {exc}")
    except OSError as exc:
        _err(f"error: {exc}")
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
