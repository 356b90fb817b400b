"""Command-line entry point.

Subcommands ``check``, ``elaborate``, ``export`` and ``simulate``. Exit codes:
0 when no errors were reported (warnings are fine), 1 when at least one
error was reported, 2 for usage and I/O problems. Diagnostics go to stderr,
artifacts to ``-o`` or stdout.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path
from typing import Sequence

from montiarc.checks import Phase, check_all, check_model
from montiarc.diagnostics import Diagnostic, Severity, has_errors, sort_diagnostics
from montiarc.semantics import export, map_to_domain
from montiarc.symbols import ComponentDef, Model, ModelPool
from montiarc.syntax.printer import pretty_print
from montiarc.typesys import RegistryError, TypeRegistry

EXIT_OK, EXIT_ERRORS, EXIT_USAGE = 0, 1, 2

TYPES_FILE = "types.txt"


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="montiarc", description="MontiArc architecture description toolchain.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--modelpath", nargs="+", required=True, metavar="DIR", help="model source roots, also accepted as one path-separator list")
    common.add_argument(
        "--types", action="append", default=[], metavar="FILE",
        help=f"data type registry file; {TYPES_FILE} in a modelpath root is read automatically",
    )
    common.add_argument("--strict-warnings", action="store_true", help="treat warnings as errors")
    common.add_argument("-o", "--output", metavar="FILE", help="write the artifact here instead of stdout")

    c = sub.add_parser("check", parents=[common], help="run all context conditions")
    c.add_argument("--root", metavar="QNAME", help="report only diagnostics of files relevant to this component")
    c.add_argument("--phase", choices=[ph.value for ph in Phase], default=Phase.POST.value)

    e = sub.add_parser("elaborate", parents=[common], help="print the core form of a component")
    e.add_argument("--root", required=True, metavar="QNAME")
    e.add_argument("--print", dest="annotate", action="store_true", help="tag implicit elements with // comments")

    x = sub.add_parser("export", parents=[common], help="export the semantic domain element")
    x.add_argument("--root", required=True, metavar="QNAME")
    x.add_argument("--format", choices=["json"], default="json")

    s = sub.add_parser("simulate", parents=[common], help="run a timed-stream simulation")
    s.add_argument("--root", required=True, metavar="QNAME")
    s.add_argument("--scenario", required=True, metavar="FILE")
    s.add_argument("--behaviors", metavar="FILE", help="JSON manifest mapping component types to behaviors")
    s.add_argument("--causality", choices=["strict", "weak"])
    s.add_argument("--paradigm", choices=["timed", "timesynchronous", "untimed"])
    s.add_argument("--format", choices=["text", "json"], default="text")
    return p


def _load_model(args: argparse.Namespace) -> Model:
    roots = [Path(m) for entry in args.modelpath for m in entry.split(os.pathsep) if m]
    for r in roots:
        if not r.is_dir():
            raise UsageError(f"modelpath entry {r} is not a directory")
    type_files = [r / TYPES_FILE for r in roots if (r / TYPES_FILE).is_file()]
    type_files += [Path(t) for t in args.types]
    try:
        text = "\n".join(f.read_text(encoding="utf-8") for f in type_files)
        registry = TypeRegistry.parse(text)
    except OSError as e:
        raise UsageError(f"cannot read type registry: {e}") from None
    except RegistryError as e:
        raise UsageError(f"invalid type registry: {e}") from None
    try:
        pool = ModelPool.load(roots)
    except OSError as e:
        raise UsageError(f"cannot read models: {e}") from None
    return Model(pool, registry)


def _root(model: Model, qname: str) -> ComponentDef:
    d = model.pool.defs.get(qname)
    if d is None:
        raise UsageError(f"component type {qname} not found on the modelpath")
    return d


def _emit_diagnostics(diags: list[Diagnostic], strict: bool) -> int:
    if strict:
        diags = [dataclasses.replace(d, severity=Severity.ERROR) for d in diags]
    for d in sort_diagnostics(diags):
        print(d.format(), file=sys.stderr)
    return EXIT_ERRORS if has_errors(diags) else EXIT_OK


def _write(args: argparse.Namespace, data: str | bytes) -> None:
    if isinstance(data, str):
        data = data.encode("utf-8")
    if args.output:
        try:
            Path(args.output).write_bytes(data)
        except OSError as e:
            raise UsageError(f"cannot write {args.output}: {e}") from None
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _files_of(model: Model, d: ComponentDef) -> set[str]:
    """Source files of ``d`` and everything it depends on."""
    seen: set[str] = set()
    stack = [d]
    files = set()
    while stack:
        cur = stack.pop()
        if cur.qname in seen:
            continue
        seen.add(cur.qname)
        files.add(cur.file)
        info = model.info(cur)
        stack += [s.target for s in info.subs.values() if s.target is not None]
        stack += list(info.inner.values())
        if info.super_def is not None:
            stack.append(info.super_def)
    return files


def _check(args: argparse.Namespace) -> int:
    model = _load_model(args)
    diags = check_all(model, Phase(args.phase))
    if args.root:
        files = _files_of(model, _root(model, args.root))
        diags = [d for d in diags if d.span.file in files]
    return _emit_diagnostics(diags, args.strict_warnings)


def _elaborated(args: argparse.Namespace):
    model = _load_model(args)
    d = _root(model, args.root)
    result = check_model(model)
    files = _files_of(model, d)
    relevant = [x for x in result.diagnostics if x.span.file in files or not x.span.file.endswith(".arc")]
    status = _emit_diagnostics(relevant, args.strict_warnings)
    return model, d, result, status


def _elaborate(args: argparse.Namespace) -> int:
    _, d, result, status = _elaborated(args)
    e = result.elaborated.get(d.qname)
    if e is None:
        return EXIT_ERRORS
    comments: dict[int, str] | None = {} if args.annotate else None
    unit = e.to_unit(comments)
    _write(args, pretty_print(unit, comments))
    return status


def _export(args: argparse.Namespace) -> int:
    _, d, result, status = _elaborated(args)
    e = result.elaborated.get(d.qname)
    if e is None or status != EXIT_OK:
        return EXIT_ERRORS
    _write(args, export(map_to_domain(e, result.elaborator)) + b"\n")
    return status


def _simulate(args: argparse.Namespace) -> int:
    from montiarc.simulator import BehaviorRegistry, Scenario, SimulationError, check_trace, instantiate, run

    _, d, result, status = _elaborated(args)
    e = result.elaborated.get(d.qname)
    if e is None or status != EXIT_OK:
        return EXIT_ERRORS
    try:
        scenario = Scenario.load(args.scenario)
        behaviors = BehaviorRegistry.load(args.behaviors) if args.behaviors else BehaviorRegistry.builtin()
    except (OSError, ValueError, ImportError, AttributeError) as err:
        raise UsageError(str(err)) from None
    try:
        tree = instantiate(e, result.elaborator, behaviors)
        outcome = run(tree, scenario, paradigm=args.paradigm, causality=args.causality)
    except SimulationError as err:
        return _emit_diagnostics(err.diagnostics, args.strict_warnings)
    except ValueError as err:
        raise UsageError(str(err)) from None
    status = _emit_diagnostics(outcome.diagnostics, args.strict_warnings)
    report = outcome.report(args.format)
    verdict = None
    if scenario.expected is not None:
        verdict = check_trace(outcome.traces, scenario.expected, scenario.ordered)
        if args.format == "json":
            doc = json.loads(report)
            doc["check"] = {"ok": verdict.ok, "failures": verdict.failures}
            report = json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
        else:
            report += f"check: {verdict}\n"
    _write(args, report)
    if verdict is not None and not verdict.ok:
        return EXIT_ERRORS
    return status


_COMMANDS = {"check": _check, "elaborate": _elaborate, "export": _export, "simulate": _simulate}


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except UsageError as e:
        print(f"montiarc: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
