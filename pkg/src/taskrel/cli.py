"""Command-line interface.

Every command prints one JSON object to stdout:

    {"command": ..., "status": "pass" | "fail" | "error",
     "payload": ..., "diagnostics": [...]}

and exits 0 on pass, 1 on a semantic negative (a law failed, a task is
not possible, nothing found within bounds), 2 on usage or input errors.
The JSON is byte-identical across runs for identical inputs and flags;
`--pretty` adds human-readable tables on stderr without touching it.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

from . import coarse as coarse_mod
from . import dsl, lawcheck, relcore, substrate
from .errors import TaskrelError
from .lawcheck import DEFAULT_BUDGET, EnumerationBudget
from .substrate import SubstrateTheory

EXIT_CODES = {"pass": 0, "fail": 1, "error": 2}


@dataclass
class Diagnostic:
    severity: str
    message: str
    span: Optional[dsl.SourceSpan] = None

    def to_json(self) -> dict:
        span = None
        if self.span is not None:
            span = {
                "file": self.span.file,
                "line": self.span.line,
                "column": self.span.column,
                "length": self.span.length,
            }
        return {"severity": self.severity, "message": self.message, "span": span}


@dataclass
class CommandOutcome:
    command: str
    status: str
    payload: object
    diagnostics: list[Diagnostic] = field(default_factory=list)

    def __post_init__(self):
        has_error = any(d.severity == "error" for d in self.diagnostics)
        assert (self.status == "error") == has_error, "status out of step with diagnostics"

    def to_json(self) -> dict:
        return {
            "command": self.command,
            "status": self.status,
            "payload": self.payload,
            "diagnostics": [d.to_json() for d in self.diagnostics],
        }

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.status]


def _error_outcome(command: str, err: Exception) -> CommandOutcome:
    span = getattr(err, "span", None)
    return CommandOutcome(
        command, "error", None, [Diagnostic("error", str(err), span)]
    )


def parse_budget(spec: Optional[str]) -> EnumerationBudget:
    """Budget flags look like `atoms=2,factors=2,cap=65536`; every key is
    optional and defaults to the standard budget."""
    if not spec:
        return DEFAULT_BUDGET
    values = {
        "atoms": DEFAULT_BUDGET.max_atom_size,
        "factors": DEFAULT_BUDGET.max_factors,
        "cap": DEFAULT_BUDGET.max_relations,
    }
    for part in spec.split(","):
        key, eq, raw = part.partition("=")
        key = key.strip()
        if not eq or key not in values:
            raise ValueError(f"bad budget entry {part!r}; use atoms=, factors=, cap=")
        values[key] = int(raw)
    return EnumerationBudget(values["atoms"], values["factors"], values["cap"])


def _load_module(path: str) -> dsl.Module:
    return dsl.load(path)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_eval(path: str, task: Optional[str] = None) -> CommandOutcome:
    try:
        module = _load_module(path)
        if task is not None:
            chosen = {task: module.task_named(task)}
        else:
            chosen = dict(module.relations)
            chosen.update(module.tasks)
        if not chosen:
            raise TaskrelError(f"nothing to evaluate in {path!r}")
    except (TaskrelError, OSError, ValueError) as err:
        return _error_outcome("eval", err)
    payload = {
        "tasks": [
            {
                "name": name,
                "text": relcore.task_to_text(name, value),
                "value": relcore.task_to_json(value),
            }
            for name, value in sorted(chosen.items())
        ]
    }
    return CommandOutcome("eval", "pass", payload)


def _law_outcome(command: str, suite, budget: EnumerationBudget) -> CommandOutcome:
    try:
        reports = suite(budget)
    except (TaskrelError, ValueError) as err:
        return _error_outcome(command, err)
    payload = {"reports": [lawcheck.report_to_json(r) for r in reports]}
    status = "pass" if all(r.holds for r in reports) else "fail"
    return CommandOutcome(command, status, payload)


def cmd_check_laws(budget: EnumerationBudget = DEFAULT_BUDGET) -> CommandOutcome:
    return _law_outcome("check-laws", lawcheck.verify_all_laws, budget)


def cmd_check_coarse_laws(budget: EnumerationBudget = DEFAULT_BUDGET) -> CommandOutcome:
    return _law_outcome("check-coarse-laws", coarse_mod.verify_coarse_laws, budget)


def cmd_verify_possible(path: str, task: str, candidate: str) -> CommandOutcome:
    try:
        module = _load_module(path)
        constructor, attr_name, proc_name = dsl.parse_candidate(candidate)
        target = module.task_named(task)
        cand = substrate.ConstructorCandidate(
            module.substrate_named(constructor),
            module.attribute_named(attr_name),
            module.process_named(proc_name),
        )
        verdict = substrate.is_possible_with(target, cand)
    except (TaskrelError, OSError, ValueError) as err:
        return _error_outcome("verify-possible", err)
    payload = {
        "task": task,
        "candidate": substrate.candidate_to_json(cand),
        "verdict": substrate.verdict_to_json(verdict),
    }
    return CommandOutcome("verify-possible", "pass" if verdict.overall else "fail", payload)


def cmd_search(
    path: str,
    task: str,
    max_factors: int = DEFAULT_BUDGET.max_factors,
    max_depth: int = 3,
    max_relations: int = DEFAULT_BUDGET.max_relations,
) -> CommandOutcome:
    try:
        module = _load_module(path)
        target = module.task_named(task)
        atoms = tuple(module.substrates.values())
        if not atoms:
            raise TaskrelError(f"{path!r} declares no substrates to search over")
        theory = SubstrateTheory(
            atoms, tuple(module.processes.values()), depth_bound=max_depth
        )
        atom_size = max(len(a.state_set.elements) for a in atoms)
        bounds = EnumerationBudget(atom_size, max_factors, max_relations)
        found = substrate.search_constructor(target, theory, bounds)
    except (TaskrelError, OSError, ValueError) as err:
        return _error_outcome("search-constructor", err)
    if found is None:
        payload = {
            "found": False,
            "exhausted_bounds": {
                "max_factors": max_factors,
                "max_depth": max_depth,
                "max_relations": max_relations,
            },
            "note": "absence within bounds; not a proof of impossibility",
        }
        return CommandOutcome("search-constructor", "fail", payload)
    verdict = substrate.is_possible_with(target, found)
    payload = {
        "found": True,
        "candidate": substrate.candidate_to_json(found),
        "verdict": substrate.verdict_to_json(verdict),
    }
    return CommandOutcome("search-constructor", "pass", payload)


def cmd_coarse(path: str, task: str, dom: str, cod: str) -> CommandOutcome:
    try:
        module = _load_module(path)
        target = module.task_named(task)
        result = coarse_mod.coarse_grain(
            target, module.antichain_named(dom), module.antichain_named(cod)
        )
    except (TaskrelError, OSError, ValueError) as err:
        return _error_outcome("coarse-grain", err)
    payload = {"task": task, "coarse": coarse_mod.coarse_task_to_json(result)}
    return CommandOutcome("coarse-grain", "pass", payload)


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _worker_cap() -> int:
    raw = os.environ.get("TASKREL_THREADS", "1")
    try:
        cap = int(raw)
    except ValueError as err:
        raise ValueError(f"TASKREL_THREADS must be an integer, got {raw!r}") from err
    if cap < 1:
        raise ValueError(f"TASKREL_THREADS must be positive, got {raw!r}")
    return cap


def _pretty_lines(outcome: CommandOutcome) -> list[str]:
    lines = [f"{outcome.command}: {outcome.status}"]
    payload = outcome.payload or {}
    if "reports" in payload:
        width = max(len(r["law"]) for r in payload["reports"])
        for r in payload["reports"]:
            mark = "ok " if r["holds"] else "FAIL"
            lines.append(f"  {mark} {r['law']:<{width}}  {r['instances']} instances")
    if "verdict" in payload:
        v = payload["verdict"]
        for key in ("task_inducing", "condition1", "condition2", "overall"):
            lines.append(f"  {key}: {v[key]}")
    if "tasks" in payload:
        for entry in payload["tasks"]:
            lines.append(f"  {entry['text']}")
    if "coarse" in payload:
        lines.append(f"  {len(payload['coarse']['pairs'])} coarse pairs")
    for diag in outcome.diagnostics:
        where = f" at {diag.span!r}" if diag.span else ""
        lines.append(f"  [{diag.severity}] {diag.message}{where}")
    return lines


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="taskrel", description="Finite task-relation engine."
    )
    parser.add_argument("--pretty", action="store_true", help="add tables on stderr")
    parser.add_argument("--json", action="store_true", default=True,
                        help="emit JSON on stdout (always on)")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for randomized entry points")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate declared tasks in a source file")
    p.add_argument("file")
    p.add_argument("--task", help="evaluate one named task")

    for name in ("check-laws", "check-coarse-laws"):
        p = sub.add_parser(name, help=f"run the {name.replace('-', ' ')} suite")
        p.add_argument("--budget", help="atoms=N,factors=N,cap=N")
        p.add_argument("--figures", metavar="DIR",
                       help="also render a report chart into DIR")

    p = sub.add_parser("verify-possible", help="check a constructor candidate")
    p.add_argument("file")
    p.add_argument("--task", required=True)
    p.add_argument("--candidate", required=True,
                   help="written as '(substrate, attribute, process)'")

    p = sub.add_parser("search-constructor", help="search for a passing candidate")
    p.add_argument("file")
    p.add_argument("--task", required=True)
    p.add_argument("--max-factors", type=int, default=DEFAULT_BUDGET.max_factors)
    p.add_argument("--max-depth", type=int, default=3)
    p.add_argument("--max-relations", type=int, default=DEFAULT_BUDGET.max_relations)

    p = sub.add_parser("coarse-grain", help="coarse-grain a task over antichains")
    p.add_argument("file")
    p.add_argument("--task", required=True)
    p.add_argument("--dom", required=True)
    p.add_argument("--cod", required=True)
    return parser


def run_command(args: argparse.Namespace) -> CommandOutcome:
    if args.command == "eval":
        return cmd_eval(args.file, args.task)
    if args.command == "check-laws":
        return cmd_check_laws(parse_budget(args.budget))
    if args.command == "check-coarse-laws":
        return cmd_check_coarse_laws(parse_budget(args.budget))
    if args.command == "verify-possible":
        return cmd_verify_possible(args.file, args.task, args.candidate)
    if args.command == "search-constructor":
        return cmd_search(
            args.file, args.task, args.max_factors, args.max_depth, args.max_relations
        )
    return cmd_coarse(args.file, args.task, args.dom, args.cod)


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return 2 if err.code else 0
    try:
        # commands run sequentially for determinism; the env var is still
        # validated so misconfiguration fails loudly
        _worker_cap()
        outcome = run_command(args)
    except ValueError as err:
        outcome = _error_outcome(args.command, err)

    figures_dir = getattr(args, "figures", None)
    if figures_dir and outcome.payload and "reports" in outcome.payload:
        from . import figures

        os.makedirs(figures_dir, exist_ok=True)
        target = os.path.join(figures_dir, args.command.replace("-", "_") + ".png")
        figures.render_report_figure(outcome.payload["reports"], target)
        outcome.diagnostics.append(Diagnostic("info", f"figure written to {target}"))

    sys.stdout.write(json.dumps(outcome.to_json(), indent=2, sort_keys=True) + "\n")
    if args.pretty:
        sys.stderr.write("\n".join(_pretty_lines(outcome)) + "\n")
    return outcome.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
