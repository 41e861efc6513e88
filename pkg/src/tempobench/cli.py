"""Command-line entry point wiring the modules into a campaign workflow.

Subcommands: generate, emit, run, oracle-check, analyze, plot-data.
Progress and notices go to standard error as JSON lines; artifacts land
on disk only.  Exit codes: 0 success, 1 validation error, 2 campaign
failure (for example no usable solver adapter).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .analysis import SelectiveRule, aggregate, export_csv, plot_series, summary_table
from .core import PROBLEMS, Task
from .emit import (
    EncodingMode,
    MANIFEST_NAME,
    manifest_text,
    parse_canonical,
    parse_manifest,
    goal_transform,
    task_filename,
)
from .checkers import check_target
from .gen import GenConfig, GenerationError, catalogue_breakdown, catalogue_notice, gen_catalogue
from .gen import REFERENCE_TASK_TOTAL
from .harness import (
    ConfigurationError,
    Limits,
    load_adapters,
    load_journal,
    probe_version,
    run_benchmark,
)
from .oracle import (
    MAX_STATES_LIMIT,
    TEMPORAL_ATOM_LIMIT,
    TemporalVerdict,
    bounded_temporal_sat,
)
from .core import atoms_of
from .harness import JournalWriter, Outcome, RunRecord


def _progress(payload: dict) -> None:
    sys.stderr.write(json.dumps(payload, separators=(",", ":")) + "\n")
    sys.stderr.flush()


def _load_config_doc(path: str | None) -> dict:
    if path is None:
        path = os.environ.get("TEMPOBENCH_CONFIG")
    if path is None:
        return {}
    p = Path(path)
    if not p.is_file():
        raise GenerationError(f"config file not found: {p}")
    try:
        return json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise GenerationError(f"config is not valid JSON: {exc}") from exc


def _gen_config(doc: dict) -> GenConfig:
    if "generator" in doc:
        return GenConfig.from_dict(doc["generator"])
    flat = {k: v for k, v in doc.items() if k != "adapters"}
    return GenConfig.from_dict(flat)


def _load_catalogue_tasks(catalogue_dir: Path) -> tuple[dict, list[Task]]:
    manifest_path = catalogue_dir / MANIFEST_NAME
    if not manifest_path.is_file():
        raise GenerationError(f"no {MANIFEST_NAME} in {catalogue_dir}")
    manifest = parse_manifest(manifest_path.read_text(encoding="utf-8"))
    tasks = []
    for entry in manifest["tasks"]:
        task_path = catalogue_dir / entry["file"]
        if not task_path.is_file():
            raise GenerationError(f"task file missing: {task_path}")
        tasks.append(parse_canonical(task_path.read_text(encoding="utf-8")))
    return manifest, tasks


# --- subcommands ---------------------------------------------------------------

def _cmd_generate(args) -> int:
    cfg = _gen_config(_load_config_doc(args.config))
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    catalogue = gen_catalogue(cfg)
    from .emit import emit_canonical

    for task in catalogue.tasks:
        path = out_dir / task_filename(task, "canonical")
        path.write_text(emit_canonical(task), encoding="utf-8")
    (out_dir / MANIFEST_NAME).write_text(
        manifest_text(catalogue, cfg.to_dict()), encoding="utf-8"
    )
    _progress(
        {
            "event": "catalogue-notice",
            "tasks": len(catalogue.tasks),
            "breakdown": catalogue_breakdown(catalogue),
            "reference_total": REFERENCE_TASK_TOTAL,
            "text": catalogue_notice(catalogue),
        }
    )
    _progress({"event": "generate-done", "out": str(out_dir), "tasks": len(catalogue.tasks)})
    return 0


def _cmd_emit(args) -> int:
    catalogue_dir = Path(args.catalogue)
    _, tasks = _load_catalogue_tasks(catalogue_dir)
    targets = [t.strip() for t in args.targets.split(",") if t.strip()]
    for target in targets:
        if target not in ("tptp", "ladr", "intohylo", "canonical"):
            raise GenerationError(f"unknown target {target!r}")
    mode = EncodingMode(args.mode)
    out_dir = Path(args.out)
    written = 0
    for target in targets:
        target_dir = out_dir / target
        target_dir.mkdir(parents=True, exist_ok=True)
        for task in tasks:
            problem = goal_transform(task, target, mode)
            if args.check:
                check_target(target, problem.text)
            (target_dir / task_filename(task, target)).write_text(
                problem.text, encoding="utf-8"
            )
            written += 1
    _progress({"event": "emit-done", "files": written, "targets": targets})
    return 0


def _cmd_run(args) -> int:
    catalogue_dir = Path(args.catalogue)
    _, tasks = _load_catalogue_tasks(catalogue_dir)
    doc = _load_config_doc(args.config)
    adapters = load_adapters(doc)
    usable = []
    for adapter in adapters:
        try:
            probe_version(adapter)
            usable.append(adapter)
        except ConfigurationError as exc:
            _progress({"event": "adapter-unavailable", "adapter": adapter.name, "error": str(exc)})
    if len(usable) < len(adapters) and not args.allow_partial:
        _progress({"event": "abort", "reason": "missing solver executables"})
        return 2
    if not usable:
        _progress({"event": "abort", "reason": "no usable solver adapters"})
        return 2
    limits = Limits(timeout_s=args.timeout, mem_cap_bytes=args.mem_cap, grace_s=args.grace)
    run_benchmark(
        tasks,
        usable,
        limits,
        emitted_dir=args.emitted,
        journal_path=args.journal,
        repeats=args.repeats,
        encoding=EncodingMode(args.mode),
        progress=_progress,
        max_new_attempts=args.max_attempts,
    )
    _progress({"event": "run-done", "journal": str(args.journal)})
    return 0


def _oracle_outcome(verdict: TemporalVerdict) -> str:
    return {
        TemporalVerdict.SAT: "SAT",
        TemporalVerdict.UNSAT_PROVED: "UNSAT",
        TemporalVerdict.UNKNOWN_UP_TO_BOUND: "UNKNOWN",
    }[verdict]


def _cmd_oracle_check(args) -> int:
    paths: list[Path] = []
    for item in args.tasks:
        p = Path(item)
        if p.is_dir():
            paths.extend(sorted(p.glob("*.json")))
        elif p.is_file():
            paths.append(p)
        else:
            raise GenerationError(f"no such task file or directory: {p}")
    paths = [p for p in paths if p.name != MANIFEST_NAME]
    checked = 0
    with JournalWriter(args.journal) as journal:
        for path in paths:
            task = parse_canonical(path.read_text(encoding="utf-8"))
            n_atoms = len(atoms_of(task.body))
            if n_atoms > TEMPORAL_ATOM_LIMIT:
                _progress(
                    {
                        "event": "oracle-skip",
                        "task": task.task_id,
                        "reason": f"{n_atoms} atoms exceed the bound of {TEMPORAL_ATOM_LIMIT}",
                    }
                )
                continue
            start = time.monotonic()
            result = bounded_temporal_sat(task.body, args.max_states)
            wall = time.monotonic() - start
            # oracle verdicts include UNKNOWN, which the harness enum lacks;
            # the authoritative verdict lives in `detail`, outcome mirrors it
            # when representable and is ERROR otherwise
            outcome = Outcome.ERROR
            if result.verdict is TemporalVerdict.SAT:
                outcome = Outcome.SAT
            elif result.verdict is TemporalVerdict.UNSAT_PROVED:
                outcome = Outcome.UNSAT
            record = RunRecord(
                task=task.task_id,
                problem=task.problem,
                subcase=task.subcase,
                n_clauses=task.n_clauses,
                solver="oracle",
                solver_version=__version__,
                attempt=1,
                outcome=outcome,
                wall_time_s=round(wall, 6),
                peak_mem_bytes=0,
                encoding="temporal",
                goal="sat-check",
                strategy="bounded",
                timestamp=datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ"),
                source="oracle",
                detail=_oracle_outcome(result.verdict),
            )
            journal.append(record)
            checked += 1
            _progress(
                {
                    "event": "oracle-verdict",
                    "task": task.task_id,
                    "verdict": result.verdict.value,
                }
            )
    _progress({"event": "oracle-done", "checked": checked, "skipped": len(paths) - checked})
    return 0


def _cmd_analyze(args) -> int:
    records = load_journal(args.journal)
    aggregates = aggregate(records)
    task_order = None
    if args.manifest:
        manifest = parse_manifest(Path(args.manifest).read_text(encoding="utf-8"))
        task_order = [entry["id"] for entry in manifest["tasks"]]
    out_csv = Path(args.out_csv)
    out_csv.parent.mkdir(parents=True, exist_ok=True)
    out_csv.write_text(export_csv(aggregates, task_order), encoding="utf-8")
    if args.summary_csv:
        if args.summary_rule == "selective":
            rule: SelectiveRule | str = SelectiveRule(
                pick={100: "prover9", 200: "spass"}, reject=(50, 500)
            )
        else:
            rule = "plain"
        table = summary_table(aggregates, rule=rule)
        lines = ["problem,solver," + ",".join(str(c) for c in table.columns)]
        for row in table.rows:
            cells = [
                "" if table.cells[(row, c)] is None else repr(table.cells[(row, c)])
                for c in table.columns
            ]
            lines.append(f"{row[0]},{row[1]}," + ",".join(cells))
        lines.append(
            "averages,,"
            + ",".join(
                repr(table.averages[c]) if c in table.averages else ""
                for c in table.columns
            )
        )
        Path(args.summary_csv).write_text("\n".join(lines) + "\n", encoding="utf-8")
    _progress({"event": "analyze-done", "rows": len(aggregates), "csv": str(out_csv)})
    return 0


def _cmd_plot_data(args) -> int:
    records = load_journal(args.journal)
    aggregates = aggregate(records)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    problems = PROBLEMS if args.problem == "all" else (args.problem,)
    written = []
    for problem in problems:
        if not any(a.problem == problem for a in aggregates):
            continue
        for series_file in plot_series(aggregates, problem, grouping=args.grouping):
            path = out_dir / series_file.filename
            path.write_text(series_file.render(), encoding="utf-8")
            written.append(path.name)
    _progress({"event": "plot-data-done", "files": written})
    return 0


# --- argument parsing ------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tempobench",
        description="Temporal-clause benchmark toolchain: generate, emit, run, check, analyze.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(name, help):  # noqa: A002 - argparse's own keyword
        return sub.add_parser(
            name, help=help, formatter_class=argparse.ArgumentDefaultsHelpFormatter
        )

    p = add_parser("generate", help="write the canonical catalogue and manifest")
    p.add_argument("--config", help="config JSON (or TEMPOBENCH_CONFIG); defaults apply if absent")
    p.add_argument("--out", required=True, help="output directory for task files + manifest")
    p.set_defaults(func=_cmd_generate)

    p = add_parser("emit", help="translate the catalogue into solver input files")
    p.add_argument("--catalogue", required=True, help="directory holding manifest + canonical tasks")
    p.add_argument("--targets", default="tptp,ladr,intohylo", help="comma-separated targets")
    p.add_argument("--mode", default="standard", choices=["standard", "abstraction"])
    p.add_argument("--out", required=True, help="output directory (one subdir per target)")
    p.add_argument("--check", action="store_true", help="run mini-grammar checks while emitting")
    p.set_defaults(func=_cmd_emit)

    p = add_parser("run", help="run the solver campaign over emitted files")
    p.add_argument("--catalogue", required=True)
    p.add_argument("--emitted", required=True, help="directory produced by `emit`")
    p.add_argument("--journal", required=True, help="append-only results journal (JSON lines)")
    p.add_argument("--config", help="config JSON with an `adapters` list")
    p.add_argument("--repeats", type=int, default=3, help="attempts per task and solver")
    p.add_argument("--timeout", type=float, default=300.0, help="per-attempt cutoff in seconds")
    p.add_argument("--grace", type=float, default=0.5,
                   help="seconds between soft timeout signal and hard kill")
    p.add_argument("--mem-cap", type=int, default=None, help="address-space cap in bytes")
    p.add_argument("--mode", default="standard", choices=["standard", "abstraction"])
    p.add_argument("--allow-partial", action="store_true",
                   help="run with whichever adapters probe successfully")
    p.add_argument("--max-attempts", type=int, default=None,
                   help="stop after this many new attempts (smoke runs)")
    p.set_defaults(func=_cmd_run)

    p = add_parser("oracle-check", help="bounded ground-truth checks on small tasks")
    p.add_argument("tasks", nargs="+", help="canonical task files or directories")
    p.add_argument("--journal", required=True, help="results journal to append to")
    p.add_argument("--max-states", type=int, default=MAX_STATES_LIMIT,
                   help="trace-state bound for the temporal search")
    p.set_defaults(func=_cmd_oracle_check)

    p = add_parser("analyze", help="aggregate a journal into CSV exports")
    p.add_argument("--journal", required=True, help="results journal to read")
    p.add_argument("--out-csv", required=True, help="campaign CSV to write")
    p.add_argument("--manifest", help="manifest for catalogue row order")
    p.add_argument("--summary-csv", help="also write a summary table CSV")
    p.add_argument("--summary-rule", default="plain", choices=["plain", "selective"])
    p.set_defaults(func=_cmd_analyze)

    p = add_parser("plot-data", help="write plot-ready series files from a journal")
    p.add_argument("--journal", required=True, help="results journal to read")
    p.add_argument("--out", required=True, help="directory for .series files")
    p.add_argument("--problem", default="all", choices=list(PROBLEMS) + ["all"],
                   help="restrict to one problem")
    p.add_argument("--grouping", default="auto", choices=["auto", "by-role", "per-solver"],
                   help="panel layout of the series files")
    p.set_defaults(func=_cmd_plot_data)

    return parser


def dispatch(argv: list[str]) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse reports usage problems with status 2; campaign failures
        # own that code here, so usage problems map to the validation exit
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except (GenerationError, ValueError) as exc:
        _progress({"event": "error", "kind": "validation", "message": str(exc)})
        return 1
    except ConfigurationError as exc:
        _progress({"event": "error", "kind": "campaign", "message": str(exc)})
        return 2
    except OSError as exc:
        _progress({"event": "error", "kind": "io", "message": str(exc)})
        return 1


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
