"""Measured execution of external solvers over emitted problem files.

Protocol: every (task, solver) pair runs a fixed number of attempts
(default 3) strictly sequentially, one timed child process at a time.
Each attempt records the verdict, the wall time around the child's
lifetime and the child's peak resident set as reported by the operating
system's per-child accounting (``wait4``), not by polling.  A soft
timeout signals the whole process group, and a 0.5 s grace window later
the group is killed hard.  Results append to a line-delimited journal
that makes interrupted campaigns resumable.

POSIX only: process groups, ``os.wait4`` and ``resource`` are required.
"""

from __future__ import annotations

import json
import os
import re
import resource
import shutil
import signal
import subprocess
import tempfile
import time
from dataclasses import asdict, dataclass, replace
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Callable, Sequence

from .core import Task
from .emit import EncodingMode, split_goal, task_filename
from .emit import GOAL_ENTAILMENT, GOAL_SAT_CHECK, STRATEGY_DIRECT, STRATEGY_NATIVE_GOAL, STRATEGY_NEGATED_SAT


class ConfigurationError(RuntimeError):
    """Campaign cannot start: missing executable, file or bad adapter config."""


class Outcome(Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    PROVED = "PROVED"
    NOT_PROVED = "NOT_PROVED"
    TIMEOUT = "TIMEOUT"
    MEMOUT = "MEMOUT"
    ERROR = "ERROR"


RESOURCE_OUTCOMES = (Outcome.TIMEOUT, Outcome.MEMOUT)

# verdict tokens a pattern may map to; goal-aware mapping below
_TOKENS = ("proof", "completion", "sat", "unsat", "timeout", "memout", "error")

# appended after the adapter's own patterns; banner text differs per tool,
# but memory exhaustion wording is fairly stable
DEFAULT_RESOURCE_PATTERNS = (
    (r"MemoryError|std::bad_alloc|out of memory|Cannot allocate memory", "memout"),
)


@dataclass(frozen=True)
class Limits:
    timeout_s: float = 300.0
    mem_cap_bytes: int | None = None
    grace_s: float = 0.5

    def __post_init__(self):
        if self.timeout_s <= 0:
            raise ValueError("timeout must be positive")
        if self.mem_cap_bytes is not None and self.mem_cap_bytes <= 0:
            raise ValueError("memory cap must be positive")


@dataclass(frozen=True)
class SolverAdapter:
    """How to invoke one solver and read its verdict from the output."""

    name: str
    executable: str
    args: tuple[str, ...]  # template; '{input}' is replaced by the file path
    target: str  # tptp | ladr | intohylo
    patterns: tuple[tuple[str, str], ...]  # (regex, token); first match wins
    version_args: tuple[str, ...] = ()

    def __post_init__(self):
        for _, token in self.patterns:
            if token not in _TOKENS:
                raise ConfigurationError(f"unknown verdict token {token!r}")
        if self.target not in ("tptp", "ladr", "intohylo"):
            raise ConfigurationError(f"adapter target must be a solver format, got {self.target!r}")

    def command(self, input_file: str) -> list[str]:
        return [self.executable] + [a.replace("{input}", input_file) for a in self.args]


DEFAULT_ADAPTERS = (
    SolverAdapter(
        name="prover9",
        executable="prover9",
        args=("-f", "{input}"),
        target="ladr",
        patterns=(
            (r"THEOREM PROVED", "proof"),
            (r"SEARCH FAILED", "completion"),
            (r"Fatal error", "error"),
        ),
        version_args=("--version",),
    ),
    SolverAdapter(
        name="spass",
        executable="SPASS",
        args=("-TPTP", "{input}"),
        target="tptp",
        patterns=(
            (r"Proof found", "proof"),
            (r"Completion found", "completion"),
            (r"Ran out of time", "timeout"),
        ),
        version_args=("--help",),
    ),
    SolverAdapter(
        name="inkresat",
        executable="inkresat",
        args=("{input}",),
        target="intohylo",
        patterns=(
            (r"unsatisfiable", "unsat"),
            (r"satisfiable", "sat"),
        ),
        version_args=(),
    ),
)


@dataclass(frozen=True)
class RunRecord:
    """One solver attempt. Journal field order matches the field order here."""

    task: str
    problem: str
    subcase: str | None
    n_clauses: int
    solver: str
    solver_version: str
    attempt: int
    outcome: Outcome
    wall_time_s: float
    peak_mem_bytes: int
    encoding: str
    goal: str
    strategy: str
    timestamp: str
    source: str = "harness"
    detail: str = ""

    def to_json_line(self) -> str:
        doc = asdict(self)
        doc["outcome"] = self.outcome.value
        return json.dumps(doc, separators=(",", ":"), ensure_ascii=True)

    @classmethod
    def from_json_line(cls, line: str) -> "RunRecord":
        doc = json.loads(line)
        doc["outcome"] = Outcome(doc["outcome"])
        return cls(**doc)


def _utc_now() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%S.%fZ")


# --- outcome classification --------------------------------------------------

def _map_token(token: str, goal: str, strategy: str) -> Outcome:
    if token == "timeout":
        return Outcome.TIMEOUT
    if token == "memout":
        return Outcome.MEMOUT
    if token == "error":
        return Outcome.ERROR
    if goal == GOAL_SAT_CHECK:
        # a refutation of the axioms means the formula set is unsatisfiable
        return {
            "proof": Outcome.UNSAT,
            "completion": Outcome.SAT,
            "sat": Outcome.SAT,
            "unsat": Outcome.UNSAT,
        }[token]
    if strategy == STRATEGY_NEGATED_SAT:
        # the negation was tested: unsatisfiable negation proves the goal
        return {
            "proof": Outcome.PROVED,
            "completion": Outcome.NOT_PROVED,
            "sat": Outcome.NOT_PROVED,
            "unsat": Outcome.PROVED,
        }[token]
    return {
        "proof": Outcome.PROVED,
        "completion": Outcome.NOT_PROVED,
        "sat": Outcome.NOT_PROVED,
        "unsat": Outcome.PROVED,
    }[token]


def classify_output(
    adapter: SolverAdapter,
    exit_status: int,
    captured_output: str,
    goal: str = GOAL_SAT_CHECK,
    strategy: str = STRATEGY_DIRECT,
) -> Outcome:
    """First matching verdict pattern wins; anything unmatched is ERROR."""
    for pattern, token in tuple(adapter.patterns) + DEFAULT_RESOURCE_PATTERNS:
        if re.search(pattern, captured_output):
            return _map_token(token, goal, strategy)
    return Outcome.ERROR


# --- process execution --------------------------------------------------------

def probe_version(adapter: SolverAdapter) -> str:
    """Resolve the executable and return a short version string.

    The executable must exist; the probe command may exit non-zero (many
    provers do on --help) as long as it can be spawned.
    """
    path = shutil.which(adapter.executable)
    if path is None and os.path.isfile(adapter.executable) and os.access(adapter.executable, os.X_OK):
        path = adapter.executable
    if path is None:
        raise ConfigurationError(f"solver executable not found: {adapter.executable!r}")
    if not adapter.version_args:
        return "unknown"
    try:
        proc = subprocess.run(
            [path, *adapter.version_args],
            capture_output=True,
            text=True,
            timeout=10,
            errors="replace",
        )
    except (OSError, subprocess.TimeoutExpired) as exc:
        raise ConfigurationError(f"version probe failed for {adapter.name}: {exc}") from exc
    for line in (proc.stdout + proc.stderr).splitlines():
        line = line.strip()
        if line:
            return line[:120]
    return "unknown"


def _execute_child(cmd: list[str], limits: Limits) -> tuple[int, float, int, str, bool]:
    """Run one child: (exit_status, wall_s, peak_rss_bytes, output, timed_out).

    Output goes to a temporary file so a chatty child can never block on a
    full pipe while being timed.
    """
    preexec = None
    if limits.mem_cap_bytes is not None:
        cap = limits.mem_cap_bytes

        def preexec():  # runs in the child between fork and exec
            resource.setrlimit(resource.RLIMIT_AS, (cap, cap))

    with tempfile.TemporaryFile(mode="w+b") as out:
        start = time.monotonic()
        try:
            proc = subprocess.Popen(
                cmd,
                stdout=out,
                stderr=subprocess.STDOUT,
                stdin=subprocess.DEVNULL,
                start_new_session=True,
                preexec_fn=preexec,
            )
        except OSError as exc:
            raise ConfigurationError(f"cannot launch {cmd[0]!r}: {exc}") from exc

        soft_deadline = start + limits.timeout_s
        hard_deadline = None
        timed_out = False
        sleep_s = 0.0002
        while True:
            pid, status, rusage = os.wait4(proc.pid, os.WNOHANG)
            if pid != 0:
                break
            now = time.monotonic()
            if hard_deadline is not None and now >= hard_deadline:
                try:
                    os.killpg(proc.pid, signal.SIGKILL)
                except ProcessLookupError:
                    pass
                pid, status, rusage = os.wait4(proc.pid, 0)
                break
            if hard_deadline is None and now >= soft_deadline:
                timed_out = True
                hard_deadline = now + limits.grace_s
                try:
                    os.killpg(proc.pid, signal.SIGTERM)
                except ProcessLookupError:
                    pass
            time.sleep(sleep_s)
            if sleep_s < 0.005:
                sleep_s = min(sleep_s * 2, 0.005)
        wall = time.monotonic() - start
        proc.returncode = os.waitstatus_to_exitcode(status)
        out.seek(0)
        output = out.read().decode("utf-8", errors="replace")
    peak = rusage.ru_maxrss * 1024  # ru_maxrss is KiB on Linux
    return proc.returncode, wall, peak, output, timed_out


def run_solver(
    adapter: SolverAdapter,
    input_file: str | Path,
    limits: Limits,
    goal: str = GOAL_SAT_CHECK,
    strategy: str = STRATEGY_DIRECT,
    solver_version: str | None = None,
) -> RunRecord:
    """One measured attempt; task metadata fields are filled by the caller."""
    input_file = str(input_file)
    if solver_version is None:
        solver_version = probe_version(adapter)
    if not os.path.exists(input_file):
        raise ConfigurationError(f"input file missing: {input_file}")
    cmd = adapter.command(input_file)
    exit_status, wall, peak, output, timed_out = _execute_child(cmd, limits)
    if timed_out:
        outcome = Outcome.TIMEOUT
    else:
        outcome = classify_output(adapter, exit_status, output, goal, strategy)
    detail = ""
    if outcome is Outcome.ERROR:
        detail = output[-500:].strip()
    return RunRecord(
        task=Path(input_file).stem,
        problem="",
        subcase=None,
        n_clauses=0,
        solver=adapter.name,
        solver_version=solver_version,
        attempt=0,
        outcome=outcome,
        wall_time_s=round(wall, 6),
        peak_mem_bytes=peak,
        encoding="",
        goal=goal,
        strategy=strategy,
        timestamp=_utc_now(),
        detail=detail,
    )


# --- journal -------------------------------------------------------------------

def load_journal(path: str | Path) -> list[RunRecord]:
    path = Path(path)
    if not path.exists():
        return []
    records = []
    with path.open("r", encoding="utf-8") as fh:
        for i, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                records.append(RunRecord.from_json_line(line))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"{path}:{i}: bad journal line: {exc}") from exc
    return records


class JournalWriter:
    """Append-only line-delimited record store."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = self.path.open("a", encoding="utf-8")

    def append(self, record: RunRecord) -> None:
        self._fh.write(record.to_json_line() + "\n")
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


# --- campaign -------------------------------------------------------------------

def _goal_strategy(task: Task, target: str) -> tuple[str, str]:
    goal, _, _ = split_goal(task)
    if goal == GOAL_ENTAILMENT:
        strategy = STRATEGY_NEGATED_SAT if target == "intohylo" else STRATEGY_NATIVE_GOAL
    else:
        strategy = STRATEGY_DIRECT
    return goal, strategy


def run_benchmark(
    tasks: Sequence[Task],
    adapters: Sequence[SolverAdapter],
    limits: Limits,
    emitted_dir: str | Path,
    journal_path: str | Path,
    repeats: int = 3,
    encoding: EncodingMode = EncodingMode.STANDARD,
    progress: Callable[[dict], None] | None = None,
    max_new_attempts: int | None = None,
) -> list[RunRecord]:
    """Run `repeats` attempts per (task, adapter), resuming from the journal.

    Timed attempts execute one at a time; nothing else runs while a child
    is being measured.  Per-attempt solver failures are recorded and the
    campaign continues; only configuration problems abort.
    """
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    emitted_dir = Path(emitted_dir)
    versions = {a.name: probe_version(a) for a in adapters}

    for task in tasks:
        for adapter in adapters:
            f = emitted_dir / adapter.target / task_filename(task, adapter.target)
            if not f.exists():
                raise ConfigurationError(f"emitted input missing: {f}")

    existing = load_journal(journal_path)
    done = {
        (r.task, r.solver, r.attempt)
        for r in existing
        if r.source == "harness"
    }
    records = list(existing)
    new_attempts = 0
    with JournalWriter(journal_path) as journal:
        for task in tasks:
            for adapter in adapters:
                goal, strategy = _goal_strategy(task, adapter.target)
                input_file = emitted_dir / adapter.target / task_filename(task, adapter.target)
                enc = "modal" if adapter.target == "intohylo" else encoding.value
                for attempt in range(1, repeats + 1):
                    if (task.task_id, adapter.name, attempt) in done:
                        continue
                    if max_new_attempts is not None and new_attempts >= max_new_attempts:
                        return records
                    raw = run_solver(
                        adapter,
                        input_file,
                        limits,
                        goal=goal,
                        strategy=strategy,
                        solver_version=versions[adapter.name],
                    )
                    record = replace(
                        raw,
                        task=task.task_id,
                        problem=task.problem,
                        subcase=task.subcase,
                        n_clauses=task.n_clauses,
                        attempt=attempt,
                        encoding=enc,
                    )
                    journal.append(record)
                    records.append(record)
                    new_attempts += 1
                    if progress is not None:
                        progress(
                            {
                                "event": "attempt",
                                "task": record.task,
                                "solver": record.solver,
                                "attempt": attempt,
                                "outcome": record.outcome.value,
                                "wall_time_s": record.wall_time_s,
                            }
                        )
    return records


# --- adapter configuration -------------------------------------------------------

def load_adapters(config: dict | None) -> list[SolverAdapter]:
    """Adapters from a config mapping, with environment path overrides.

    ``TEMPOBENCH_<NAME>_EXE`` replaces the executable of the adapter with
    that (upper-cased) name.  Without config the shipped defaults apply.
    """
    adapters = []
    entries = (config or {}).get("adapters")
    if entries is None:
        adapters = list(DEFAULT_ADAPTERS)
    else:
        for entry in entries:
            try:
                adapters.append(
                    SolverAdapter(
                        name=entry["name"],
                        executable=entry["executable"],
                        args=tuple(entry.get("args", ("{input}",))),
                        target=entry["target"],
                        patterns=tuple((p, t) for p, t in entry.get("patterns", ())),
                        version_args=tuple(entry.get("version_args", ())),
                    )
                )
            except KeyError as exc:
                raise ConfigurationError(f"adapter entry missing key {exc}") from exc
    out = []
    for adapter in adapters:
        override = os.environ.get(f"TEMPOBENCH_{adapter.name.upper()}_EXE")
        out.append(replace(adapter, executable=override) if override else adapter)
    return out
