"""Aggregation of run records into tables, CSV exports and plot series.

Timeout and memout attempts never contribute to a mean: they are excluded
and counted, because substituting the cap would silently bias the
averages.  A (task, solver) group whose attempts disagree is flagged
anomalous instead of being averaged away.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import PROBLEMS
from .harness import Outcome, RESOURCE_OUTCOMES, RunRecord

# solver roles used to split plot panels; unlisted solvers count as "fol"
DEFAULT_SOLVER_ROLES = {"prover9": "fol", "spass": "fol", "inkresat": "pltl"}

CSV_COLUMNS = (
    "problem",
    "subcase",
    "n_clauses",
    "solver",
    "encoding",
    "mean_time_s",
    "mean_mem_bytes",
    "outcome",
    "anomaly",
    "exclusions",
)


@dataclass(frozen=True)
class AggregateRecord:
    """Mean over the attempts of one (task, solver) pair."""

    task: str
    problem: str
    subcase: str | None
    n_clauses: int
    solver: str
    encoding: str
    attempt_count: int
    mean_time_s: float | None
    mean_mem_bytes: int | None
    consensus: Outcome | None
    anomaly: bool
    exclusions: int


def aggregate(records: Iterable[RunRecord]) -> list[AggregateRecord]:
    """Group harness records by (task, solver) and average the attempts.

    Input order does not matter; output follows the first appearance of
    each group, which for a journal is campaign order.
    """
    groups: dict[tuple[str, str], list[RunRecord]] = {}
    for record in records:
        if record.source != "harness":
            continue
        groups.setdefault((record.task, record.solver), []).append(record)
    out = []
    for (task, solver), attempts in groups.items():
        attempts = sorted(attempts, key=lambda r: r.attempt)
        included = [r for r in attempts if r.outcome not in RESOURCE_OUTCOMES]
        excluded = [r for r in attempts if r.outcome in RESOURCE_OUTCOMES]
        outcomes = {r.outcome for r in attempts}
        non_resource = {r.outcome for r in included}
        if len(non_resource) == 1:
            consensus = next(iter(non_resource))
        elif not non_resource and len(outcomes) == 1:
            consensus = next(iter(outcomes))  # e.g. every attempt timed out
        else:
            consensus = None
        mean_time = (
            sum(r.wall_time_s for r in included) / len(included) if included else None
        )
        mean_mem = (
            round(sum(r.peak_mem_bytes for r in included) / len(included))
            if included
            else None
        )
        first = attempts[0]
        out.append(
            AggregateRecord(
                task=task,
                problem=first.problem,
                subcase=first.subcase,
                n_clauses=first.n_clauses,
                solver=solver,
                encoding=first.encoding,
                attempt_count=len(attempts),
                mean_time_s=mean_time,
                mean_mem_bytes=mean_mem,
                consensus=consensus,
                anomaly=len(outcomes) > 1,
                exclusions=len(excluded),
            )
        )
    return out


# --- summary table -----------------------------------------------------------

@dataclass(frozen=True)
class SelectiveRule:
    """Column averages over a chosen solver per column.

    ``reject`` columns get no average at all; every other selected column
    averages only the rows whose solver matches ``pick`` for that column
    (or every row when the column is not in ``pick``).
    """

    pick: dict[int, str]
    reject: tuple[int, ...] = ()


@dataclass(frozen=True)
class SummaryTable:
    rows: tuple[tuple[str, str], ...]  # (problem, solver)
    columns: tuple[int, ...]
    cells: dict[tuple[tuple[str, str], int], float | None]
    averages: dict[int, float]


def summary_table(
    aggregates: Sequence[AggregateRecord],
    problems: Sequence[str] | None = None,
    solvers: Sequence[str] | None = None,
    columns: Sequence[int] = (50, 100, 200, 500),
    rule: SelectiveRule | str = "plain",
) -> SummaryTable:
    """Per-(problem, solver) mean times by clause count, plus column averages.

    A cell averages the per-task means of every subcase of the problem at
    that size.  Tasks without a usable mean leave a gap (None), never a
    zero.
    """
    if problems is None:
        problems = [p for p in PROBLEMS if any(a.problem == p for a in aggregates)]
    if solvers is None:
        solvers = sorted({a.solver for a in aggregates})
    rows = tuple((p, s) for p in problems for s in solvers)
    cells: dict[tuple[tuple[str, str], int], float | None] = {}
    for row in rows:
        problem, solver = row
        for col in columns:
            values = [
                a.mean_time_s
                for a in aggregates
                if a.problem == problem
                and a.solver == solver
                and a.n_clauses == col
                and a.mean_time_s is not None
            ]
            cells[(row, col)] = sum(values) / len(values) if values else None
    averages: dict[int, float] = {}
    for col in columns:
        if isinstance(rule, SelectiveRule):
            if col in rule.reject:
                continue
            wanted = rule.pick.get(col)
            pool = [
                cells[(row, col)]
                for row in rows
                if cells[(row, col)] is not None and (wanted is None or row[1] == wanted)
            ]
        else:
            pool = [cells[(row, col)] for row in rows if cells[(row, col)] is not None]
        if pool:
            averages[col] = sum(pool) / len(pool)
    return SummaryTable(rows, tuple(columns), cells, averages)


# --- CSV export ----------------------------------------------------------------

def _row_sort_key(a: AggregateRecord, order: dict[str, int] | None):
    if order is not None and a.task in order:
        return (0, order[a.task], a.solver)
    problem_rank = PROBLEMS.index(a.problem) if a.problem in PROBLEMS else len(PROBLEMS)
    return (1, problem_rank, a.subcase or "", a.n_clauses, a.solver)


def export_csv(
    aggregates: Sequence[AggregateRecord],
    task_order: Sequence[str] | None = None,
) -> str:
    """Deterministic CSV text; pass the manifest's task ids for catalogue order.

    Without a task order, rows sort by (problem, subcase, size, solver).
    """
    order = {t: i for i, t in enumerate(task_order)} if task_order is not None else None
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for a in sorted(aggregates, key=lambda x: _row_sort_key(x, order)):
        writer.writerow(
            [
                a.problem,
                a.subcase if a.subcase is not None else "",
                a.n_clauses,
                a.solver,
                a.encoding,
                repr(a.mean_time_s) if a.mean_time_s is not None else "",
                a.mean_mem_bytes if a.mean_mem_bytes is not None else "",
                a.consensus.value if a.consensus is not None else "",
                int(a.anomaly),
                a.exclusions,
            ]
        )
    return buf.getvalue()


# --- plot series -----------------------------------------------------------------

SERIES_FORMAT_VERSION = 1


@dataclass(frozen=True)
class SeriesPoint:
    x: int
    y: float | None  # None marks a censored (timed/memed-out) point
    censored: bool


@dataclass(frozen=True)
class Series:
    name: str
    points: tuple[SeriesPoint, ...]


@dataclass(frozen=True)
class SeriesFile:
    problem: str
    panel: str
    series: tuple[Series, ...]

    @property
    def filename(self) -> str:
        return f"{self.problem.lower()}_{self.panel}.series"

    def render(self) -> str:
        lines = [
            f"# tempobench-series {SERIES_FORMAT_VERSION}",
            f"# problem: {self.problem}",
            f"# panel: {self.panel}",
            "# columns: n_clauses mean_time_s censored",
        ]
        for series in self.series:
            lines.append(f"# series: {series.name}")
            for pt in series.points:
                y = "nan" if pt.y is None else repr(pt.y)
                lines.append(f"{pt.x} {y} {int(pt.censored)}")
        return "\n".join(lines) + "\n"


def _series_points(group: list[AggregateRecord]) -> tuple[SeriesPoint, ...]:
    points = []
    for a in sorted(group, key=lambda g: g.n_clauses):
        censored = a.mean_time_s is None or a.consensus in RESOURCE_OUTCOMES
        points.append(SeriesPoint(a.n_clauses, None if censored else a.mean_time_s, censored))
    return tuple(points)


def plot_series(
    aggregates: Sequence[AggregateRecord],
    problem: str,
    grouping: str = "auto",
    solver_roles: dict[str, str] | None = None,
) -> list[SeriesFile]:
    """Series files for one problem's figures.

    ``by-role`` makes one file per solver role (fol / pltl) with a series
    per solver and subcase; ``per-solver`` makes one file per solver with
    a series per subcase.  ``auto`` follows the reported figure layout:
    P1-P4 by role, P5-P8 per solver.
    """
    if problem not in PROBLEMS:
        raise ValueError(f"unknown problem id {problem!r}")
    if grouping == "auto":
        grouping = "by-role" if problem in ("P1", "P2", "P3", "P4") else "per-solver"
    if grouping not in ("by-role", "per-solver"):
        raise ValueError(f"unknown grouping {grouping!r}")
    roles = solver_roles or DEFAULT_SOLVER_ROLES
    rows = [a for a in aggregates if a.problem == problem]
    solvers = sorted({a.solver for a in rows})
    files = []
    if grouping == "by-role":
        panels: dict[str, list[Series]] = {}
        for solver in solvers:
            role = roles.get(solver, "fol")
            subcases = sorted({a.subcase for a in rows if a.solver == solver}, key=str)
            for sub in subcases:
                group = [a for a in rows if a.solver == solver and a.subcase == sub]
                name = solver if sub is None else f"{solver}:{sub}"
                panels.setdefault(role, []).append(Series(name, _series_points(group)))
        for panel in sorted(panels):
            files.append(SeriesFile(problem, panel, tuple(panels[panel])))
    else:
        for solver in solvers:
            series = []
            subcases = sorted({a.subcase for a in rows if a.solver == solver}, key=str)
            for sub in subcases:
                group = [a for a in rows if a.solver == solver and a.subcase == sub]
                series.append(Series(sub if sub is not None else solver, _series_points(group)))
            files.append(SeriesFile(problem, solver, tuple(series)))
    return files
