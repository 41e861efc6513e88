#!/usr/bin/env python3
"""Build the committed sample series fixtures under tests/data/sample/.

Synthesizes a deterministic campaign journal in the documented record
schema (one JSON object per line) covering every problem, then shells out
to the benchmark toolchain's CLI to aggregate it into plot-series files.
Requires the `tempobench` CLI on PATH.

Shapes are plausible rather than measured: first-order solver times grow
superlinearly with clause count, the propositional temporal solver stays
about two orders of magnitude below, and the largest first-order runs
time out so censored markers appear in the series.
"""

from __future__ import annotations

import json
import subprocess
import sys
import zlib
from pathlib import Path

HERE = Path(__file__).resolve().parent
SAMPLE_DIR = HERE.parent / "tests" / "data" / "sample"

SIZES = {
    "P1": [50, 100, 200, 500, 1000, 2000],
    "P2": [50, 100, 200, 500, 1000, 2000],
    "P3": [50, 100, 200, 500, 1000, 2000],
    "P4": [50, 100, 200, 500, 1000, 2000],
    "P5": [50, 100, 200, 500, 1000, 2000],
    "P6": [50, 100, 200, 500, 1000, 2000],
    "P7": [50, 100, 200],
    "P8": [50, 100, 200, 500, 1000],
}

SUBCASES = {
    "P1": [None],
    "P2": [None],
    "P3": ["x2", "x3", "x4", "x5"],
    "P4": ["len2", "len3", "len4", "len5"],
    "P5": ["a", "b", "c"],
    "P6": [f"{case}-{lv}-{sf}" for case in "ab"
           for lv, sf in ((90, 10), (80, 20), (65, 35), (50, 50), (35, 65), (20, 80), (10, 90))],
    "P7": ["a", "b", "c", "d"],
    "P8": ["a", "b", "c", "d", "e", "f"],
}

SOLVERS = {"prover9": 1.0, "spass": 0.8, "inkresat": 0.004}


def base_time(solver: str, problem: str, subcase: str | None, n: int) -> float:
    scale = SOLVERS[solver]
    # crc32 keeps the synthetic shapes stable across runs and interpreters
    jitter = zlib.crc32(f"{solver}/{problem}/{subcase}".encode()) % 7
    bump = 1.0 + 0.13 * jitter
    return scale * bump * (n / 1000.0) ** 1.8 + scale * 0.01


def records():
    for problem, sizes in SIZES.items():
        goal = "entailment" if problem in ("P7", "P8") else "sat-check"
        for subcase in SUBCASES[problem]:
            for n in sizes:
                sub = subcase if subcase is not None else "na"
                task = f"{problem.lower()}_{sub}_{n:04d}_{0:016x}"
                for solver, _ in SOLVERS.items():
                    strategy = (
                        "direct" if goal == "sat-check"
                        else ("negated-sat" if solver == "inkresat" else "native-goal")
                    )
                    t = base_time(solver, problem, subcase, n)
                    timeout = solver == "prover9" and n >= 2000
                    for attempt in (1, 2, 3):
                        if timeout:
                            outcome, wall = "TIMEOUT", 300.0
                        elif goal == "sat-check":
                            outcome = "SAT"
                            wall = round(t * (1 + 0.03 * attempt), 6)
                        else:
                            outcome = "PROVED"
                            wall = round(t * (1 + 0.03 * attempt), 6)
                        yield {
                            "task": task,
                            "problem": problem,
                            "subcase": subcase,
                            "n_clauses": n,
                            "solver": solver,
                            "solver_version": "sample",
                            "attempt": attempt,
                            "outcome": outcome,
                            "wall_time_s": wall,
                            "peak_mem_bytes": 1024 * 1024 * (8 if solver != "inkresat" else 2),
                            "encoding": "modal" if solver == "inkresat" else "standard",
                            "goal": goal,
                            "strategy": strategy,
                            "timestamp": "2026-01-01T00:00:00.000000Z",
                            "source": "harness",
                            "detail": "",
                        }


def main() -> None:
    SAMPLE_DIR.mkdir(parents=True, exist_ok=True)
    journal = SAMPLE_DIR / "journal.jsonl"
    with journal.open("w", encoding="utf-8") as fh:
        for record in records():
            fh.write(json.dumps(record, separators=(",", ":")) + "\n")
    subprocess.run(
        [
            "tempobench", "analyze",
            "--journal", str(journal),
            "--out-csv", str(SAMPLE_DIR / "campaign.csv"),
        ],
        check=True,
    )
    subprocess.run(
        [
            "tempobench", "plot-data",
            "--journal", str(journal),
            "--out", str(SAMPLE_DIR),
        ],
        check=True,
    )
    print(f"sample data written to {SAMPLE_DIR}", file=sys.stderr)


if __name__ == "__main__":
    main()
