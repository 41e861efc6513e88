"""Parser for the columnar plot-series files produced by the benchmark toolchain.

Format (version 1):

    # tempobench-series 1
    # problem: P1
    # panel: fol
    # columns: n_clauses mean_time_s censored
    # series: prover9
    50 0.0167 0
    2000 nan 1
    # series: spass
    ...

A censored row (flag 1, y printed as nan) marks a timeout or memout cell:
there is no measured time at that x position.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path


class SeriesFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Point:
    x: int
    y: float | None
    censored: bool


@dataclass(frozen=True)
class Series:
    name: str
    points: tuple[Point, ...]


@dataclass(frozen=True)
class SeriesFile:
    path: Path
    problem: str
    panel: str
    series: tuple[Series, ...]


def parse_series_file(path: str | Path) -> SeriesFile:
    path = Path(path)
    problem = panel = None
    version = None
    series: list[Series] = []
    current_name: str | None = None
    current_points: list[Point] = []

    def flush():
        nonlocal current_name, current_points
        if current_name is not None:
            series.append(Series(current_name, tuple(current_points)))
        current_name, current_points = None, []

    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            meta = line[1:].strip()
            if meta.startswith("tempobench-series"):
                version = meta.split()[-1]
            elif meta.startswith("problem:"):
                problem = meta.split(":", 1)[1].strip()
            elif meta.startswith("panel:"):
                panel = meta.split(":", 1)[1].strip()
            elif meta.startswith("series:"):
                flush()
                current_name = meta.split(":", 1)[1].strip()
            elif meta.startswith("columns:"):
                pass
            else:
                raise SeriesFormatError(f"{path}:{lineno}: unknown header {line!r}")
            continue
        if current_name is None:
            raise SeriesFormatError(f"{path}:{lineno}: data before any series header")
        parts = line.split()
        if len(parts) != 3:
            raise SeriesFormatError(f"{path}:{lineno}: expected 3 columns, got {len(parts)}")
        try:
            x = int(parts[0])
            y = float(parts[1])
            censored = bool(int(parts[2]))
        except ValueError as exc:
            raise SeriesFormatError(f"{path}:{lineno}: {exc}") from exc
        current_points.append(Point(x, None if math.isnan(y) else y, censored))
    flush()

    if version != "1":
        raise SeriesFormatError(f"{path}: unsupported series format version {version!r}")
    if problem is None or panel is None:
        raise SeriesFormatError(f"{path}: missing problem/panel headers")
    return SeriesFile(path, problem, panel, tuple(series))


def load_series_dir(series_dir: str | Path) -> list[SeriesFile]:
    series_dir = Path(series_dir)
    return [parse_series_file(p) for p in sorted(series_dir.glob("*.series"))]
