"""Figure construction from parsed series files.

Layout rules follow the campaign's figure shapes: a problem whose series
files form exactly the {fol, pltl} panel pair becomes one two-panel figure
(first-order provers on top, the propositional temporal prover below);
any other panel set becomes one figure per panel, e.g. the three
per-prover figures of the clause-length-grouping problem.  Censored
points (timeouts) are drawn as distinct markers pinned to the top of the
panel instead of fabricated times.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be fixed first)

from .reader import SeriesFile, load_series_dir

CENSOR_MARKER = "x"
CENSOR_COLOR = "tab:red"


@dataclass(frozen=True)
class FigureSpec:
    problem: str
    panels: tuple[str, ...]
    y_scale: str = "linear"
    output_name: str = ""

    def name(self, fmt: str) -> str:
        if self.output_name:
            return self.output_name
        if set(self.panels) == {"fol", "pltl"}:
            return f"{self.problem.lower()}.{fmt}"
        return f"{self.problem.lower()}_{self.panels[0]}.{fmt}"


def discover_specs(files: list[SeriesFile], y_scale: str = "linear") -> list[FigureSpec]:
    """One spec per figure the series directory supports."""
    by_problem: dict[str, dict[str, SeriesFile]] = {}
    for f in files:
        by_problem.setdefault(f.problem, {})[f.panel] = f
    specs = []
    for problem in sorted(by_problem, key=lambda p: (len(p), p)):
        panels = by_problem[problem]
        if set(panels) == {"fol", "pltl"}:
            specs.append(FigureSpec(problem, ("fol", "pltl"), y_scale))
        else:
            for panel in sorted(panels):
                specs.append(FigureSpec(problem, (panel,), y_scale))
    return specs


def _plot_panel(ax, series_file: SeriesFile, y_scale: str) -> None:
    finite_max = 0.0
    for series in series_file.series:
        xs = [p.x for p in series.points if p.y is not None]
        ys = [p.y for p in series.points if p.y is not None]
        finite_max = max([finite_max] + ys)
        ax.plot(xs, ys, marker="o", markersize=3, linewidth=1.2, label=series.name)
    censor_y = finite_max if finite_max > 0 else 1.0
    censored_xs = sorted(
        {p.x for s in series_file.series for p in s.points if p.censored}
    )
    if censored_xs:
        ax.scatter(
            censored_xs,
            [censor_y] * len(censored_xs),
            marker=CENSOR_MARKER,
            color=CENSOR_COLOR,
            zorder=5,
            label="timeout",
        )
    if y_scale == "log" and finite_max > 0:
        ax.set_yscale("log")
    ax.set_xlabel("clauses in formula")
    ax.set_ylabel("time [s]")
    ax.set_title(f"{series_file.problem} ({series_file.panel})", fontsize=10)
    if len(series_file.series) <= 14:
        ax.legend(fontsize=7)
    ax.grid(True, alpha=0.3)


def render_figure(spec: FigureSpec, by_panel: dict[str, SeriesFile]):
    """Matplotlib figure for one spec; caller saves or inspects it."""
    missing = [p for p in spec.panels if p not in by_panel]
    if missing:
        raise FileNotFoundError(f"{spec.problem}: missing series panels {missing}")
    fig, axes = plt.subplots(
        nrows=len(spec.panels), ncols=1, figsize=(6.4, 3.6 * len(spec.panels)),
        squeeze=False,
    )
    for ax, panel in zip(axes[:, 0], spec.panels):
        _plot_panel(ax, by_panel[panel], spec.y_scale)
    fig.tight_layout()
    return fig


def render_figures(
    series_dir: str | Path,
    out_dir: str | Path,
    fmt: str = "svg",
    y_scale: str = "linear",
    specs: list[FigureSpec] | None = None,
) -> tuple[list[Path], list[str]]:
    """Render every figure the series directory supports.

    Returns (written paths, warnings).  Figures that cannot be built emit
    a warning and are skipped; callers decide what exit status that
    deserves (the CLI fails only when nothing renders).
    """
    files = load_series_dir(series_dir)
    if specs is None:
        specs = discover_specs(files, y_scale)
    by_key = {(f.problem, f.panel): f for f in files}
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    warnings: list[str] = []
    for spec in specs:
        panels = {
            p: by_key[(spec.problem, p)] for p in spec.panels if (spec.problem, p) in by_key
        }
        try:
            fig = render_figure(spec, panels)
        except FileNotFoundError as exc:
            warnings.append(str(exc))
            continue
        path = out_dir / spec.name(fmt)
        fig.savefig(path)
        plt.close(fig)
        written.append(path)
    if not files:
        warnings.append(f"no .series files found in {series_dir}")
    return written, warnings
