from __future__ import annotations

from pathlib import Path

import pytest

from benchfigs.reader import load_series_dir
from benchfigs.render import FigureSpec, discover_specs, render_figure, render_figures

SAMPLE = Path(__file__).parent / "data" / "sample"


def by_key(files):
    return {(f.problem, f.panel): f for f in files}


def test_discover_specs_pairs_roles_and_splits_solvers():
    files = load_series_dir(SAMPLE)
    specs = discover_specs(files)
    spec_map = {}
    for s in specs:
        spec_map.setdefault(s.problem, []).append(s.panels)
    assert spec_map["P1"] == [("fol", "pltl")]
    assert sorted(spec_map["P5"]) == [("inkresat",), ("prover9",), ("spass",)]


def test_two_panel_figure_layout():
    files = load_series_dir(SAMPLE)
    keyed = by_key(files)
    fig = render_figure(
        FigureSpec("P1", ("fol", "pltl")),
        {"fol": keyed[("P1", "fol")], "pltl": keyed[("P1", "pltl")]},
    )
    assert len(fig.axes) == 2
    top, bottom = fig.axes
    assert len(top.lines) == 2  # two first-order solvers
    assert len(bottom.lines) == 1


def test_censored_points_render_distinct_markers():
    files = load_series_dir(SAMPLE)
    keyed = by_key(files)
    fol = keyed[("P1", "fol")]
    assert any(p.censored for s in fol.series for p in s.points)
    fig = render_figure(FigureSpec("P1", ("fol",)), {"fol": fol})
    (ax,) = fig.axes
    assert len(ax.collections) == 1  # the censored-point scatter
    offsets = ax.collections[0].get_offsets()
    assert 2000 in {int(x) for x, _ in offsets}


def test_plotted_data_matches_series_values():
    files = load_series_dir(SAMPLE)
    keyed = by_key(files)
    pltl = keyed[("P1", "pltl")]
    fig = render_figure(FigureSpec("P1", ("pltl",)), {"pltl": pltl})
    (line,) = fig.axes[0].lines
    xs = list(line.get_xdata())
    expected = [p.x for p in pltl.series[0].points if p.y is not None]
    assert xs == expected


def test_rendering_is_repeatable():
    files = load_series_dir(SAMPLE)
    keyed = by_key(files)
    spec = FigureSpec("P2", ("fol",))
    a = render_figure(spec, {"fol": keyed[("P2", "fol")]})
    b = render_figure(spec, {"fol": keyed[("P2", "fol")]})
    for la, lb in zip(a.axes[0].lines, b.axes[0].lines):
        assert list(la.get_xdata()) == list(lb.get_xdata())
        assert list(la.get_ydata()) == list(lb.get_ydata())


def test_render_figures_writes_files(tmp_path):
    written, warnings = render_figures(SAMPLE, tmp_path)
    names = {p.name for p in written}
    assert "p1.svg" in names
    assert {"p5_prover9.svg", "p5_spass.svg", "p5_inkresat.svg"} <= names
    assert not warnings
    assert all(p.stat().st_size > 0 for p in written)


def test_render_figures_png_and_log_scale(tmp_path):
    written, _ = render_figures(
        SAMPLE, tmp_path, fmt="png", y_scale="log",
        specs=[FigureSpec("P1", ("fol", "pltl"), "log")],
    )
    assert [p.name for p in written] == ["p1.png"]


def test_empty_series_dir_warns(tmp_path):
    empty = tmp_path / "empty"
    empty.mkdir()
    written, warnings = render_figures(empty, tmp_path / "out")
    assert written == []
    assert any("no .series files" in w for w in warnings)


def test_missing_panel_is_warned_not_fatal(tmp_path):
    files = load_series_dir(SAMPLE)
    keyed = by_key(files)
    specs = [
        FigureSpec("P1", ("fol", "pltl")),
        FigureSpec("P9", ("fol",)),
    ]
    src = tmp_path / "src"
    src.mkdir()
    for key in (("P1", "fol"), ("P1", "pltl")):
        f = keyed[key]
        (src / f.path.name).write_text(f.path.read_text(), encoding="utf-8")
    written, warnings = render_figures(src, tmp_path / "out", specs=specs)
    assert len(written) == 1
    assert len(warnings) == 1 and "P9" in warnings[0]


def test_cli_end_to_end(tmp_path, capsys):
    from benchfigs.cli import main

    out = tmp_path / "figs"
    main([str(SAMPLE), str(out)])
    captured = capsys.readouterr()
    assert len(list(out.glob("*.svg"))) >= 8
    assert "p1.svg" in captured.out


def test_cli_fails_when_nothing_renders(tmp_path, capsys):
    from benchfigs.cli import main

    empty = tmp_path / "empty"
    empty.mkdir()
    with pytest.raises(SystemExit) as exc:
        main([str(empty), str(tmp_path / "out")])
    assert exc.value.code == 1
