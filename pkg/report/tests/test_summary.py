import re
import xml.etree.ElementTree as ET

from mhdreport import render_summary
from mhdreport.cli import main

from conftest import VERDICTS, make_run_dir


def test_summary_contains_all_verdict_rows(run_dir, tmp_path):
    index = render_summary(run_dir, tmp_path / "report")
    page = index.read_text()
    for name in VERDICTS["checks"]:
        assert name in page
    assert page.count('class="pass"') == len(VERDICTS["checks"])
    assert "all checks passed" in page


def test_summary_embeds_config_and_figure(run_dir, tmp_path):
    out = tmp_path / "report"
    index = render_summary(run_dir, out)
    page = index.read_text()
    assert "grid.n" in page and "recipe.epsilon" in page
    assert 'src="norm_decay.svg"' in page
    assert (out / "norm_decay.svg").exists()


def test_summary_without_verdicts_still_renders(tmp_path):
    run = make_run_dir(tmp_path / "run", with_verdicts=False)
    index = render_summary(run, tmp_path / "report")
    page = index.read_text()
    assert "Verification verdicts" not in page
    assert "Configuration" in page


def test_summary_failed_check_is_marked(tmp_path):
    run = make_run_dir(tmp_path / "run")
    import json
    verdicts = json.loads((run / "verdicts.json").read_text())
    verdicts["checks"]["leray_projection"]["pass"] = False
    verdicts["all_pass"] = False
    (run / "verdicts.json").write_text(json.dumps(verdicts))
    page = render_summary(run, tmp_path / "report").read_text()
    assert 'class="fail"' in page
    assert "FAILURES present" in page


def test_sweep_summary_table(sweep_dir, tmp_path):
    out = tmp_path / "report"
    index = render_summary(sweep_dir, out)
    page = index.read_text()
    assert "Sweep members" in page
    assert 'src="condition_region.svg"' in page
    assert (out / "condition_region.svg").exists()
    # one row per member
    assert page.count("<td>0.2") >= 2  # 0.28 and 0.2 member rows


def test_cli_run_directory(run_dir, tmp_path, capsys):
    out = tmp_path / "report"
    assert main([str(run_dir), "--out", str(out)]) == 0
    assert (out / "index.html").exists()
    assert (out / "norm_decay.svg").exists()


def test_cli_sweep_directory(sweep_dir, tmp_path):
    out = tmp_path / "report"
    assert main([str(sweep_dir), "--out", str(out)]) == 0
    assert (out / "index.html").exists()
    assert (out / "condition_region.svg").exists()


def test_cli_refuses_bad_directory(tmp_path, capsys):
    assert main([str(tmp_path), "--out", str(tmp_path / "x")]) == 2
    assert "provenance" in capsys.readouterr().err


def test_html_is_parseable(run_dir, tmp_path):
    index = render_summary(run_dir, tmp_path / "report")
    # strict XML after unwrapping the doctype: all tags balanced
    text = index.read_text()
    body = re.sub(r"^<!DOCTYPE[^>]*>", "", text).strip()
    ET.fromstring(body)
