"""Report smoke criterion: well-formed SVG/HTML from a fixture run directory,
with every verdict row present (structural comparison, not pixel)."""

import xml.etree.ElementTree as ET

from mhdreport import plot_condition_region, plot_norm_decay, render_summary

from conftest import VERDICTS


def _verdict(name, passed, detail):
    print(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")
    assert passed, f"{name}: {detail}"


def test_acceptance_report_smoke(run_dir, sweep_dir, tmp_path):
    out = tmp_path / "report"
    decay = plot_norm_decay(run_dir, out)
    region = plot_condition_region(sweep_dir, out)
    index = render_summary(run_dir, out)

    svg_ok = True
    for path in (decay, region):
        root = ET.parse(path).getroot()
        svg_ok = svg_ok and root.tag.endswith("svg")

    page = index.read_text()
    rows_present = all(name in page for name in VERDICTS["checks"])
    html_ok = page.startswith("<!DOCTYPE html>") and "</html>" in page

    _verdict(
        "report smoke",
        svg_ok and rows_present and html_ok,
        f"{decay.name} and {region.name} are well-formed SVG; index.html "
        f"contains {len(VERDICTS['checks'])}/{len(VERDICTS['checks'])} verdict rows",
    )
