"""HTML run summaries: configuration, verdicts, norms and figures."""

from __future__ import annotations

import html
from pathlib import Path

from .artifacts import RunArtifacts, load_run
from .figures import plot_condition_region, plot_norm_decay

SUMMARY_NAME = "index.html"

_PAGE = """<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8"/>
<title>{title}</title>
<style>
body {{ font-family: sans-serif; margin: 2em; max-width: 70em; }}
table {{ border-collapse: collapse; margin: 1em 0; }}
td, th {{ border: 1px solid #999; padding: 0.3em 0.7em; text-align: left; }}
th {{ background: #eee; }}
tr.pass td.status {{ background: #c8e6c9; }}
tr.fail td.status {{ background: #ffcdd2; }}
img {{ max-width: 100%; border: 1px solid #ccc; margin: 0.5em 0; }}
</style>
</head>
<body>
<h1>{title}</h1>
{sections}
</body>
</html>
"""


def _table(rows, header=None) -> str:
    parts = ["<table>"]
    if header:
        parts.append("<tr>" + "".join(f"<th>{html.escape(h)}</th>" for h in header) + "</tr>")
    for row in rows:
        parts.append("<tr>" + "".join(f"<td>{html.escape(str(c))}</td>" for c in row) + "</tr>")
    parts.append("</table>")
    return "\n".join(parts)


def _verdict_table(verdicts: dict) -> str:
    parts = ["<table>", "<tr><th>check</th><th>value</th><th>threshold</th>"
                        "<th>status</th></tr>"]
    for name, check in verdicts["checks"].items():
        cls = "pass" if check["pass"] else "fail"
        status = "PASS" if check["pass"] else "FAIL"
        parts.append(
            f'<tr class="{cls}"><td>{html.escape(name)}</td>'
            f"<td>{check['value']:.3e}</td><td>{check['threshold']:.3e}</td>"
            f'<td class="status">{status}</td></tr>')
    parts.append("</table>")
    return "\n".join(parts)


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def render_summary(run_dir, out_dir) -> Path:
    """Write index.html (plus the figures it embeds) for a run or sweep."""
    run = run_dir if isinstance(run_dir, RunArtifacts) else load_run(run_dir)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    sections = []
    sections.append("<h2>Configuration</h2>")
    sections.append(_table(run.config_items(), header=("key", "value")))

    if run.norms is not None:
        sections.append("<h2>Datum norms</h2>")
        sections.append(_table(sorted((k, _fmt(v)) for k, v in run.norms.items()),
                               header=("norm", "value")))

    if run.meta is not None:
        sections.append("<h2>Run metadata</h2>")
        sections.append(_table(sorted((k, _fmt(v)) for k, v in run.meta.items()),
                               header=("key", "value")))

    if run.verdicts is not None:
        sections.append("<h2>Verification verdicts</h2>")
        sections.append(_verdict_table(run.verdicts))
        overall = "all checks passed" if run.verdicts.get("all_pass") else "FAILURES present"
        sections.append(f"<p><strong>{overall}</strong></p>")

    if run.is_sweep:
        sections.append("<h2>Sweep members</h2>")
        rows = [(r["epsilon"], _fmt(r["l1_hat"]), _fmt(r["ratio_l1"]),
                 _fmt(r["linf_first"]), _fmt(r.get("condition_log_lhs", "")),
                 r["condition_pass"])
                for r in run.sweep_summary["rows"]]
        sections.append(_table(rows, header=("epsilon", "l1_hat", "ratio_l1",
                                             "linf_first", "log gate", "pass")))
        fig = plot_condition_region(run, out)
        sections.append("<h2>Smallness-gate region</h2>")
        sections.append(f'<img src="{fig.name}" alt="condition region"/>')
    elif run.series is not None:
        fig = plot_norm_decay(run, out)
        sections.append("<h2>Perturbation energy</h2>")
        sections.append(f'<img src="{fig.name}" alt="norm decay"/>')

    title = f"Run summary: {run.path.name}"
    page = _PAGE.format(title=html.escape(title), sections="\n".join(sections))
    index = out / SUMMARY_NAME
    index.write_text(page)
    return index
