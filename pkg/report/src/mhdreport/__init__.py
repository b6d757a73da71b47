"""Post-hoc figures and HTML summaries for hallmhd run directories.

A read-only consumer of the solver's file contracts (resolved_config.ini,
series.csv, norms.json, verdicts.json, run_meta.json, sweep_summary.json);
no physics is recomputed here.
"""

from .artifacts import ArtifactError, RunArtifacts, SeriesTable, load_run
from .figures import plot_condition_region, plot_norm_decay
from .summary import render_summary

__version__ = "0.1.0"
