"""Loading and validation of solver run directories.

A run directory is identified by its ``resolved_config.ini`` provenance
file; directories without one are refused outright.  Everything here is
read-only: the reporter never writes into a run directory.
"""

from __future__ import annotations

import configparser
import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

RESOLVED_CONFIG_NAME = "resolved_config.ini"
SERIES_NAME = "series.csv"
VERDICTS_NAME = "verdicts.json"
NORMS_NAME = "norms.json"
META_NAME = "run_meta.json"
SWEEP_SUMMARY_NAME = "sweep_summary.json"

REQUIRED_SERIES_COLUMNS = ("t", "v_h3", "c_h3", "v_diss", "c_diss",
                           "energy_residual", "hall_cancel")


class ArtifactError(ValueError):
    """Missing or malformed run artifacts."""


@dataclass
class SeriesTable:
    columns: list
    rows: list  # list of dicts keyed by column name

    def column(self, name: str) -> list:
        if name not in self.columns:
            raise ArtifactError(f"series is missing column {name!r}")
        return [row[name] for row in self.rows]


@dataclass
class RunArtifacts:
    """Parsed contents of one run directory."""

    path: Path
    config: configparser.ConfigParser
    series: Optional[SeriesTable] = None
    verdicts: Optional[dict] = None
    norms: Optional[dict] = None
    meta: Optional[dict] = None
    sweep_summary: Optional[dict] = None

    @property
    def is_sweep(self) -> bool:
        return self.sweep_summary is not None

    @property
    def eta(self) -> float:
        """Bootstrap threshold: run metadata if present, else the config
        default 2 * constant_C * delta."""
        if self.meta and "eta" in self.meta:
            return float(self.meta["eta"])
        raw = self.config.get("scheme", "eta", fallback="none")
        if raw.strip().lower() not in ("", "none"):
            return float(raw)
        c = float(self.config.get("condition", "constant_C", fallback="1.0"))
        delta = float(self.config.get("condition", "delta", fallback="0.01"))
        return 2.0 * c * delta

    def config_items(self) -> list:
        out = []
        for section in self.config.sections():
            for key, value in self.config.items(section):
                out.append((f"{section}.{key}", value))
        return out


def _parse_series(path: Path) -> SeriesTable:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ArtifactError(f"{path}: empty series file") from None
        missing = [c for c in REQUIRED_SERIES_COLUMNS if c not in header]
        if missing:
            raise ArtifactError(f"{path}: missing columns {missing}")
        rows = []
        for lineno, raw in enumerate(reader, start=2):
            if len(raw) != len(header):
                raise ArtifactError(
                    f"{path}: row {lineno} has {len(raw)} fields, expected "
                    f"{len(header)}")
            try:
                rows.append({k: float(v) for k, v in zip(header, raw)})
            except ValueError as exc:
                raise ArtifactError(f"{path}: row {lineno}: {exc}") from None
    return SeriesTable(columns=header, rows=rows)


def _maybe_json(path: Path) -> Optional[dict]:
    if not path.exists():
        return None
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ArtifactError(f"{path}: invalid JSON ({exc})") from None


def load_run(path) -> RunArtifacts:
    """Load a run or sweep directory; refuses paths without provenance."""
    path = Path(path)
    if not path.is_dir():
        raise ArtifactError(f"{path} is not a directory")
    config_path = path / RESOLVED_CONFIG_NAME
    if not config_path.exists():
        raise ArtifactError(
            f"{path} has no {RESOLVED_CONFIG_NAME}; refusing a directory "
            "without run provenance")
    config = configparser.ConfigParser(interpolation=None)
    config.optionxform = str
    config.read(config_path)

    series = None
    series_path = path / SERIES_NAME
    if series_path.exists():
        series = _parse_series(series_path)

    return RunArtifacts(
        path=path,
        config=config,
        series=series,
        verdicts=_maybe_json(path / VERDICTS_NAME),
        norms=_maybe_json(path / NORMS_NAME),
        meta=_maybe_json(path / META_NAME),
        sweep_summary=_maybe_json(path / SWEEP_SUMMARY_NAME),
    )
