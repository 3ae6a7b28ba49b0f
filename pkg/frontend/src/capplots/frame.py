"""Sweep artifact parsing: the CSV trial table plus its JSON sidecar."""

from __future__ import annotations

import csv
import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path

from . import SUPPORTED_SCHEMA_MAJOR, ParseError

CSV_HEADER = ["r", "q", "p", "seed", "trial", "v", "e", "alpha", "alpha_kind", "elapsed_ms"]


@dataclass
class SweepRow:
    r: int
    q: int
    p: float
    seed: int
    trial: int
    v: int
    e: int
    alpha: int
    alpha_kind: str
    elapsed_ms: float


@dataclass
class SweepFrame:
    rows: list
    boundaries: dict
    grid: list = field(default_factory=list)
    aggregates: list = field(default_factory=list)

    @property
    def r(self) -> int:
        return self.rows[0].r

    @property
    def q(self) -> int:
        return self.rows[0].q


def _check_schema(obj: dict, source: str):
    version = str(obj.get("schema_version", ""))
    if not version:
        raise ParseError(f"{source}: missing schema_version")
    if int(version.split(".")[0]) > SUPPORTED_SCHEMA_MAJOR:
        raise ParseError(f"{source}: schema {version} newer than supported")


def load_sweep(csv_path, sidecar_path) -> SweepFrame:
    """Parse and cross-validate the sweep CSV and its sidecar.

    Rows with p = 0 cannot sit on a log axis and are dropped with a warning;
    any other malformation raises ParseError naming the row.
    """
    csv_path = Path(csv_path)
    text = csv_path.read_text()
    reader = csv.reader(text.splitlines())
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError(f"{csv_path}: empty file") from None
    if header != CSV_HEADER:
        raise ParseError(f"{csv_path}: header {header} does not match {CSV_HEADER}")
    rows = []
    for lineno, cells in enumerate(reader, start=2):
        if not cells:
            continue
        if len(cells) != len(CSV_HEADER):
            raise ParseError(f"{csv_path}: row {lineno}: expected {len(CSV_HEADER)} cells")
        try:
            row = SweepRow(
                r=int(cells[0]),
                q=int(cells[1]),
                p=float(cells[2]),
                seed=int(cells[3]),
                trial=int(cells[4]),
                v=int(cells[5]),
                e=int(cells[6]),
                alpha=int(cells[7]),
                alpha_kind=cells[8],
                elapsed_ms=float(cells[9]),
            )
        except ValueError as exc:
            raise ParseError(f"{csv_path}: row {lineno}: {exc}") from None
        if row.p <= 0:
            warnings.warn(f"{csv_path}: row {lineno}: dropping p <= 0 row (log axis)")
            continue
        rows.append(row)
    if not rows:
        raise ParseError(f"{csv_path}: no usable data rows")

    side = json.loads(Path(sidecar_path).read_text())
    _check_schema(side, str(sidecar_path))
    boundaries = side.get("boundaries")
    if not boundaries or "sparse_upper" not in boundaries or "mid_upper" not in boundaries:
        raise ParseError(f"{sidecar_path}: missing regime boundaries")
    return SweepFrame(
        rows=rows,
        boundaries=boundaries,
        grid=side.get("grid", []),
        aggregates=side.get("aggregates", []),
    )


def load_bounds_report(path) -> dict:
    """count-vs-bound report: entries of (m, ln_count, ln_bound, ok)."""
    path = Path(path)
    obj = json.loads(path.read_text())
    _check_schema(obj, str(path))
    if obj.get("kind") != "count-vs-bound":
        raise ParseError(f"{path}: expected a count-vs-bound report, got {obj.get('kind')!r}")
    entries = obj.get("entries")
    if not entries:
        raise ParseError(f"{path}: report has no entries")
    for i, entry in enumerate(entries):
        for key in ("m", "ln_count", "ln_bound", "ok"):
            if key not in entry:
                raise ParseError(f"{path}: entry {i} missing field {key!r}")
    return obj
