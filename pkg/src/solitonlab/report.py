"""Run reports: observable time series, snapshots, and their file formats.

Every evolution run emits a :class:`RunReport`.  The JSON summary echoes
the effective configuration (including the unit conventions of the
scheme, to keep factor-of-2 mistakes visible), the observable series and
the conservation drift metrics; snapshots go to one CSV per recorded
time with the grid metadata in comment lines.  Reports contain no
timestamps, so identical runs produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .grid import ComplexField


@dataclass(frozen=True)
class Snapshot:
    """Field state at one recorded time, with optional extra real columns."""

    t: float
    field: ComplexField
    extra: dict[str, np.ndarray] = field(default_factory=dict)


@dataclass
class RunReport:
    """Outcome of one evolution run."""

    scheme: str
    config: dict
    times: np.ndarray
    observables: dict[str, np.ndarray]
    snapshots: list[Snapshot]
    conservation: dict[str, float]

    def observable(self, name: str) -> np.ndarray:
        return self.observables[name]

    def final_field(self) -> ComplexField:
        return self.snapshots[-1].field

    def summary_dict(self) -> dict:
        return {
            "schema_version": 1,
            "scheme": self.scheme,
            "config": self.config,
            "series": {
                "t": self.times.tolist(),
                **{k: v.tolist() for k, v in self.observables.items()},
            },
            "conservation": self.conservation,
            "snapshot_times": [s.t for s in self.snapshots],
        }


def write_snapshot_csv(path: Path, snapshot: Snapshot) -> None:
    """CSV with columns (z, re, im, abs2) plus any extra columns.

    Grid metadata and the snapshot time ride in '#' comment lines before
    the header row.
    """
    grid = snapshot.field.grid
    vals = snapshot.field.values
    extra_names = sorted(snapshot.extra)
    with open(path, "w", newline="") as fh:
        fh.write(f"# t = {snapshot.t!r}\n")
        fh.write(f"# n = {grid.n} z_min = {grid.z_min!r} z_max = {grid.z_max!r} dz = {grid.dz!r}\n")
        writer = csv.writer(fh)
        writer.writerow(["z", "re", "im", "abs2"] + extra_names)
        z = grid.z
        abs2 = np.abs(vals) ** 2
        for j in range(grid.n):
            row = [repr(float(z[j])), repr(float(vals[j].real)),
                   repr(float(vals[j].imag)), repr(float(abs2[j]))]
            row += [repr(float(snapshot.extra[name][j])) for name in extra_names]
            writer.writerow(row)


def read_snapshot_csv(path: Path) -> tuple[float, dict[str, np.ndarray]]:
    """Inverse of write_snapshot_csv: returns (t, column arrays)."""
    with open(path) as fh:
        t_line = fh.readline()
        t = float(t_line.split("=", 1)[1])
        fh.readline()  # grid metadata line
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(x) for x in row] for row in reader]
    data = np.array(rows)
    return t, {name: data[:, i] for i, name in enumerate(header)}


def write_report(report: RunReport, out_dir: Path) -> list[Path]:
    """Write report.json and snapshots/*.csv; returns the created paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    report_path = out_dir / "report.json"
    with open(report_path, "w") as fh:
        json.dump(report.summary_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    paths.append(report_path)
    if report.snapshots:
        snap_dir = out_dir / "snapshots"
        snap_dir.mkdir(exist_ok=True)
        for i, snap in enumerate(report.snapshots):
            p = snap_dir / f"snapshot-{i:04d}.csv"
            write_snapshot_csv(p, snap)
            paths.append(p)
    return paths
