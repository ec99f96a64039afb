"""
Output files: snapshot CSVs, the JSON run manifest and gnuplot scripts.

Numbers are written with 17 significant digits so that parsing a CSV back
gives the in-memory doubles bit for bit. Files are UTF-8 with LF endings and
contain nothing that depends on the clock or the host, which keeps repeated
runs byte-identical.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from curvifd.burgers import BurgersResult
from curvifd.convdiff import ConvDiffResult
from curvifd.potential import PotentialResult

__all__ = [
    "HEADER_1D",
    "HEADER_2D",
    "RunManifest",
    "write_snapshot_csv",
    "read_snapshot_csv",
    "write_manifest",
    "write_gnuplot",
]

HEADER_1D = ("t", "xi", "x", "u", "exact", "abs_err")
HEADER_2D = ("xi", "eta", "x", "y", "phi", "u", "v", "phi_exact", "u_exact", "v_exact")


def _fmt(v):
    return format(float(v), ".17g")


@dataclass
class RunManifest:
    """Sidecar description of one CLI run."""

    subcommand: str
    params: dict
    version: str
    presets_version: int
    preset: str | None = None
    runtime_s: float = 0.0
    files: list = field(default_factory=list)
    diverged: bool = False
    converged: bool = True
    extra: dict = field(default_factory=dict)

    def to_json(self):
        return json.dumps(asdict(self), indent=2, sort_keys=True, default=_json_default) + "\n"


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(f"not JSON serialisable: {type(o).__name__}")


def _rows_1d(result):
    if isinstance(result, BurgersResult):
        exact = result.exact()
        for snap in result.snapshots:
            for xi, x, u, e in zip(result.xi, result.x, snap.values, exact):
                yield snap.t, xi, x, u, e, abs(u - e)
    else:
        for snap in result.snapshots:
            exact = np.broadcast_to(result.exact(snap.x, snap.t), snap.x.shape)
            for xi, x, u, e in zip(result.xi, snap.x, snap.field.values, exact):
                yield snap.t, xi, x, u, e, abs(u - e)


def _rows_2d(result):
    d = result.disc
    phi_e, u_e, v_e = result.exact()
    cols = (d.xi, d.eta, d.x, d.y, result.phi, result.u, result.v, phi_e, u_e, v_e)
    flat = [np.asarray(c).ravel() for c in cols]
    yield from zip(*flat)


def write_snapshot_csv(result, path):
    """Write every snapshot of ``result`` to ``path`` and return the path.

    1D results (Burgers, convection-diffusion) use :data:`HEADER_1D`, one row
    per (snapshot, node). A potential-flow result uses :data:`HEADER_2D`,
    one row per node with ``i`` varying slowest. A result without snapshots
    raises ``ValueError`` before anything is created.
    """
    path = Path(path)
    if isinstance(result, PotentialResult):
        header, rows = HEADER_2D, _rows_2d(result)
    elif isinstance(result, (BurgersResult, ConvDiffResult)):
        if not result.snapshots:
            raise ValueError("result has no snapshots to write")
        header, rows = HEADER_1D, _rows_1d(result)
    else:
        raise TypeError(f"cannot write {type(result).__name__}")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    return path


def read_snapshot_csv(path):
    """Read a snapshot CSV back into ``{column: float array}``."""
    with open(path, encoding="utf-8", newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        data = np.array([[float(v) for v in row] for row in r], dtype=float)
    if data.size == 0:
        data = data.reshape(0, len(header))
    return {name: data[:, k] for k, name in enumerate(header)}


def write_manifest(manifest, path):
    """Write ``manifest`` as JSON after checking every listed file is non-empty."""
    path = Path(path)
    base = path.parent
    for f in manifest.files:
        p = base / f
        if not p.is_file() or p.stat().st_size == 0:
            raise FileNotFoundError(f"manifest lists missing or empty file {p}")
    path.write_text(manifest.to_json(), encoding="utf-8", newline="\n")
    return path


_GP_1D = """\
# {title}
set datafile separator ','
set key top right
set xlabel 'x'
set ylabel 'u'
set yrange [{ymin}:{ymax}]
times = "{times}"
plot for [k=1:words(times)] '{csv}' \\
    using (abs($1 - real(word(times, k))) < 1e-9 ? $3 : 1/0):4 \\
    with linespoints pt 7 ps 0.4 title sprintf('t = %s', word(times, k)), \\
    for [k=1:words(times)] '{csv}' \\
    using (abs($1 - real(word(times, k))) < 1e-9 ? $3 : 1/0):5 \\
    with lines dt 2 lc rgb 'black' notitle
"""

_GP_2D = """\
# {title}
set datafile separator ','
set size ratio -1
set xlabel 'x'
set ylabel 'y'
set multiplot layout 1,2
set title 'potential (disturbance part)'
plot '{csv}' using 3:4:5 every ::1 with points pt 5 ps 0.6 palette notitle
set title 'velocity'
plot '{csv}' using 3:4:($6*0.3):($7*0.3) every ::1 with vectors head size 0.05,20 notitle
unset multiplot
"""


def write_gnuplot(path, csv_name, title, kind, times=()):
    """Emit a gnuplot script that plots ``csv_name`` (relative to the script)."""
    if kind == "1d":
        text = _GP_1D.format(title=title, csv=csv_name, ymin=-1.5, ymax=1.5,
                             times=" ".join(_fmt(t) for t in times))
    elif kind == "2d":
        text = _GP_2D.format(title=title, csv=csv_name)
    else:
        raise ValueError(f"unknown plot kind {kind!r}")
    Path(path).write_text(text, encoding="utf-8", newline="\n")
    return Path(path)
