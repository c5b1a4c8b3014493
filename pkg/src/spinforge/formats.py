"""File formats: schedule JSON and plot-ready CSV tables.

Reals are written with ``repr`` precision, so reading back a file gives
bit-identical floats.  Files are written atomically.
"""

import csv
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .sensitivity import FidelityCurve
from .synthesis import Schedule

SCHEMA_VERSION = 1
_SCHEDULE_KEYS = {"n", "j1", "couplings", "intervals", "tails", "phases", "branch", "meta"}
_META_KEYS = {"tool_version", "schema_version"}


class FormatError(ValueError):
    pass


def atomic_write(path, text):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def schedule_to_dict(schedule):
    return {
        "n": schedule.n,
        "j1": float(schedule.j1),
        "couplings": schedule.couplings.tolist(),
        "intervals": schedule.intervals.tolist(),
        "tails": schedule.tails.tolist(),
        "phases": schedule.phases.tolist(),
        "branch": {"m": 0, "n": "N"},
        "meta": {"tool_version": __version__, "schema_version": SCHEMA_VERSION},
    }


def schedule_from_dict(data):
    if not isinstance(data, dict):
        raise FormatError("schedule must be a JSON object")
    unknown = set(data) - _SCHEDULE_KEYS
    missing = _SCHEDULE_KEYS - set(data)
    if unknown:
        raise FormatError(f"unknown schedule fields: {sorted(unknown)}")
    if missing:
        raise FormatError(f"missing schedule fields: {sorted(missing)}")
    meta = data["meta"]
    if not isinstance(meta, dict) or set(meta) - _META_KEYS:
        raise FormatError(f"bad meta block: {meta!r}")
    if meta.get("schema_version") != SCHEMA_VERSION:
        raise FormatError(f"schema version {meta.get('schema_version')!r} not supported "
                          f"(expected {SCHEMA_VERSION})")
    if data["branch"] != {"m": 0, "n": "N"}:
        raise FormatError(f"unsupported branch {data['branch']!r}")
    try:
        sched = Schedule(data["couplings"], data["intervals"], data["tails"], data["phases"],
                         float(data["j1"]))
    except (TypeError, ValueError) as exc:
        raise FormatError(f"invalid schedule: {exc}") from exc
    if sched.n != data["n"]:
        raise FormatError(f"n={data['n']!r} disagrees with {sched.n} couplings")
    return sched


def dump_schedule(schedule):
    return json.dumps(schedule_to_dict(schedule), indent=2, allow_nan=False) + "\n"


def write_schedule(path, schedule):
    atomic_write(path, dump_schedule(schedule))


def read_schedule(path):
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from exc
    return schedule_from_dict(data)


def _csv(header, rows, footer=()):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
    for line in footer:
        buf.write(f"# {line}\n")
    return buf.getvalue()


def schedule_table_csv(schedule):
    """Per-chain table ``k,J_k,J_k_over_J1,t_k,tau_k`` for plotting coupling and timing profiles."""
    rows = [(k + 1, J, J / schedule.j1, t, tau)
            for k, (J, t, tau) in enumerate(zip(schedule.couplings, schedule.intervals, schedule.tails))]
    return _csv(["k", "J_k", "J_k_over_J1", "t_k", "tau_k"], rows)


def curve_csv(curve, threshold=None, f_star=None):
    footer = []
    if threshold is not None:
        footer.append(f"threshold,f_star={f_star!r},eps_scaled={threshold.eps_scaled!r},"
                      f"unbounded={str(threshold.unbounded).lower()}")
    return _csv(["eps_scaled", "fidelity"], zip(curve.eps_scaled, curve.fidelity), footer)


def read_curve_csv(path):
    rows = [r for r in csv.reader(Path(path).read_text().splitlines()) if r and not r[0].startswith("#")]
    if not rows or rows[0] != ["eps_scaled", "fidelity"]:
        raise FormatError("curve CSV needs an 'eps_scaled,fidelity' header")
    data = np.array([[float(x) for x in r] for r in rows[1:]]).reshape(-1, 2)
    return FidelityCurve(data[:, 0], data[:, 1], n=0)


def scaling_csv(report):
    return _csv(["N", "eps_star", "N_times_eps_star"],
                [(r.n, r.eps_star, r.n_times_eps_star) for r in report.rows])


def trace_csv(times, probs):
    header = ["time"] + [f"p{j}" for j in range(1, probs.shape[1] + 1)]
    return _csv(header, ([t, *p] for t, p in zip(times, probs)))


def probability_table_csv(probs, target=None):
    header = ["site", "probability"] + (["target"] if target is not None else [])
    rows = []
    for j, p in enumerate(probs, start=1):
        rows.append([j, p] + ([target[j - 1]] if target is not None else []))
    return _csv(header, rows)
