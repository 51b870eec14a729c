"""Serialization of echo trains, TEPA tables, layouts and schedules.

Files are written atomically (temp file in the target directory, then
``os.replace``) and numbers are formatted at fixed precision so that
identical inputs give byte-identical outputs.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path
from typing import Any, Iterable, Sequence

from .hamiltonian import PulseEvent
from .relaxation import EchoTrain
from .tepa import TepaTable

ECHO_HEADER = ("echo_index", "time_s", "amplitude")
TEPA_HEADER = ("echo_index", "time_s", "alpha", "beta")
CSV_SIG = 9
JSON_SIG = 12


def fmt(x: float, sig: int = CSV_SIG) -> str:
    return f"{x:.{sig}g}"


def _round(obj: Any, sig: int = JSON_SIG) -> Any:
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return str(obj)
        return float(f"{obj:.{sig}g}")
    if isinstance(obj, dict):
        return {k: _round(v, sig) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v, sig) for v in obj]
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(_round(obj), indent=2) + "\n"


def atomic_write(path: str | os.PathLike, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def to_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, (int, str)) else fmt(v) for v in row])
    return buf.getvalue()


def echo_train_records(train: EchoTrain) -> list[dict]:
    return [dict(zip(ECHO_HEADER, e)) for e in train.entries]


def echo_train_csv(train: EchoTrain) -> str:
    return to_csv(ECHO_HEADER, train.entries)


def tepa_records(table: TepaTable) -> list[dict]:
    return [dict(zip(TEPA_HEADER, e)) for e in table.entries]


def tepa_csv(table: TepaTable) -> str:
    return to_csv(TEPA_HEADER, table.entries)


def read_csv(path: str | os.PathLike) -> list[dict[str, str]]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def pulse_record(p: PulseEvent) -> dict:
    return {
        "t_s": p.start_time,
        "coil": p.coil_label,
        "axis": p.axis.value,
        "flip_deg": math.degrees(p.flip_angle),
        "carrier_hz": p.carrier_frequency / (2 * math.pi),
    }


def schedule_records(schedule: Sequence[PulseEvent]) -> list[dict]:
    return [pulse_record(p) for p in schedule]
