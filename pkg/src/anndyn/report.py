"""Report serialization: JSON and CSV emitters with atomic writes.

Reports must be byte-reproducible for a fixed seed, so keys are sorted,
floats use repr, and non-finite values become strings.  The only
run-dependent field is the ``generated_at`` timestamp, which consumers are
expected to strip before comparing.
"""

from __future__ import annotations

import csv
import dataclasses
import datetime
import json
import math
import os
import tempfile

from .logscale import ExtLog, LogPolar


def worker_count() -> int:
    """Parallelism cap from ANNDYN_THREADS (0 or unset = auto)."""
    raw = os.environ.get("ANNDYN_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        return min(os.cpu_count() or 1, 8)
    return n


def sanitize(obj):
    """Recursively convert toolkit values into JSON-encodable primitives."""
    if isinstance(obj, ExtLog):
        return {"level": obj.level, "mantissa": obj.mantissa}
    if isinstance(obj, LogPolar):
        return {"logmod": sanitize(obj.logmod), "arg": obj.arg}
    if isinstance(obj, complex):
        return [sanitize(obj.real), sanitize(obj.imag)]
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: sanitize(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sanitize(v) for v in obj]
    return obj


def _atomic_write(path: str, text: str):
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


def write_json_report(path: str, payload: dict, timestamp: bool = True):
    body = dict(sanitize(payload))
    if timestamp:
        body["generated_at"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    _atomic_write(path, json.dumps(body, indent=2, sort_keys=True) + "\n")


def write_csv(path: str, header, rows):
    import io
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_csv_cell(c) for c in row])
    _atomic_write(path, buf.getvalue())


def _csv_cell(c):
    if isinstance(c, bool):
        return "true" if c else "false"
    if isinstance(c, float):
        if math.isinf(c):
            return "inf" if c > 0 else "-inf"
        if math.isnan(c):
            return "nan"
        return repr(c)
    if c is None:
        return ""
    return c
