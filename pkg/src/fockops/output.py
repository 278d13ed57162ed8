"""Result records and their CSV / JSON / SVG serializations.

Output is deterministic: keys are sorted, floats use their shortest
round-trip repr, and no wall-clock value appears unless a timestamp is
requested explicitly (it then lives only in the metadata).
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__

__all__ = ["ResultRecord", "to_jsonable", "write_json", "write_csv", "read_csv_meta"]


def to_jsonable(obj: Any) -> Any:
    """Recursively convert numpy scalars/arrays, tuples and dataclasses to JSON types."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if hasattr(obj, "__dataclass_fields__"):
        return {k: to_jsonable(getattr(obj, k)) for k in obj.__dataclass_fields__}
    return obj


@dataclass
class ResultRecord:
    experiment: str
    inputs: dict
    results: dict
    version: str = __version__
    timestamp: str | None = None
    rows: list[dict] = field(default_factory=list)

    @property
    def meta(self) -> dict:
        meta = {"experiment": self.experiment, "tool": "fockops", "version": self.version}
        if self.timestamp is not None:
            meta["timestamp"] = self.timestamp
        return meta

    def to_json(self) -> str:
        doc = {
            "meta": self.meta,
            "inputs": to_jsonable(self.inputs),
            "results": to_jsonable(self.results),
        }
        if self.rows:
            doc["rows"] = to_jsonable(self.rows)
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ResultRecord":
        doc = json.loads(text)
        meta = doc["meta"]
        return cls(
            experiment=meta["experiment"],
            inputs=doc["inputs"],
            results=doc["results"],
            version=meta["version"],
            timestamp=meta.get("timestamp"),
            rows=doc.get("rows", []),
        )


def write_json(record: ResultRecord, path: Path) -> Path:
    path.write_text(record.to_json())
    return path


def _cell(v):
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    if v is None:
        return ""
    return repr(v) if isinstance(v, float) else str(v)


def write_csv(record: ResultRecord, path: Path, columns: Sequence[str] | None = None) -> Path:
    """One ``# {meta json}`` comment line, a header, then ``record.rows``."""
    rows = to_jsonable(record.rows)
    if columns is None:
        columns = list(rows[0]) if rows else []
    buf = io.StringIO()
    buf.write("# " + json.dumps(record.meta, sort_keys=True) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    path.write_text(buf.getvalue())
    return path


def read_csv_meta(path: Path) -> tuple[dict, list[dict]]:
    """Parse a CSV written by :func:`write_csv` back into (meta, rows of strings)."""
    lines = Path(path).read_text().splitlines()
    meta = json.loads(lines[0][2:])
    rows = list(csv.DictReader(lines[1:]))
    return meta, rows
