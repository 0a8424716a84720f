"""Serialization helpers: JSON-compatible structured reports and CSV traces.

Floating-point values in CSV traces are written with 17 significant digits so
that reloading reproduces them bit for bit.
"""

from __future__ import annotations

import csv
import dataclasses
import json
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

__all__ = ["fmt_float", "write_csv", "write_json_report", "to_jsonable"]


def fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def write_csv(path, header: Sequence[str], columns: Sequence[np.ndarray]) -> Path:
    path = Path(path)
    columns = [np.asarray(c) for c in columns]
    if len(header) != len(columns):
        raise ValueError("header and column counts differ")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in zip(*columns):
            writer.writerow([fmt_float(x) for x in row])
    return path


def to_jsonable(obj):
    """Recursively convert dataclasses, arrays, and numpy scalars for json.dump."""
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        return float(obj)
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return [to_jsonable(x) for x in obj.tolist()]
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        for attr in ("to_dict", "as_dict"):
            if hasattr(obj, attr):
                return to_jsonable(getattr(obj, attr)())
        return to_jsonable(dataclasses.asdict(obj))
    if isinstance(obj, Mapping):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if hasattr(obj, "as_dict"):
        return to_jsonable(obj.as_dict())
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    return str(obj)


def write_json_report(path, data) -> Path:
    path = Path(path)
    with open(path, "w") as fh:
        json.dump(to_jsonable(data), fh, indent=2, sort_keys=False)
        fh.write("\n")
    return path
