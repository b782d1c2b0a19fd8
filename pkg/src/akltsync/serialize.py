"""Deterministic CSV/JSON artifact writers.

CSV: '#'-prefixed comment lines (config hash and friends), one header row,
numbers printed with 17 significant digits so doubles round-trip exactly.
JSON: sorted keys, fixed separators. Identical inputs give identical bytes.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np


def format_number(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def write_csv(path, columns: dict, comments: list[str] | None = None) -> None:
    """columns maps header name to a 1-d array; all columns equal length."""
    names = list(columns)
    arrays = [np.asarray(columns[n]) for n in names]
    length = {a.shape[0] for a in arrays}
    if len(length) != 1:
        raise ValueError("all columns must have the same length")
    lines = [f"# {c}" for c in (comments or [])]
    lines.append(",".join(names))
    for i in range(length.pop()):
        lines.append(",".join(format_number(a[i]) for a in arrays))
    Path(path).write_text("\n".join(lines) + "\n")


def read_csv(path):
    """Inverse of write_csv: returns (columns dict, comments list)."""
    comments, header, rows = [], None, []
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            comments.append(line[1:].strip())
        elif header is None:
            header = line.split(",")
        else:
            rows.append([float(v) for v in line.split(",")])
    if header is None:
        raise ValueError(f"{path} has no header row")
    data = np.array(rows) if rows else np.empty((0, len(header)))
    return {name: data[:, k] for k, name in enumerate(header)}, comments


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"),
                      allow_nan=False)


def config_hash(cfg: dict) -> str:
    return hashlib.sha256(canonical_json(cfg).encode()).hexdigest()


def _json_safe(obj):
    if isinstance(obj, dict):
        return {k: _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return None if not np.isfinite(x) else x
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return _json_safe(obj.tolist())
    return obj


def write_json(path, obj) -> None:
    """Strict JSON (non-finite floats become null, so any parser copes)."""
    Path(path).write_text(
        json.dumps(_json_safe(obj), sort_keys=True, indent=2, allow_nan=False)
        + "\n")
