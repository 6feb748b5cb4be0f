"""Point-cloud file formats.

Two equivalent encodings of a weighted cloud:

* CSV with header ``x0,...,x{m-1},weight`` and one atom per row, numbers
  written with 17 significant digits so float64 values round-trip exactly.
* Binary: magic ``RSC1``, little-endian u32 ambient dimension m, u32 count
  N, then N rows of (m+1) float64 (coordinates then weight).

Both readers recover the identical float64 arrays, bit for bit.
"""

from __future__ import annotations

import hashlib
import struct
from pathlib import Path

import numpy as np

from .core import DiscreteMeasure, InputError

MAGIC = b"RSC1"
_HEADER = struct.Struct("<4sII")


def format_float(v: float) -> str:
    return f"{v:.17g}"


def write_csv(measure: DiscreteMeasure, path) -> None:
    m = measure.ambient_dim
    header = ",".join([f"x{a}" for a in range(m)] + ["weight"])
    lines = [header]
    for row, w in zip(measure.points, measure.weights):
        lines.append(",".join(format_float(v) for v in row) + f",{format_float(w)}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_csv(path, intrinsic_dim: int) -> DiscreteMeasure:
    text = Path(path).read_text()
    lines = [ln for ln in text.splitlines()]
    if not lines:
        raise InputError(f"{path}: empty file")
    header = [h.strip() for h in lines[0].split(",")]
    if len(header) < 2 or header[-1] != "weight":
        raise InputError(f"{path}: header must be x0,...,x{{m-1}},weight")
    m = len(header) - 1
    expected = [f"x{a}" for a in range(m)] + ["weight"]
    if header != expected:
        raise InputError(f"{path}: header must be {','.join(expected)}")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        fields = line.split(",")
        if len(fields) != m + 1:
            raise InputError(
                f"{path}: row {lineno}: expected {m + 1} fields, got {len(fields)}"
            )
        try:
            rows.append([float(f) for f in fields])
        except ValueError as exc:
            raise InputError(f"{path}: row {lineno}: {exc}") from None
    if not rows:
        raise InputError(f"{path}: no data rows")
    data = np.asarray(rows, dtype=np.float64)
    try:
        return DiscreteMeasure(data[:, :m], data[:, m], intrinsic_dim)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None


def write_binary(measure: DiscreteMeasure, path) -> None:
    m = measure.ambient_dim
    n = measure.count
    rows = np.empty((n, m + 1), dtype="<f8")
    rows[:, :m] = measure.points
    rows[:, m] = measure.weights
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, m, n))
        fh.write(rows.tobytes())


def read_binary(path, intrinsic_dim: int) -> DiscreteMeasure:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise InputError(f"{path}: truncated header")
    magic, m, n = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise InputError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
    body = raw[_HEADER.size :]
    expected = n * (m + 1) * 8
    if len(body) != expected:
        raise InputError(
            f"{path}: expected {expected} payload bytes, got {len(body)}"
        )
    rows = np.frombuffer(body, dtype="<f8").reshape(n, m + 1)
    return DiscreteMeasure(rows[:, :m], rows[:, m], intrinsic_dim)


def load_measure(path, intrinsic_dim: int) -> DiscreteMeasure:
    """Load a cloud by sniffing the format (binary magic, else CSV)."""
    p = Path(path)
    try:
        head = p.open("rb").read(4)
    except OSError as exc:
        raise InputError(f"{path}: {exc}") from None
    if head == MAGIC:
        return read_binary(p, intrinsic_dim)
    return read_csv(p, intrinsic_dim)


def measure_hash(measure: DiscreteMeasure) -> str:
    """SHA-256 of the canonical binary serialization (identifies the cloud)."""
    m = measure.ambient_dim
    rows = np.empty((measure.count, m + 1), dtype="<f8")
    rows[:, :m] = measure.points
    rows[:, m] = measure.weights
    digest = hashlib.sha256()
    digest.update(_HEADER.pack(MAGIC, m, measure.count))
    digest.update(rows.tobytes())
    return digest.hexdigest()
