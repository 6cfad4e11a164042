"""Stable on-disk formats: CSV at full double precision, JSON with sorted
keys, and 16-bit big-endian NetPBM grids. All writes go through a
temporary file in the target directory followed by an atomic rename.
"""

import json
import os
import tempfile
from typing import Iterable, Sequence, Tuple

import numpy as np

__all__ = [
    "format_number",
    "atomic_write_bytes",
    "atomic_write_text",
    "write_csv",
    "write_json",
    "write_pgm16",
]


def format_number(x) -> str:
    """17 significant digits, enough to round-trip a double exactly."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def atomic_write_bytes(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path: str, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    """Newline-terminated rows, '.' decimal separator, 17 significant digits."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(cell if isinstance(cell, str) else format_number(cell)
                              for cell in row))
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_json(path: str, obj) -> None:
    """UTF-8 JSON with stable (sorted) key order."""
    atomic_write_text(path, json.dumps(obj, sort_keys=True, indent=2) + "\n")


def write_pgm16(path: str, values: np.ndarray) -> Tuple[float, float]:
    """Write a phase-space field as 16-bit grayscale NetPBM (P5).

    values[a, b] is the cell at q=(a+1/2)/Nq, p=(b+1/2)/Np; the image has
    q increasing left to right and p decreasing top to bottom. Samples are
    big-endian, linearly scaled from [min, max] onto [0, 65535]; the
    returned (min, max) pair lets readers reconstruct numeric values up to
    quantization.
    """
    vals = np.asarray(values, dtype=float)
    nq, npp = vals.shape
    vmin, vmax = float(vals.min()), float(vals.max())
    if vmax > vmin:
        scaled = np.round((vals - vmin) / (vmax - vmin) * 65535.0)
    else:
        scaled = np.zeros_like(vals)
    image = scaled.astype(">u2").T[::-1, :]            # rows: p descending
    header = f"P5\n{nq} {npp}\n65535\n".encode("ascii")
    atomic_write_bytes(path, header + image.tobytes())
    return vmin, vmax
