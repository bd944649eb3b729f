"""Readers for the two supported matrix file formats.

npy: format versions 1.0 and 2.0, little-endian dtypes <f4, <f8, <i4,
<i8, C order only.  csv: headerless, comma-separated, decimal point.
Values load as float64; 1-D files become single-column matrices.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ParseError, ShapeError, UnsupportedDtype

NPY_MAGIC = b"\x93NUMPY"
SUPPORTED_DTYPES = {"<f4", "<f8", "<i4", "<i8"}
INTEGER_DTYPES = {"<i4", "<i8"}


@dataclass(frozen=True)
class LoadedMatrix:
    data: np.ndarray  # float64, 2-D
    integer: bool     # source stored integers


def _as_two_d(arr: np.ndarray, path: str) -> np.ndarray:
    if arr.ndim == 1:
        return arr.reshape(-1, 1)
    if arr.ndim == 2:
        return arr
    raise ShapeError(f"{path}: expected a 1-D or 2-D array, got {arr.ndim}-D")


def read_npy(path) -> LoadedMatrix:
    raw = Path(path).read_bytes()
    if raw[: len(NPY_MAGIC)] != NPY_MAGIC:
        raise ParseError(f"{path}: not an npy file (bad magic)", offset=0)
    major, minor = raw[6], raw[7]
    if (major, minor) == (1, 0):
        header_len = int.from_bytes(raw[8:10], "little")
        header_start = 10
    elif (major, minor) == (2, 0):
        header_len = int.from_bytes(raw[8:12], "little")
        header_start = 12
    else:
        raise ParseError(f"{path}: unsupported npy version {major}.{minor}", offset=6)
    header_end = header_start + header_len
    if len(raw) < header_end:
        raise ParseError(f"{path}: truncated header", offset=len(raw))
    try:
        header = ast.literal_eval(raw[header_start:header_end].decode("latin1"))
    except (ValueError, SyntaxError) as exc:
        raise ParseError(f"{path}: malformed header ({exc})", offset=header_start) from exc
    descr = header.get("descr")
    if descr not in SUPPORTED_DTYPES:
        raise UnsupportedDtype(f"{path}: dtype {descr!r} not in {sorted(SUPPORTED_DTYPES)}")
    if header.get("fortran_order"):
        raise ParseError(f"{path}: Fortran-ordered arrays are not supported", offset=header_start)
    shape = header.get("shape")
    if not isinstance(shape, tuple):
        raise ParseError(f"{path}: malformed shape in header", offset=header_start)
    count = int(np.prod(shape)) if shape else 1
    itemsize = np.dtype(descr).itemsize
    if len(raw) - header_end < count * itemsize:
        raise ParseError(f"{path}: truncated data section", offset=len(raw))
    data = np.frombuffer(raw, dtype=np.dtype(descr), count=count, offset=header_end)
    arr = _as_two_d(data.reshape(shape), str(path))
    return LoadedMatrix(data=arr.astype(np.float64), integer=descr in INTEGER_DTYPES)


_INT_CHARS = set("0123456789+-")


def read_csv(path, integers: bool = False) -> LoadedMatrix:
    rows = []
    width = None
    offset = 0
    with open(path, "rb") as fh:
        for lineno, raw_line in enumerate(fh, start=1):
            line = raw_line.decode("utf-8", errors="replace").strip()
            if line:
                tokens = line.split(",")
                if width is None:
                    width = len(tokens)
                elif len(tokens) != width:
                    raise ParseError(
                        f"{path}: expected {width} columns, got {len(tokens)}",
                        line=lineno,
                        offset=offset,
                    )
                parsed = []
                for tok in tokens:
                    tok = tok.strip()
                    try:
                        if integers:
                            if not tok or set(tok) - _INT_CHARS:
                                raise ValueError(f"not an integer: {tok!r}")
                            parsed.append(float(int(tok)))
                        else:
                            parsed.append(float(tok))
                    except ValueError as exc:
                        raise ParseError(
                            f"{path}: {exc}", line=lineno, offset=offset
                        ) from exc
                rows.append(parsed)
            offset += len(raw_line)
    if not rows:
        raise ParseError(f"{path}: empty file", line=1, offset=0)
    return LoadedMatrix(data=np.array(rows, dtype=np.float64), integer=integers)


def load_matrix(path, fmt: str = "auto", integer_labels: bool = False) -> LoadedMatrix:
    """Load one matrix file; fmt is 'npy', 'csv', or 'auto' (by extension)."""
    path = Path(path)
    if fmt == "auto":
        fmt = "npy" if path.suffix.lower() == ".npy" else "csv"
    if fmt == "npy":
        return read_npy(path)
    if fmt == "csv":
        return read_csv(path, integers=integer_labels)
    raise ValueError(f"unknown format {fmt!r}; choose npy, csv, or auto")
