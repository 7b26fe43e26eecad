"""Matrix files over GF(q), in a text format and a binary format.

Text: first line ``q rows cols``, then ``rows*cols`` whitespace-separated
integers in ``[0, q)``, row-major (one row per line when written).

Binary: magic ``EPCM1``, then little-endian u64 ``q, rows, cols``, then the
values as little-endian u64.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import MalformedHeader, ValueOutOfRange

MAGIC = b"EPCM1"
_U64 = struct.Struct("<Q")
_MAX_U64 = 2**64 - 1


def _check(values, q: int) -> None:
    for v in values:
        if not 0 <= v < q:
            raise ValueOutOfRange(f"value {v} outside [0, {q})")


def _to_object(values, rows: int, cols: int) -> np.ndarray:
    out = np.empty(rows * cols, dtype=object)
    out[:] = [int(v) for v in values]
    return out.reshape(rows, cols)


def write_text(path: str | Path, matrix: np.ndarray, q: int) -> None:
    matrix = np.asarray(matrix, dtype=object)
    if matrix.ndim != 2:
        raise ValueError("only 2-D matrices can be written")
    _check(matrix.ravel(), q)
    lines = [f"{q} {matrix.shape[0]} {matrix.shape[1]}"]
    lines += [" ".join(str(int(v)) for v in row) for row in matrix]
    Path(path).write_text("\n".join(lines) + "\n")


def read_text(path: str | Path) -> tuple[np.ndarray, int]:
    """Returns ``(matrix, q)``."""
    text = Path(path).read_text()
    first, _, rest = text.partition("\n")
    header = first.split()
    if len(header) != 3 or not all(h.isdigit() for h in header):
        raise MalformedHeader(f"expected 'q rows cols' on line 1, got {first!r}")
    q, rows, cols = (int(h) for h in header)
    if q < 2:
        raise MalformedHeader(f"modulus {q} is below 2")
    tokens = rest.split()
    if len(tokens) != rows * cols:
        raise MalformedHeader(f"header promises {rows * cols} values, found {len(tokens)}")
    try:
        values = [int(t) for t in tokens]
    except ValueError as exc:
        raise MalformedHeader(f"non-integer entry: {exc}") from None
    _check(values, q)
    return _to_object(values, rows, cols), q


def write_binary(path: str | Path, matrix: np.ndarray, q: int) -> None:
    matrix = np.asarray(matrix, dtype=object)
    if matrix.ndim != 2:
        raise ValueError("only 2-D matrices can be written")
    if q > _MAX_U64:
        raise ValueOutOfRange("modulus does not fit in u64")
    _check(matrix.ravel(), q)
    rows, cols = matrix.shape
    body = np.array([int(v) for v in matrix.ravel()], dtype="<u8").tobytes()
    Path(path).write_bytes(MAGIC + _U64.pack(q) + _U64.pack(rows) + _U64.pack(cols) + body)


def read_binary(path: str | Path) -> tuple[np.ndarray, int]:
    data = Path(path).read_bytes()
    head = len(MAGIC) + 3 * _U64.size
    if len(data) < head or not data.startswith(MAGIC):
        raise MalformedHeader("missing EPCM1 magic or truncated header")
    q, rows, cols = struct.unpack_from("<3Q", data, len(MAGIC))
    if q < 2:
        raise MalformedHeader(f"modulus {q} is below 2")
    if len(data) - head != 8 * rows * cols:
        raise MalformedHeader(f"header promises {rows * cols} values, body holds {(len(data) - head) / 8:g}")
    values = np.frombuffer(data, dtype="<u8", offset=head).tolist()
    _check(values, q)
    return _to_object(values, rows, cols), q


def read_matrix(path: str | Path) -> tuple[np.ndarray, int]:
    """Read either format, sniffing the magic bytes."""
    with open(path, "rb") as fh:
        is_binary = fh.read(len(MAGIC)) == MAGIC
    return read_binary(path) if is_binary else read_text(path)


def write_matrix(path: str | Path, matrix: np.ndarray, q: int, binary: bool = False) -> None:
    (write_binary if binary else write_text)(path, matrix, q)
