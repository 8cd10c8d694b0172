"""SQGF1 binary checkpoints: bit-exact save/restore of one spectral state.

Layout (all little-endian):

    bytes 0..4    magic "SQGF1"
    u32           N, modes per axis
    u64           mode count (N*N)
    f64           simulation time
    complex f64   N*N coefficients, row-major wavenumber order
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import CheckpointFormatError
from .fields import SpectralField, grid_for

MAGIC = b"SQGF1"
_HEADER = struct.Struct("<5sIQd")


def write_checkpoint(path: str | Path, field: SpectralField, t: float) -> None:
    n = field.grid.n
    payload = np.ascontiguousarray(field.coeffs, dtype="<c16").tobytes()
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, n, n * n, float(t)))
        fh.write(payload)


def read_checkpoint(path: str | Path) -> tuple[SpectralField, float]:
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise CheckpointFormatError(f"{path}: truncated header")
    magic, n, count, t = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise CheckpointFormatError(f"{path}: bad magic {magic!r}")
    if count != n * n:
        raise CheckpointFormatError(f"{path}: mode count {count} != N*N for N={n}")
    expected = _HEADER.size + 16 * count
    if len(raw) != expected:
        raise CheckpointFormatError(f"{path}: size {len(raw)} != expected {expected}")
    coeffs = np.frombuffer(raw, dtype="<c16", offset=_HEADER.size).reshape(n, n)
    return SpectralField(grid_for(n), coeffs.astype(np.complex128)), t
