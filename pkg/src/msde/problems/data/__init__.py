"""Tabulated constants for the Kowalik, Meyer-Roth and shifted Rosenbrock problems.

Files are whitespace-separated text with ``#`` comment lines and are verified
against ``SHA256SUMS`` when first loaded.
"""
import functools
import hashlib
from importlib import resources

import numpy as np


class DataIntegrityError(RuntimeError):
    pass


def _read(name: str) -> bytes:
    return resources.files(__name__).joinpath(name).read_bytes()


@functools.lru_cache(maxsize=None)
def checksums() -> dict:
    out = {}
    for line in _read("SHA256SUMS").decode().splitlines():
        digest, name = line.split()
        out[name] = digest
    return out


@functools.lru_cache(maxsize=None)
def load_table(name: str, columns: int) -> np.ndarray:
    raw = _read(name)
    expected = checksums().get(name)
    if expected is None or hashlib.sha256(raw).hexdigest() != expected:
        raise DataIntegrityError(f"checksum mismatch for {name}")
    rows = [
        [float(tok) for tok in line.split()]
        for line in raw.decode().splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]
    table = np.array(rows, dtype=float).reshape(len(rows), columns)
    table.setflags(write=False)
    return table


def kowalik_table():
    """``(a, b)`` with 11 entries each."""
    t = load_table("kowalik.txt", 2)
    return t[:, 0], 1.0 / t[:, 1]


def meyer_roth_table():
    """``(t, v, y)`` with 5 entries each."""
    t = load_table("meyer_roth.txt", 3)
    return t[:, 0], t[:, 1], t[:, 2]


def rosenbrock_shift():
    return load_table("shifted_rosenbrock_o.txt", 1)[:, 0]
