# ----------------------------------------------------------------------
# Copyright (c) 2024 Rafael Gonzalez.
#
# See the LICENSE file for details
# ----------------------------------------------------------------------

'''
Raw per-trial Z_N dump for offline re-analysis.

Layout, little-endian throughout:
    magic    4 bytes  b"DSFF"
    version  u32
    N        u32
    trials   u32
    points   u32
    data     trials x points complex doubles (real, imag), trial-major
'''

#--------------------
# System wide imports
# -------------------

import struct
import logging

from dataclasses import dataclass

# -------------------
# Third party imports
# -------------------

import numpy as np

#--------------
# local imports
# -------------

from .error import DomainError, NumericIntegrityError

# ----------------
# Module constants
# ----------------

MAGIC = b"DSFF"
VERSION = 1
HEADER = struct.Struct("<4sIIII")
DTYPE = np.dtype("<c16")

# -----------------------
# Module global variables
# -----------------------

log = logging.getLogger(__name__.split('.')[-1])

# -------
# Classes
# -------

@dataclass(frozen=True)
class ZRecord:
    N: int
    z: np.ndarray  # trials x points

    @property
    def trials(self) -> int:
        return self.z.shape[0]

    @property
    def points(self) -> int:
        return self.z.shape[1]

# ---------
# Functions
# ---------

def write(path, N: int, z) -> None:
    z = np.atleast_2d(np.asarray(z, dtype=complex))
    if z.ndim != 2:
        raise DomainError(f"Z_N array of shape {z.shape}, expected trials x points")
    trials, points = z.shape
    with open(path, 'wb') as f:
        f.write(HEADER.pack(MAGIC, VERSION, N, trials, points))
        f.write(z.astype(DTYPE).tobytes(order='C'))
    log.info("[N=%d] wrote %d trials x %d points to %s", N, trials, points, path)


def read(path) -> ZRecord:
    with open(path, 'rb') as f:
        raw = f.read()
    if len(raw) < HEADER.size:
        raise NumericIntegrityError(f"{path}: truncated header")
    magic, version, N, trials, points = HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise NumericIntegrityError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise NumericIntegrityError(f"{path}: unsupported version {version}")
    body = raw[HEADER.size:]
    if len(body) != trials * points * DTYPE.itemsize:
        raise NumericIntegrityError(f"{path}: {len(body)} data bytes for {trials} x {points} values")
    z = np.frombuffer(body, dtype=DTYPE).astype(complex).reshape(trials, points)
    return ZRecord(N, z)
