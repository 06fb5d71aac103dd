# ----------------------------------------------------------------------
# Copyright (c) 2024 Rafael Gonzalez.
#
# See the LICENSE file for details
# ----------------------------------------------------------------------

#--------------------
# System wide imports
# -------------------

import math
import logging
import statistics
import collections

from typing import Iterable, Tuple

# -------------------
# Third party imports
# -------------------

import numpy as np

#--------------
# local imports
# -------------

from .error import DomainError

# ----------------
# Module constants
# ----------------

# -----------------------
# Module global variables
# -----------------------

log = logging.getLogger(__name__.split('.')[-1])

# -------------------
# Auxiliary functions
# -------------------

def _column_fsum(rows: np.ndarray) -> np.ndarray:
    '''Compensated sum down each column'''
    return np.array([math.fsum(column) for column in rows.T])

# -------
# Classes
# -------

class TrialAccumulator:
    '''
    Ordered store of per-trial Z_N values on a fixed time grid.
    Reductions use compensated summation, so merging sub-streams in
    a fixed order gives results independent of worker scheduling.
    '''

    def __init__(self, points: int):
        if points < 1:
            raise DomainError(f"grid of {points} points")
        self._points = points
        self._buffer = collections.deque()

    def __len__(self):
        return len(self._buffer)

    @property
    def points(self) -> int:
        return self._points

    def append(self, z: np.ndarray) -> None:
        z = np.asarray(z, dtype=complex).reshape(-1)
        if z.shape[0] != self._points:
            raise DomainError(f"trial with {z.shape[0]} points, expected {self._points}")
        self._buffer.append(z)

    def extend(self, other: 'TrialAccumulator') -> None:
        if other.points != self._points:
            raise DomainError(f"cannot merge grids of {other.points} and {self._points} points")
        self._buffer.extend(other._buffer)

    def trials(self) -> np.ndarray:
        '''trials x points matrix in insertion order'''
        if not self._buffer:
            return np.empty((0, self._points), dtype=complex)
        return np.vstack(self._buffer)

    def mean(self) -> np.ndarray:
        z = self.trials()
        n = z.shape[0]
        return (_column_fsum(z.real) + 1j * _column_fsum(z.imag)) / n

    def statistics(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        '''disconnected, connected and their standard errors per grid point'''
        n = len(self)
        if n < 2:
            raise DomainError(f"{n} trials, at least 2 needed for a variance")
        z = self.trials()
        mean = self.mean()
        disconnected = np.abs(mean) ** 2
        deviation = np.abs(z - mean) ** 2
        connected = _column_fsum(deviation) / (n - 1)
        stderr_conn = np.sqrt(_column_fsum((deviation - connected) ** 2) / (n - 1) / n)
        # linearised |mean|^2 around the sample mean
        projection = (np.conj(mean) * z).real
        centre = _column_fsum(projection) / n
        stderr_disc = 2 * np.sqrt(_column_fsum((projection - centre) ** 2) / (n - 1) / n)
        return disconnected, connected, stderr_disc, stderr_conn


class MomentAccumulator:
    '''Scalar per-trial observable with mean and standard error'''

    def __init__(self, values: Iterable[float] = ()):
        self._buffer = collections.deque(values)

    def __len__(self):
        return len(self._buffer)

    def append(self, value: float) -> None:
        self._buffer.append(float(value))

    def values(self) -> list:
        return list(self._buffer)

    def statistics(self) -> Tuple[float, float]:
        if len(self._buffer) < 2:
            raise DomainError(f"{len(self._buffer)} trials, at least 2 needed for a variance")
        aver = math.fsum(self._buffer) / len(self._buffer)
        stdev = statistics.stdev(self._buffer, aver)
        return aver, stdev / math.sqrt(len(self._buffer))
