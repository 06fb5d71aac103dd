# ----------------------------------------------------------------------
# Copyright (c) 2024 Rafael Gonzalez.
#
# See the LICENSE file for details
# ----------------------------------------------------------------------

#--------------------
# System wide imports
# -------------------

import logging

from typing import Callable, Iterable, Sequence

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

# ---------
# Functions
# ---------

def loglog_slope(x: Sequence[float], y: Sequence[float]) -> float:
    '''Least squares slope of log|y| against log x'''
    x = np.asarray(x, dtype=float)
    y = np.abs(np.asarray(y, dtype=float))
    if x.shape != y.shape or x.size < 2:
        raise DomainError(f"need two or more matching points, got {x.shape} and {y.shape}")
    if np.any(x <= 0) or np.any(y <= 0):
        raise DomainError("log-log fit needs strictly positive data")
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def sup_residual(exact: Callable[[float], float], approx: Callable[[float], float],
                 window: Iterable[float]) -> float:
    '''max |exact - approx| over the window'''
    return max(abs(exact(x) - approx(x)) for x in window)


def observed_order(sizes: Sequence[int], residual: Callable[[int], float]) -> float:
    '''Decay order p in residual(N) ~ N^-p from a log-log fit'''
    values = [residual(N) for N in sizes]
    order = -loglog_slope(sizes, values)
    log.debug("sizes %s residuals %s observed order %.3f", list(sizes), values, order)
    return order
