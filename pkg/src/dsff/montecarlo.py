# ----------------------------------------------------------------------
# Copyright (c) 2024 Rafael Gonzalez.
#
# See the LICENSE file for details
# ----------------------------------------------------------------------

'''
Monte Carlo oracle: elliptic Ginibre draws, their complex spectra and
sample estimates of the DSFF with standard errors.
'''

#--------------------
# System wide imports
# -------------------

import os
import math
import asyncio
import logging

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

# -------------------
# Third party imports
# -------------------

import numpy as np
import scipy.linalg

from decouple import config as env

#--------------
# local imports
# -------------

from .error import ConvergenceError, DomainError, NumericIntegrityError
from .finite_n import ComplexTime, EnsembleParams
from .accumulator import MomentAccumulator, TrialAccumulator

# ----------------
# Module constants
# ----------------

# Uniform draws per complex Gaussian entry (one Box-Muller pair)
UNIFORMS_PER_ENTRY = 2

SPECTRUM_RTOL = 1e-8

# LAPACK's own QR iteration cap, reported on failure
SWEEPS_PER_DIMENSION = 30

# -----------------------
# Module global variables
# -----------------------

log = logging.getLogger(__name__.split('.')[-1])

# -------------------
# Auxiliary functions
# -------------------

def _default_seed() -> int:
    return env('DSFF_SEED', default=0, cast=int)


def worker_count(requested: Optional[int] = None) -> int:
    '''Requested worker processes, capped by DSFF_THREADS'''
    cap = max(1, env('DSFF_THREADS', default=os.cpu_count() or 1, cast=int))
    return cap if requested is None else max(1, min(requested, cap))

# -------
# Classes
# -------

@dataclass(frozen=True)
class SamplerConfig:
    N: int
    tau: float
    trials: int
    seed: int = field(default_factory=_default_seed)
    stream_id: int = 0

    def __post_init__(self):
        EnsembleParams(self.N, self.tau)
        if isinstance(self.trials, bool) or int(self.trials) != self.trials or self.trials < 1:
            raise DomainError(f"trials = {self.trials} must be a positive integer")
        if self.seed < 0 or self.stream_id < 0:
            raise DomainError(f"seed = {self.seed} and stream_id = {self.stream_id} must be >= 0")

    @property
    def params(self) -> EnsembleParams:
        return EnsembleParams(self.N, self.tau)

    def generator(self, trial: int) -> np.random.Generator:
        '''Counter-based stream fully determined by (seed, stream_id, trial)'''
        sequence = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id, trial))
        return np.random.Generator(np.random.Philox(sequence))


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    trace_defect: float
    moment_defect: float


@dataclass(frozen=True)
class DsffEstimate:
    disconnected: object
    connected: object
    stderr_disc: object
    stderr_conn: object
    trials_used: int

    @property
    def total(self):
        return self.disconnected + self.connected

    @property
    def stderr_total(self):
        return np.hypot(self.stderr_disc, self.stderr_conn)

# ------------------
# Sampling & spectra
# ------------------

def sample_eginue(config: SamplerConfig, trial: int) -> np.ndarray:
    '''
    One N x N elliptic Ginibre matrix.
    G has complex Gaussian entries of variance 1/N, drawn by Box-Muller from
    exactly two uniforms per entry in row-major order.
    '''
    if not 0 <= trial < config.trials:
        raise DomainError(f"trial index {trial} outside [0, {config.trials})")
    N, tau = config.N, config.tau
    u = config.generator(trial).random((UNIFORMS_PER_ENTRY, N, N))
    radius = np.sqrt(-np.log1p(-u[0]) / N)
    G = radius * np.exp(2j * np.pi * u[1])
    Gh = G.conj().T
    return math.sqrt(1 + tau) / 2 * (G + Gh) + math.sqrt(1 - tau) / 2 * (G - Gh)


def spectrum(X: np.ndarray) -> Spectrum:
    '''All eigenvalues of a dense complex matrix, with the trace sum rules checked'''
    X = np.asarray(X, dtype=complex)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise DomainError(f"matrix of shape {X.shape} is not square")
    if not np.all(np.isfinite(X)):
        raise DomainError("matrix has non-finite entries")
    N = X.shape[0]
    try:
        # LAPACK geev: balancing, Hessenberg reduction, shifted QR with deflation
        eigenvalues = scipy.linalg.eigvals(X, check_finite=False)
    except np.linalg.LinAlgError as e:
        raise ConvergenceError(str(e), eigenvalues_found=(), sweeps=SWEEPS_PER_DIMENSION * N) from e
    norm = float(np.linalg.norm(X))
    trace_defect = abs(math.fsum(eigenvalues.real) - np.trace(X).real
                       + 1j * (math.fsum(eigenvalues.imag) - np.trace(X).imag))
    squares = eigenvalues ** 2
    trace_x2 = np.sum(X * X.T)
    moment_defect = abs(math.fsum(squares.real) - trace_x2.real
                        + 1j * (math.fsum(squares.imag) - trace_x2.imag))
    bound = SPECTRUM_RTOL * N * max(norm, 1.0)
    if trace_defect > bound or moment_defect > bound:
        raise NumericIntegrityError(
            f"spectral sum rules: trace defect {trace_defect:.3e}, second moment defect "
            f"{moment_defect:.3e}, bound {bound:.3e}")
    return Spectrum(eigenvalues, trace_defect, moment_defect)

# ----------
# Estimators
# ----------

def _phases(T: np.ndarray, theta: float):
    return T * math.cos(theta), T * math.sin(theta)


def _simulate_range(config: SamplerConfig, start: int, stop: int, T: np.ndarray, theta: float) -> np.ndarray:
    t, s = _phases(T, theta)
    rows = np.empty((stop - start, T.shape[0]), dtype=complex)
    for row, trial in enumerate(range(start, stop)):
        z = spectrum(sample_eginue(config, trial)).eigenvalues
        rows[row] = np.exp(1j * (np.outer(t, z.real) + np.outer(s, z.imag))).sum(axis=1)
    return rows


def _grid(T) -> np.ndarray:
    T = np.atleast_1d(np.asarray(T, dtype=float))
    if not np.all(np.isfinite(T)) or np.any(T < 0):
        raise DomainError("time magnitudes must be finite and >= 0")
    return T


def simulate(config: SamplerConfig, T, theta: float) -> TrialAccumulator:
    '''Z_N for every trial of one sub-stream, on a grid of time magnitudes'''
    T = _grid(T)
    accumulator = TrialAccumulator(T.shape[0])
    for row in _simulate_range(config, 0, config.trials, T, theta):
        accumulator.append(row)
    return accumulator


def summarize(accumulator: TrialAccumulator, T_in) -> DsffEstimate:
    '''Estimate from collected trials, scalar fields for a scalar time'''
    parts = accumulator.statistics()
    if np.ndim(T_in) == 0:
        parts = [float(p[0]) for p in parts]
    disconnected, connected, stderr_disc, stderr_conn = parts
    return DsffEstimate(
        disconnected=disconnected,
        connected=connected,
        stderr_disc=stderr_disc,
        stderr_conn=stderr_conn,
        trials_used=len(accumulator),
    )


def estimate_dsff(config: SamplerConfig, time: ComplexTime) -> DsffEstimate:
    if config.trials < 2:
        raise DomainError(f"trials = {config.trials}, at least 2 needed for standard errors")
    estimate = summarize(simulate(config, time.T, time.theta), time.T)
    log.debug("[N=%d] [tau=%g] [T=%g] disconnected = %g +- %g, connected = %g +- %g",
        config.N, config.tau, time.T, estimate.disconnected, estimate.stderr_disc,
        estimate.connected, estimate.stderr_conn)
    return estimate


def _chunks(trials: int, parts: int):
    parts = max(1, min(parts, trials))
    edges = np.linspace(0, trials, parts + 1).round().astype(int)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


async def _fan_out(config: SamplerConfig, T: np.ndarray, theta: float, workers: int) -> TrialAccumulator:
    loop = asyncio.get_running_loop()
    chunks = _chunks(config.trials, workers)
    with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
        futures = [loop.run_in_executor(pool, _simulate_range, config, a, b, T, theta) for a, b in chunks]
        results = await asyncio.gather(*futures)
    accumulator = TrialAccumulator(T.shape[0])
    for rows in results:  # chunk order, not completion order
        for row in rows:
            accumulator.append(row)
    return accumulator


def collect(config: SamplerConfig, T, theta: float, workers: Optional[int] = None) -> TrialAccumulator:
    '''Per-trial Z_N of all trials, fanned out over worker processes by trial range'''
    T = _grid(T)
    workers = worker_count(workers)
    if workers <= 1 or config.trials == 1:
        return simulate(config, T, theta)
    log.info("[N=%d] [tau=%g] %d trials over %d workers", config.N, config.tau, config.trials, workers)
    return asyncio.run(_fan_out(config, T, theta, workers))


def estimate_grid(config: SamplerConfig, T, theta: float, workers: Optional[int] = None) -> DsffEstimate:
    '''DSFF estimate on a grid; identical to the serial result whatever the worker count'''
    if config.trials < 2:
        raise DomainError(f"trials = {config.trials}, at least 2 needed for standard errors")
    return summarize(collect(config, T, theta, workers), T)


def second_moment(config: SamplerConfig):
    '''Mean and standard error of sum |z_j|^2 / N over trials'''
    moments = MomentAccumulator()
    for trial in range(config.trials):
        z = spectrum(sample_eginue(config, trial)).eigenvalues
        moments.append(math.fsum(np.abs(z) ** 2) / config.N)
    return moments.statistics()
