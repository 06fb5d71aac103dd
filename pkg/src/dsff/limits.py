# ----------------------------------------------------------------------
# Copyright (c) 2024 Rafael Gonzalez.
#
# See the LICENSE file for details
# ----------------------------------------------------------------------

'''
Large-N limit profiles of the DSFF along the scalings
tau = 1 - kappa N^-alpha and T = N^gamma Tbase, their plateau exponents,
error exponent tables and the (alpha, gamma) phase classifier.
'''

#--------------------
# System wide imports
# -------------------

import sys
import math
import logging

from dataclasses import dataclass

# -------------------
# Third party imports
# -------------------

import numpy as np

if sys.version_info < (3, 11):
    from typing_extensions import Self
else:
    from typing import Self

#--------------
# local imports
# -------------

from . import (
    Dominant, ErrorTable, Provenance, Ramp, Regime, Universality, BOUNDARY_TOL,
)
from .error import DomainError
from .finite_n import ComplexTime, DsffValue, EnsembleParams, dsff_exact, dsff_grid, eta
from .specfun import bessel_j

# ----------------
# Module constants
# ----------------

STRONG_TABLES = (ErrorTable.EPS1, ErrorTable.EPS2, ErrorTable.E1)
MESOSCOPIC_TABLES = (ErrorTable.EPS3, ErrorTable.EPS4, ErrorTable.E2)
WEAK_TABLES = (ErrorTable.EPS5, ErrorTable.EPS6, ErrorTable.E3)

# -----------------------
# Module global variables
# -----------------------

log = logging.getLogger(__name__.split('.')[-1])

# -------------------
# Auxiliary functions
# -------------------

def _near(a: float, b: float) -> bool:
    return abs(a - b) <= BOUNDARY_TOL


def regime_of(alpha: float) -> Regime:
    if _near(alpha, 0.0):
        return Regime.STRONG
    if alpha < 1.0 and not _near(alpha, 1.0):
        return Regime.MESOSCOPIC
    if _near(alpha, 1.0):
        return Regime.WEAK_CRITICAL
    return Regime.WEAK_SUB


def gamma_dip(alpha: float) -> float:
    return min((2 + alpha) / 5, 0.5)


def gamma_heisenberg(alpha: float) -> float:
    return min((1 + alpha) / 2, 1.0)


def _weak(regime: Regime) -> bool:
    return regime in (Regime.WEAK_CRITICAL, Regime.WEAK_SUB)

# -------
# Classes
# -------

@dataclass(frozen=True)
class ScalingPoint:
    alpha: float
    kappa: float
    gamma: float
    Tbase: float = 1.0
    theta: float = 0.0

    def __post_init__(self):
        for name in ('alpha', 'kappa', 'gamma', 'Tbase', 'theta'):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} = {getattr(self, name)} must be finite")
        if self.alpha < 0 or self.gamma < 0:
            raise DomainError(f"exponents alpha = {self.alpha}, gamma = {self.gamma} must be >= 0")
        if self.kappa <= 0 or self.Tbase <= 0:
            raise DomainError(f"kappa = {self.kappa} and Tbase = {self.Tbase} must be > 0")
        if self.regime == Regime.STRONG and self.kappa > 1:
            raise DomainError(f"kappa = {self.kappa} > 1 gives tau < 0 at alpha = 0")

    @classmethod
    def strong(cls, tau: float, gamma: float, Tbase: float = 1.0, theta: float = 0.0) -> Self:
        return cls(0.0, 1.0 - tau, gamma, Tbase, theta)

    @property
    def regime(self) -> Regime:
        return regime_of(self.alpha)

    @property
    def gamma_dip(self) -> float:
        return gamma_dip(self.alpha)

    @property
    def gamma_heisenberg(self) -> float:
        return gamma_heisenberg(self.alpha)

    @property
    def tbase(self) -> float:
        return self.Tbase * abs(math.cos(self.theta))

    def tau(self, N: int) -> float:
        tau = 1.0 - self.kappa * N ** (-self.alpha)
        if not 0.0 <= tau < 1.0:
            raise DomainError(f"tau = {tau} outside [0, 1) at N = {N} (alpha = {self.alpha}, kappa = {self.kappa})")
        return tau

    def params(self, N: int) -> EnsembleParams:
        return EnsembleParams(N, self.tau(N))

    def time(self, N: int) -> ComplexTime:
        return ComplexTime(N ** self.gamma * self.Tbase, self.theta)

    def scale(self) -> float:
        '''|eta Tbase| at strong non-Hermiticity, the Cartesian tbase otherwise'''
        if self.regime == Regime.STRONG:
            return abs(eta(EnsembleParams(1, 1.0 - self.kappa), self.theta)) * self.Tbase
        return self.tbase

    def damping(self, N: int) -> float:
        '''Exponent A of the Gaussian factor, with N^(1-alpha) folded in for weak non-Hermiticity'''
        if self.regime == Regime.STRONG:
            tau = 1.0 - self.kappa
            return (1 - tau * tau) / 4 * self.Tbase ** 2
        A = self.kappa / 2 * self.Tbase ** 2
        if _weak(self.regime):
            A *= N ** (1 - self.alpha)
        return A


@dataclass(frozen=True)
class PhaseReport:
    alpha: float
    gamma: float
    regime: Regime
    dominant: Dominant
    exponent: float
    ramp: Ramp
    gamma_dip: float
    gamma_heisenberg: float
    universality: Universality

# --------------
# Limit profiles
# --------------

def _bessel_disconnected(s: float) -> float:
    if s == 0.0:
        return 1.0
    return bessel_j(1, 2 * s) ** 2 / (s * s)


def _bessel_connected(s: float) -> float:
    j0, j1 = bessel_j(0, 2 * s), bessel_j(1, 2 * s)
    return s * s * (2 * j0 * j0 + 2 * j1 * j1) - s * j0 * j1


def _oscillating(N: int, gamma: float, s: float) -> float:
    if s == 0.0:
        raise DomainError("oscillatory profile diverges at zero scaled time")
    return (1 - math.sin(4 * N ** gamma * s)) / (2 * math.pi * s ** 3)


def _weak_phase(s: float) -> float:
    return s * math.sqrt(4 - s * s) + 4 * math.asin(s / 2)


def weak_plateau_profile(tbase: float) -> float:
    '''Fraction of the plateau reached at the Heisenberg time under weak non-Hermiticity'''
    if not (math.isfinite(tbase) and tbase >= 0):
        raise DomainError(f"tbase = {tbase} must be finite and >= 0")
    if tbase >= 2.0:
        return 1.0
    return 2 / math.pi * (tbase * math.sqrt(4 - tbase * tbase) / 4 + math.asin(tbase / 2))


def limit_disconnected(point: ScalingPoint, N: int, uncorrected: bool = False) -> float:
    '''
    Dip-ramp profile of the disconnected part, F_N^(d) ~ N^(2 - 3 gamma) * profile.
    The oscillating cases keep N in the phase.
    '''
    gamma, regime = point.gamma, point.regime
    s = point.scale()
    if _near(gamma, 0.0):
        return _bessel_disconnected(s)
    gamma_h = point.gamma_heisenberg
    if _weak(regime) and _near(gamma, 1.0):
        if s >= 2.0:
            raise DomainError(f"gamma = 1 with tbase = {s} >= 2 lies in the plateau regime")
        A = point.damping(N)
        phase = math.sin(N * _weak_phase(s))
        if uncorrected:
            return math.exp(-A) * (1 - phase) / (2 * math.pi * s ** 3)
        return math.exp(-A) * (1 - phase) / (math.pi * s ** 3 * math.sqrt(4 - s * s))
    if _near(gamma, gamma_h):
        return math.exp(-point.damping(N)) * _oscillating(N, gamma, s)
    if gamma < gamma_h:
        return _oscillating(N, gamma, s)
    raise DomainError(f"gamma = {gamma} beyond the Heisenberg exponent {gamma_h}: plateau regime")


def limit_connected(point: ScalingPoint, N: int, uncorrected: bool = False) -> float:
    '''Dip-ramp profile of the connected part, F_N^(c) ~ N^m * profile'''
    gamma, alpha, regime = point.gamma, point.alpha, point.regime
    s = point.scale()
    gamma_h = point.gamma_heisenberg
    if regime == Regime.STRONG:
        A = point.damping(N)
        if _near(gamma, 0.0):
            return A + _bessel_connected(s)
        if _near(gamma, gamma_h):
            return 1 - math.exp(-A)
        if gamma < gamma_h:
            return A
    elif regime == Regime.MESOSCOPIC:
        A = point.damping(N)
        if _near(gamma, 0.0):
            return _bessel_connected(s)
        if _near(gamma, alpha):
            return 2 / math.pi * s + A
        if _near(gamma, gamma_h):
            return 1 - math.exp(-A)
        if gamma < alpha:
            return 2 / math.pi * s
        if gamma < gamma_h:
            return A
    else:
        if _near(gamma, 0.0):
            return _bessel_connected(s)
        if _near(gamma, 1.0):
            if s >= 2.0:
                raise DomainError(f"gamma = 1 with tbase = {s} >= 2 lies in the plateau regime")
            A = point.damping(N)
            if uncorrected:
                return 1 - math.exp(-A) + weak_plateau_profile(s)
            return 1 - math.exp(-A) * (1 - weak_plateau_profile(s))
        if gamma < 1.0:
            return 2 / math.pi * s
    raise DomainError(f"gamma = {gamma} beyond the Heisenberg exponent {gamma_h}: plateau regime")


def connected_power(point: ScalingPoint) -> float:
    '''N power m multiplying the connected profile'''
    if _weak(point.regime):
        return point.gamma
    return max(2 * point.gamma - point.alpha, point.gamma)


def disconnected_power(point: ScalingPoint) -> float:
    return 2 - 3 * point.gamma

# -------
# Plateau
# -------

def _edge_exponent(s: float) -> float:
    return s * math.sqrt(s * s - 4) - 4 * math.acosh(s / 2)


def _in_plateau(point: ScalingPoint) -> bool:
    gamma = point.gamma
    if _weak(point.regime):
        if _near(gamma, 1.0):
            return point.scale() > 2.0
        return gamma > 1.0
    return gamma > point.gamma_heisenberg and not _near(gamma, point.gamma_heisenberg)


def plateau_exponent(point: ScalingPoint) -> float:
    '''Rate Phi with F_N^(d) = exp(-N^p Phi + ...) past the Heisenberg time'''
    if not _in_plateau(point):
        raise DomainError(f"(alpha = {point.alpha}, gamma = {point.gamma}) is not in the plateau regime")
    gamma, regime = point.gamma, point.regime
    s = point.scale()
    at_one = _near(gamma, 1.0)
    if regime == Regime.STRONG:
        A = point.damping(1)
        if at_one and s > 2.0:
            return A + _edge_exponent(s)
        if gamma > 1.0 and not at_one:
            return A + s * s
        return A
    if regime == Regime.MESOSCOPIC:
        if at_one and s > 2.0:
            return _edge_exponent(s)
        if gamma > 1.0 and not at_one:
            return s * s
        return point.kappa / 2 * point.Tbase ** 2
    if at_one:
        return _edge_exponent(s)
    return s * s


def plateau_power(point: ScalingPoint) -> float:
    '''N power p multiplying the plateau rate'''
    if not _in_plateau(point):
        raise DomainError(f"(alpha = {point.alpha}, gamma = {point.gamma}) is not in the plateau regime")
    gamma = point.gamma
    if point.regime == Regime.MESOSCOPIC:
        below_one = gamma < 1.0 and not _near(gamma, 1.0)
        if below_one or (_near(gamma, 1.0) and point.scale() < 2.0):
            return 2 * gamma - 1 - point.alpha
    return 2 * gamma - 1

# ------------
# Error tables
# ------------

def _dip_ramp_gamma(point: ScalingPoint) -> float:
    gamma, gamma_h = point.gamma, point.gamma_heisenberg
    if gamma > gamma_h and not _near(gamma, gamma_h):
        raise DomainError(f"gamma = {gamma} outside the dip-ramp range [0, {gamma_h}]")
    return gamma


def _eps1(point: ScalingPoint) -> float:
    g = _dip_ramp_gamma(point)
    return 2 - 3 * g if g < 0.4 and not _near(g, 0.4) else 2 * g


def _eps2(point: ScalingPoint) -> float:
    g = _dip_ramp_gamma(point)
    if _near(g, 0.0):
        return 1.0
    if _near(g, 0.5):
        return 0.5
    if g < 1 / 3 and not _near(g, 1 / 3):
        return g
    return 1 - 2 * g


def _eps3(point: ScalingPoint) -> float:
    g, a = _dip_ramp_gamma(point), point.alpha
    return a - g if g < a and not _near(g, a) else a


def _eps4(point: ScalingPoint) -> float:
    g, a = _dip_ramp_gamma(point), point.alpha
    gamma_h = point.gamma_heisenberg
    if _near(g, 0.0):
        return a
    if _near(g, a):
        return min(a, 1 - a)
    if _near(g, gamma_h):
        return min(a, (1 - a) / 2)
    if g < a:
        return min(2 * g, a - g)
    return min(a, g - a, 1 + a - 2 * g)


def _eps5(point: ScalingPoint) -> float:
    g, a = _dip_ramp_gamma(point), point.alpha
    return min(2 - 3 * g, 2 * g, a - g)


def _eps6(point: ScalingPoint) -> float:
    g, a = _dip_ramp_gamma(point), point.alpha
    if _near(g, 0.0):
        return min(2.0, a)
    if _near(g, 1.0):
        return 1.0
    return min(2 * g, 2 - 2 * g, a - g)


# (N power, carries a log N factor)
def _e1(point: ScalingPoint):
    return (1.0, True) if point.gamma > 1.0 and not _near(point.gamma, 1.0) else (0.0, True)


def _e2(point: ScalingPoint):
    g, a = point.gamma, point.alpha
    if _near(g, 1.0) and point.scale() > 2.0:
        return (1 - a, False)
    if g > 1.0:
        return (2 * g - 1 - a, False)
    return (0.0, True)


def _e3(point: ScalingPoint):
    g, a = point.gamma, point.alpha
    if _near(g, 1.0):
        return (0.0, True)
    if g > (2 + a) / 2 and not _near(g, (2 + a) / 2):
        return (2 * g - 1 - a, False)
    return (1.0, True)


_EPS_TABLE = {
    ErrorTable.EPS1: _eps1,
    ErrorTable.EPS2: _eps2,
    ErrorTable.EPS3: _eps3,
    ErrorTable.EPS4: _eps4,
    ErrorTable.EPS5: _eps5,
    ErrorTable.EPS6: _eps6,
}

_E_TABLE = {
    ErrorTable.E1: _e1,
    ErrorTable.E2: _e2,
    ErrorTable.E3: _e3,
}


def _check_table(point: ScalingPoint, which: ErrorTable) -> None:
    regime = point.regime
    allowed = STRONG_TABLES if regime == Regime.STRONG else (
        MESOSCOPIC_TABLES if regime == Regime.MESOSCOPIC else WEAK_TABLES)
    if which not in allowed:
        raise DomainError(f"error table {which} does not apply to the {regime} regime")
    if which in _E_TABLE and not _in_plateau(point):
        raise DomainError(f"error table {which} needs the plateau regime, gamma = {point.gamma}")


def error_exponent(point: ScalingPoint, which: ErrorTable) -> float:
    '''Convergence exponent eps1..eps6, or the N power of the plateau errors e1..e3'''
    which = ErrorTable(which)
    _check_table(point, which)
    if which in _EPS_TABLE:
        return float(_EPS_TABLE[which](point))
    return float(_E_TABLE[which](point)[0])


def error_scale(point: ScalingPoint, which: ErrorTable, N: int) -> float:
    '''Size of the plateau error term e1, e2 or e3 at matrix size N'''
    which = ErrorTable(which)
    if which not in _E_TABLE:
        raise DomainError(f"error scale only defined for e1, e2, e3, got {which}")
    _check_table(point, which)
    power, logarithmic = _E_TABLE[which](point)
    value = N ** power
    return value * math.log(N) if logarithmic else value

# ----------------
# Phase classifier
# ----------------

def _ramp(alpha: float, gamma: float) -> Ramp:
    if _near(gamma, 0.0) or gamma > gamma_heisenberg(alpha) or _near(gamma, gamma_heisenberg(alpha)):
        return Ramp.NONE
    if alpha >= 1.0 or _near(alpha, 1.0):
        return Ramp.LINEAR
    if _near(gamma, alpha):
        return Ramp.MIXED
    return Ramp.LINEAR if gamma < alpha else Ramp.QUADRATIC


def _universality(alpha: float, gamma: float) -> Universality:
    gamma_h = gamma_heisenberg(alpha)
    if _near(gamma, alpha) or _near(gamma, gamma_h):
        return Universality.BOUNDARY
    if gamma > gamma_h:
        return Universality.GUE if alpha >= 1.0 else Universality.GINUE
    return Universality.GUE if gamma < alpha else Universality.GINUE


def phase_classify(alpha: float, gamma: float) -> PhaseReport:
    '''Dominant part, leading N power, ramp shape and universality class at (alpha, gamma)'''
    if not (math.isfinite(alpha) and math.isfinite(gamma) and alpha >= 0 and gamma >= 0):
        raise DomainError(f"(alpha = {alpha}, gamma = {gamma}) must be finite and >= 0")
    g_dip, g_h = gamma_dip(alpha), gamma_heisenberg(alpha)
    if _near(gamma, g_dip):
        dominant, exponent = Dominant.CROSSOVER, max(0.5, (4 - 3 * alpha) / 5)
    elif gamma < g_dip:
        dominant, exponent = Dominant.DISCONNECTED, 2 - 3 * gamma
    elif gamma < g_h or _near(gamma, g_h):
        dominant, exponent = Dominant.CONNECTED, max(2 * gamma - alpha, gamma)
    else:
        dominant, exponent = Dominant.PLATEAU, 1.0
    report = PhaseReport(
        alpha=alpha,
        gamma=gamma,
        regime=regime_of(alpha),
        dominant=dominant,
        exponent=exponent,
        ramp=_ramp(alpha, gamma),
        gamma_dip=g_dip,
        gamma_heisenberg=g_h,
        universality=_universality(alpha, gamma),
    )
    log.debug("[alpha=%g] [gamma=%g] %s", alpha, gamma, report)
    return report

# ----------
# Predictors
# ----------

def predict_dsff(point: ScalingPoint, N: int, uncorrected: bool = False) -> DsffValue:
    '''Theorem-level prediction of both DSFF parts at matrix size N'''
    if _in_plateau(point):
        decay = math.exp(-N ** plateau_power(point) * plateau_exponent(point))
        return DsffValue(decay, N - decay, Provenance.ASYMPTOTIC)
    disconnected = N ** disconnected_power(point) * limit_disconnected(point, N, uncorrected)
    connected = N ** connected_power(point) * limit_connected(point, N, uncorrected)
    return DsffValue(disconnected, connected, Provenance.ASYMPTOTIC)


def dsff_scaled(point: ScalingPoint, N: int) -> DsffValue:
    '''Exact DSFF at tau = 1 - kappa N^-alpha and T = N^gamma Tbase'''
    return dsff_exact(point.params(N), point.time(N))


def dsff_scaled_grid(point: ScalingPoint, N: int, Tbase) -> DsffValue:
    '''Exact DSFF along the scalings over an array of base times'''
    Tbase = np.asarray(Tbase, dtype=float)
    return dsff_grid(point.params(N), N ** point.gamma * Tbase, point.theta)
