# ----------------------------------------------------------------------
# Copyright (c) 2024 Rafael Gonzalez.
#
# See the LICENSE file for details
# ----------------------------------------------------------------------

'''
Uniform large-N expansions of the Laguerre polynomials and of the LUE-type
kernels f_N, rho_N and Psi_N over the four regions of the x axis:
Bessel [0, c], oscillatory [c, 4N - d sqrt(N)], Airy around 4N and
exponential beyond 4N + d sqrt(N).
'''

#--------------------
# System wide imports
# -------------------

import math
import cmath
import logging
import functools

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

# -------------------
# Third party imports
# -------------------

import numpy as np
from numpy.polynomial import Polynomial
from decouple import config

#--------------
# local imports
# -------------

from . import Region, PARTITION_C, PARTITION_D
from .error import DomainError
from .specfun import (
    airy, bessel_j, check_finite, turning_integral, varphi, xi, zeta, zeta_ratio, LN2,
)

# ----------------
# Module constants
# ----------------

BOUNDARY_RTOL = 1e-9

# Laguerre expansions: Bessel form on (0, 1 - DELTA], Airy form on [DELTA, inf)
LAGUERRE_DELTA = 0.05

# F1, F2 are replaced by a fitted polynomial for |t - 1| < BRIDGE_HALF_GAP
BRIDGE_HALF_GAP = 0.05
BRIDGE_REACH = 0.2
BRIDGE_DEGREE = 10

MAX_ORDER = 3

# -----------------------
# Module global variables
# -----------------------

log = logging.getLogger(__name__.split('.')[-1])

# -------
# Classes
# -------

@dataclass(frozen=True)
class RegimePartition:
    c: float = PARTITION_C
    d: float = PARTITION_D

    def __post_init__(self):
        if not (math.isfinite(self.c) and math.isfinite(self.d) and self.c > 0 and self.d > 0):
            raise DomainError(f"partition constants c = {self.c}, d = {self.d} must be finite and > 0")

    @classmethod
    def from_config(cls) -> 'RegimePartition':
        return cls(
            c=config('DSFF_PARTITION_C', default=PARTITION_C, cast=float),
            d=config('DSFF_PARTITION_D', default=PARTITION_D, cast=float),
        )

    def bounds(self, N: int) -> Tuple[float, float, float]:
        '''The three endpoints c, 4N - d sqrt(N), 4N + d sqrt(N)'''
        lower = 4 * N - self.d * math.sqrt(N)
        if not self.c < lower:
            raise DomainError(f"partition (c={self.c}, d={self.d}) leaves no oscillatory region at N = {N}")
        return self.c, lower, 4 * N + self.d * math.sqrt(N)


@dataclass(frozen=True)
class ScaledAbscissa:
    N: int
    x: float

    @property
    def sx(self) -> float:
        return self.x / (4 * self.N)

    @property
    def SX(self) -> float:
        return 4 * self.N * self.x

    @property
    def y(self) -> float:
        return (2 * self.N) ** (2 / 3) * (self.sx - 1)


@dataclass(frozen=True)
class AsymptoticValue:
    value: float
    region: Region
    neighbour: Optional[float] = None
    neighbour_region: Optional[Region] = None


@dataclass(frozen=True)
class ExpansionCoefficients:
    '''E1, E2 of the Bessel form and F1, F2 of the Airy form for Laguerre parameter alpha'''
    alpha: int

    def _bracket(self, r: float) -> float:
        return (4 * self.alpha ** 2 - 1) / 8 + r / 4 + 5 * r * r / 24

    def e1(self, t: float) -> float:
        if t <= 0.0:
            return 0.0
        a = self.alpha
        r = t / (1 - t)
        return (4 * a * a - 1) / (8 * xi(t)) - math.sqrt((1 - t) / t) * self._bracket(r)

    def e2(self, t: float) -> float:
        if t <= 0.0:
            return 0.0
        a = self.alpha
        w = xi(t)
        r = t / (1 - t)
        return (
            - (2*a - 1) * (2*a + 1) * (2*a + 3) * (2*a + 5) / (128 * w * w)
            - (2*a - 3) * (2*a - 1) * (2*a + 1) * (2*a + 3) / 128 * (1 - t) / t
            + (2*a + 1) * (2*a + 3) / (8 * w) * math.sqrt((1 - t) / t) * self._bracket(r)
            - (2*a - 3) * (2*a - 1) * (8*a + 7) / 96
            + (7 * a * a / 48 - 121 / 192) * r
            - 77 / 96 * r ** 2
            - 385 / 1152 * r ** 3
        )

    def _f1_direct(self, t: float) -> float:
        z = zeta(t)
        r = t / (t - 1)
        root = 1.0 / math.sqrt(t * zeta_ratio(t))
        return -5 / (48 * z * z) + root * self._bracket(-r)

    def _f2_direct(self, t: float) -> float:
        a = self.alpha
        z = zeta(t)
        r = t / (t - 1)
        root = 1.0 / math.sqrt(t * zeta_ratio(t))
        return (
            - 455 / (4608 * z ** 3)
            + 7 / (48 * z) * root * self._bracket(-r)
            + (2*a - 3) * (2*a - 1) * (2*a + 1) * (2*a + 3) / 128 * (t - 1) / t
            - (2*a - 3) * (2*a - 1) * (8*a + 7) / 96
            + (121 / 192 - 7 * a * a / 48) * r
            - 77 / 96 * r ** 2
            + 385 / 1152 * r ** 3
        )

    def f1(self, t: float) -> float:
        if abs(t - 1) < BRIDGE_HALF_GAP:
            return float(_bridge(self.alpha, 'f1')(t))
        return self._f1_direct(t)

    def f2(self, t: float) -> float:
        if abs(t - 1) < BRIDGE_HALF_GAP:
            return float(_bridge(self.alpha, 'f2')(t))
        return self._f2_direct(t)

# -------------------
# Auxiliary functions
# -------------------

@functools.cache
def _bridge(alpha: int, which: str) -> Polynomial:
    '''Least squares polynomial through F1 or F2 on both sides of the turning point'''
    coeffs = ExpansionCoefficients(alpha)
    func = coeffs._f1_direct if which == 'f1' else coeffs._f2_direct
    nodes = np.concatenate([
        np.linspace(1 - BRIDGE_REACH, 1 - BRIDGE_HALF_GAP, 16),
        np.linspace(1 + BRIDGE_HALF_GAP, 1 + BRIDGE_REACH, 16),
    ])
    values = np.array([func(t) for t in nodes])
    log.debug("[alpha=%d] fitting %s bridge across t = 1", alpha, which)
    return Polynomial.fit(nodes, values, BRIDGE_DEGREE)


def _scaled(logmag: float, value: float) -> float:
    try:
        return value * math.exp(logmag)
    except OverflowError:
        return math.copysign(math.inf, value)


def _order(order: int) -> int:
    if not 1 <= order <= MAX_ORDER:
        raise DomainError(f"expansion order {order} outside [1, {MAX_ORDER}]")
    return order


def _bessel(z: float) -> Tuple[float, float, float]:
    return bessel_j(0, z), bessel_j(1, z), bessel_j(2, z)

# ----------------------
# Laguerre asymptotics
# ----------------------

def laguerre_bessel_asym(n: int, alpha: int, t: float, order: int = 3, damped: bool = False) -> float:
    '''
    Bessel-type expansion of L_n^{(alpha)}(nu t), nu = 4n + 2 alpha + 2, valid
    uniformly on (0, 1 - LAGUERRE_DELTA]. With damped=True the factor
    exp(-nu t / 2) is removed.
    '''
    order = _order(order)
    check_finite(t)
    if not 0.0 < t <= 1.0 - LAGUERRE_DELTA:
        raise DomainError(f"Bessel expansion argument t = {t} outside (0, {1 - LAGUERRE_DELTA}]")
    if alpha not in (0, 1):
        raise DomainError(f"Laguerre parameter alpha = {alpha} not in (0, 1)")
    nu = 4 * n + 2 * alpha + 2
    w = xi(t)
    z = nu * w
    coeffs = ExpansionCoefficients(alpha)
    bracket = bessel_j(alpha, z)
    if order >= 2:
        bracket += coeffs.e1(t) / nu * bessel_j(alpha + 1, z)
    if order >= 3:
        bracket += coeffs.e2(t) / nu ** 2 * bessel_j(alpha, z)
    logmag = 0.5 * math.log(w) - alpha * LN2 - (alpha / 2 + 0.25) * math.log(t) - 0.25 * math.log1p(-t)
    if not damped:
        logmag += nu * t / 2
    return _scaled(logmag, bracket)


def laguerre_airy_asym(n: int, alpha: int, t: float, order: int = 3, damped: bool = False) -> float:
    '''
    Airy-type expansion of L_n^{(alpha)}(nu t), nu = 4n + 2 alpha + 2, valid
    uniformly on [LAGUERRE_DELTA, inf).
    '''
    order = _order(order)
    check_finite(t)
    if t < LAGUERRE_DELTA:
        raise DomainError(f"Airy expansion argument t = {t} below {LAGUERRE_DELTA}")
    nu = 4 * n + 2 * alpha + 2
    ai, aip = airy(nu ** (2 / 3) * zeta(t))
    coeffs = ExpansionCoefficients(alpha)
    bracket = ai
    if order >= 2:
        bracket += coeffs.f1(t) / nu ** (4 / 3) * aip
    if order >= 3:
        bracket += coeffs.f2(t) / nu ** 2 * ai
    logmag = (- math.log(nu) / 3 - (alpha - 0.5) * LN2 - (alpha / 2 + 0.25) * math.log(t)
              + 0.25 * math.log(zeta_ratio(t)))
    if not damped:
        logmag += nu * t / 2
    return _scaled(logmag, -bracket if n % 2 else bracket)

# -----------------
# Region bookkeeping
# -----------------

_ADJACENT = (
    (Region.BESSEL, Region.OSCILLATORY),
    (Region.OSCILLATORY, Region.AIRY),
    (Region.AIRY, Region.EXPONENTIAL),
)


def classify_region(N: int, x: float, partition: RegimePartition = RegimePartition()) -> Region:
    check_finite(x)
    if x < 0:
        raise DomainError(f"abscissa x = {x} < 0")
    ends = partition.bounds(N)
    for end in ends:
        if abs(x - end) <= BOUNDARY_RTOL * max(1.0, end):
            return Region.BOUNDARY
    if x < ends[0]:
        return Region.BESSEL
    if x < ends[1]:
        return Region.OSCILLATORY
    if x < ends[2]:
        return Region.AIRY
    return Region.EXPONENTIAL


def _adjacent(N: int, x: float, partition: RegimePartition) -> Tuple[Region, Region]:
    ends = partition.bounds(N)
    nearest = min(range(3), key=lambda i: abs(x - ends[i]))
    return _ADJACENT[nearest]


def _evaluate(table: dict, N: int, x: float, partition: Optional[RegimePartition], **kwargs) -> AsymptoticValue:
    partition = partition or RegimePartition()
    region = classify_region(N, x, partition)
    if region != Region.BOUNDARY:
        return AsymptoticValue(table[region](N, x, **kwargs), region)
    lower, upper = _adjacent(N, x, partition)
    log.debug("[N=%d] [x=%g] on the %s/%s boundary", N, x, lower, upper)
    return AsymptoticValue(table[lower](N, x, **kwargs), lower, table[upper](N, x, **kwargs), upper)

# -------------
# f_N expansion
# -------------

def _f_bessel_terms(N: int, x: float) -> Tuple[float, ...]:
    X = 4 * N * x
    if X == 0.0:
        return (N * N, 0.0, 0.0)
    r = math.sqrt(X)
    _, j1, j2 = _bessel(r)
    first = 4 * N * N * j1 * j1 / X
    second = r * j1 * j2 / 12
    third = (X * (24 - 5 * X) * j1 * j1 - 24 * r * (4 - X) * j1 * j2 + 5 * X * X * j2 * j2) / (11520 * N * N)
    return first, second, third


def _f_oscillatory_terms(N: int, x: float) -> Tuple[float, ...]:
    '''Four terms: leading, second, smooth and oscillating halves of the third'''
    s = x / (4 * N)
    phase = 8 * N * xi(s)
    sin, cos = math.sin(phase), math.cos(phase)
    m = 4 * N
    first = (1 - sin) / (4 * math.pi * s ** 1.5 * (1 - s) ** 0.5) / m
    second = -(9 - 12 * s + 8 * s * s) * cos / (48 * math.pi * s * s * (1 - s) ** 2) / m ** 2
    denom = 1152 * math.pi * s ** 2.5 * (1 - s) ** 3.5 * m ** 3
    smooth = 36 * (3 - 8 * s) / denom
    wobble = -(27 - 72 * s - 288 * s ** 2 + 192 * s ** 3 - 64 * s ** 4) * sin / denom
    return first, second, smooth, wobble


def _f_airy_terms(N: int, x: float) -> Tuple[float, ...]:
    y = ScaledAbscissa(N, x).y
    ai, aip = airy(y)
    first = ai * ai / (16 * N) ** (2 / 3)
    second = -y * ai * (4 * ai + y * aip) / (10 * (2 * N) ** (4 / 3))
    third = ((362 * y ** 2 + 7 * y ** 5) * ai * ai + (60 + 146 * y ** 3) * ai * aip + 7 * y ** 4 * aip * aip) / (2800 * N * N)
    return first, second, third


def exponential_rate(sx: float) -> float:
    '''h(x) = sqrt(x^2 - x) - arccosh(sqrt(x)), the decay rate past the soft edge'''
    if sx <= 1.0:
        raise DomainError(f"exponential regime needs x/4N > 1, got {sx}")
    return turning_integral(sx)


def exponential_prefactor(sx: float) -> float:
    '''g(x) in f_N = g exp(-4N h) / N on the exponential region'''
    if sx <= 1.0:
        raise DomainError(f"exponential regime needs x/4N > 1, got {sx}")
    return 1.0 / (32 * math.pi * sx ** 1.5 * math.sqrt(sx - 1))


def _f_exponential(N: int, x: float, order: int = 3) -> float:
    s = x / (4 * N)
    return exponential_prefactor(s) / N * math.exp(-4 * N * exponential_rate(s))


_F_TERMS = {
    Region.BESSEL: _f_bessel_terms,
    Region.OSCILLATORY: _f_oscillatory_terms,
    Region.AIRY: _f_airy_terms,
}


def f_terms(N: int, x: float, region: Region) -> Tuple[float, ...]:
    '''Individual displayed terms of the f_N expansion in one of the first three regions'''
    try:
        return _F_TERMS[region](N, x)
    except KeyError:
        raise DomainError(f"no term-wise expansion of f_N in the {region} region") from None


def _f_summed(region: Region) -> Callable[..., float]:
    def summed(N: int, x: float, order: int = 3) -> float:
        terms = f_terms(N, x, region)
        if order == 3:
            return math.fsum(terms)
        return math.fsum(terms[:order])
    return summed


_F_TABLE = {
    Region.BESSEL: _f_summed(Region.BESSEL),
    Region.OSCILLATORY: _f_summed(Region.OSCILLATORY),
    Region.AIRY: _f_summed(Region.AIRY),
    Region.EXPONENTIAL: _f_exponential,
}


def f_asym(N: int, x: float, order: int = 3, partition: Optional[RegimePartition] = None) -> AsymptoticValue:
    '''Large-N expansion of f_N(x) with the given number of displayed terms'''
    return _evaluate(_F_TABLE, N, x, partition, order=_order(order))

# ---------------
# rho_N expansion
# ---------------

def _rho_bessel(N: int, x: float) -> float:
    X = 4 * N * x
    r = math.sqrt(X)
    j0, j1, _ = _bessel(r)
    return N * (j0 * j0 + j1 * j1) - (2 * X * j0 * j0 - 4 * r * j0 * j1 + X * j1 * j1) / (48 * N)


def _rho_oscillatory(N: int, x: float) -> float:
    s = x / (4 * N)
    return (math.sqrt((1 - s) / s) / (2 * math.pi)
            - math.cos(8 * N * xi(s)) / (16 * math.pi * N * s * (1 - s)))


def _rho_airy(N: int, x: float) -> float:
    y = ScaledAbscissa(N, x).y
    ai, aip = airy(y)
    return (aip * aip - y * ai * ai) / (16 * N) ** (1 / 3)


def _rho_exponential(N: int, x: float) -> float:
    s = x / (4 * N)
    return math.exp(-4 * N * exponential_rate(s)) / (32 * math.pi * N * s * (s - 1))


_RHO_TABLE = {
    Region.BESSEL: _rho_bessel,
    Region.OSCILLATORY: _rho_oscillatory,
    Region.AIRY: _rho_airy,
    Region.EXPONENTIAL: _rho_exponential,
}


def rho_asym(N: int, x: float, partition: Optional[RegimePartition] = None) -> AsymptoticValue:
    '''Large-N expansion of the LUE density rho_N(x)'''
    return _evaluate(_RHO_TABLE, N, x, partition)

# ---------------
# Psi_N expansion
# ---------------

def _psi_bessel(N: int, x: float) -> float:
    X = 4 * N * x
    r = math.sqrt(X)
    j0, j1, _ = _bessel(r)
    return N - 0.5 * (X * j0 * j0 - r * j0 * j1 + X * j1 * j1)


def _psi_oscillatory(N: int, x: float) -> float:
    s = x / (4 * N)
    return N - 4 * N / math.pi * xi(s)


def _psi_airy(N: int, x: float) -> float:
    y = ScaledAbscissa(N, x).y
    ai, aip = airy(y)
    return (2 * y * y * ai * ai - ai * aip - 2 * y * aip * aip) / 3


def _psi_exponential(N: int, x: float) -> float:
    s = x / (4 * N)
    return math.exp(-4 * N * exponential_rate(s)) / (32 * math.pi * N * math.sqrt(s) * (s - 1) ** 1.5)


_PSI_TABLE = {
    Region.BESSEL: _psi_bessel,
    Region.OSCILLATORY: _psi_oscillatory,
    Region.AIRY: _psi_airy,
    Region.EXPONENTIAL: _psi_exponential,
}


def psi_asym(N: int, x: float, partition: Optional[RegimePartition] = None) -> AsymptoticValue:
    '''Large-N expansion of Psi_N(x), the tail integral of rho_N'''
    return _evaluate(_PSI_TABLE, N, x, partition)

# -----------------------
# Dip-ramp intermediate range
# -----------------------

def f_dip_ramp(N: int, x: float) -> float:
    '''f_N on 1/N << x << N, where the Bessel and bulk forms overlap'''
    if x <= 0:
        raise DomainError(f"dip-ramp form needs x > 0, got {x}")
    return math.sqrt(N) / (math.pi * x ** 1.5) * 0.5 * (1 - math.sin(4 * math.sqrt(N * x)))


def psi_dip_ramp(N: int, x: float) -> float:
    if x < 0:
        raise DomainError(f"dip-ramp form needs x >= 0, got {x}")
    return N - math.sqrt(N) * 2 * math.sqrt(x) / math.pi

# --------------------------
# Integration by parts sums
# --------------------------

def oscillatory_antiderivative(p1: Union[Sequence[float], Polynomial], alpha: float, beta: float,
                               lam: float, x: float, terms: int = 4) -> Union[complex, float]:
    '''
    Antiderivative by repeated integration by parts of
    p1(x) x^-alpha |1-x|^-beta exp(i lam varphi(x)) on (0, 1), and of
    p1(x) x^-alpha (x-1)^-beta exp(lam varphi(x)) past x = 1 (real result).
    '''
    check_finite(x, lam)
    if lam == 0.0:
        raise DomainError("frequency lam must be non-zero")
    p = p1 if isinstance(p1, Polynomial) else Polynomial(p1)
    X = Polynomial([0.0, 1.0])
    if 0.0 < x < 1.0:
        total = 0j
        for j in range(1, terms + 1):
            a, b = alpha + (j - 2) / 2, beta + (3 * j - 2) / 2
            total -= (1j / lam) ** j * p(x) / (x ** a * (1 - x) ** b)
            p = X * (1 - X) * p.deriv() - a * (1 - X) * p + b * X * p
        return total * cmath.exp(1j * lam * varphi(x))
    if x > 1.0:
        total = 0.0
        for j in range(1, terms + 1):
            a, b = alpha + (j - 2) / 2, beta + (3 * j - 2) / 2
            total += (-1) ** (j - 1) / lam ** j * p(x) / (x ** a * (x - 1) ** b)
            p = X * (X - 1) * p.deriv() - a * (X - 1) * p - b * X * p
        return total * math.exp(lam * varphi(x))
    raise DomainError(f"antiderivative undefined at x = {x}")
