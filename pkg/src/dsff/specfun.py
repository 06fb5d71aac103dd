# ----------------------------------------------------------------------
# Copyright (c) 2024 Rafael Gonzalez.
#
# See the LICENSE file for details
# ----------------------------------------------------------------------

'''
Special function kernel: Bessel J, Airy Ai/Ai', generalised Laguerre and
physicists' Hermite polynomials in overflow-safe scaled arithmetic, the
turning-point phase functions xi, zeta, varphi and the envelope majorants.
'''

#--------------------
# System wide imports
# -------------------

import sys
import math
import logging
import functools

from dataclasses import dataclass
from typing import Iterator, Tuple, Union

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

from .error import DomainError

# ----------------
# Module constants
# ----------------

ACCURACY_VERSION = 1

# Tolerances per kernel, consumed by the test suite.
ACCURACY = {
    'bessel_j': 1e-12,          # absolute, scaled by max(1, |J|)
    'airy_series': 1e-11,       # absolute, scaled by max(1, envAi)
    'airy_asymptotic': 1e-11,   # relative
    'airy_seam': 1e-10,         # both branches at the seams
    'laguerre': 1e-12,          # relative
    'hermite': 1e-12,           # relative
    'phase_bridge': 1e-11,      # absolute
    'first_zero': 1e-12,        # absolute
}

BESSEL_SERIES_MAX = 12.0
BESSEL_MILLER_MAX = 25.0
AIRY_SERIES_MIN = -8.5
AIRY_SERIES_MAX = 6.0
ZETA_SERIES_BAND = 1e-3

RESCALE_BITS = 256
_RESCALE = 2.0 ** RESCALE_BITS
_INV_RESCALE = 2.0 ** -RESCALE_BITS

LN2 = math.log(2.0)

# parsed at long double precision
AI0 = np.longdouble('0.355028053887817239260063186004')      # 3^(-2/3) / Gamma(2/3)
AIP0 = np.longdouble('-0.258819403792806798405183560189')    # -3^(-1/3) / Gamma(1/3)

# Coefficients of |x-1|^(3/2) * P(x-1) for the turning integral near x = 1
_TURNING_SERIES = (2.0 / 3.0, -1.0 / 5.0, 3.0 / 28.0, -5.0 / 72.0, 35.0 / 704.0)

_ZERO_BRACKETS = {0: (2.0, 3.0), 1: (3.0, 4.5), 2: (4.5, 6.0)}

_LD_EPS = float(np.finfo(np.longdouble).eps)

# -----------------------
# Module global variables
# -----------------------

log = logging.getLogger(__name__.split('.')[-1])

# -------------------
# Auxiliary functions
# -------------------

def check_finite(*values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise DomainError(f"non-finite argument {v}")


def _from_log(logmag: float, sign: int) -> 'ScaledReal':
    if logmag == -math.inf or sign == 0:
        return ScaledReal()
    e = math.floor(logmag / LN2)
    return ScaledReal.from_parts(sign * math.exp(logmag - e * LN2), e)

# -------
# Classes
# -------

@dataclass(frozen=True)
class ScaledReal:
    '''Real number stored as mantissa * 2**exponent with 1 <= |mantissa| < 2'''
    mantissa: float = 0.0
    exponent: int = 0

    @classmethod
    def from_float(cls, value: float) -> Self:
        return cls.from_parts(value, 0)

    @classmethod
    def from_parts(cls, mantissa: float, exponent: int) -> Self:
        if mantissa == 0.0:
            return cls(0.0, 0)
        m, e = math.frexp(mantissa)
        return cls(2.0 * m, int(exponent) + e - 1)

    @property
    def sign(self) -> int:
        return (self.mantissa > 0) - (self.mantissa < 0)

    def log_abs(self) -> float:
        if self.mantissa == 0.0:
            return -math.inf
        return math.log(abs(self.mantissa)) + self.exponent * LN2

    def __float__(self) -> float:
        try:
            return math.ldexp(self.mantissa, self.exponent)
        except OverflowError:
            return math.copysign(math.inf, self.mantissa)

    def __mul__(self, other: Union[Self, float]) -> Self:
        if not isinstance(other, ScaledReal):
            other = ScaledReal.from_float(float(other))
        return ScaledReal.from_parts(self.mantissa * other.mantissa, self.exponent + other.exponent)

    __rmul__ = __mul__

    def __neg__(self) -> Self:
        return ScaledReal(-self.mantissa, self.exponent)

    def __abs__(self) -> Self:
        return ScaledReal(abs(self.mantissa), self.exponent)

# ---------------
# Bessel function
# ---------------

def _bessel_series(nu: int, x: float) -> float:
    h = np.longdouble(x) / 2
    q = -h * h
    term = h ** nu / math.factorial(nu)
    total = term
    for k in range(1, 120):
        term = term * q / (k * (k + nu))
        total += term
        if k > x and abs(term) <= _LD_EPS * abs(total):
            break
    return float(total)


def _bessel_miller(x: float) -> Tuple[float, float]:
    '''J0 and J1 by backward recurrence normalised with J0 + 2*sum(J_2k) = 1'''
    m = 2 * ((int(x) + 40) // 2)
    jp1, j = 0.0, 1e-30
    norm = 2.0 * j
    j1 = 0.0
    for k in range(m, 0, -1):
        jp1, j = j, (2.0 * k / x) * j - jp1
        # j now holds J_{k-1}
        if k == 2:
            j1 = j
        elif (k - 1) % 2 == 0 and k > 1:
            norm += 2.0 * j
    norm += j
    return j / norm, j1 / norm


def _hankel_pq(nu: int, x: float) -> Tuple[float, float]:
    mu = 4.0 * nu * nu
    p, q = 1.0, 0.0
    a = 1.0
    previous = math.inf
    for k in range(1, 60):
        a *= (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        if abs(a) > previous or abs(a) < 1e-18:
            break
        previous = abs(a)
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2 == 0:
            p += sign * a
        else:
            q += sign * a
    return p, q


def _bessel_hankel(x: float) -> Tuple[float, float]:
    out = []
    for nu in (0, 1):
        p, q = _hankel_pq(nu, x)
        chi = x - (nu / 2.0 + 0.25) * math.pi
        out.append(math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(chi) - q * math.sin(chi)))
    return out[0], out[1]


def bessel_j(nu: int, x: float) -> float:
    '''Bessel function of the first kind J_nu(x) for nu in {0, 1, 2} and x >= 0'''
    if nu not in (0, 1, 2):
        raise DomainError(f"Bessel order {nu} not in (0, 1, 2)")
    check_finite(x)
    if x < 0:
        raise DomainError(f"Bessel argument {x} < 0")
    if x < BESSEL_SERIES_MAX:
        return _bessel_series(nu, x)
    j0, j1 = _bessel_miller(x) if x < BESSEL_MILLER_MAX else _bessel_hankel(x)
    return (j0, j1, 2.0 * j1 / x - j0)[nu]


def bessel_modulus(alpha: int, x: float) -> float:
    '''sqrt(J_alpha^2 + Y_alpha^2) from its large argument series, x of order one or larger'''
    if x <= 0:
        raise DomainError(f"Bessel modulus argument {x} <= 0")
    mu = 4.0 * alpha * alpha
    total, term = 1.0, 1.0
    for k in range(1, 12):
        nxt = term * (2 * k - 1) / (2 * k) * (mu - (2 * k - 1) ** 2) / (2.0 * x) ** 2
        if abs(nxt) > abs(term):
            break
        term = nxt
        total += term
    return math.sqrt(2.0 / (math.pi * x) * total)


@functools.cache
def first_zero(alpha: int) -> float:
    '''First positive zero of J_alpha, by bisection'''
    lo, hi = _ZERO_BRACKETS[alpha]
    flo = bessel_j(alpha, lo)
    while hi - lo > ACCURACY['first_zero'] / 4:
        mid = 0.5 * (lo + hi)
        fmid = bessel_j(alpha, mid)
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return 0.5 * (lo + hi)

# -------------
# Airy function
# -------------

def _airy_series(x: float) -> Tuple[float, float]:
    z = np.longdouble(x)
    z3 = z * z * z
    f = fk = np.longdouble(1)
    g = gk = z
    fp = fpk = z * z / 2
    gp = gpk = np.longdouble(1)
    for k in range(1, 200):
        fk = fk * z3 / ((3 * k - 1) * (3 * k))
        gk = gk * z3 / ((3 * k + 1) * (3 * k))
        if k > 1:
            fpk = fpk * z3 / ((3 * k - 3) * (3 * k - 1))
            fp += fpk
        gpk = gpk * z3 / ((3 * k) * (3 * k - 2))
        f += fk
        g += gk
        gp += gpk
        if k > 4 and abs(fk) + abs(gk) + abs(fpk) + abs(gpk) <= _LD_EPS * (abs(f) + abs(g) + 1):
            break
    c1, c2 = AI0, -AIP0
    return float(c1 * f - c2 * g), float(c1 * fp - c2 * gp)


def _airy_coefficients(count: int) -> Tuple[list, list]:
    u, v = [1.0], [1.0]
    for k in range(1, count):
        uk = u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / (216.0 * k * (2 * k - 1))
        u.append(uk)
        v.append(-uk * (6 * k + 1) / (6 * k - 1))
    return u, v


_U, _V = _airy_coefficients(40)


def _smallest_term_sum(coeffs, zeta: float, parity: int = -1) -> float:
    '''Alternating sum of coeffs[k]/zeta^k truncated at its smallest term.
    parity selects even (0) or odd (1) k only, with the alternation over the selected terms.'''
    total, previous = 0.0, math.inf
    ks = range(len(coeffs)) if parity < 0 else range(parity, len(coeffs), 2)
    for i, k in enumerate(ks):
        term = coeffs[k] / zeta ** k
        if abs(term) > previous:
            break
        previous = abs(term)
        total += -term if i % 2 else term
    return total


def _airy_asymptotic(x: float) -> Tuple[float, float]:
    if x > 0:
        zeta = 2.0 / 3.0 * x ** 1.5
        e = math.exp(-zeta) / (2.0 * math.sqrt(math.pi))
        q = x ** 0.25
        return e / q * _smallest_term_sum(_U, zeta), -e * q * _smallest_term_sum(_V, zeta)
    z = -x
    zeta = 2.0 / 3.0 * z ** 1.5
    q = z ** 0.25
    c, s = math.cos(zeta - math.pi / 4), math.sin(zeta - math.pi / 4)
    ai = (c * _smallest_term_sum(_U, zeta, 0) + s * _smallest_term_sum(_U, zeta, 1)) / (math.sqrt(math.pi) * q)
    aip = q * (s * _smallest_term_sum(_V, zeta, 0) - c * _smallest_term_sum(_V, zeta, 1)) / math.sqrt(math.pi)
    return ai, aip


def airy(x: float) -> Tuple[float, float]:
    '''Airy function Ai(x) and its derivative Ai'(x)'''
    check_finite(x)
    if AIRY_SERIES_MIN <= x <= AIRY_SERIES_MAX:
        return _airy_series(x)
    return _airy_asymptotic(x)

# -----------------------
# Orthogonal polynomials
# -----------------------

def laguerre_sweep(nmax: int, nu: int, x) -> Iterator[Tuple[int, np.ndarray, np.ndarray]]:
    '''
    Yields (k, mantissa, exponent) with L_k^{(nu)}(x) = mantissa * 2**exponent
    for k = 0 .. nmax, evaluated elementwise over the array x by the ascending
    three-term recurrence. Mantissas are kept below 2**RESCALE_BITS.
    '''
    x = np.asarray(x, dtype=float)
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    expo = np.zeros(x.shape, dtype=np.int64)
    yield 0, cur, expo
    for k in range(nmax):
        cur, prev = ((2 * k + 1 + nu - x) * cur - (k + nu) * prev) / (k + 1), cur
        big = np.abs(cur) > _RESCALE
        if np.any(big):
            cur = np.where(big, cur * _INV_RESCALE, cur)
            prev = np.where(big, prev * _INV_RESCALE, prev)
            expo = expo + RESCALE_BITS * big
            log.debug("Laguerre sweep rescaled at degree %d", k + 1)
        yield k + 1, cur, expo


def log_abs(mantissa: np.ndarray, exponent: np.ndarray) -> np.ndarray:
    with np.errstate(divide='ignore'):
        return np.log(np.abs(mantissa)) + exponent * LN2


def _laguerre_direct(n: int, nu: int, x: float) -> ScaledReal:
    for k, m, e in laguerre_sweep(n, nu, x):
        pass
    return ScaledReal.from_parts(float(m), int(e))


def laguerre(n: int, nu: int, x: float) -> ScaledReal:
    '''
    Generalised Laguerre polynomial L_n^{(nu)}(x). Negative nu is resolved
    through L_n^{(nu)}(x) = (-x)^{-nu} (m!/n!) L_m^{(-nu)}(x) with m = n + nu >= 0;
    L_0^{(nu)} = 1 for every nu.
    '''
    check_finite(x)
    if x < 0:
        raise DomainError(f"Laguerre argument {x} < 0")
    if n < 0:
        raise DomainError(f"Laguerre degree {n} < 0")
    if n == 0:
        return ScaledReal.from_float(1.0)
    if nu >= 0:
        return _laguerre_direct(n, nu, x)
    m = n + nu
    if m < 0:
        raise DomainError(f"L_{n}^({nu}) outside the symmetry identity (n + nu = {m} < 0)")
    if x == 0.0:
        return ScaledReal()
    inner = _laguerre_direct(m, -nu, x)
    factor = _from_log(-nu * math.log(x) + math.lgamma(m + 1) - math.lgamma(n + 1), -1 if nu % 2 else 1)
    return inner * factor


def laguerre_symmetry_defect(n: int, nu: int, x: float) -> float:
    '''Relative disagreement between the symmetry identity and the raw recurrence for nu < 0'''
    a = float(laguerre(n, nu, x))
    b = float(_laguerre_direct(n, nu, x))
    scale = max(abs(a), abs(b))
    defect = 0.0 if scale == 0.0 else abs(a - b) / scale
    if defect > 1e-10:
        log.warning("[n=%d] [nu=%d] [x=%g] Laguerre branch defect = %g", n, nu, x, defect)
    return defect


def hermite(n: int, x: float) -> ScaledReal:
    '''Physicists' Hermite polynomial H_n(x)'''
    check_finite(x)
    if n < 0:
        raise DomainError(f"Hermite degree {n} < 0")
    prev, cur, expo = 0.0, 1.0, 0
    for k in range(n):
        prev, cur = cur, 2.0 * x * cur - 2.0 * k * prev
        if abs(cur) > _RESCALE:
            prev, cur, expo = prev * _INV_RESCALE, cur * _INV_RESCALE, expo + RESCALE_BITS
    return ScaledReal.from_parts(cur, expo)

# ---------------
# Phase functions
# ---------------

def turning_integral(x: float) -> float:
    '''Absolute value of the integral of sqrt(|u-1|/u) between 1 and x'''
    check_finite(x)
    if x < 0:
        raise DomainError(f"turning integral argument {x} < 0")
    e = x - 1.0
    if abs(e) < ZETA_SERIES_BAND:
        p = sum(c * e ** i for i, c in enumerate(_TURNING_SERIES))
        return abs(e) ** 1.5 * p
    if x < 1.0:
        return math.atan2(math.sqrt(-e), math.sqrt(x)) - math.sqrt(x * -e)
    return math.sqrt(x * e) - math.asinh(math.sqrt(e))


def xi(x: float) -> float:
    check_finite(x)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"xi argument {x} outside [0, 1]")
    return 0.5 * (math.sqrt(x * (1.0 - x)) + math.atan2(math.sqrt(x), math.sqrt(1.0 - x)))


def zeta_ratio(x: float) -> float:
    '''zeta(x)/(x-1), positive and smooth through x = 1'''
    e = x - 1.0
    if abs(e) < ZETA_SERIES_BAND:
        p = sum(c * e ** i for i, c in enumerate(_TURNING_SERIES))
        return (0.75 * p) ** (2.0 / 3.0)
    return zeta(x) / e


def zeta(x: float) -> float:
    '''Airy turning-point variable, negative on [0, 1) and positive beyond'''
    check_finite(x)
    if x < 0:
        raise DomainError(f"zeta argument {x} < 0")
    e = x - 1.0
    if abs(e) < ZETA_SERIES_BAND:
        return e * zeta_ratio(x)
    return math.copysign((0.75 * turning_integral(x)) ** (2.0 / 3.0), e)


def varphi(x: float) -> float:
    check_finite(x)
    if x <= 0:
        raise DomainError(f"varphi argument {x} <= 0")
    if x < 1.0:
        return 2.0 * xi(x)
    return turning_integral(x)

# ---------
# Envelopes
# ---------

def envelopes(p: float, y: float) -> float:
    '''Airy envelope envAi_p(y)'''
    check_finite(p, y)
    if y >= 1.0:
        return y ** p * math.exp(-2.0 / 3.0 * y ** 1.5 + 2.0 / 3.0)
    if y >= -1.0:
        return 1.0
    return (-y) ** p


def env_j(alpha: int, x: float) -> float:
    '''Bessel envelope: J_alpha below its first zero, the modulus sqrt(J^2 + Y^2) beyond'''
    check_finite(x)
    if x < 0:
        raise DomainError(f"Bessel envelope argument {x} < 0")
    if x < first_zero(alpha):
        return bessel_j(alpha, x)
    return bessel_modulus(alpha, x)
