# ----------------------------------------------------------------------
# Copyright (c) 2024 Rafael Gonzalez.
#
# See the LICENSE file for details
# ----------------------------------------------------------------------

'''
Exact finite-N quantities of the elliptic Ginibre DSFF.

All evaluators of f_N, rho_N and Psi_N take the already scaled abscissa
x = |eta T|^2 / N and broadcast over numpy arrays.
'''

#--------------------
# System wide imports
# -------------------

import math
import cmath
import logging
import functools

from dataclasses import dataclass
from typing import Callable, Union

# -------------------
# Third party imports
# -------------------

import numpy as np
from numpy.polynomial import hermite as nphermite
from numpy.polynomial import legendre as nplegendre

#--------------
# local imports
# -------------

from . import Provenance, PsiMethod
from .error import DomainError, NumericIntegrityError
from .specfun import laguerre, laguerre_sweep, log_abs, turning_integral

# ----------------
# Module constants
# ----------------

RHO_FORMS_RTOL = 1e-9
PSI_METHODS_RTOL = 1e-7
DOUBLE_SUM_MAX_N = 256

TAIL_EPS = 1e-16
TAIL_MARGIN = 10.0  # extra nats below TAIL_EPS
TAIL_RTOL = 1e-12
TAIL_MAX_ROUNDS = 40

QUADRATURE_NODES = 200

ArrayLike = Union[float, np.ndarray]

# -----------------------
# Module global variables
# -----------------------

log = logging.getLogger(__name__.split('.')[-1])

# -------
# Classes
# -------

@dataclass(frozen=True)
class EnsembleParams:
    N: int
    tau: float

    def __post_init__(self):
        if isinstance(self.N, bool) or int(self.N) != self.N or self.N < 1:
            raise DomainError(f"matrix size N = {self.N} must be a positive integer")
        object.__setattr__(self, 'N', int(self.N))
        if not (math.isfinite(self.tau) and 0.0 <= self.tau < 1.0):
            raise DomainError(f"tau = {self.tau} outside [0, 1)")


@dataclass(frozen=True)
class ComplexTime:
    T: float
    theta: float

    def __post_init__(self):
        if not (math.isfinite(self.T) and self.T >= 0.0):
            raise DomainError(f"time magnitude T = {self.T} must be finite and >= 0")
        if not math.isfinite(self.theta):
            raise DomainError(f"time angle theta = {self.theta} must be finite")

    @classmethod
    def from_cartesian(cls, t: float, s: float) -> 'ComplexTime':
        return cls(math.hypot(t, s), math.atan2(s, t) % (2 * math.pi))

    @property
    def t(self) -> float:
        return self.T * math.cos(self.theta)

    @property
    def s(self) -> float:
        return self.T * math.sin(self.theta)


@dataclass(frozen=True)
class DsffValue:
    disconnected: ArrayLike
    connected: ArrayLike
    provenance: Provenance

    @property
    def total(self) -> ArrayLike:
        return self.disconnected + self.connected

# -------------------
# Auxiliary functions
# -------------------

def _abscissa(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)) or np.any(x < 0):
        raise DomainError("abscissa x must be finite and >= 0")
    return x


def _out(x_in, value: np.ndarray) -> ArrayLike:
    return float(value) if np.ndim(x_in) == 0 else value


def relative_disagreement(a, b) -> float:
    '''Worst elementwise |a - b| relative to the larger magnitude'''
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    scale = np.maximum(np.maximum(np.abs(a), np.abs(b)), 1e-300)
    return float(np.max(np.abs(a - b) / scale))


def _check_agreement(name: str, a: np.ndarray, b: np.ndarray, rtol: float) -> None:
    worst = relative_disagreement(a, b)
    if worst > rtol:
        raise NumericIntegrityError(f"[{name}] relative disagreement {worst:.3e} > {rtol:.1e}")
    log.debug("[%s] worst relative disagreement %.3e", name, worst)


def _last(n: int, nu: int, x: np.ndarray):
    '''Mantissa and exponent of L_n^{(nu)}(x); L_{-1} is identically zero'''
    if n < 0:
        return np.zeros_like(x), np.zeros(x.shape, dtype=np.int64)
    for k, m, e in laguerre_sweep(n, nu, x):
        pass
    return m, e


def weighted_square(n: int, nu: int, x) -> np.ndarray:
    '''e^{-x} [L_n^{(nu)}(x)]^2 without intermediate overflow'''
    x = np.asarray(x, dtype=float)
    m, e = _last(n, nu, x)
    return np.exp(2.0 * log_abs(m, e) - x)


def _weighted_product(n1: int, nu1: int, n2: int, nu2: int, x: np.ndarray) -> np.ndarray:
    '''e^{-x} L_{n1}^{(nu1)}(x) L_{n2}^{(nu2)}(x)'''
    m1, e1 = _last(n1, nu1, x)
    m2, e2 = _last(n2, nu2, x)
    return np.sign(m1) * np.sign(m2) * np.exp(log_abs(m1, e1) + log_abs(m2, e2) - x)

# ---------------
# Tail quadrature
# ---------------

@functools.cache
def _gauss_legendre(n: int):
    return nplegendre.leggauss(n)


def _log_envelope(N: int, u: float) -> float:
    sx = u / (4.0 * N)
    return -4.0 * N * turning_integral(sx) if sx > 1.0 else 0.0


def truncation_point(N: int, start: float) -> float:
    '''Abscissa where the exponential decay past the soft edge has fallen by TAIL_EPS'''
    base = max(start, 4.0 * N)
    target = _log_envelope(N, base) + math.log(TAIL_EPS) - TAIL_MARGIN
    step = max(1.0, N ** (1.0 / 3.0))
    lo, hi = base, base + step
    while _log_envelope(N, hi) > target:
        lo, hi = hi, base + 2.0 * (hi - base)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if _log_envelope(N, mid) > target:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-9 * hi:
            break
    return hi


def _initial_edges(N: int, start: float, upper: float) -> np.ndarray:
    edge = 4.0 * N
    if start < edge:
        inner = np.linspace(start, min(edge, upper), max(8, 2 * N) + 1)
        outer = np.linspace(edge, upper, 9)[1:] if upper > edge else np.empty(0)
        return np.concatenate([inner, outer])
    return np.linspace(start, upper, 17)


def tail_integral(func: Callable[[np.ndarray], np.ndarray], N: int, x: float, rtol: float = TAIL_RTOL) -> float:
    '''
    Integral of a non-negative func from x to infinity, truncated where the
    exponential envelope of the LUE soft edge drops below TAIL_EPS. Panels are
    refined until Gauss-Legendre rules of 16 and 32 nodes agree.
    '''
    upper = truncation_point(N, x)
    edges = _initial_edges(N, x, upper)
    a, b = edges[:-1], edges[1:]
    span = upper - x
    g_lo, w_lo = _gauss_legendre(16)
    g_hi, w_hi = _gauss_legendre(32)
    accepted = []
    for rounds in range(TAIL_MAX_ROUNDS):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        v_lo = func((mid[:, None] + half[:, None] * g_lo).ravel()).reshape(len(a), -1)
        v_hi = func((mid[:, None] + half[:, None] * g_hi).ravel()).reshape(len(a), -1)
        i_lo = half * (v_lo @ w_lo)
        i_hi = half * (v_hi @ w_hi)
        estimate = math.fsum(accepted) + float(np.sum(i_hi))
        budget = rtol * max(abs(estimate), 1e-300) * (b - a) / span
        ok = np.abs(i_hi - i_lo) <= budget
        accepted.extend(i_hi[ok].tolist())
        if np.all(ok):
            break
        a, b = a[~ok], b[~ok]
        m = 0.5 * (a + b)
        a, b = np.concatenate([a, m]), np.concatenate([m, b])
    else:
        log.warning("[N=%d] [x=%g] tail quadrature stopped with %d open panels", N, x, len(a))
        accepted.extend(i_hi[~ok].tolist())
    log.debug("[N=%d] [x=%g] tail quadrature to %g in %d rounds", N, x, upper, rounds + 1)
    return math.fsum(accepted)

# ----------------------
# Exact LUE-type kernels
# ----------------------

def f_exact(N: int, x) -> ArrayLike:
    '''f_N(x) = e^{-x} [L_{N-1}^{(1)}(x)]^2'''
    xa = _abscissa(x)
    return _out(x, weighted_square(N - 1, 1, xa))


def _rho_sum(N: int, x: np.ndarray) -> np.ndarray:
    total = np.zeros_like(x)
    for k, m, e in laguerre_sweep(N - 1, 0, x):
        total = total + np.exp(2.0 * log_abs(m, e) - x)
    return total


def rho_sum(N: int, x) -> ArrayLike:
    '''The defining sum of rho_N, unchecked'''
    return _out(x, _rho_sum(N, _abscissa(x)))


def rho_christoffel_darboux(N: int, x) -> ArrayLike:
    xa = _abscissa(x)
    cd = N * (_weighted_product(N - 1, 0, N - 1, 1, xa) - _weighted_product(N, 0, N - 2, 1, xa))
    return _out(x, cd)


def rho_exact(N: int, x) -> ArrayLike:
    '''LUE one-point function e^{-x} sum_{k<N} [L_k^{(0)}(x)]^2, checked against Christoffel-Darboux'''
    xa = _abscissa(x)
    total = _rho_sum(N, xa)
    _check_agreement(f"rho N={N}", total, np.asarray(rho_christoffel_darboux(N, xa)), RHO_FORMS_RTOL)
    return _out(x, total)


def _psi_weighted_sum(N: int, x: np.ndarray) -> np.ndarray:
    # L_k^{(-1)}(x) = -(x/k) L_{k-1}^{(1)}(x) for k >= 1
    total = N * np.exp(-x)
    with np.errstate(divide='ignore'):
        logx = np.log(x)
    for k, m, e in laguerre_sweep(N - 2, 1, x):
        degree = k + 1
        total = total + (N - degree) * np.exp(2.0 * (logx - math.log(degree) + log_abs(m, e)) - x)
    return total


def _psi_double_sum(N: int, x: np.ndarray) -> np.ndarray:
    if N > DOUBLE_SUM_MAX_N:
        raise DomainError(f"double sum representation limited to N <= {DOUBLE_SUM_MAX_N}, got {N}")
    with np.errstate(divide='ignore'):
        logx = np.log(x)
    total = np.zeros_like(x)
    for d in range(N):
        # diagonal j - k = d: x^d (k!/j!) [L_k^{(d)}(x)]^2, counted twice off the main diagonal
        weight = 1.0 if d == 0 else 2.0
        power = 0.0 if d == 0 else d * logx
        for k, m, e in laguerre_sweep(N - 1 - d, d, x):
            lograt = math.lgamma(k + 1) - math.lgamma(k + d + 1)
            total = total + weight * np.exp(power + lograt + 2.0 * log_abs(m, e) - x)
    return total


def _psi_integral(N: int, x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    integrand = functools.partial(weighted_square, N - 1, 0)
    for i, xi in enumerate(x.ravel()):
        out.flat[i] = N * tail_integral(integrand, N, float(xi))
    if N > 1:
        out = out - N * (N - 1) * (weighted_square(N - 1, 0, x) - _weighted_product(N - 2, 0, N, 0, x))
    return out


_PSI_TABLE = {
    PsiMethod.WEIGHTED_SUM: _psi_weighted_sum,
    PsiMethod.DOUBLE_SUM: _psi_double_sum,
    PsiMethod.INTEGRAL: _psi_integral,
}


def psi_form(N: int, x, method: PsiMethod) -> ArrayLike:
    '''Psi_N by a single representation, unchecked'''
    return _out(x, _PSI_TABLE[PsiMethod(method)](N, _abscissa(x)))


def psi_exact(N: int, x, method: PsiMethod = PsiMethod.WEIGHTED_SUM) -> ArrayLike:
    '''
    Psi_N(x) = integral of rho_N from x to infinity. The O(N) weighted sum is
    the reference; the other representations are checked against it.
    '''
    xa = _abscissa(x)
    value = _PSI_TABLE[PsiMethod(method)](N, xa)
    if method != PsiMethod.WEIGHTED_SUM:
        _check_agreement(f"psi N={N} {method}", value, _psi_weighted_sum(N, xa), PSI_METHODS_RTOL)
    return _out(x, value)

# ------------------
# F_jk and the DSFF
# ------------------

def eta(params: EnsembleParams, theta: float) -> complex:
    tau = params.tau
    return complex(math.cos(theta) * (1 + tau) / 2, math.sin(theta) * (1 - tau) / 2)


def f_jk(params: EnsembleParams, j: int, k: int, time: ComplexTime) -> complex:
    '''Closed form of the Fourier matrix element between orthonormal polynomials j and k'''
    N, tau = params.N, params.tau
    if not (0 <= j < N and 0 <= k < N):
        raise DomainError(f"indices (j={j}, k={k}) outside [0, {N - 1}]")
    h = eta(params, time.theta) * time.T
    x = abs(h) ** 2 / N
    lo, hi = min(j, k), max(j, k)
    d = hi - lo
    a = 1j * (h if j >= k else h.conjugate()) / math.sqrt(N)
    L = laguerre(lo, d, x)
    if L.sign == 0 or (d > 0 and a == 0):
        return 0j
    logmag = -(1 - tau ** 2) * time.T ** 2 / (8 * N) - x / 2
    logmag += 0.5 * (math.lgamma(lo + 1) - math.lgamma(hi + 1)) + L.log_abs()
    phase = 0.0 if L.sign > 0 else math.pi
    if d > 0:
        logmag += d * math.log(abs(a))
        phase += d * cmath.phase(a)
    return cmath.rect(math.exp(logmag), phase)


def _orthonormal_polynomials(N: int, tau: float, n: int, z: np.ndarray) -> np.ndarray:
    '''Orthonormal polynomials of the elliptic weight against dA = d^2z / pi'''
    prefactor = math.sqrt(N) / (1 - tau ** 2) ** 0.25 / math.sqrt(math.factorial(n))
    if tau == 0.0:
        return prefactor * N ** (n / 2) * z ** n
    coeffs = np.zeros(n + 1)
    coeffs[n] = 1.0
    return prefactor * (tau / 2) ** (n / 2) * nphermite.hermval(math.sqrt(N / (2 * tau)) * z, coeffs)


def f_jk_quadrature(params: EnsembleParams, j: int, k: int, time: ComplexTime,
                    nodes: int = QUADRATURE_NODES) -> complex:
    '''Tensor Gauss-Legendre evaluation of the defining integral of F_jk'''
    N, tau = params.N, params.tau
    rx = 1 + tau + 10 * math.sqrt((1 + tau) / N)
    ry = 1 - tau + 10 * math.sqrt((1 - tau) / N)
    g, w = _gauss_legendre(nodes)
    X, Y = rx * g, ry * g
    Z = X[:, None] + 1j * Y[None, :]
    omega = np.exp(-N * (X[:, None] ** 2 / (1 + tau) + Y[None, :] ** 2 / (1 - tau)))
    kernel = np.exp(1j * (time.t * X[:, None] + time.s * Y[None, :]))
    phi_j = _orthonormal_polynomials(N, tau, j, Z)
    phi_k = _orthonormal_polynomials(N, tau, k, Z)
    integrand = kernel * phi_j * np.conj(phi_k) * omega / math.pi
    return complex(rx * ry * (w @ integrand @ w))


def dsff_from_fjk(params: EnsembleParams, time: ComplexTime) -> DsffValue:
    '''Brute-force DSFF from the full F_jk matrix'''
    N = params.N
    F = np.array([[f_jk(params, j, k, time) for k in range(N)] for j in range(N)])
    disconnected = abs(np.trace(F)) ** 2
    connected = N - float(np.sum(np.abs(F) ** 2))
    return DsffValue(disconnected, connected, Provenance.EXACT)


def dsff_grid(params: EnsembleParams, T, theta: float) -> DsffValue:
    '''Exact disconnected and connected DSFF over an array of time magnitudes'''
    N, tau = params.N, params.tau
    T = np.asarray(T, dtype=float)
    if not np.all(np.isfinite(T)) or np.any(T < 0):
        raise DomainError("time magnitudes must be finite and >= 0")
    x = abs(eta(params, theta)) ** 2 * T ** 2 / N
    damping = np.exp(-(1 - tau ** 2) * T ** 2 / (4 * N))
    disconnected = damping * weighted_square(N - 1, 1, x)
    connected = N - damping * _psi_weighted_sum(N, x)
    return DsffValue(_out(T, disconnected), _out(T, connected), Provenance.EXACT)


def dsff_exact(params: EnsembleParams, time: ComplexTime) -> DsffValue:
    return dsff_grid(params, time.T, time.theta)
