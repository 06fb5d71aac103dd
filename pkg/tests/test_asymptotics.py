import math

import numpy as np
import pytest
import scipy.integrate

from dsff import Region
from dsff.error import DomainError
from dsff.specfun import laguerre, varphi
from dsff.finite_n import f_exact, psi_exact, rho_exact
from dsff.asymptotics import (
    ExpansionCoefficients, RegimePartition, ScaledAbscissa, classify_region, exponential_prefactor,
    exponential_rate, f_asym, f_dip_ramp, f_terms, laguerre_airy_asym, laguerre_bessel_asym,
    oscillatory_antiderivative, psi_asym, psi_dip_ramp, rho_asym,
)


def damped_laguerre(n, alpha, t):
    '''e^{-nu t/2} L_n^(alpha)(nu t) from the exact recurrence'''
    nu = 4 * n + 2 * alpha + 2
    value = laguerre(n, alpha, nu * t)
    return value.sign * math.exp(value.log_abs() - nu * t / 2)


def sup_normalised(n, alpha, window, approx):
    exact = [damped_laguerre(n, alpha, t) for t in window]
    scale = max(abs(v) for v in exact)
    return max(abs(e - approx(t)) for e, t in zip(exact, window)) / scale

# ---------------
# Regime partition
# ---------------

@pytest.mark.parametrize("x,region", [
    (0.5, Region.BESSEL),
    (385.0, Region.OSCILLATORY),
    (395.0, Region.AIRY),
    (400.0, Region.AIRY),
    (420.0, Region.EXPONENTIAL),
])
def test_classify_region(x, region):
    assert classify_region(100, x, RegimePartition(1.0, 1.0)) == region


@pytest.mark.parametrize("x", [1.0, 390.0, 410.0])
def test_classify_region_boundary(x):
    assert classify_region(100, x) == Region.BOUNDARY
    assert classify_region(100, x * (1 + 1e-10)) == Region.BOUNDARY


def test_partition_validation():
    with pytest.raises(DomainError):
        RegimePartition(0.0, 1.0)
    with pytest.raises(DomainError):
        RegimePartition(1.0, math.inf)
    with pytest.raises(DomainError):
        RegimePartition(5.0, 1.0).bounds(1)
    assert RegimePartition().bounds(100) == (1.0, 390.0, 410.0)


def test_partition_from_environment(monkeypatch):
    monkeypatch.setenv('DSFF_PARTITION_C', '2.5')
    monkeypatch.setenv('DSFF_PARTITION_D', '0.5')
    partition = RegimePartition.from_config()
    assert partition.c == 2.5
    assert partition.d == 0.5


def test_scaled_abscissa():
    point = ScaledAbscissa(16, 32.0)
    assert point.sx == 0.5
    assert point.SX == 16 * 4 * 32.0
    assert point.y == pytest.approx(32 ** (2 / 3) * -0.5)
    assert ScaledAbscissa(16, 64.0).y == 0.0


def test_negative_abscissa_rejected():
    with pytest.raises(DomainError):
        classify_region(10, -1.0)

# ---------------------
# Expansion coefficients
# ---------------------

def test_e1_small_argument_limit():
    coeffs = ExpansionCoefficients(1)
    t = 1e-3
    assert coeffs.e1(t) / t ** 1.5 == pytest.approx(-4 / 15, rel=1e-2)


def test_f_coefficients_continuous_across_bridge():
    coeffs = ExpansionCoefficients(1)
    for t in (0.9, 0.97, 1.0, 1.03, 1.1):
        assert math.isfinite(coeffs.f1(t))
        assert math.isfinite(coeffs.f2(t))
    inside, outside = coeffs.f1(1 - 0.0499), coeffs.f1(1 - 0.0501)
    assert inside == pytest.approx(outside, rel=1e-3, abs=1e-6)

# --------------------
# Laguerre expansions
# --------------------

def test_bessel_expansion_improves_with_order():
    n, alpha = 64, 1
    window = np.linspace(0.2, 0.4, 400)
    first = sup_normalised(n, alpha, window, lambda t: laguerre_bessel_asym(n, alpha, t, 1, damped=True))
    third = sup_normalised(n, alpha, window, lambda t: laguerre_bessel_asym(n, alpha, t, 3, damped=True))
    assert third < first / 20
    assert third < 1e-4


def test_bessel_expansion_second_order_rate():
    alpha = 1
    window = np.linspace(0.2, 0.4, 400)
    residual = {
        n: sup_normalised(n, alpha, window, lambda t: laguerre_bessel_asym(n, alpha, t, 2, damped=True))
        for n in (64, 128)
    }
    assert 2.8 <= residual[64] / residual[128] <= 5.2


def test_bessel_expansion_undamped():
    n, alpha, t = 32, 0, 0.3
    nu = 4 * n + 2 * alpha + 2
    damped = laguerre_bessel_asym(n, alpha, t, damped=True)
    assert laguerre_bessel_asym(n, alpha, t) == pytest.approx(damped * math.exp(nu * t / 2), rel=1e-12)


def test_bessel_expansion_domain():
    with pytest.raises(DomainError):
        laguerre_bessel_asym(10, 1, 0.99)
    with pytest.raises(DomainError):
        laguerre_bessel_asym(10, 1, 0.0)
    with pytest.raises(DomainError):
        laguerre_bessel_asym(10, 1, 0.3, order=4)


def test_airy_expansion_on_exponential_side():
    n, alpha, t = 64, 1, 1.4
    exact = damped_laguerre(n, alpha, t)
    approx = laguerre_airy_asym(n, alpha, t, damped=True)
    assert approx == pytest.approx(exact, rel=1e-3)


def test_airy_and_bessel_expansions_overlap():
    n, alpha = 64, 1
    window = np.linspace(0.68, 0.72, 60)
    scale = max(abs(damped_laguerre(n, alpha, t)) for t in window)
    for t in window:
        a = laguerre_airy_asym(n, alpha, t, damped=True)
        b = laguerre_bessel_asym(n, alpha, t, damped=True)
        assert abs(a - b) <= 1e-4 * scale


def test_airy_expansion_domain():
    with pytest.raises(DomainError):
        laguerre_airy_asym(10, 1, 0.01)

# ----------------
# Kernel expansions
# ----------------

def test_f_asym_at_origin():
    result = f_asym(50, 0.0)
    assert result.region == Region.BESSEL
    assert result.value == pytest.approx(2500.0)


def test_psi_asym_at_origin():
    assert psi_asym(50, 0.0).value == pytest.approx(50.0)


def test_rho_asym_bulk_leading_term():
    N = 100
    value = rho_asym(N, 2 * N).value
    assert value == pytest.approx(1 / (2 * math.pi), abs=1 / (4 * math.pi * N) + 1e-12)


def test_rho_asym_positive_in_bulk():
    N = 64
    for x in np.linspace(10.0, 4 * N - 20, 50):
        assert rho_asym(N, float(x)).value > 0


def test_boundary_returns_both_neighbours():
    N = 100
    result = f_asym(N, 390.0)
    assert result.region == Region.OSCILLATORY
    assert result.neighbour_region == Region.AIRY
    assert result.neighbour is not None


def test_f_terms_shapes():
    assert len(f_terms(64, 0.5, Region.BESSEL)) == 3
    assert len(f_terms(64, 100.0, Region.OSCILLATORY)) == 4
    assert len(f_terms(64, 256.0, Region.AIRY)) == 3
    with pytest.raises(DomainError):
        f_terms(64, 400.0, Region.EXPONENTIAL)


def test_f_asym_order_validation():
    with pytest.raises(DomainError):
        f_asym(64, 100.0, order=0)


def sup_residual_f(N, window, order):
    return max(abs(f_asym(N, float(x), order).value - f_exact(N, float(x))) for x in window)


def test_f_bessel_region_improves_with_order():
    N = 64
    window = np.linspace(0.05, 0.9, 40)
    assert sup_residual_f(N, window, 3) < sup_residual_f(N, window, 1) / 10


def test_f_oscillatory_region_improves_with_order():
    N = 64
    window = np.linspace(0.4, 0.6, 200) * 4 * N
    assert sup_residual_f(N, window, 3) < sup_residual_f(N, window, 1) / 10


def test_f_airy_region_improves_with_order():
    N = 64
    window = 4 * N + np.linspace(-0.9, 0.9, 80) * math.sqrt(N)
    assert sup_residual_f(N, window, 3) < sup_residual_f(N, window, 1) / 5


def test_f_exponential_region():
    N = 64
    x = 1.5 * 4 * N
    assert f_asym(N, x).value == pytest.approx(f_exact(N, x), rel=1e-1)


def test_exponential_rate_and_prefactor():
    assert exponential_rate(2.0) == pytest.approx(math.sqrt(2.0) - math.acosh(math.sqrt(2.0)))
    assert exponential_prefactor(2.0) == pytest.approx(1 / (32 * math.pi * 2 ** 1.5))
    with pytest.raises(DomainError):
        exponential_rate(0.5)
    with pytest.raises(DomainError):
        exponential_prefactor(1.0)


def test_rho_and_psi_track_exact_in_bulk():
    N = 128
    for sx in (0.25, 0.5, 0.75):
        x = sx * 4 * N
        assert rho_asym(N, x).value == pytest.approx(rho_exact(N, x), abs=1e-2)
        assert psi_asym(N, x).value == pytest.approx(psi_exact(N, x), abs=1.0)


def test_dip_ramp_forms():
    assert psi_dip_ramp(64, 0.0) == 64.0
    assert f_dip_ramp(64, 1.0) >= 0.0
    with pytest.raises(DomainError):
        f_dip_ramp(64, 0.0)
    with pytest.raises(DomainError):
        psi_dip_ramp(64, -1.0)

# ---------------------------
# Integration by parts sums
# ---------------------------

def test_antiderivative_oscillatory_side():
    lam, alpha, beta, a, b = 200.0, 1.5, 0.5, 0.2, 0.6
    p = np.polynomial.Polynomial([1.0, 2.0])

    def integrand(x, part):
        value = p(x) / (x ** alpha * (1 - x) ** beta) * np.exp(1j * lam * varphi(x))
        return value.real if part == 0 else value.imag
    re, _ = scipy.integrate.quad(integrand, a, b, args=(0,), limit=2000, epsabs=1e-13, epsrel=1e-12)
    im, _ = scipy.integrate.quad(integrand, a, b, args=(1,), limit=2000, epsabs=1e-13, epsrel=1e-12)
    ref = complex(re, im)
    value = oscillatory_antiderivative(p, alpha, beta, lam, b, 6) - oscillatory_antiderivative(p, alpha, beta, lam, a, 6)
    assert abs(value - ref) <= 1e-6 * abs(ref)


def test_antiderivative_exponential_side():
    lam, alpha, beta, a, b = -200.0, 1.5, 0.5, 1.5, 2.0
    coeffs = [1.0, -0.5, 0.25]
    p = np.polynomial.Polynomial(coeffs)
    ref, _ = scipy.integrate.quad(
        lambda x: p(x) / (x ** alpha * (x - 1) ** beta) * math.exp(lam * varphi(x)), a, b,
        epsabs=0.0, epsrel=1e-12, limit=200)
    value = (oscillatory_antiderivative(coeffs, alpha, beta, lam, b, 10)
             - oscillatory_antiderivative(coeffs, alpha, beta, lam, a, 10))
    assert isinstance(value, float)
    assert value == pytest.approx(ref, rel=1e-8)


def test_antiderivative_domain():
    with pytest.raises(DomainError):
        oscillatory_antiderivative([1.0], 1.0, 0.5, 10.0, 1.0)
    with pytest.raises(DomainError):
        oscillatory_antiderivative([1.0], 1.0, 0.5, 0.0, 0.5)
