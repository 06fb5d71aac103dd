# ----------------------------------------------------------------------
# Copyright (c) 2024 Rafael Gonzalez.
#
# See the LICENSE file for details
# ----------------------------------------------------------------------

#--------------------
# System wide imports
# -------------------

import sys
import math
import logging

# -------------------
# Third party imports
# -------------------

import numpy as np
import scipy.special
import scipy.integrate

from lica.textual.logging import configure_logging
from lica.textual.argparse import args_parser

#--------------
# local imports
# -------------

from . import __version__, PsiMethod, Region, Dominant, Universality, EXIT_OK, EXIT_INTEGRITY
from .error import DsffError
from .specfun import (
    ACCURACY, airy, bessel_j, envelopes, laguerre, laguerre_symmetry_defect, turning_integral, varphi,
)
from .finite_n import (
    PSI_METHODS_RTOL, RHO_FORMS_RTOL, ComplexTime, EnsembleParams, dsff_exact, dsff_from_fjk, f_exact, f_jk,
    f_jk_quadrature, psi_exact, psi_form, relative_disagreement, rho_christoffel_darboux, rho_sum,
)
from .asymptotics import classify_region, f_asym, f_terms, oscillatory_antiderivative
from .convergence import loglog_slope, observed_order, sup_residual
from .limits import ScalingPoint, dsff_scaled, phase_classify, predict_dsff, weak_plateau_profile

# ----------------
# Module constants
# ----------------

DESCRIPTION = "DSFF numerical self-consistency Quality Assurance tool"

# Relative tolerance of the third-order f_N expansion at N = 64, per region
F_ASYM_RTOL = {
    Region.BESSEL: 1e-4,
    Region.OSCILLATORY: 1e-3,
    Region.AIRY: 1e-2,
    Region.EXPONENTIAL: 1e-1,
}

# Decay order of the two-term f_N residual, checked to within EXPANSION_ORDER_TOL
EXPANSION_ORDERS = {
    Region.BESSEL: 2.0,
    Region.OSCILLATORY: 3.0,
    Region.AIRY: 2.0,
}
EXPANSION_ORDER_TOL = 0.5
EXPANSION_SIZES = (64, 128, 256)

# -----------------------
# Module global variables
# -----------------------

log = logging.getLogger(__name__.split('.')[-1])

# -----------------
# Auxiliary classes
# -----------------

class Checker:
    '''Base for the check groups; failures are logged and counted, never raised'''

    name = 'qa'

    def __init__(self):
        self.failures = 0
        self.checks = 0

    def compare(self, label: str, computed: float, expected: float, tol: float) -> bool:
        self.checks += 1
        if abs(computed - expected) <= tol:
            log.debug("[%s] [%s] ok. computed = %.17g, expected = %.17g", self.name, label, computed, expected)
            return True
        self.failures += 1
        log.error("[%s] [%s] computed = %.17g, expected = %.17g, tolerance = %g",
            self.name, label, computed, expected, tol)
        return False

    def expect(self, label: str, computed, expected) -> bool:
        self.checks += 1
        if computed == expected:
            return True
        self.failures += 1
        log.error("[%s] [%s] computed = %s, expected = %s", self.name, label, computed, expected)
        return False

    def guarded(self, label: str, func) -> None:
        try:
            func()
        except DsffError as e:
            self.checks += 1
            self.failures += 1
            log.error("[%s] [%s] %s", self.name, label, e)

    def check(self) -> int:
        for attr in sorted(dir(self)):
            if attr.startswith('assert_'):
                self.guarded(attr, getattr(self, attr))
        log.info("[%s] %d checks, %d failures", self.name, self.checks, self.failures)
        return self.failures


class SpecfunChecker(Checker):
    name = 'specfun'

    def assert_bessel(self):
        for nu in (0, 1, 2):
            for x in (0.5, 3.0, 11.9, 12.1, 24.9, 25.1, 40.0):
                ref = float(scipy.special.jv(nu, x))
                self.compare(f"J{nu}({x})", bessel_j(nu, x), ref, ACCURACY['bessel_j'] * max(1.0, abs(ref)))

    def assert_airy(self):
        for x in (-12.0, -8.5, -4.5, 0.0, 2.0, 6.0, 9.0):
            ai, aip, _, _ = scipy.special.airy(x)
            a, ap = airy(x)
            self.compare(f"Ai({x})", a, float(ai), ACCURACY['airy_seam'] * envelopes(-0.25, x))
            self.compare(f"Ai'({x})", ap, float(aip), ACCURACY['airy_seam'] * envelopes(0.25, x))

    def assert_laguerre(self):
        for n, nu, x in ((10, 0, 3.5), (50, 1, 20.0), (30, 2, 100.0)):
            ref = float(scipy.special.eval_genlaguerre(n, nu, x))
            self.compare(f"L_{n}^({nu})({x})", float(laguerre(n, nu, x)), ref, 1e-10 * abs(ref))

    def assert_laguerre_symmetry(self):
        self.compare("symmetry defect L_8^(-3)(2.5)", laguerre_symmetry_defect(8, -3, 2.5), 0.0, 1e-10)

    def assert_turning_integral(self):
        for x in (0.3, 0.9995, 1.0005, 1.5, 3.0):
            ref, _ = scipy.integrate.quad(lambda u: math.sqrt(abs(u - 1) / u), min(1.0, x), max(1.0, x),
                epsabs=1e-14, epsrel=1e-13)
            self.compare(f"turning integral({x})", turning_integral(x), ref, 1e-11)


class FiniteChecker(Checker):
    name = 'finite'

    def assert_rho_forms(self):
        for N in (8, 32):
            x = np.geomspace(1e-3, 8 * N, 40)
            worst = relative_disagreement(rho_sum(N, x), rho_christoffel_darboux(N, x))
            self.compare(f"rho_{N} sum vs Christoffel-Darboux", worst, 0.0, RHO_FORMS_RTOL)

    def assert_psi_methods(self):
        x = np.geomspace(1e-3, 8 * 16, 40)
        reference = psi_form(16, x, PsiMethod.WEIGHTED_SUM)
        for method in (PsiMethod.DOUBLE_SUM, PsiMethod.INTEGRAL):
            worst = relative_disagreement(psi_form(16, x, method), reference)
            self.compare(f"Psi_16 {method} vs weighted sum", worst, 0.0, PSI_METHODS_RTOL)

    def assert_psi_origin(self):
        for N in (1, 5, 40):
            self.compare(f"Psi_{N}(0)", psi_exact(N, 0.0), float(N), 1e-12 * N)

    def assert_fjk_quadrature(self):
        params = EnsembleParams(4, 0.3)
        time = ComplexTime(2.0, math.pi / 6)
        for j in range(4):
            for k in range(4):
                closed = f_jk(params, j, k, time)
                brute = f_jk_quadrature(params, j, k, time)
                self.compare(f"|F_{j}{k} - quadrature|", abs(closed - brute), 0.0, 1e-8)

    def assert_brute_force(self):
        params = EnsembleParams(6, 0.5)
        time = ComplexTime(3.0, 1.0)
        closed, brute = dsff_exact(params, time), dsff_from_fjk(params, time)
        self.compare("disconnected", brute.disconnected, closed.disconnected, 1e-10 * max(1.0, closed.disconnected))
        self.compare("connected", brute.connected, closed.connected, 1e-10 * max(1.0, closed.connected))


class AsymChecker(Checker):
    name = 'asym'

    def assert_f_regions(self):
        N = 64
        for x in (0.5, 40.0, 128.0, 4 * N, 1.5 * 4 * N):
            value = f_asym(N, x)
            exact = f_exact(N, x)
            region = classify_region(N, x)
            self.compare(f"f_{N}({x:g}) in {region}", value.value, exact, F_ASYM_RTOL[value.region] * exact)

    def assert_expansion_orders(self):
        windows = {
            Region.BESSEL: lambda N: np.linspace(0.5, 8.0, 60) / (4 * N),
            Region.OSCILLATORY: lambda N: 4 * N * np.linspace(0.3, 0.6, 2000),
            Region.AIRY: lambda N: 4 * N * (1 + np.linspace(-0.5, 0.5, 41) / (2 * N) ** (2 / 3)),
        }
        for region, expected in EXPANSION_ORDERS.items():
            def residual(N, region=region):
                return sup_residual(
                    lambda x: f_exact(N, x),
                    lambda x: math.fsum(f_terms(N, x, region)[:2]),
                    (float(x) for x in windows[region](N)))
            order = observed_order(EXPANSION_SIZES, residual)
            self.compare(f"two-term order in {region}", order, expected, EXPANSION_ORDER_TOL)

    def assert_antiderivative(self):
        lam, alpha, beta, a, b = 200.0, 1.5, 0.5, 0.2, 0.6
        p = np.polynomial.Polynomial([1.0, 2.0])

        def integrand(x, part):
            value = p(x) / (x ** alpha * (1 - x) ** beta) * np.exp(1j * lam * varphi(x))
            return value.real if part == 0 else value.imag
        re, _ = scipy.integrate.quad(integrand, a, b, args=(0,), limit=2000, epsabs=1e-13, epsrel=1e-12)
        im, _ = scipy.integrate.quad(integrand, a, b, args=(1,), limit=2000, epsabs=1e-13, epsrel=1e-12)
        sums = (oscillatory_antiderivative(p, alpha, beta, lam, b, 6)
                - oscillatory_antiderivative(p, alpha, beta, lam, a, 6))
        self.compare("integration by parts", abs(sums - complex(re, im)), 0.0, 1e-6 * abs(complex(re, im)))


class LimitsChecker(Checker):
    name = 'limits'

    def assert_phase_table(self):
        report = phase_classify(0.0, 0.3)
        self.expect("dominant(0, 0.3)", report.dominant, Dominant.DISCONNECTED)
        self.compare("exponent(0, 0.3)", report.exponent, 1.1, 1e-12)
        self.compare("gamma_dip(0)", report.gamma_dip, 0.4, 1e-15)
        self.compare("gamma_H(0)", report.gamma_heisenberg, 0.5, 1e-15)
        self.expect("universality(0.6, 0.55)", phase_classify(0.6, 0.55).universality, Universality.GUE)

    def assert_weak_profile(self):
        self.compare("weak profile at 2", weak_plateau_profile(2.0), 1.0, 1e-15)
        self.compare("weak profile below 2", weak_plateau_profile(2.0 - 1e-12), 1.0, 1e-5)

    def assert_connected_ramp(self):
        N = 1024
        point = ScalingPoint.strong(0.3, 0.45, 1.0, 0.0)
        exact = dsff_scaled(point, N).connected
        predicted = predict_dsff(point, N).connected
        self.compare("strong ramp connected ratio", exact / predicted, 1.0, 0.25)

    def assert_linear_ramp_slope(self):
        point = ScalingPoint(1.5, 1.0, 0.75, 1.0, 0.0)
        sizes = [2 ** k for k in range(8, 12)]
        slope = loglog_slope(sizes, [dsff_scaled(point, N).connected for N in sizes])
        self.compare("weak linear ramp slope", slope, phase_classify(1.5, 0.75).exponent, 0.1)


TABLE = {
    'specfun': SpecfunChecker,
    'finite': FiniteChecker,
    'asym': AsymChecker,
    'limits': LimitsChecker,
}

# --------------
# main functions
# --------------

def qa(args) -> int:
    names = list(TABLE) if args.command == 'all' else [args.command]
    failures = sum(TABLE[name]().check() for name in names)
    if failures:
        log.error("%d checks failed", failures)
        return EXIT_INTEGRITY
    log.info("all checks passed")
    return EXIT_OK


def add_args(parser):

    subparser = parser.add_subparsers(dest='command', required=True)

    subparser.add_parser('specfun', help='Check special functions against scipy')
    subparser.add_parser('finite', help='Check the exact finite-N representations against each other')
    subparser.add_parser('asym', help='Check the large-N expansions against the exact kernels')
    subparser.add_parser('limits', help='Check the limit profiles and the phase classifier')
    subparser.add_parser('all', help='Run every check group')


def main():
    '''The main entry point specified by pyproject.toml'''
    parser = args_parser(
        name = __name__,
        version = __version__,
        description = DESCRIPTION
    )
    add_args(parser)
    args = parser.parse_args(sys.argv[1:])
    configure_logging(args)
    try:
        sys.exit(qa(args))
    except KeyboardInterrupt:
        log.warning("QA quits by user request")


if __name__ == '__main__':
    main()
