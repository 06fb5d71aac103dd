from argparse import Namespace

from dsff import EXIT_INTEGRITY, EXIT_OK
from dsff.error import DomainError
import dsff.qa
from dsff.qa import AsymChecker, Checker, FiniteChecker, LimitsChecker, SpecfunChecker, TABLE, qa


class Broken(Checker):
    name = 'broken'

    def assert_tolerance(self):
        self.compare("off by one", 2.0, 1.0, 0.5)
        self.compare("close", 1.0 + 1e-9, 1.0, 1e-6)

    def assert_raises(self):
        raise DomainError("boom")

    def helper(self):
        raise AssertionError("not a check")


def test_checker_counts_failures():
    checker = Broken()
    assert checker.check() == 2
    assert checker.checks == 3


def test_specfun_group_passes():
    checker = SpecfunChecker()
    assert checker.check() == 0
    assert checker.checks > 0


def test_limits_group_passes():
    assert LimitsChecker().check() == 0


def test_qa_exit_codes(monkeypatch):
    assert qa(Namespace(command='specfun')) == EXIT_OK
    monkeypatch.setitem(TABLE, 'specfun', Broken)
    assert qa(Namespace(command='specfun')) == EXIT_INTEGRITY


def test_form_comparisons_are_counted():
    checker = FiniteChecker()
    checker.assert_rho_forms()
    checker.assert_psi_methods()
    assert checker.checks == 4
    assert checker.failures == 0


def test_form_disagreement_is_reported(monkeypatch):
    exact = dsff.qa.rho_christoffel_darboux
    monkeypatch.setattr(dsff.qa, 'rho_christoffel_darboux', lambda N, x: 1.01 * exact(N, x))
    checker = FiniteChecker()
    checker.assert_rho_forms()
    assert checker.checks == 2
    assert checker.failures == 2


def test_expansion_orders():
    checker = AsymChecker()
    checker.assert_expansion_orders()
    assert checker.checks == 3
    assert checker.failures == 0
