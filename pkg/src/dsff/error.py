# ----------------------------------------------------------------------
# Copyright (c) 2024 Rafael Gonzalez.
#
# See the LICENSE file for details
# ----------------------------------------------------------------------

from typing import Sequence


class DsffError(Exception):
    '''Root of the package exceptions'''
    kind = "error"

    def __str__(self):
        s = self.__doc__
        if self.args:
            s = ' '.join([s, str(self.args[0])])
        return s


class DomainError(DsffError, ValueError):
    '''Argument outside the domain:'''
    kind = "domain"


class NumericIntegrityError(DsffError):
    '''Numeric integrity check failed:'''
    kind = "integrity"


class ConvergenceError(DsffError):
    '''Iteration did not converge:'''
    kind = "convergence"

    def __init__(self, message: str, eigenvalues_found: Sequence[complex] = (), sweeps: int = 0):
        super().__init__(message)
        self.eigenvalues_found = tuple(eigenvalues_found)
        self.sweeps = sweeps
