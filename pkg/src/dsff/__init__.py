# ----------------------------------------------------------------------
# Copyright (c) 2024 Rafael Gonzalez.
#
# See the LICENSE file for details
# ----------------------------------------------------------------------

import enum

try:
    from ._version import __version__
except ImportError:  # source tree without setuptools_scm metadata
    __version__ = "0.0.0"

# ----------------
# Module constants
# ----------------


class Provenance(enum.Enum):
    EXACT = "exact"
    ASYMPTOTIC = "asymptotic"
    MONTE_CARLO = "monte_carlo"

    def __repr__(self):
        return self.value
    def __str__(self):
        return self.value


class PsiMethod(enum.Enum):
    DOUBLE_SUM = "double_sum"
    WEIGHTED_SUM = "weighted_sum"
    INTEGRAL = "integral"

    def __repr__(self):
        return self.value
    def __str__(self):
        return self.value


class Region(enum.Enum):
    BESSEL = "Bessel"
    OSCILLATORY = "Oscillatory"
    AIRY = "Airy"
    EXPONENTIAL = "Exponential"
    BOUNDARY = "Boundary"

    def __repr__(self):
        return self.value
    def __str__(self):
        return self.value


class Regime(enum.Enum):
    STRONG = "strong"
    MESOSCOPIC = "mesoscopic"
    WEAK_CRITICAL = "weak_critical"
    WEAK_SUB = "weak_sub"

    def __repr__(self):
        return self.value
    def __str__(self):
        return self.value


class Dominant(enum.Enum):
    DISCONNECTED = "disconnected"
    CONNECTED = "connected"
    CROSSOVER = "crossover"
    PLATEAU = "plateau"

    def __repr__(self):
        return self.value
    def __str__(self):
        return self.value


class Ramp(enum.Enum):
    QUADRATIC = "quadratic"
    LINEAR = "linear"
    MIXED = "mixed"
    NONE = "none"

    def __repr__(self):
        return self.value
    def __str__(self):
        return self.value


class Universality(enum.Enum):
    GINUE = "GinUE"
    GUE = "GUE"
    BOUNDARY = "boundary"

    def __repr__(self):
        return self.value
    def __str__(self):
        return self.value


class ErrorTable(enum.Enum):
    EPS1 = "eps1"
    EPS2 = "eps2"
    EPS3 = "eps3"
    EPS4 = "eps4"
    EPS5 = "eps5"
    EPS6 = "eps6"
    E1 = "e1"
    E2 = "e2"
    E3 = "e3"

    def __repr__(self):
        return self.value
    def __str__(self):
        return self.value


class Command(enum.Enum):
    EXACT = "exact"
    ASYM = "asym"
    MC = "mc"
    PHASE = "phase"
    FIGURE = "figure"

    def __repr__(self):
        return self.value
    def __str__(self):
        return self.value


class Figure(enum.Enum):
    FIG2 = "fig2"
    FIG3 = "fig3"
    FIG4 = "fig4"

    def __repr__(self):
        return self.value
    def __str__(self):
        return self.value


# Tolerance used to decide that a parameter sits on a case boundary
BOUNDARY_TOL = 1e-12

# Default regime partition constants
PARTITION_C = 1.0
PARTITION_D = 1.0

# Output formatting
SIGNIFICANT_DIGITS = 17
CSV_SCHEMA_VERSION = 1

# Process exit codes
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INTEGRITY = 2
EXIT_PARTIAL = 3
