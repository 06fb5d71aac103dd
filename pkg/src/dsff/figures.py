# ----------------------------------------------------------------------
# Copyright (c) 2024 Rafael Gonzalez.
#
# See the LICENSE file for details
# ----------------------------------------------------------------------

'''
Data series behind the three published figures: the strong regime DSFF
at N = 64 with its two analytic limits, the mesoscopic connected ramp at
N = 2^14 for three (alpha, kappa) pairs and the third-order remainders
of f_N in each of the four regions.
'''

#--------------------
# System wide imports
# -------------------

import math
import logging

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

# -------------------
# Third party imports
# -------------------

import numpy as np

#--------------
# local imports
# -------------

from . import Figure, Region
from .asymptotics import (
    RegimePartition, ScaledAbscissa, exponential_prefactor, exponential_rate, f_terms,
)
from .finite_n import EnsembleParams, dsff_grid, f_exact
from .limits import ScalingPoint, connected_power, dsff_scaled_grid, limit_connected, predict_dsff

# ----------------
# Module constants
# ----------------

POINTS_PER_DECADE = 60

FIG2_N = 64
FIG2_TAU = 0.3
FIG2_THETA = math.pi / 6
FIG2_RANGE = (0.1, 300.0)

FIG3_N = 2 ** 14
FIG3_THETA = math.pi / 6
FIG3_GAMMA = 0.6
FIG3_PAIRS = ((0.3, 1.0), (0.6, 0.7), (0.9, 0.4))
FIG3_RANGE = (0.01, 3.0)

FIG4_SIZES = (8, 16, 32)
FIG4_POINTS = 200

# -----------------------
# Module global variables
# -----------------------

log = logging.getLogger(__name__.split('.')[-1])

# -------
# Classes
# -------

@dataclass
class FigureTable:
    '''One CSV table and the plot description that draws it'''
    name: str
    title: str
    header: Tuple[str, ...]
    rows: List[Tuple[Any, ...]]
    axes: Dict[str, str]
    series: List[Dict[str, str]] = field(default_factory=list)
    parameters: Dict[str, Any] = field(default_factory=dict)

# -------------------
# Auxiliary functions
# -------------------

def log_grid(low: float, high: float, per_decade: int = POINTS_PER_DECADE) -> np.ndarray:
    '''Strictly increasing log-spaced grid including both ends'''
    count = max(2, int(round(math.log10(high / low) * per_decade)) + 1)
    return np.geomspace(low, high, count)


def _total(value) -> float:
    return float(value.disconnected + value.connected)

# -------
# Figures
# -------

def fig2(grid: Optional[Sequence[float]] = None) -> List[FigureTable]:
    N, tau, theta = FIG2_N, FIG2_TAU, FIG2_THETA
    T = np.asarray(grid if grid is not None else log_grid(*FIG2_RANGE), dtype=float)
    exact = dsff_grid(EnsembleParams(N, tau), T, theta)
    rows = []
    for i, t in enumerate(T):
        limits = [_total(predict_dsff(ScalingPoint.strong(tau, g, t / N ** g, theta), N)) for g in (0.0, 0.5)]
        rows.append((t, exact.disconnected[i], exact.connected[i], exact.total[i], *limits))
    log.info("[%s] %d points, N = %d, tau = %g", Figure.FIG2, len(rows), N, tau)
    return [FigureTable(
        name=Figure.FIG2.value,
        title=f"DSFF at N = {N}, tau = {tau}, theta = pi/6",
        header=('T', 'dsff_disc', 'dsff_conn', 'dsff_total', 'limit_gamma_0', 'limit_gamma_half'),
        rows=rows,
        axes={'xlabel': 'T', 'ylabel': 'DSFF', 'xscale': 'log', 'yscale': 'log'},
        series=[
            {'name': 'exact', 'label': 'exact N = 64', 'x': 'T', 'y': 'dsff_total'},
            {'name': 'gamma_0', 'label': 'gamma = 0 limit', 'x': 'T', 'y': 'limit_gamma_0'},
            {'name': 'gamma_half', 'label': 'gamma = 1/2 limit', 'x': 'T', 'y': 'limit_gamma_half'},
        ],
        parameters={'N': N, 'tau': tau, 'theta': theta},
    )]


def fig3(grid: Optional[Sequence[float]] = None, N: int = FIG3_N,
         pairs: Sequence[Tuple[float, float]] = FIG3_PAIRS) -> List[FigureTable]:
    gamma, theta = FIG3_GAMMA, FIG3_THETA
    Tbase = np.asarray(grid if grid is not None else log_grid(*FIG3_RANGE), dtype=float)
    header = ['T_base']
    series = []
    columns = []
    for alpha, kappa in pairs:
        point = ScalingPoint(alpha, kappa, gamma, 1.0, theta)
        scale = N ** connected_power(point)
        connected = np.asarray(dsff_scaled_grid(point, N, Tbase).connected) / scale
        profile = [limit_connected(ScalingPoint(alpha, kappa, gamma, float(t), theta), N) for t in Tbase]
        tag = f"a{alpha:g}"
        header += [f"conn_scaled_{tag}", f"limit_{tag}"]
        columns += [connected, np.asarray(profile)]
        series += [
            {'name': f"exact_{tag}", 'label': f"alpha = {alpha:g}, kappa = {kappa:g}",
             'x': 'T_base', 'y': f"conn_scaled_{tag}", 'style': 'points'},
            {'name': f"limit_{tag}", 'label': f"limit alpha = {alpha:g}", 'x': 'T_base', 'y': f"limit_{tag}"},
        ]
        log.info("[%s] [alpha=%g] [kappa=%g] connected part rescaled by N^%g",
            Figure.FIG3, alpha, kappa, connected_power(point))
    rows = [(t, *(column[i] for column in columns)) for i, t in enumerate(Tbase)]
    return [FigureTable(
        name=Figure.FIG3.value,
        title=f"Rescaled connected DSFF at N = {N}, gamma = {gamma}, theta = pi/6",
        header=tuple(header),
        rows=rows,
        axes={'xlabel': 'T_base', 'ylabel': 'N^-m F_c', 'xscale': 'log', 'yscale': 'log'},
        series=series,
        parameters={'N': N, 'gamma': gamma, 'theta': theta, 'pairs': [list(p) for p in pairs]},
    )]

# --------------------------
# Third-order f_N remainders
# --------------------------

def _bessel_rows(N: int, xs: np.ndarray) -> List[Tuple[Any, ...]]:
    exact = f_exact(N, xs)
    rows = []
    for x, f in zip(xs, exact):
        first, second, third = f_terms(N, float(x), Region.BESSEL)
        rows.append((N, 4 * N * x, N * N * (f - first - second), N * N * third))
    return rows


def _oscillatory_rows(N: int, xs: np.ndarray) -> List[Tuple[Any, ...]]:
    exact = f_exact(N, xs)
    m3 = (4 * N) ** 3
    rows = []
    for x, f in zip(xs, exact):
        first, second, smooth, wobble = f_terms(N, float(x), Region.OSCILLATORY)
        rows.append((N, x / (4 * N), m3 * (f - first - second - wobble), m3 * smooth))
    return rows


def _airy_rows(N: int, xs: np.ndarray) -> List[Tuple[Any, ...]]:
    exact = f_exact(N, xs)
    rows = []
    for x, f in zip(xs, exact):
        first, second, third = f_terms(N, float(x), Region.AIRY)
        rows.append((N, ScaledAbscissa(N, float(x)).y, N * N * (f - first - second), N * N * third))
    return rows


def _exponential_rows(N: int, xs: np.ndarray) -> List[Tuple[Any, ...]]:
    exact = f_exact(N, xs)
    rows = []
    for x, f in zip(xs, exact):
        s = x / (4 * N)
        rate = -math.log(N * f / exponential_prefactor(s)) / (4 * N)
        rows.append((N, s, rate, exponential_rate(s)))
    return rows


def _region_windows(N: int, partition: RegimePartition) -> Dict[Region, np.ndarray]:
    c, lower, upper = partition.bounds(N)
    inner = 1e-3 * c
    return {
        Region.BESSEL: np.linspace(inner, c, FIG4_POINTS),
        Region.OSCILLATORY: np.linspace(c, lower, FIG4_POINTS + 2)[1:-1],
        Region.AIRY: np.linspace(lower, upper, FIG4_POINTS + 2)[1:-1],
        Region.EXPONENTIAL: np.linspace(upper, 8 * N, FIG4_POINTS + 1)[1:],
    }


_FIG4_PANELS = {
    Region.BESSEL: (_bessel_rows, 'X', 'N^2 remainder', 'N^2 third term', 'linear'),
    Region.OSCILLATORY: (_oscillatory_rows, 'x/4N', '(4N)^3 remainder', '(4N)^3 smooth third term', 'linear'),
    Region.AIRY: (_airy_rows, 'y', 'N^2 remainder', 'N^2 third term', 'linear'),
    Region.EXPONENTIAL: (_exponential_rows, 'x/4N', '-log(N f / g) / 4N', 'h', 'linear'),
}


def fig4(sizes: Sequence[int] = FIG4_SIZES, partition: Optional[RegimePartition] = None) -> List[FigureTable]:
    partition = partition or RegimePartition()
    tables = []
    for region, (builder, xlabel, computed, predicted, scale) in _FIG4_PANELS.items():
        rows = []
        series = []
        for N in sizes:
            rows += builder(N, _region_windows(N, partition)[region])
        for N in sizes:
            series.append({'name': f"computed_N{N}", 'label': f"N = {N}", 'x': 'abscissa', 'y': 'computed',
                'style': 'points', 'where': f"N={N}"})
        series.append({'name': 'predicted', 'label': 'prediction', 'x': 'abscissa', 'y': 'predicted'})
        log.info("[%s] [%s] %d rows", Figure.FIG4, region, len(rows))
        tables.append(FigureTable(
            name=f"{Figure.FIG4.value}_{region.value.lower()}",
            title=f"f_N in the {region} region: {computed} against {predicted}",
            header=('N', 'abscissa', 'computed', 'predicted'),
            rows=rows,
            axes={'xlabel': xlabel, 'ylabel': computed, 'xscale': scale, 'yscale': scale},
            series=series,
            parameters={'sizes': list(sizes), 'c': partition.c, 'd': partition.d},
        ))
    return tables


FIGURES = {
    Figure.FIG2: fig2,
    Figure.FIG3: fig3,
    Figure.FIG4: fig4,
}


def build(figure: Figure, **kwargs) -> List[FigureTable]:
    return FIGURES[Figure(figure)](**kwargs)
