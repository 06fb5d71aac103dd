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
import argparse
import itertools

from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

# -------------------
# Third party imports
# -------------------

import numpy as np

from lica.textual.argparse import args_parser
from lica.textual.logging import configure_logging

#--------------
# local imports
# -------------

from . import (
    __version__, Command, Figure, Provenance, PsiMethod,
    EXIT_OK, EXIT_USAGE, EXIT_INTEGRITY, EXIT_PARTIAL,
)
from .error import DsffError, DomainError
from .finite_n import ComplexTime, DsffValue, dsff_exact, eta, psi_exact
from .limits import ScalingPoint, phase_classify, predict_dsff
from .montecarlo import SamplerConfig, collect, summarize, worker_count
from .figures import POINTS_PER_DECADE, build, log_grid
from .output import PHASE_HEADER, SWEEP_HEADER, sidecar, write_csv, write_manifest, write_plot_description
from . import zfile

# ----------------
# Module constants
# ----------------

DESCRIPTION = "Dissipative spectral form factor of the elliptic Ginibre ensemble"

# -----------------------
# Module global variables
# -----------------------

log = logging.getLogger(__name__.split('.')[-1])

# -----------------
# Auxiliary classes
# -----------------

class UsageError(DomainError):
    '''Invalid command line:'''
    kind = "usage"


class _Parser(argparse.ArgumentParser):
    '''Raises instead of printing a usage block and exiting'''

    def error(self, message):
        raise UsageError(message)

# -------------------
# Auxiliary functions
# -------------------

def _emit_error(exc: BaseException, kind: str) -> None:
    text = ' '.join(str(exc).split())
    print(f"error={kind} message={text}", file=sys.stderr)


def _grid(args) -> np.ndarray:
    if not (math.isfinite(args.tmin) and math.isfinite(args.tmax) and 0 < args.tmin < args.tmax):
        raise UsageError(f"time grid needs 0 < tmin < tmax, got [{args.tmin}, {args.tmax}]")
    if args.points is None:
        return log_grid(args.tmin, args.tmax, POINTS_PER_DECADE)
    if args.points < 2:
        raise UsageError(f"--points {args.points} < 2")
    return np.geomspace(args.tmin, args.tmax, args.points)


def _point(args, tbase: float = 1.0) -> ScalingPoint:
    if args.tau is not None:
        if args.alpha is not None or args.kappa is not None:
            raise UsageError("--tau excludes --alpha/--kappa")
        return ScalingPoint.strong(args.tau, args.gamma, tbase, args.theta)
    if args.alpha is None or args.kappa is None:
        raise UsageError("either --tau or both --alpha and --kappa are required")
    return ScalingPoint(args.alpha, args.kappa, args.gamma, tbase, args.theta)


def _row(method: Provenance, N: int, point: ScalingPoint, T: float, value=None,
         stderr=(None, None), error: Optional[str] = None) -> tuple:
    try:
        tau = point.tau(N)
    except DomainError:
        tau = None
    head = (method, N, tau, point.alpha, point.kappa, point.gamma, point.theta, point.Tbase, T)
    if value is None:
        return head + (None, None, None, None, None, error)
    return head + (value.disconnected, value.connected, value.disconnected + value.connected,
                   stderr[0], stderr[1], error)


def _manifest(args, grid: Optional[np.ndarray] = None, **extra) -> Dict[str, Any]:
    manifest = {
        'command': args.command,
        'argv': {k: v for k, v in vars(args).items()
                 if k in ('n', 'tau', 'alpha', 'kappa', 'gamma', 'theta', 'tmin', 'tmax', 'points',
                          'trials', 'seed', 'workers', 'psi_method', 'figure', 'out')},
    }
    if grid is not None:
        manifest['grid'] = {'T_base': grid, 'count': len(grid)}
    manifest.update(extra)
    return manifest


def _finish(args, header, rows: List[tuple], manifest: Dict[str, Any]) -> int:
    failures = sum(1 for row in rows if row[-1])
    out = Path(args.out)
    write_csv(out, header, rows)
    manifest['rows'] = len(rows)
    manifest['failed_rows'] = failures
    write_manifest(sidecar(out, '.json'), manifest)
    if failures == 0:
        return EXIT_OK
    log.warning("%d of %d rows failed", failures, len(rows))
    return EXIT_PARTIAL

# --------------
# main functions
# --------------

def _sweep(args, method: Provenance, evaluate) -> int:
    grid = _grid(args)
    N = args.n
    _point(args).params(N)
    rows = []
    first = None
    for tbase in grid:
        point = _point(args, float(tbase))
        T = N ** point.gamma * tbase
        try:
            rows.append(evaluate(point, T))
        except DsffError as e:
            log.error("[N=%d] [T_base=%g] %s", N, tbase, e)
            first = first or e
            rows.append(_row(method, N, point, T, error=f"{e.kind}: {' '.join(str(e).split())}"))
    code = _finish(args, SWEEP_HEADER, rows, _manifest(args, grid))
    if first is not None and all(row[-1] for row in rows):
        # the first row error class sets the exit code
        raise type(first)(f"all {len(rows)} grid points failed, first: {rows[0][-1]}")
    return code


def cli_exact(args) -> int:
    log.info("[N=%d] exact DSFF sweep", args.n)

    def evaluate(point: ScalingPoint, T: float) -> tuple:
        params = point.params(args.n)
        time = ComplexTime(T, point.theta)
        value = dsff_exact(params, time)
        if args.psi_method != PsiMethod.WEIGHTED_SUM:
            # cross-checks the chosen representation, raising on disagreement
            psi_exact(params.N, abs(eta(params, time.theta) * T) ** 2 / params.N, args.psi_method)
        return _row(Provenance.EXACT, args.n, point, T, value)
    return _sweep(args, Provenance.EXACT, evaluate)


def cli_asym(args) -> int:
    log.info("[N=%d] asymptotic DSFF sweep", args.n)

    def evaluate(point: ScalingPoint, T: float) -> tuple:
        return _row(Provenance.ASYMPTOTIC, args.n, point, T, predict_dsff(point, args.n))
    return _sweep(args, Provenance.ASYMPTOTIC, evaluate)


def cli_mc(args) -> int:
    grid = _grid(args)
    N = args.n
    point = _point(args)
    config = SamplerConfig(N, point.tau(N), args.trials, args.seed)
    T = N ** point.gamma * grid
    log.info("[N=%d] [tau=%g] Monte Carlo sweep, %d trials, seed %d", N, config.tau, config.trials, config.seed)
    accumulator = collect(config, T, point.theta, args.workers)
    if args.zfile:
        zfile.write(args.zfile, N, accumulator.trials())
    estimate = summarize(accumulator, T)
    rows = []
    for i, tbase in enumerate(grid):
        p = _point(args, float(tbase))
        value = DsffValue(estimate.disconnected[i], estimate.connected[i], Provenance.MONTE_CARLO)
        rows.append(_row(Provenance.MONTE_CARLO, N, p, T[i], value,
                         (estimate.stderr_disc[i], estimate.stderr_conn[i])))
    return _finish(args, SWEEP_HEADER, rows, _manifest(args, grid, seed=config.seed, trials=config.trials,
                   workers=args.workers, zfile=args.zfile))


def cli_phase(args) -> int:
    rows = []
    for alpha, gamma in itertools.product(args.alpha, args.gamma):
        report = phase_classify(alpha, gamma)
        rows.append((alpha, gamma, report.regime, report.dominant, report.exponent, report.ramp,
                     report.gamma_dip, report.gamma_heisenberg, report.universality, None))
    header = PHASE_HEADER + ('error',)
    return _finish(args, header, rows, _manifest(args, alpha=args.alpha, gamma=args.gamma))


def cli_figure(args) -> int:
    figure = Figure(args.figure)
    tables = build(figure)
    out = Path(args.out)
    written = []
    for table in tables:
        path = out if len(tables) == 1 else out.with_name(f"{out.stem}_{table.name}{out.suffix or '.csv'}")
        write_csv(path, table.header, table.rows)
        write_plot_description(sidecar(path, '.ini'), path.name, table.title, table.axes, table.series)
        written.append({'table': table.name, 'csv': path.name, 'rows': len(table.rows),
                        'parameters': table.parameters})
    write_manifest(sidecar(out, '.json'), _manifest(args, figure=figure, tables=written))
    return EXIT_OK


TABLE = {
    Command.EXACT: cli_exact,
    Command.ASYM: cli_asym,
    Command.MC: cli_mc,
    Command.PHASE: cli_phase,
    Command.FIGURE: cli_figure,
}


def _ensemble_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--n', type=int, required=True, help='Matrix size N')
    parser.add_argument('--tau', type=float, default=None, help='Fixed non-Hermiticity tau in [0, 1)')
    parser.add_argument('--alpha', type=float, default=None, help='Exponent in tau = 1 - kappa N^-alpha')
    parser.add_argument('--kappa', type=float, default=None, help='Prefactor in tau = 1 - kappa N^-alpha')
    parser.add_argument('--gamma', type=float, default=0.0, help='Time exponent in T = N^gamma T_base')
    parser.add_argument('--theta', type=float, default=0.0, help='Complex time angle')
    parser.add_argument('--tmin', type=float, default=0.1, help='Smallest base time')
    parser.add_argument('--tmax', type=float, default=100.0, help='Largest base time')
    parser.add_argument('--points', type=int, default=None,
        help=f'Grid points (default {POINTS_PER_DECADE} per decade)')
    parser.add_argument('--out', type=str, default='dsff.csv', help='Output CSV file')


def add_args(parser: argparse.ArgumentParser) -> None:
    subparser = parser.add_subparsers(dest='command', required=True, parser_class=_Parser)

    parser_exact = subparser.add_parser('exact', help='Exact finite-N DSFF over a time grid')
    parser_asym = subparser.add_parser('asym', help='Large-N limit profiles over a time grid')
    parser_mc = subparser.add_parser('mc', help='Monte Carlo DSFF estimate over a time grid')
    parser_phase = subparser.add_parser('phase', help='Classify (alpha, gamma) phase diagram points')
    parser_figure = subparser.add_parser('figure', help='Emit the data series of a figure')

    for p in (parser_exact, parser_asym, parser_mc):
        _ensemble_args(p)
    parser_exact.add_argument('--psi-method', type=PsiMethod, default=PsiMethod.WEIGHTED_SUM,
        choices=list(PsiMethod), help='Representation of Psi_N cross-checked at every point')
    parser_mc.add_argument('--trials', type=int, default=1000, help='Number of sampled matrices')
    parser_mc.add_argument('--seed', type=int, default=None, help='Sampler seed (default DSFF_SEED)')
    parser_mc.add_argument('--workers', type=int, default=None, help='Worker processes, capped by DSFF_THREADS')
    parser_mc.add_argument('--zfile', type=str, default=None, help='Optional binary dump of per-trial Z_N')
    parser_phase.add_argument('--alpha', type=float, nargs='+', required=True, help='alpha values')
    parser_phase.add_argument('--gamma', type=float, nargs='+', required=True, help='gamma values')
    parser_phase.add_argument('--out', type=str, default='phase.csv', help='Output CSV file')
    parser_figure.add_argument('--figure', type=Figure, choices=list(Figure), required=True, help='Figure id')
    parser_figure.add_argument('--out', type=str, default='figure.csv', help='Output CSV file')


def _resolve(args) -> None:
    args.command = Command(args.command)
    if getattr(args, 'seed', None) is None and args.command == Command.MC:
        args.seed = SamplerConfig(1, 0.0, 1).seed
    if args.command == Command.MC:
        args.workers = worker_count(args.workers)


def run(argv: Sequence[str]) -> int:
    parser = args_parser(
        name = __name__,
        version = __version__,
        description = DESCRIPTION
    )
    parser.error = _Parser.error.__get__(parser)
    add_args(parser)
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        _emit_error(e, e.kind)
        return EXIT_USAGE
    configure_logging(args)
    try:
        _resolve(args)
        return TABLE[args.command](args)
    except DomainError as e:
        _emit_error(e, e.kind)
        return EXIT_USAGE
    except DsffError as e:
        _emit_error(e, e.kind)
        return EXIT_INTEGRITY
    except KeyboardInterrupt:
        log.warning("Application quits by user request")
        return EXIT_PARTIAL


def main():
    '''The main entry point specified by pyproject.toml'''
    sys.exit(run(sys.argv[1:]))


if __name__ == '__main__':
    main()
