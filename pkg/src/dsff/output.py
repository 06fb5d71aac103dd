# ----------------------------------------------------------------------
# Copyright (c) 2024 Rafael Gonzalez.
#
# See the LICENSE file for details
# ----------------------------------------------------------------------

'''
Flat file outputs: CSV tables, the JSON run manifest and the INI plot
description that accompanies every figure table.

Plot description format (configparser INI):

    [plot]
    title = ...
    xlabel = ...          ylabel = ...
    xscale = log|linear   yscale = log|linear
    loglog = yes|no
    csv = <table file name>

    [series:<name>]       one section per curve, in drawing order
    label = ...
    x = <CSV column>      y = <CSV column>
    style = line|points
    where = <column>=<value>   optional row filter
'''

#--------------------
# System wide imports
# -------------------

import csv
import enum
import json
import logging
import configparser

from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

# -------------------
# Third party imports
# -------------------

import numpy as np

#--------------
# local imports
# -------------

from . import CSV_SCHEMA_VERSION, SIGNIFICANT_DIGITS, __version__

# ----------------
# Module constants
# ----------------

SWEEP_HEADER = ('method', 'N', 'tau', 'alpha', 'kappa', 'gamma', 'theta', 'T_base', 'T',
    'dsff_disc', 'dsff_conn', 'dsff_total', 'stderr_disc', 'stderr_conn', 'error')

PHASE_HEADER = ('alpha', 'gamma', 'regime', 'dominant', 'exponent', 'ramp',
    'gamma_dip', 'gamma_H', 'universality')

# -----------------------
# Module global variables
# -----------------------

log = logging.getLogger(__name__.split('.')[-1])

# -------------------
# Auxiliary functions
# -------------------

def fmt(value: Any) -> str:
    '''Round-trip safe text for a CSV cell; None is a blank cell'''
    if value is None:
        return ''
    if isinstance(value, enum.Enum):
        return str(value.value)
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.{SIGNIFICANT_DIGITS}g}"
    return str(value)


def _plain(value: Any) -> Any:
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, Mapping):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    return value


def sidecar(path: Path, suffix: str) -> Path:
    return Path(path).with_suffix(suffix)

# ---------
# Functions
# ---------

def write_csv(path, header: Sequence[str], iterable: Iterable[Sequence[Any]], delimiter: str = ',') -> int:
    count = 0
    with open(path, 'w', newline='') as csvfile:
        writer = csv.writer(csvfile, delimiter=delimiter, lineterminator='\n')
        writer.writerow(header)
        for row in iterable:
            writer.writerow([fmt(cell) for cell in row])
            count += 1
    log.info("%d rows written to %s", count, path)
    return count


def write_manifest(path, manifest: Mapping[str, Any]) -> None:
    document = {'version': __version__, 'schema': CSV_SCHEMA_VERSION}
    document.update(_plain(manifest))
    Path(path).write_text(json.dumps(document, indent=2, sort_keys=True) + '\n', encoding='utf-8')
    log.debug("manifest written to %s", path)


def write_plot_description(path, csv_name: str, title: str, axes: Mapping[str, str],
                           series: Sequence[Mapping[str, str]]) -> None:
    parser = configparser.ConfigParser(interpolation=None)
    xscale, yscale = axes.get('xscale', 'log'), axes.get('yscale', 'log')
    parser['plot'] = {
        'title': title,
        'xlabel': axes.get('xlabel', ''),
        'ylabel': axes.get('ylabel', ''),
        'xscale': xscale,
        'yscale': yscale,
        'loglog': 'yes' if xscale == yscale == 'log' else 'no',
        'csv': csv_name,
    }
    for item in series:
        parser[f"series:{item['name']}"] = {
            'label': item.get('label', item['name']),
            'x': item['x'],
            'y': item['y'],
            'style': item.get('style', 'line'),
        }
        if 'where' in item:
            parser[f"series:{item['name']}"]['where'] = item['where']
    with open(path, 'w') as f:
        parser.write(f)
    log.debug("plot description written to %s", path)


def read_plot_description(path) -> configparser.ConfigParser:
    parser = configparser.ConfigParser(interpolation=None)
    parser.read(path)
    return parser
