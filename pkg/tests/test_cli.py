import csv
import json
import math

import pytest

from dsff import EXIT_INTEGRITY, EXIT_OK, EXIT_USAGE
from dsff.error import NumericIntegrityError
from dsff.finite_n import ComplexTime, EnsembleParams, dsff_exact
from dsff.main import run
from dsff import zfile


def read_rows(path):
    with open(path, newline='') as f:
        return list(csv.DictReader(f))


def test_exact_sweep(tmp_path):
    out = tmp_path / "exact.csv"
    code = run(['exact', '--n', '16', '--tau', '0.3', '--theta', str(math.pi / 6),
                '--tmin', '0.1', '--tmax', '10', '--points', '5', '--out', str(out)])
    assert code == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == ("method,N,tau,alpha,kappa,gamma,theta,T_base,T,dsff_disc,dsff_conn,dsff_total,"
                        "stderr_disc,stderr_conn,error")
    rows = read_rows(out)
    assert len(rows) == 5
    for row in rows:
        assert row['method'] == 'exact'
        assert row['error'] == ''
        assert row['stderr_disc'] == ''
        value = dsff_exact(EnsembleParams(16, 0.3), ComplexTime(float(row['T']), math.pi / 6))
        assert float(row['dsff_disc']) == pytest.approx(value.disconnected, rel=1e-12)
        assert float(row['dsff_conn']) == pytest.approx(value.connected, rel=1e-12, abs=1e-12)
    manifest = json.loads((tmp_path / "exact.json").read_text())
    assert manifest['rows'] == 5
    assert manifest['failed_rows'] == 0
    assert manifest['command'] == 'exact'


def test_exact_sweep_scaled_time(tmp_path):
    out = tmp_path / "scaled.csv"
    code = run(['exact', '--n', '64', '--alpha', '0.5', '--kappa', '1', '--gamma', '0.3',
                '--tmin', '1', '--tmax', '2', '--points', '2', '--out', str(out)])
    assert code == EXIT_OK
    rows = read_rows(out)
    assert float(rows[0]['tau']) == pytest.approx(1 - 64 ** -0.5)
    assert float(rows[1]['T']) == pytest.approx(2 * 64 ** 0.3)


def test_exact_sweep_with_psi_cross_check(tmp_path):
    out = tmp_path / "cross.csv"
    code = run(['exact', '--n', '8', '--tau', '0.5', '--psi-method', 'integral',
                '--tmin', '0.5', '--tmax', '5', '--points', '3', '--out', str(out)])
    assert code == EXIT_OK
    assert len(read_rows(out)) == 3


def test_default_grid_density(tmp_path):
    out = tmp_path / "dense.csv"
    assert run(['asym', '--n', '64', '--tau', '0.3', '--tmin', '1', '--tmax', '10', '--out', str(out)]) == EXIT_OK
    assert len(read_rows(out)) == 61


def test_asym_sweep(tmp_path):
    out = tmp_path / "asym.csv"
    code = run(['asym', '--n', '256', '--tau', '0.3', '--gamma', '0.7',
                '--tmin', '1', '--tmax', '3', '--points', '3', '--out', str(out)])
    assert code == EXIT_OK
    for row in read_rows(out):
        assert row['method'] == 'asymptotic'
        assert float(row['dsff_total']) == pytest.approx(256.0)


def test_mc_sweep(tmp_path):
    out = tmp_path / "mc.csv"
    dump = tmp_path / "z.bin"
    code = run(['mc', '--n', '4', '--tau', '0.3', '--trials', '5', '--seed', '1', '--workers', '1',
                '--tmin', '0.5', '--tmax', '5', '--points', '3', '--zfile', str(dump), '--out', str(out)])
    assert code == EXIT_OK
    rows = read_rows(out)
    assert len(rows) == 3
    assert all(row['method'] == 'monte_carlo' and row['stderr_conn'] != '' for row in rows)
    record = zfile.read(dump)
    assert (record.N, record.trials, record.points) == (4, 5, 3)
    manifest = json.loads((tmp_path / "mc.json").read_text())
    assert manifest['seed'] == 1
    assert manifest['trials'] == 5


def test_phase_table(tmp_path):
    out = tmp_path / "phase.csv"
    code = run(['phase', '--alpha', '0', '0.6', '--gamma', '0.3', '0.55', '--out', str(out)])
    assert code == EXIT_OK
    rows = read_rows(out)
    assert len(rows) == 4
    first = rows[0]
    assert first['regime'] == 'strong'
    assert first['dominant'] == 'disconnected'
    assert float(first['exponent']) == pytest.approx(1.1)
    last = rows[-1]
    assert last['universality'] == 'GUE'
    assert last['ramp'] == 'linear'


def test_figure_tables(tmp_path):
    out = tmp_path / "fig2.csv"
    assert run(['figure', '--figure', 'fig2', '--out', str(out)]) == EXIT_OK
    assert out.exists()
    assert (tmp_path / "fig2.ini").exists()
    manifest = json.loads((tmp_path / "fig2.json").read_text())
    assert manifest['figure'] == 'fig2'
    assert manifest['tables'][0]['csv'] == 'fig2.csv'


def test_usage_errors(capsys):
    assert run(['exact', '--n', '16']) == EXIT_USAGE
    assert capsys.readouterr().err.startswith('error=usage message=')
    assert run(['bogus']) == EXIT_USAGE
    assert 'error=usage' in capsys.readouterr().err
    assert run(['exact', '--tau', '0.3']) == EXIT_USAGE
    assert run(['exact', '--n', '16', '--tau', '0.3', '--alpha', '1', '--kappa', '1']) == EXIT_USAGE
    assert run(['exact', '--n', '16', '--tau', '0.3', '--tmin', '5', '--tmax', '1']) == EXIT_USAGE


def test_domain_error_exit(tmp_path, capsys):
    out = tmp_path / "bad.csv"
    code = run(['exact', '--n', '16', '--tau', '1.5', '--points', '2', '--out', str(out)])
    assert code == EXIT_USAGE
    err = capsys.readouterr().err
    assert err.startswith('error=domain message=')
    assert '\n' not in err.rstrip('\n')


def test_all_rows_failing_is_an_error(tmp_path, capsys):
    out = tmp_path / "fail.csv"
    code = run(['exact', '--n', '300', '--tau', '0.3', '--psi-method', 'double_sum',
                '--points', '2', '--out', str(out)])
    # N = 300 is past the double sum size limit: a domain failure on every row
    assert code == EXIT_USAGE
    err = capsys.readouterr().err
    assert 'error=domain message=' in err
    assert 'all 2 grid points failed' in err
    rows = read_rows(out)
    assert len(rows) == 2
    assert all(row['error'].startswith('domain:') for row in rows)
    assert json.loads((tmp_path / "fail.json").read_text())['failed_rows'] == 2


def test_all_rows_failing_integrity(tmp_path, capsys, monkeypatch):
    def disagree(*args, **kwargs):
        raise NumericIntegrityError("representations disagree")
    monkeypatch.setattr('dsff.main.psi_exact', disagree)
    out = tmp_path / "integrity.csv"
    code = run(['exact', '--n', '16', '--tau', '0.3', '--psi-method', 'integral',
                '--points', '3', '--out', str(out)])
    assert code == EXIT_INTEGRITY
    err = capsys.readouterr().err
    assert 'error=integrity message=' in err
    assert 'all 3 grid points failed' in err
    rows = read_rows(out)
    assert len(rows) == 3
    assert all(row['error'].startswith('integrity:') for row in rows)
    assert json.loads((tmp_path / "integrity.json").read_text())['failed_rows'] == 3


def test_mc_workers_capped_by_environment(tmp_path, monkeypatch):
    monkeypatch.setenv('DSFF_THREADS', '1')
    out = tmp_path / "capped.csv"
    code = run(['mc', '--n', '4', '--tau', '0.3', '--trials', '4', '--seed', '1', '--workers', '16',
                '--tmin', '0.5', '--tmax', '5', '--points', '2', '--out', str(out)])
    assert code == EXIT_OK
    assert json.loads((tmp_path / "capped.json").read_text())['workers'] == 1
