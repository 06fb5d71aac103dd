import math

import numpy as np
import pytest
import scipy.linalg

from dsff import montecarlo
from dsff.error import DomainError, NumericIntegrityError
from dsff.finite_n import ComplexTime
from dsff.accumulator import MomentAccumulator, TrialAccumulator
from dsff.montecarlo import (
    DsffEstimate, SamplerConfig, collect, estimate_dsff, estimate_grid, sample_eginue, second_moment,
    simulate, spectrum, summarize, worker_count,
)
from dsff import zfile

# --------------
# Sampler config
# --------------

def test_config_validation():
    with pytest.raises(DomainError):
        SamplerConfig(8, 0.3, 0, seed=1)
    with pytest.raises(DomainError):
        SamplerConfig(8, 0.3, 10, seed=-1)
    with pytest.raises(DomainError):
        SamplerConfig(8, 1.0, 10, seed=1)
    with pytest.raises(DomainError):
        SamplerConfig(0, 0.3, 10, seed=1)


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv('DSFF_SEED', '4242')
    assert SamplerConfig(4, 0.2, 3).seed == 4242

# --------
# Sampling
# --------

def test_draws_are_reproducible():
    config = SamplerConfig(6, 0.4, 5, seed=11)
    a = sample_eginue(config, 3)
    b = sample_eginue(SamplerConfig(6, 0.4, 5, seed=11), 3)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, sample_eginue(config, 2))
    other_stream = SamplerConfig(6, 0.4, 5, seed=11, stream_id=1)
    assert not np.array_equal(a, sample_eginue(other_stream, 3))


def test_zero_tau_is_ginibre():
    config = SamplerConfig(5, 0.0, 2, seed=3)
    u = config.generator(1).random((2, 5, 5))
    G = np.sqrt(-np.log1p(-u[0]) / 5) * np.exp(2j * np.pi * u[1])
    assert np.allclose(sample_eginue(config, 1), G, rtol=0, atol=1e-15)


def test_trial_index_range():
    config = SamplerConfig(4, 0.3, 2, seed=0)
    with pytest.raises(DomainError):
        sample_eginue(config, 2)
    with pytest.raises(DomainError):
        sample_eginue(config, -1)


def test_entry_variance():
    config = SamplerConfig(32, 0.5, 50, seed=5)
    norms = MomentAccumulator(
        float(np.linalg.norm(sample_eginue(config, trial)) ** 2) / 32 for trial in range(config.trials))
    mean, stderr = norms.statistics()
    assert abs(mean - 1.0) <= 4 * stderr


def test_hermitian_limit():
    config = SamplerConfig(64, 1 - 1e-12, 3, seed=9)
    for trial in range(3):
        z = spectrum(sample_eginue(config, trial)).eigenvalues
        assert np.max(np.abs(z.imag)) <= 1e-5

# --------
# Spectrum
# --------

def test_diagonal_spectrum():
    result = spectrum(np.diag([1.0, 2.0, 3.0]))
    assert np.allclose(np.sort(result.eigenvalues.real), [1.0, 2.0, 3.0])
    assert np.allclose(result.eigenvalues.imag, 0.0)


def test_complex_diagonal_spectrum():
    z = spectrum(np.diag([1.0, 2j, -3.0])).eigenvalues
    assert sorted(z.tolist(), key=lambda w: (w.real, w.imag)) == [-3.0, 1.0, 2j]


def test_rotation_spectrum():
    result = spectrum(np.array([[0.0, 1.0], [-1.0, 0.0]]))
    assert np.allclose(sorted(result.eigenvalues.imag), [-1.0, 1.0])
    assert np.allclose(result.eigenvalues.real, 0.0, atol=1e-15)


def test_spectrum_sum_rules_on_random_draw():
    config = SamplerConfig(64, 0.3, 1, seed=1)
    X = sample_eginue(config, 0)
    result = spectrum(X)
    assert result.eigenvalues.shape == (64,)
    assert result.trace_defect <= 1e-10 * 64 * np.linalg.norm(X)


def test_second_moment_defect_bound(monkeypatch):
    # trace preserved, sum of squares off by 2e-5, above 1e-8 N |X|_F
    delta = 1e-6
    monkeypatch.setattr(scipy.linalg, 'eigvals',
        lambda X, check_finite=True: np.array([10 + delta, 20 - delta, 30], dtype=complex))
    with pytest.raises(NumericIntegrityError):
        spectrum(np.diag([10.0, 20.0, 30.0]))


def test_spectrum_rejects_bad_input():
    with pytest.raises(DomainError):
        spectrum(np.zeros((2, 3)))
    with pytest.raises(DomainError):
        spectrum(np.array([[1.0, np.nan], [0.0, 1.0]]))

# -----------
# Accumulator
# -----------

def test_trial_accumulator_statistics():
    acc = TrialAccumulator(2)
    acc.append([1.0, 1j])
    acc.append([3.0, -1j])
    disconnected, connected, stderr_disc, stderr_conn = acc.statistics()
    assert disconnected == pytest.approx([4.0, 0.0])
    assert connected == pytest.approx([2.0, 2.0])
    assert stderr_conn == pytest.approx([1.0, 1.0])
    assert stderr_disc[0] == pytest.approx(2 * math.sqrt(8) / math.sqrt(2))


def test_trial_accumulator_merge_and_errors():
    a, b = TrialAccumulator(3), TrialAccumulator(3)
    a.append(np.ones(3))
    b.append(2 * np.ones(3))
    a.extend(b)
    assert len(a) == 2
    assert a.trials().shape == (2, 3)
    assert a.mean() == pytest.approx([1.5, 1.5, 1.5])
    with pytest.raises(DomainError):
        a.append(np.ones(2))
    with pytest.raises(DomainError):
        a.extend(TrialAccumulator(2))
    with pytest.raises(DomainError):
        TrialAccumulator(0)
    single = TrialAccumulator(1)
    single.append([1.0])
    with pytest.raises(DomainError):
        single.statistics()


def test_moment_accumulator():
    acc = MomentAccumulator([1.0, 2.0, 3.0])
    acc.append(4.0)
    mean, stderr = acc.statistics()
    assert mean == 2.5
    assert stderr == pytest.approx(math.sqrt(5 / 3) / 2)
    with pytest.raises(DomainError):
        MomentAccumulator([1.0]).statistics()

# ----------
# Estimators
# ----------

def test_zero_time_estimate():
    config = SamplerConfig(10, 0.3, 4, seed=2)
    estimate = estimate_dsff(config, ComplexTime(0.0, 0.5))
    assert estimate.disconnected == pytest.approx(100.0)
    assert estimate.connected == pytest.approx(0.0, abs=1e-20)
    assert estimate.stderr_disc == pytest.approx(0.0, abs=1e-12)
    assert estimate.trials_used == 4
    assert isinstance(estimate.disconnected, float)


def test_estimate_needs_two_trials():
    with pytest.raises(DomainError):
        estimate_dsff(SamplerConfig(4, 0.3, 1, seed=0), ComplexTime(1.0, 0.0))
    with pytest.raises(DomainError):
        estimate_grid(SamplerConfig(4, 0.3, 1, seed=0), [1.0, 2.0], 0.0)


def test_estimate_totals():
    estimate = DsffEstimate(1.0, 2.0, 0.3, 0.4, 10)
    assert estimate.total == 3.0
    assert estimate.stderr_total == pytest.approx(0.5)


def test_grid_estimate_matches_pointwise():
    config = SamplerConfig(8, 0.3, 12, seed=4)
    T = np.array([0.5, 2.0, 7.0])
    grid = estimate_grid(config, T, math.pi / 6, workers=1)
    for i, t in enumerate(T):
        single = estimate_dsff(config, ComplexTime(float(t), math.pi / 6))
        assert grid.disconnected[i] == pytest.approx(single.disconnected, rel=1e-12)
        assert grid.connected[i] == pytest.approx(single.connected, rel=1e-12)


def test_parallel_collection_matches_serial():
    config = SamplerConfig(8, 0.3, 9, seed=21)
    T = np.geomspace(0.1, 20.0, 5)
    serial = simulate(config, T, 0.4)
    parallel = collect(config, T, 0.4, workers=3)
    assert len(parallel) == len(serial)
    assert np.allclose(parallel.trials(), serial.trials(), rtol=1e-12, atol=0.0)
    a, b = summarize(serial, T), summarize(parallel, T)
    assert np.allclose(a.connected, b.connected, rtol=1e-12)


def test_halving_trials_doubles_variance():
    T = np.geomspace(1.0, 10.0, 10)
    full = simulate(SamplerConfig(8, 0.3, 400, seed=13), T, 0.2)
    half = simulate(SamplerConfig(8, 0.3, 200, seed=13), T, 0.2)
    assert np.array_equal(half.trials(), full.trials()[:200])
    ratio = np.mean(summarize(half, T).stderr_conn ** 2) / np.mean(summarize(full, T).stderr_conn ** 2)
    assert 1.0 <= ratio <= 3.0


def test_workers_from_environment(monkeypatch):
    monkeypatch.setenv('DSFF_THREADS', '1')
    config = SamplerConfig(4, 0.3, 3, seed=0)
    assert len(collect(config, [1.0], 0.0)) == 3


def test_worker_count_is_capped(monkeypatch):
    monkeypatch.setenv('DSFF_THREADS', '2')
    assert worker_count() == 2
    assert worker_count(16) == 2
    assert worker_count(1) == 1


def test_explicit_workers_respect_cap(monkeypatch):
    monkeypatch.setenv('DSFF_THREADS', '2')
    seen = []

    async def fan_out(config, T, theta, workers):
        seen.append(workers)
        return simulate(config, T, theta)
    monkeypatch.setattr(montecarlo, '_fan_out', fan_out)
    config = SamplerConfig(4, 0.3, 6, seed=0)
    assert len(collect(config, [1.0], 0.0, workers=16)) == 6
    assert seen == [2]


def test_bad_time_grid():
    config = SamplerConfig(4, 0.3, 3, seed=0)
    with pytest.raises(DomainError):
        simulate(config, [-1.0], 0.0)

# --------------
# Second moments
# --------------

def test_second_moment_elliptic_law():
    N, tau = 32, 0.3
    config = SamplerConfig(N, tau, 400, seed=17)
    mean, stderr = second_moment(config)
    # finite-N bias of the eigenvalue second moment is O(1/N)
    assert abs(mean - (1 + tau * tau) / 2) <= 4 * stderr + 1.0 / N


def test_trace_square_moment_is_exact():
    N, tau = 16, 0.6
    config = SamplerConfig(N, tau, 400, seed=8)
    moments = MomentAccumulator()
    for trial in range(config.trials):
        z = spectrum(sample_eginue(config, trial)).eigenvalues
        moments.append(math.fsum((z * z).real) / N)
    mean, stderr = moments.statistics()
    assert abs(mean - tau) <= 4 * stderr

# -----------
# Binary dump
# -----------

def test_zfile_roundtrip(tmp_path):
    z = np.arange(6).reshape(2, 3) + 1j
    path = tmp_path / "z.bin"
    zfile.write(path, 64, z)
    record = zfile.read(path)
    assert record.N == 64
    assert record.trials == 2
    assert record.points == 3
    assert np.array_equal(record.z, z)
    raw = path.read_bytes()
    assert raw[:4] == b"DSFF"
    assert len(raw) == zfile.HEADER.size + 6 * 16


def test_zfile_integrity(tmp_path):
    path = tmp_path / "z.bin"
    zfile.write(path, 8, np.ones((2, 2), dtype=complex))
    raw = path.read_bytes()
    (tmp_path / "short.bin").write_bytes(raw[:-8])
    with pytest.raises(NumericIntegrityError):
        zfile.read(tmp_path / "short.bin")
    (tmp_path / "magic.bin").write_bytes(b"XXXX" + raw[4:])
    with pytest.raises(NumericIntegrityError):
        zfile.read(tmp_path / "magic.bin")
    (tmp_path / "header.bin").write_bytes(raw[:10])
    with pytest.raises(NumericIntegrityError):
        zfile.read(tmp_path / "header.bin")
