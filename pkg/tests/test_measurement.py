import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from qsgdiag.errors import DimensionError
from qsgdiag.measurement import (spectrum, densitymatrix, stoppingrule,
                                 measurementrecord, oracle_spectrum,
                                 measure_once, repeat_measurement,
                                 run_experiment, missing_probability,
                                 cluster_outcomes, harvest_eigenvalues,
                                 substream)


def test_substream_reproducible():
    a = substream(7, 0, 3).random(5)
    np.testing.assert_array_equal(a, substream(7, 0, 3).random(5))
    assert not np.array_equal(a, substream(7, 0, 4).random(5))
    assert not np.array_equal(a, substream(8, 0, 3).random(5))
    with pytest.raises(ValueError):
        substream(-1, 0, 0)
    with pytest.raises(ValueError):
        substream(2**64, 0, 0)


def test_oracle_spectrum_degenerate():
    spec = oracle_spectrum(np.diag([5.0, 2.0, 2.0]))
    np.testing.assert_array_equal(spec.values, [2.0, 5.0])
    np.testing.assert_array_equal(spec.multiplicities, [2, 1])
    np.testing.assert_allclose(spec.projectors[0], np.diag([0.0, 1.0, 1.0]), atol=1e-15)
    np.testing.assert_allclose(spec.matrix(), np.diag([5.0, 2.0, 2.0]), atol=1e-14)
    assert spec.index_of(5.0) == 1
    with pytest.raises(ValueError):
        spec.index_of(3.0)


def test_oracle_spectrum_merges_within_tolerance():
    spec = oracle_spectrum(np.diag([1.0, 1.0 + 1e-12, 2.0]))
    assert len(spec) == 2
    assert spec.values[0] == pytest.approx(1.0 + 0.5e-12, abs=1e-15)
    assert len(oracle_spectrum(np.diag([1.0, 1.0 + 1e-12, 2.0]), 0.0)) == 3


def test_spectrum_validation():
    with pytest.raises(ValueError):
        spectrum([1.0, 1.0], [np.eye(2)[:, :1], np.eye(2)[:, 1:]])
    with pytest.raises(DimensionError):
        spectrum([1.0], [np.eye(2)[:, :1], np.eye(2)[:, 1:]])


def test_densitymatrix():
    np.testing.assert_allclose(densitymatrix.mixed(4).entries, np.eye(4) / 4)
    with pytest.raises(ValueError, match="Trace"):
        densitymatrix(np.eye(2))
    with pytest.raises(ValueError, match="negative"):
        densitymatrix(np.diag([1.5, -0.5]))
    assert densitymatrix(np.diag([1.5, -0.5]), check_positive=False).N == 2


@pytest.mark.parametrize("N, epsilon, expected", [(2, 1e-3, 11), (2, 1e-6, 21)])
def test_stopping_rule_values(N, epsilon, expected):
    assert stoppingrule(epsilon).minimum_runs(N) == expected


@pytest.mark.parametrize("N", [2, 3, 4, 6, 8, 16, 100])
@pytest.mark.parametrize("epsilon", [0.5, 1e-2, 1e-6, 1e-9, 1e-12])
def test_stopping_rule_bound(N, epsilon):
    N0 = stoppingrule(epsilon, 10**9).minimum_runs(N)
    assert N * ((N - 1.0) / N)**N0 <= epsilon
    assert N * ((N - 1.0) / N)**(N0 - 1) > epsilon


def test_stopping_rule_cap():
    rule = stoppingrule(1e-6, max_runs=5)
    assert rule.runs(2) == 5
    assert rule.minimum_runs(2) == 21
    with pytest.raises(ValueError):
        stoppingrule(1.0)
    with pytest.raises(ValueError):
        stoppingrule(1e-3, 0)
    with pytest.raises(ValueError):
        rule.minimum_runs(1)


def test_missing_probability():
    assert missing_probability(2, 10) == pytest.approx(1.0 / 1024.0)
    assert missing_probability(4, 3) == pytest.approx(27.0 / 64.0)
    assert missing_probability(2, 10, approximate=True) == pytest.approx(math.exp(-10.0))
    with pytest.raises(ValueError):
        missing_probability(1, 10)


def test_measure_once_collapses():
    spec = oracle_spectrum(np.diag([1.0, -1.0]))
    rng = substream(0, 9)
    value, post = measure_once(np.diag([1.0, 0.0]), spec, rng)
    assert value == 1.0
    np.testing.assert_allclose(post.entries, np.diag([1.0, 0.0]))
    for _ in range(20):
        value, post = measure_once(densitymatrix.mixed(2), spec, rng)
        assert repeat_measurement(post, spec, rng)
        n = spec.index_of(value)
        np.testing.assert_allclose(post.entries, spec.projectors[n], atol=1e-14)


def test_measure_once_dimension():
    spec = oracle_spectrum(np.diag([1.0, -1.0]))
    with pytest.raises(DimensionError):
        measure_once(densitymatrix.mixed(3), spec, substream(0, 9))


def test_run_experiment_reproducible():
    spec = oracle_spectrum(np.diag([0.0, 1.0, 2.0, 3.0]))
    rule = stoppingrule()
    a = run_experiment(spec, rule, seed=11, nruns=1000, block_size=128)
    b = run_experiment(spec, rule, seed=11, nruns=1000, block_size=128)
    np.testing.assert_array_equal(a.values, b.values)
    with ThreadPoolExecutor(max_workers=4) as pool:
        c = run_experiment(spec, rule, seed=11, nruns=1000, block_size=128, pool=pool)
    np.testing.assert_array_equal(a.values, c.values)
    d = run_experiment(spec, rule, seed=12, nruns=1000, block_size=128)
    assert not np.array_equal(a.values, d.values)



def test_run_experiment_matches_repeated_measure_once():
    spec = oracle_spectrum(np.diag([0.0, 1.0, 1.0, 3.0]))
    record = run_experiment(spec, stoppingrule(), seed=4, nruns=200)
    rng = substream(4, 0, 0)
    values = [measure_once(densitymatrix.mixed(4), spec, rng)[0] for _ in range(200)]
    np.testing.assert_array_equal(record.values, values)

def test_run_experiment_default_runs():
    spec = oracle_spectrum([[1, -2j], [2j, 3]])
    record = run_experiment(spec, stoppingrule(1e-6), seed=0)
    assert len(record) == 21
    assert record.complete
    assert record.outcomes[0][0] == 0
    assert set(record.values.tolist()) == set(spec.values.tolist())


def test_frequencies_nondegenerate():
    spec = oracle_spectrum(np.diag([-1.5, 0.2, 1.0, 4.0]))
    record = run_experiment(spec, stoppingrule(), seed=3, nruns=40000)
    frequencies = record.counts / len(record)
    assert np.all(np.abs(frequencies - 0.25) <= 0.01)


def test_frequencies_degenerate():
    spec = oracle_spectrum(np.diag([2.0, 5.0, 2.0]))
    record = run_experiment(spec, stoppingrule(), seed=4, nruns=40000)
    assert abs(record.counts[0] / len(record) - 2.0 / 3.0) <= 0.012


def test_miss_probability_law():
    spec = oracle_spectrum(np.diag([1.0, -1.0]))
    record = run_experiment(spec, stoppingrule(), seed=5, nruns=10**6)
    plus = spec.index_of(1.0)
    runs = record.eigenspaces.reshape(10**5, 10)
    missed = np.mean(np.all(runs != plus, axis=1))
    assert abs(missed - 1.0 / 1024.0) <= 5e-4


def test_incomplete_run_warns():
    spec = oracle_spectrum(np.diag([1.0, 2.0, 3.0]))
    with pytest.warns(UserWarning, match="Only 1 of 3"):
        record = run_experiment(spec, stoppingrule(), seed=0, nruns=1)
    assert not record.complete


def test_clusters_with_noise():
    spec = oracle_spectrum(np.diag([0.0, 10.0]))
    record = run_experiment(spec, stoppingrule(), seed=6, nruns=200, noise_sigma=0.1)
    clusters, overlapping = cluster_outcomes(record, cluster_tol=1.0)
    assert not overlapping
    assert [c.eigenspaces for c in clusters] == [[0], [1]]
    assert clusters[0].estimate == pytest.approx(0.0, abs=0.05)
    assert clusters[1].estimate == pytest.approx(10.0, abs=0.05)
    assert sum(c.count for c in clusters) == 200
    with pytest.warns(UserWarning, match="overlap"):
        harvest_eigenvalues(record)


def test_harvest_exact():
    spec = oracle_spectrum(np.diag([3.0, -1.0, 3.0]))
    record = run_experiment(spec, stoppingrule(1e-9), seed=0)
    harvest = harvest_eigenvalues(record)
    assert [h[0] for h in harvest] == [-1.0, 3.0]
    assert sum(h[1] for h in harvest) == len(record)


def test_record():
    record = measurementrecord(1, [2.0, 5.0, 2.0], [0, 1, 0], 3)
    np.testing.assert_array_equal(record.counts, [2, 1, 0])
    assert not record.complete
    assert record.outcomes == [(0, 2.0, 0), (1, 5.0, 1), (2, 2.0, 0)]
    with pytest.raises(ValueError):
        cluster_outcomes(measurementrecord(1, [], [], 2))
