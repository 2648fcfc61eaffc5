import math

import numpy as np
import pytest

from dirac_entangle.averages import (
    AveragingSpec,
    EnsembleStats,
    ensemble_average,
    ensemble_states,
    initial_concurrence_stats,
    rectified_frequency,
    time_averaged_concurrence,
    time_averaged_concurrences,
)
from dirac_entangle.dynamics import evolve_amplitudes, make_propagator
from dirac_entangle.entanglement import concurrence
from dirac_entangle.errors import ConfigError, ParameterDomainError
from dirac_entangle.model import ModelParams
from dirac_entangle.states import member_rng, named_state, random_haar_state

from conftest import LAMBDA

TWO_OVER_PI = 2 / math.pi


def avg(ratio, name, lam=LAMBDA, spec=AveragingSpec()):
    return time_averaged_concurrence(make_propagator(ModelParams(ratio * lam, lam)), named_state(name), spec)


def test_spec_validation():
    with pytest.raises(ParameterDomainError):
        AveragingSpec(n_samples=100)
    with pytest.raises(ParameterDomainError):
        AveragingSpec(horizon=0)


def test_horizon_stretches_for_slow_beats():
    spec = AveragingSpec()
    fast = make_propagator(ModelParams(LAMBDA, LAMBDA))
    assert spec.times(fast)[-1] == pytest.approx(200 * math.pi / LAMBDA, rel=1e-3)
    slow = make_propagator(ModelParams(1e-2 * LAMBDA, LAMBDA))
    # slowest gap is 2 eps_minus ~ eps^2/lambda
    horizon = spec.times(slow)[-1]
    assert horizon >= 50 * 2 * math.pi / slow.slowest_frequency() * (1 - 1e-3)


def test_fast_path_matches_direct_evolution():
    states = ensemble_states("haar", 40, 3)
    for ratio in (0.0, 0.05, 0.7, 12.0):
        p = make_propagator(ModelParams(ratio * LAMBDA, LAMBDA, 0.4))
        spec = AveragingSpec(n_samples=4096)
        direct = concurrence(evolve_amplitudes(p, states, spec.times(p))).mean(-1)
        assert np.abs(time_averaged_concurrences(p, states, spec) - direct).max() <= 1e-12


def test_bell_1_static_at_cnp():
    assert avg(0.0, "bell_1") == pytest.approx(1.0, abs=1e-12)


def test_psi_x_cnp_mean_of_half_abs_sine():
    assert avg(0.0, "psi_x_up") == pytest.approx(1 / math.pi, abs=0.01)


def test_high_energy_asymptotes():
    assert avg(100, "psi_y_up") == pytest.approx(TWO_OVER_PI, abs=0.01)
    for b in ("bell_1", "bell_2"):
        assert avg(100, b) == pytest.approx(TWO_OVER_PI, abs=0.01)


def test_bell_states_approach_two_over_pi_near_cnp():
    # any eps != 0 breaks the degeneracy that keeps bell_1 static
    assert avg(1e-3, "bell_1") == pytest.approx(TWO_OVER_PI, abs=0.01)
    assert avg(1e-3, "bell_2") == pytest.approx(TWO_OVER_PI, abs=0.01)


def test_estimator_converged():
    # doubling horizon and sample count moves the estimate by < 1e-3
    spec2 = AveragingSpec(horizon=400 * math.pi, n_samples=65536)
    for ratio in (0.01, 0.3, 2 / 3, 1.0, 5.0, 100.0):
        for name in ("psi_x_up", "psi_y_up", "bell_2"):
            assert abs(avg(ratio, name) - avg(ratio, name, spec=spec2)) < 1e-3


def test_scale_invariance_in_eps_over_lambda():
    for ratio in (0.2, 0.9, 4.0):
        for name in ("psi_x_up", "bell_1"):
            assert avg(ratio, name, lam=LAMBDA) == pytest.approx(avg(ratio, name, lam=10 * LAMBDA), abs=1e-3)


def test_ensemble_n1_matches_direct():
    spec = AveragingSpec(n_samples=4096)
    params = ModelParams(2 * LAMBDA, LAMBDA)
    stats = ensemble_average(params, "haar", 1, spec, seed=77)
    direct = time_averaged_concurrence(make_propagator(params), random_haar_state(member_rng(77, 0)), spec)
    assert stats.mean == direct
    assert stats.n == 1 and stats.std_error == 0.0


def test_ensemble_thread_independence():
    spec = AveragingSpec(n_samples=4096)
    params = ModelParams(0.8 * LAMBDA, LAMBDA)
    states = ensemble_states("separable", 100, 5)
    p = make_propagator(params)
    one = time_averaged_concurrences(p, states, spec, threads=1)
    eight = time_averaged_concurrences(p, states, spec, threads=8)
    assert one.tobytes() == eight.tobytes()


def test_ensemble_stats_and_errors():
    s = EnsembleStats.from_values([1.0, 2.0, 3.0], "x")
    assert s.mean == 2.0 and s.std_error == pytest.approx(1 / math.sqrt(3))
    with pytest.raises(ConfigError):
        ensemble_states("thermal", 3, 0)
    with pytest.raises(ConfigError):
        ensemble_states("haar", 0, 0)


def test_haar_ensemble_time_invariance():
    # Haar measure is unitarily invariant, so the ensemble mean at any fixed
    # time is statistically the t = 0 mean
    n = 1000
    states = ensemble_states("haar", n, 21)
    t0 = initial_concurrence_stats("haar", n, 21)
    p = make_propagator(ModelParams(1.3 * LAMBDA, LAMBDA))
    times = np.linspace(0, 40 / LAMBDA, 9)
    c = concurrence(evolve_amplitudes(p, states, times))  # (n, 9)
    means = c.mean(0)
    errs = c.std(0, ddof=1) / math.sqrt(n)
    assert np.all(np.abs(means - t0.mean) <= 3 * errs)


def test_rectified_frequency():
    t = np.linspace(0, 20, 20001)
    assert rectified_frequency(t, np.abs(np.cos(1.7 * t))) == pytest.approx(1.7, rel=1e-4)
    assert rectified_frequency(t, np.sqrt(1 + np.sin(0.9 * t) ** 2)) == pytest.approx(0.9, rel=1e-4)
    noisy = np.abs(np.cos(1.7 * t)) + 0.02 * np.sin(300 * t)
    assert rectified_frequency(t, noisy) == pytest.approx(1.7, rel=1e-3)
    with pytest.raises(ValueError):
        rectified_frequency(t[:100], np.cos(0.01 * t[:100]))


def test_random_states_converged_at_high_energy():
    # the default grid undersamples the fast 2 eps oscillation at large eps;
    # uniform sampling of a quasi-periodic signal still converges
    dense = AveragingSpec(horizon=400 * math.pi, n_samples=262144)
    for ensemble in ("haar", "separable"):
        states = ensemble_states(ensemble, 40, 5)
        for ratio in (3.0, 100.0):
            p = make_propagator(ModelParams(ratio * LAMBDA, LAMBDA))
            a = time_averaged_concurrences(p, states, AveragingSpec())
            b = time_averaged_concurrences(p, states, dense)
            assert np.abs(a - b).max() < 1e-3
