import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import msde.memetic as memetic
from msde.core import ConfigurationError, DEConfig, Population, RunState, init_population, run_de
from msde.memetic import (
    MemeticConfig,
    compute_fj,
    gss_minimize,
    mutate_msde,
    run,
    run_msde,
)
from msde.problems import get

from .conftest import counted

PSI = 0.618


def test_first_interior_points():
    seen = []
    gss_minimize(lambda c: seen.append(c) or 0.0, MemeticConfig(max_gss_iterations=1))
    assert seen[0] == pytest.approx(1.2 - 2.4 * 0.618, abs=1e-15)
    assert seen[1] == pytest.approx(-1.2 + 2.4 * 0.618, abs=1e-15)
    assert seen == pytest.approx([-0.2832, 0.2832], abs=1e-12)


def test_quadratic_minimiser():
    calls = []

    def phi(c):
        calls.append(c)
        return (c - 0.3) ** 2

    c, v = gss_minimize(phi, MemeticConfig())
    assert abs(c - 0.3) < 0.01
    assert v == (c - 0.3) ** 2
    assert len(calls) <= 40


def test_width_contracts_geometrically():
    trace = []
    gss_minimize(lambda c: math.sin(3 * c), MemeticConfig(width_tolerance=1e-12, max_gss_iterations=20),
                 trace=trace)
    assert len(trace) == 20
    for k, (a, b) in enumerate(trace, start=1):
        assert (b - a) == pytest.approx(2.4 * PSI**k, rel=1e-12)


def test_constant_objective():
    trace = []
    c, _ = gss_minimize(lambda c: 1.0, MemeticConfig(width_tolerance=1e-12, max_gss_iterations=9),
                        trace=trace)
    assert -1.2 <= c <= 1.2
    assert trace[-1][1] - trace[-1][0] == pytest.approx(2.4 * PSI**9, rel=1e-12)


def test_default_termination_iterations():
    # 2.4 * 0.618**k <= 1e-3 first holds at k = 17
    trace = []
    gss_minimize(lambda c: c * c, MemeticConfig(), trace=trace)
    assert len(trace) == 17


def test_zero_iterations_returns_midpoint():
    c, v = gss_minimize(lambda c: pytest.fail("no evaluation expected"),
                        MemeticConfig(width_tolerance=10.0))
    assert c == 0.0 and math.isnan(v)


@settings(max_examples=60, deadline=None)
@given(target=st.floats(-1.5, 1.5), tol=st.sampled_from([1e-3, 1e-6]))
def test_bracket_keeps_unimodal_minimiser(target, tol):
    trace = []
    c, _ = gss_minimize(lambda c: abs(c - target), MemeticConfig(width_tolerance=tol), trace=trace)
    clipped = min(max(target, -1.2), 1.2)
    for a, b in trace:
        assert a - 1e-12 <= clipped <= b + 1e-12
    assert -1.2 <= c <= 1.2


def test_memetic_config_validation():
    with pytest.raises(ConfigurationError):
        MemeticConfig(interval=(1.0, -1.0))
    with pytest.raises(ConfigurationError):
        MemeticConfig(golden_ratio=1.0)
    with pytest.raises(ConfigurationError):
        MemeticConfig(width_tolerance=0.0)
    with pytest.raises(ConfigurationError):
        MemeticConfig(search_line="other")


def test_gss_respects_counter():
    class Budget:
        def __init__(self, n):
            self.left = n

        @property
        def halted(self):
            return self.left <= 0

    budget = Budget(5)

    def phi(c):
        budget.left -= 1
        return c * c

    gss_minimize(phi, MemeticConfig(), budget)
    assert budget.left == 0


def _population(problem, seed, np_=10):
    rng = np.random.default_rng(seed)
    state = RunState(problem, 10_000)
    return init_population(problem, DEConfig(np=np_), rng, state), state, rng


class TestComputeFj:
    def test_two_evaluations_per_iteration(self):
        p, wrapper = counted(get("f2"))
        pop, state, rng = _population(p, 1)
        before = state.counter.count
        rows_before = wrapper.rows
        trace = []
        orig = memetic.gss_minimize

        def traced(*a, **k):
            return orig(*a, trace=trace, **k)

        memetic.gss_minimize, saved = traced, memetic.gss_minimize
        try:
            compute_fj(pop, p, 0.5, MemeticConfig(), rng, state)
        finally:
            memetic.gss_minimize = saved
        assert state.counter.count - before == 2 * len(trace) == 34
        assert wrapper.rows - rows_before == 34

    def test_degenerate_difference(self, rng):
        p = get("f2")
        X = np.tile([1.5, 0.3, -2.0, 4.0], (5, 1))
        X[0] = [0.9, 0.8, 1.1, 1.2]
        pop = Population(X.copy(), p.evaluate_batch(X))
        state = RunState(p, 10_000)
        best_before = pop.vectors[pop.best_index].copy()
        f_j = compute_fj(pop, p, 0.5, MemeticConfig(), rng, state)
        assert -1.2 < f_j < 1.2
        np.testing.assert_array_equal(pop.vectors[pop.best_index], best_before)

    def test_greedy_replacement(self, sphere):
        for seed in range(20):
            pop, state, rng = _population(sphere, seed)
            best = pop.best_index
            f_best = pop.objectives[best]
            seen = []
            inner = state.evaluate_batch

            def spy(X, check_each=True):
                vals = inner(X, check_each)
                seen.extend(vals.tolist())
                return vals

            state.evaluate_batch = spy
            compute_fj(pop, sphere, 0.5, MemeticConfig(), rng, state)
            if min(seen) < f_best:
                assert pop.objectives[best] == min(seen)
            else:
                assert pop.objectives[best] == f_best
            assert sphere(pop.vectors[best]) == pop.objectives[best]

    def test_disabled_draws_nothing(self, rng):
        p = get("f2")
        pop, state, _ = _population(p, 3)
        before = rng.bit_generator.state
        f_j = compute_fj(pop, p, 0.5, MemeticConfig(width_tolerance=5.0), rng, state)
        assert f_j == 0.0 and rng.bit_generator.state == before

    def test_budget_exhausted(self):
        p = get("f2")
        rng = np.random.default_rng(0)
        state = RunState(p, 10)
        pop = init_population(p, DEConfig(np=10), rng, state)
        assert compute_fj(pop, p, 0.5, MemeticConfig(), rng, state) == 0.0

    @pytest.mark.parametrize("line", ["mutant", "best"])
    def test_search_line(self, line):
        p = get("f5")
        pop, state, rng = _population(p, 7)
        trials = []
        inner = state.evaluate_batch
        state.evaluate_batch = lambda X, check_each=True: (trials.append(X.copy()), inner(X))[1]
        base = pop.vectors[pop.best_index].copy()
        compute_fj(pop, p, 0.5, MemeticConfig(search_line=line, max_gss_iterations=1), rng, state)
        X = trials[0]
        offset = 0.5 if line == "mutant" else 0.0
        # the two trials lie on base + (offset + c) * d with c = -/+ 0.2832
        d = (X[1] - X[0]) / (2 * 0.2832)
        np.testing.assert_allclose(X[0], np.clip(base + (offset - 0.2832) * d, p.lower, p.upper),
                                   atol=1e-12)

    def test_random_base_line(self):
        p = get("f1")  # wide box, so no clipping on the first pair
        pop, state, rng = _population(p, 7)
        pop.vectors *= 0.1
        pop.objectives[:] = p.evaluate_batch(pop.vectors)
        trials = []
        inner = state.evaluate_batch
        state.evaluate_batch = lambda X, check_each=True: (trials.append(X.copy()), inner(X))[1]
        before = pop.vectors.copy()
        best = pop.best_index
        compute_fj(pop, p, 0.5, MemeticConfig(search_line="random", max_gss_iterations=1), rng, state)
        X = trials[0]
        d = (X[1] - X[0]) / (2 * 0.2832)
        base = X[0] - (0.5 - 0.2832) * d
        hits = [k for k in range(len(before)) if np.allclose(before[k], base, atol=1e-9)]
        assert len(hits) == 1 and hits[0] != best


class TestMutateMsde:
    def _pop(self):
        X = np.array([[0, 0], [1, 1], [3, 0], [1, 2]], dtype=float)
        return Population(X, np.zeros(4))

    def test_arithmetic(self, rng):
        v = mutate_msde(self._pop(), 0, 0.5, 0.25, rng, indices=(1, 2, 3))
        np.testing.assert_array_equal(v, [2.5, -0.5])

    def test_reduces_to_rand_1(self):
        from msde.core import mutate_rand_1

        a = mutate_msde(self._pop(), 0, 0.5, 0.0, np.random.default_rng(1))
        b = mutate_rand_1(self._pop(), 0, 0.5, np.random.default_rng(1))
        np.testing.assert_array_equal(a, b)

    def test_cancellation(self, rng):
        v = mutate_msde(self._pop(), 0, 0.5, -0.5, rng, indices=(1, 2, 3))
        np.testing.assert_array_equal(v, [1, 1])


class TestRunMsde:
    def test_wrong_strategy(self):
        with pytest.raises(ConfigurationError):
            run_msde(get("f2"), DEConfig(strategy="DE"))

    @pytest.mark.parametrize("name", ["f2", "f6", "f10"])
    def test_disabled_memetic_equals_de(self, name):
        p = get(name)
        off = MemeticConfig(width_tolerance=100.0)
        a = run_msde(p, DEConfig(strategy="MSDE", seed=21, max_evals=6000), off)
        b = run_de(p, DEConfig(seed=21, max_evals=6000))
        assert a.history == b.history
        assert (a.best_objective, a.evals_used, a.generations) == \
               (b.best_objective, b.evals_used, b.generations)
        np.testing.assert_array_equal(a.best_vector, b.best_vector)

    def test_reproducible(self):
        cfg = DEConfig(strategy="MSDE", seed=8, max_evals=5000)
        a, b = run(get("f11"), cfg), run(get("f11"), cfg)
        assert a.history == b.history and a.evals_used == b.evals_used

    def test_monotone_and_bounded(self):
        r = run(get("f3"), DEConfig(strategy="MSDE", seed=4, max_evals=20_000))
        assert r.evals_used <= 20_000
        assert np.all(np.diff(r.history) <= 0)

    @pytest.mark.parametrize("name", ["f5", "f9"])
    def test_batched_equals_sequential(self, name):
        p = get(name)
        a = run(p, DEConfig(strategy="MSDE", seed=9, max_evals=8000))
        b = run(p, DEConfig(strategy="MSDE", seed=9, max_evals=8000, vectorized=False))
        assert a.history == b.history
        assert (a.best_objective, a.evals_used, a.success) == (b.best_objective, b.evals_used, b.success)

    def test_solves_hosaki(self):
        r = run(get("f6"), DEConfig(strategy="MSDE", seed=0))
        assert r.success
