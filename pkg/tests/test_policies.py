import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rlframe.approximation import Identity, Polynomial, QRegressor, Tabular
from rlframe.errors import DomainError, UnsupportedOperationError
from rlframe.policy import Boltzmann, EpsGreedy, Fixed, GaussianLinear, LinearDecay, VisitDecay

S = np.array([0])


def q_with(values):
    values = np.atleast_2d(np.asarray(values, dtype=float))
    t = Tabular(*values.shape)
    t.table[:] = values
    return QRegressor(t, values.shape[1])


def empirical(policy, n=100_000, state=S):
    n_actions = policy.q.n_actions
    draws = [policy.draw_action(state)[0] for _ in range(n)]
    return np.bincount(draws, minlength=n_actions) / n


# schedules

def test_fixed():
    f = Fixed(0.3)
    assert f() == f.value() == 0.3


def test_linear_decay_values():
    s = LinearDecay(1., 0.01, 100)
    assert s() == 1.
    for _ in range(49):
        s()
    assert s.value() == pytest.approx(1. - 0.5 * 0.99)
    for _ in range(100):
        s()
    assert s.value() == pytest.approx(0.01, abs=1e-15)
    with pytest.raises(DomainError):
        LinearDecay(0.1, 0.5, 10)


def test_visit_decay_harmonic():
    s = VisitDecay(2., exponent=1.)
    vals = [s(3, 1) for _ in range(5)]
    np.testing.assert_allclose(vals, [2., 1., 2 / 3, 0.5, 0.4])
    assert s(0, 0) == 2.
    assert s.visits(3, 1) == 5 and s.visits(9, 9) == 0


@settings(max_examples=20, deadline=None)
@given(st.floats(0.01, 10.), st.floats(0., 1.), st.integers(1, 5000), st.floats(0.3, 1.5))
def test_schedules_monotone(v0, frac, n_steps, exponent):
    v_min = v0 * frac
    lin = LinearDecay(v0, v_min, n_steps)
    visit = VisitDecay(v0, exponent, v_min)
    prev_l = prev_v = np.inf
    for _ in range(10_000):
        l, v = lin(), visit(1, 2)
        assert v_min - 1e-12 <= l <= prev_l
        assert v_min <= v <= prev_v
        prev_l, prev_v = l, v


# discrete policies

def test_eps_greedy_probabilities():
    pi = EpsGreedy(0.1, q_with([1., 0.]), seed=0)
    np.testing.assert_allclose(pi.probabilities(S), [0.95, 0.05])
    pi = EpsGreedy(1., q_with([1., 0.]), seed=0)
    np.testing.assert_allclose(pi.probabilities(S), [0.5, 0.5])


def test_eps_greedy_zero_ties_uniform():
    pi = EpsGreedy(0., q_with([1., 3., 3., 0.]), seed=1)
    freq = empirical(pi, 20_000)
    assert freq[0] == 0. and freq[3] == 0.
    assert freq[1] == pytest.approx(0.5, abs=0.02)


def test_boltzmann_probabilities():
    pi = Boltzmann(1., q_with([1., 2.]), seed=0)
    expected = np.exp([1., 2.]) / np.exp([1., 2.]).sum()
    np.testing.assert_allclose(pi.probabilities(S), expected, rtol=1e-12)
    np.testing.assert_allclose(pi.probabilities(S), [0.2689, 0.7311], atol=1e-4)
    np.testing.assert_allclose(Boltzmann(1., q_with([0., 0., 0.])).probabilities(S), [1 / 3] * 3)


def test_boltzmann_empirical():
    pi = Boltzmann(1., q_with([1., 2.]), seed=2)
    np.testing.assert_allclose(empirical(pi), [0.2689, 0.7311], atol=0.01)


def test_boltzmann_small_beta_uniform():
    pi = Boltzmann(1e-9, q_with([1., 2.]), seed=3)
    np.testing.assert_allclose(empirical(pi), [0.5, 0.5], atol=0.01)


def test_boltzmann_large_beta_stable():
    p = Boltzmann(1e6, q_with([1000., 1001.])).probabilities(S)
    assert np.all(np.isfinite(p)) and p[1] == 1.


@pytest.mark.parametrize('make', [lambda q: EpsGreedy(0.3, q, seed=4), lambda q: Boltzmann(0.7, q, seed=4)],
                         ids=['eps_greedy', 'boltzmann'])
def test_discrete_laws(make):
    pi = make(q_with([0.5, -1., 2., 0.]))
    p = pi.probabilities(S)
    assert np.all(p >= 0.) and abs(p.sum() - 1.) < 1e-12
    np.testing.assert_allclose(empirical(pi), p, atol=0.01)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-50., 50.), min_size=2, max_size=6), st.floats(-100., 100.),
       st.floats(0.01, 5.), st.floats(0., 1.))
def test_shift_invariance(values, c, beta, eps):
    values = np.array(values)
    for make in (lambda q: Boltzmann(beta, q), lambda q: EpsGreedy(eps, q)):
        p = make(q_with(values)).probabilities(S)
        p_shift = make(q_with(values + c)).probabilities(S)
        assert abs(p.sum() - 1.) < 1e-12
        if np.array_equal(values == values.max(), (values + c) == (values + c).max()):
            np.testing.assert_allclose(p, p_shift, atol=1e-9)


def test_evaluation_mode_greedy():
    pi = EpsGreedy(1., q_with([0., 5., 1.]), seed=5)
    pi.evaluation = True
    assert all(pi.draw_action(S)[0] == 1 for _ in range(100))
    np.testing.assert_allclose(pi.probabilities(S), [0., 1., 0.])


# gaussian

def test_diff_log_zero_at_mean():
    pi = GaussianLinear(Identity(2), sigma=0.7)
    pi.set_weights([0.3, -0.2, 1.])
    s = np.array([1., 2.])
    assert np.all(pi.diff_log(s, pi.mean(s)) == 0.)


def test_diff_log_formula():
    pi = GaussianLinear(Identity(1, bias=False), sigma=1.)
    assert pi.diff_log(np.array([1.]), np.array([2.])).tolist() == [2.]


def test_diff_log_zero_sigma():
    pi = GaussianLinear(Identity(1), sigma=0.)
    with pytest.raises(DomainError):
        pi.diff_log(np.array([1.]), np.array([0.]))


def test_gaussian_has_no_probability_vector():
    with pytest.raises(UnsupportedOperationError):
        GaussianLinear(Identity(1)).probabilities(np.array([0.]))


def gaussian_fd_error(pi, s, a, h=1e-3):
    # log-density is quadratic in the weights: central differences are exact
    # up to rounding, so a wide step only reduces cancellation
    w0 = pi.get_weights()
    fd = np.zeros_like(w0)
    for i in range(w0.size):
        w = w0.copy()
        w[i] += h
        pi.set_weights(w)
        up = pi.log_prob(s, a)
        w[i] -= 2 * h
        pi.set_weights(w)
        fd[i] = (up - pi.log_prob(s, a)) / (2 * h)
    pi.set_weights(w0)
    g = pi.diff_log(s, a)
    return np.max(np.abs(g - fd) / np.maximum(np.abs(g) + np.abs(fd), 1e-8))


def test_diff_log_finite_differences():
    rng = np.random.default_rng(6)
    worst = 0.
    for _ in range(20):
        pi = GaussianLinear(Polynomial(2, 2), action_dim=2, sigma=rng.uniform(0.5, 2., 2))
        pi.set_weights(rng.normal(size=pi.weights_size()))
        s = rng.normal(size=2)
        a = pi.mean(s) + rng.normal(size=2)
        worst = max(worst, gaussian_fd_error(pi, s, a))
    assert worst < 1e-6


def test_gaussian_density_integrates_to_one():
    pi = GaussianLinear(Identity(1), sigma=0.8)
    pi.set_weights([1., 0.5])
    s = np.array([2.])
    grid = np.linspace(-10., 15., 20001)
    dens = np.exp([pi.log_prob(s, np.array([a])) for a in grid])
    assert np.trapezoid(dens, grid) == pytest.approx(1., abs=1e-8)


def test_gaussian_draws():
    pi = GaussianLinear(Identity(1), sigma=0.5, seed=7)
    pi.set_weights([1., 1.])
    s = np.array([1.])
    a = np.array([pi.draw_action(s)[0] for _ in range(20000)])
    assert a.mean() == pytest.approx(2., abs=0.02) and a.std() == pytest.approx(0.5, abs=0.02)
    pi.evaluation = True
    assert pi.draw_action(s).tolist() == [2.]
