import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rlframe.environments import (Box, CartPole, Chain, Discrete, GridWorld, LQR, MaximizationBias, MdpInfo,
                                  MountainCar, QuadraticBandit, make_env)
from rlframe.environments.gridworld import DOWN, LEFT, RIGHT, UP
from rlframe.errors import ConfigurationError, DomainError, StateError


def test_spaces_validate():
    with pytest.raises(DomainError):
        Discrete(0)
    with pytest.raises(DomainError):
        Box([0., 1.], [1.])
    with pytest.raises(DomainError):
        Box([1.], [0.])
    Box([-np.inf], [np.inf])
    with pytest.raises(DomainError):
        MdpInfo(Discrete(2), Discrete(2), 0., 10)
    with pytest.raises(DomainError):
        MdpInfo(Discrete(2), Discrete(2), 0.9, 0)


def test_discrete_membership():
    d = Discrete(3)
    assert d.contains(np.array([2]))
    assert d.contains(0)
    assert not d.contains(np.array([3]))
    assert not d.contains(np.array([-1]))
    assert not d.contains(np.array([1.5]))
    assert not d.contains(np.array([0, 1]))


def test_gridworld_reset_and_info():
    env = GridWorld(5, 5, start=(0, 0), seed=0)
    assert env.reset().tolist() == [0]
    info = env.env_info()
    assert info.observation_space == Discrete(25)
    assert info.action_space == Discrete(4)


def test_gridworld_wall_blocks():
    env = GridWorld(seed=0)
    env.reset(np.array([2]))
    s, r, absorbing = env.step(np.array([UP]))
    assert s.tolist() == [2] and r == -1. and not absorbing


def test_gridworld_goal_absorbing():
    env = GridWorld(seed=0)
    env.reset(np.array([23]))
    s, r, absorbing = env.step(np.array([RIGHT]))
    assert s.tolist() == [24] and r == 10. and absorbing


def test_gridworld_obstacle():
    env = GridWorld(obstacles=[(0, 1)], seed=0)
    env.reset()
    s, r, _ = env.step(np.array([RIGHT]))
    assert s.tolist() == [0] and r == -1.
    s, r, _ = env.step(np.array([DOWN]))
    assert s.tolist() == [5] and r == 0.


def test_chain_reset_explicit():
    env = Chain(5, seed=0)
    assert env.reset(np.array([2])).tolist() == [2]
    assert env.env_info().gamma == 0.9


def test_reset_outside_space():
    with pytest.raises(DomainError):
        Chain(5, seed=0).reset(np.array([7]))
    with pytest.raises(DomainError):
        CartPole(seed=0).reset(np.array([10., 0., 0., 0.]))


def test_step_errors():
    env = GridWorld(seed=0)
    with pytest.raises(StateError):
        env.step(np.array([0]))
    env.reset()
    with pytest.raises(DomainError):
        env.step(np.array([4]))
    with pytest.raises(DomainError):
        env.step(np.array([0.5]))


def test_emitted_states_are_read_only():
    env = CartPole(seed=0)
    s = env.reset()
    with pytest.raises(ValueError):
        s[0] = 1.


def _estimate_kernel(env, n_samples):
    n_s, n_a = env.p.shape[:2]
    counts = np.zeros_like(env.p)
    for s in range(n_s):
        for a in range(n_a):
            for _ in range(n_samples):
                env.reset(np.array([s]))
                s_next, _, _ = env.step(np.array([a]))
                counts[s, a, s_next[0]] += 1
    return counts / n_samples


def test_chain_kernel_estimate():
    env = Chain(5, seed=1)
    p_hat = _estimate_kernel(env, 100_000)
    assert np.max(np.abs(p_hat - env.p)) < 0.01
    # documented kernel, written out independently
    assert env.p[2, 1, 3] == pytest.approx(0.9) and env.p[2, 1, 1] == pytest.approx(0.1)
    assert env.p[0, 0, 0] == 1. and env.p[0, 1, 0] == pytest.approx(0.1)


def test_gridworld_kernel_estimate():
    # deterministic kernel: every sample must land on the documented cell
    env = GridWorld(seed=2)
    p_hat = _estimate_kernel(env, 1000)
    assert np.max(np.abs(p_hat - env.p)) < 0.01
    for s in range(25):
        row, col = divmod(s, 5)
        moves = {UP: (max(row - 1, 0), col), DOWN: (min(row + 1, 4), col),
                 LEFT: (row, max(col - 1, 0)), RIGHT: (row, min(col + 1, 4))}
        for a, (r, c) in moves.items():
            assert env.p[s, a, r * 5 + c] == 1.


def test_finite_envs_states_in_space():
    for env in (GridWorld(seed=3), Chain(5, seed=3), MaximizationBias(seed=3)):
        rng = np.random.default_rng(0)
        space = env.info.observation_space
        s = env.reset()
        for _ in range(2000):
            assert space.contains(s)
            s, _, absorbing = env.step(np.array([rng.integers(env.info.action_space.n)]))
            if absorbing:
                s = env.reset()


def test_cartpole_reset_range():
    env = CartPole(seed=4)
    for _ in range(100):
        s = env.reset()
        assert s.shape == (4,)
        assert np.all(np.abs(s) <= 0.05)
    info = env.env_info()
    assert info.observation_space.size == 4 and info.action_space == Discrete(2)


def test_cartpole_equilibrium_fixed_point():
    env = CartPole(seed=0)
    assert np.array_equal(env.dynamics(np.zeros(4), 0.), np.zeros(4))
    env.reset(np.zeros(4))
    s, r, absorbing = env.step(np.array([1]))
    assert r == 1. and not absorbing


def test_cartpole_dynamics_by_hand():
    # pole tilted 0.1 rad, cart at rest, push right
    x, x_dot, th, th_dot = 0.1, 0.2, 0.1, -0.3
    f = 10.
    m_c, m_p, l, g, dt = 1., 0.1, 0.5, 9.8, 0.02
    temp = (f + m_p * l * th_dot ** 2 * np.sin(th)) / (m_c + m_p)
    th_acc = (g * np.sin(th) - np.cos(th) * temp) / (l * (4 / 3 - m_p * np.cos(th) ** 2 / (m_c + m_p)))
    x_acc = temp - m_p * l * th_acc * np.cos(th) / (m_c + m_p)
    expected = [x + dt * x_dot, x_dot + dt * x_acc, th + dt * th_dot, th_dot + dt * th_acc]
    np.testing.assert_allclose(CartPole().dynamics(np.array([x, x_dot, th, th_dot]), f), expected, rtol=1e-12)


def test_cartpole_failure_threshold():
    env = CartPole(seed=0)
    env.reset(np.array([0., 0., 0.2095, 1.]))
    _, _, absorbing = env.step(np.array([0]))
    assert absorbing


def test_mountaincar_update():
    env = MountainCar(seed=0)
    env.reset(np.array([-0.5, 0.]))
    s, r, absorbing = env.step(np.array([1]))
    v = -0.0025 * np.cos(-1.5)
    assert s[1] == pytest.approx(v, abs=1e-15)
    assert s[0] == pytest.approx(-0.5 + v, abs=1e-15)
    assert r == -1. and not absorbing


def test_mountaincar_clipping_and_goal():
    env = MountainCar(seed=0)
    s = env.dynamics(np.array([0.49, 0.07]), 1)
    assert s[1] == 0.07 and s[0] == pytest.approx(0.56)
    env.reset(np.array([0.49, 0.07]))
    _, _, absorbing = env.step(np.array([2]))
    assert absorbing
    s = env.dynamics(np.array([-1.19, -0.05]), -1)
    assert s[0] == -1.2 and s[1] == 0.


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(0, 1))
def test_cartpole_step_is_pure(seed, action):
    a, b = CartPole(seed=seed), CartPole(seed=seed)
    sa, sb = a.reset(), b.reset()
    for _ in range(5):
        assert np.array_equal(sa, sb)
        sa, ra, da = a.step(np.array([action]))
        sb, rb, db = b.step(np.array([action]))
        assert (ra, da) == (rb, db)
        if da:
            break


@settings(max_examples=30, deadline=None)
@given(st.floats(-1.2, 0.6), st.floats(-0.07, 0.07), st.integers(0, 2))
def test_mountaincar_state_in_space(x, v, action):
    env = MountainCar(seed=0)
    env.reset(np.array([x, v]))
    s, _, _ = env.step(np.array([action]))
    assert env.info.observation_space.contains(s)
    assert np.array_equal(s, env.dynamics(np.array([x, v]), action - 1))


def test_box_env_states_in_space():
    for env in (CartPole(seed=5), MountainCar(seed=5)):
        rng = np.random.default_rng(1)
        s = env.reset()
        for _ in range(2000):
            assert env.info.observation_space.contains(s)
            s, _, absorbing = env.step(np.array([rng.integers(env.info.action_space.n)]))
            if absorbing:
                s = env.reset()


def test_toy_problems():
    env = QuadraticBandit(optimum=2., seed=0)
    s = env.reset()
    _, r, absorbing = env.step(np.array([1.5]))
    assert s.tolist() == [1.] and r == -0.25 and absorbing
    lqr = LQR(seed=0)
    lqr.reset(np.array([1.]))
    s, r, _ = lqr.step(np.array([-0.5]))
    assert s.tolist() == [0.5] and r == -1.25
    bias = MaximizationBias(seed=0)
    bias.reset()
    s, r, absorbing = bias.step(np.array([3]))
    assert s.tolist() == [2] and r == 0. and absorbing
    bias.reset()
    s, r, absorbing = bias.step(np.array([0]))
    assert s.tolist() == [1] and not absorbing


def test_bias_reward_law():
    env = MaximizationBias(seed=6)
    rewards = []
    for _ in range(20000):
        env.reset(np.array([1]))
        rewards.append(env.step(np.array([5]))[1])
    assert np.mean(rewards) == pytest.approx(-0.1, abs=0.03)
    assert np.std(rewards) == pytest.approx(1., abs=0.03)


def test_make_env():
    env = make_env('gridworld', seed=0, height=3, width=4)
    assert env.info.observation_space == Discrete(12)
    for name in ('gridworld', 'chain', 'cartpole', 'mountaincar'):
        make_env(name, seed=0).reset()
    with pytest.raises(ConfigurationError, match='valid names'):
        make_env('pong')
    with pytest.raises(ConfigurationError):
        make_env('chain', colour='red')


def test_seeded_envs_repeat():
    a, b = Chain(5, seed=9), Chain(5, seed=9)
    a.reset(), b.reset()
    for _ in range(200):
        sa = a.step(np.array([1]))
        sb = b.step(np.array([1]))
        assert sa[0].tolist() == sb[0].tolist()
        if sa[2]:
            assert a.reset().tolist() == b.reset().tolist()
