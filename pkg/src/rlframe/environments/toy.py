"""Small problems used to exercise specific algorithm families."""
import numpy as np

from rlframe.environments.environment import Environment, FiniteMDP
from rlframe.environments.spaces import Box, MdpInfo

LEFT = 0


class QuadraticBandit(Environment):
    """One-step continuous bandit with reward ``-(a - target)**2``.

    Without context the observation is the constant ``[1.0]`` and the target
    is ``optimum``. With ``context=True`` the observation ``s`` is drawn
    uniformly from [-1, 1] and the target becomes ``optimum + slope * s``.
    """

    def __init__(self, optimum=2., context=False, slope=1., gamma=1., seed=None):
        self.optimum = float(optimum)
        self.context = bool(context)
        self.slope = float(slope)
        low, high = (-1., 1.) if self.context else (1., 1.)
        info = MdpInfo(Box([low], [high]), Box([-np.inf], [np.inf]), gamma, 1)
        super().__init__(info, seed)

    def target(self, state):
        return self.optimum + self.slope * state[0] if self.context else self.optimum

    def _reset(self, state):
        if state is not None:
            return state
        if self.context:
            return np.array([self.rng.uniform(-1., 1.)])
        return np.array([1.])

    def _step(self, state, action):
        reward = -(action[0] - self.target(state)) ** 2
        return state.copy(), reward, True


class LQR(Environment):
    """Scalar linear-quadratic regulator ``x' = x + a``, reward ``-(x^2 + a^2)``.

    Position and action are clipped to ``max_pos`` and ``max_action``.
    """

    def __init__(self, max_pos=10., max_action=5., gamma=0.9, horizon=50, seed=None):
        self.max_pos = float(max_pos)
        self.max_action = float(max_action)
        info = MdpInfo(Box([-max_pos], [max_pos]), Box([-np.inf], [np.inf]), gamma, horizon)
        super().__init__(info, seed)

    def _reset(self, state):
        if state is not None:
            return state
        return np.array([self.rng.uniform(-3., 3.)])

    def _step(self, state, action):
        a = float(np.clip(action[0], -self.max_action, self.max_action))
        x = float(state[0])
        reward = -(x ** 2 + a ** 2)
        return np.array([np.clip(x + a, -self.max_pos, self.max_pos)]), reward, False


class MaximizationBias(FiniteMDP):
    """Two-state task exposing the overestimation of max-based targets.

    State 0 is the start, state 1 the noisy state and state 2 terminal. In
    the start state action ``LEFT`` (0) moves to state 1 with reward 0 and
    every other action ends the episode with reward 0. From state 1 each of
    the ``n_arms`` actions ends the episode with a reward drawn from
    ``N(mean, std**2)``. Going left is never better than ending at once.
    """

    def __init__(self, n_arms=8, mean=-0.1, std=1., gamma=1., horizon=10, seed=None):
        self.mean = float(mean)
        self.std = float(std)
        n_arms = int(n_arms)
        p = np.zeros((3, n_arms, 3))
        p[0, :, 2] = 1.
        p[0, LEFT] = [0., 1., 0.]
        p[1, :, 2] = 1.
        p[2, :, 2] = 1.
        r = np.zeros((3, n_arms, 3))
        r[1, :, 2] = self.mean
        terminal = np.array([False, False, True])
        super().__init__(p, r, terminal, [1., 0., 0.], gamma, horizon, seed)

    def _reward(self, s, a, next_s):
        if s == 1:
            return self.mean + self.std * self.rng.standard_normal()
        return 0.
