import numpy as np

from rlframe.environments.environment import Environment
from rlframe.environments.spaces import Box, Discrete, MdpInfo


class CartPole(Environment):
    """Cart-pole balancing with Euler integration.

    State is ``(x, x_dot, theta, theta_dot)``; action 0 pushes left and 1
    pushes right with ``force_mag`` newtons. Reward is 1 per step. The
    episode is absorbed when the pole leaves +-12 degrees or the cart leaves
    +-2.4.
    """

    gravity = 9.8
    cart_mass = 1.0
    pole_mass = 0.1
    half_length = 0.5
    dt = 0.02
    theta_limit = 12 * np.pi / 180
    x_limit = 2.4

    def __init__(self, force_mag=10., gamma=0.99, horizon=500, init_range=0.05, seed=None):
        self.force_mag = float(force_mag)
        self.init_range = float(init_range)
        high = np.array([2 * self.x_limit, np.inf, 2 * self.theta_limit, np.inf])
        info = MdpInfo(Box(-high, high), Discrete(2), gamma, horizon)
        super().__init__(info, seed)

    def dynamics(self, state, force):
        """One Euler step under an arbitrary horizontal ``force``."""
        x, x_dot, theta, theta_dot = state
        total_mass = self.cart_mass + self.pole_mass
        pole_moment = self.pole_mass * self.half_length
        cos, sin = np.cos(theta), np.sin(theta)
        temp = (force + pole_moment * theta_dot ** 2 * sin) / total_mass
        theta_acc = (self.gravity * sin - cos * temp) / (
            self.half_length * (4. / 3. - self.pole_mass * cos ** 2 / total_mass))
        x_acc = temp - pole_moment * theta_acc * cos / total_mass
        return np.array([x + self.dt * x_dot,
                         x_dot + self.dt * x_acc,
                         theta + self.dt * theta_dot,
                         theta_dot + self.dt * theta_acc])

    def _reset(self, state):
        if state is not None:
            return state
        return self.rng.uniform(-self.init_range, self.init_range, size=4)

    def _step(self, state, action):
        force = self.force_mag if action == 1 else -self.force_mag
        next_state = self.dynamics(state, force)
        absorbing = abs(next_state[0]) > self.x_limit or abs(next_state[2]) > self.theta_limit
        return next_state, 1., absorbing


class MountainCar(Environment):
    """Under-powered car in a valley; actions 0, 1, 2 push -1, 0, +1."""

    min_position = -1.2
    max_position = 0.6
    max_speed = 0.07
    goal_position = 0.5
    power = 0.001

    def __init__(self, gamma=1., horizon=1000, seed=None):
        low = np.array([self.min_position, -self.max_speed])
        high = np.array([self.max_position, self.max_speed])
        info = MdpInfo(Box(low, high), Discrete(3), gamma, horizon)
        super().__init__(info, seed)

    def dynamics(self, state, push):
        x, v = state
        v = v + self.power * push - 0.0025 * np.cos(3 * x)
        v = min(max(v, -self.max_speed), self.max_speed)
        x = min(max(x + v, self.min_position), self.max_position)
        if x == self.min_position and v < 0:
            v = 0.
        return np.array([x, v])

    def _reset(self, state):
        if state is not None:
            return state
        return np.array([self.rng.uniform(-0.6, -0.4), 0.])

    def _step(self, state, action):
        next_state = self.dynamics(state, action - 1)
        return next_state, -1., next_state[0] >= self.goal_position
