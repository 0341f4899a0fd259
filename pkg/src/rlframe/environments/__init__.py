from rlframe.environments.spaces import Box, Discrete, MdpInfo
from rlframe.environments.environment import Environment, FiniteMDP
from rlframe.environments.gridworld import GridWorld
from rlframe.environments.chain import Chain
from rlframe.environments.classic_control import CartPole, MountainCar
from rlframe.environments.toy import LQR, MaximizationBias, QuadraticBandit
from rlframe.errors import ConfigurationError

ENVIRONMENTS = {
    'gridworld': GridWorld,
    'chain': Chain,
    'cartpole': CartPole,
    'mountaincar': MountainCar,
    'bandit': QuadraticBandit,
    'lqr': LQR,
    'bias': MaximizationBias,
}


def make_env(name, seed=None, **params):
    """Build a registered environment by name with keyword overrides."""
    try:
        cls = ENVIRONMENTS[name]
    except KeyError:
        raise ConfigurationError(
            f'unknown environment {name!r}; valid names: {", ".join(sorted(ENVIRONMENTS))}') from None
    try:
        return cls(seed=seed, **params)
    except TypeError as e:
        raise ConfigurationError(f'bad parameters for environment {name!r}: {e}') from None


__all__ = ['Box', 'Discrete', 'MdpInfo', 'Environment', 'FiniteMDP', 'GridWorld', 'Chain',
           'CartPole', 'MountainCar', 'QuadraticBandit', 'LQR', 'MaximizationBias',
           'ENVIRONMENTS', 'make_env']
