"""Left-choice frequency of Q, Double-Q and Weighted-Q on the bias MDP."""
import numpy as np

from rlframe.algorithms import DoubleQLearning, QLearning, WeightedQLearning
from rlframe.approximation import QRegressor, Tabular
from rlframe.core import Core, split_episodes
from rlframe.environments import MaximizationBias
from rlframe.environments.toy import LEFT
from rlframe.policy import EpsGreedy, Fixed

N_SEEDS = 100

for cls in (QLearning, DoubleQLearning, WeightedQLearning):
    left = np.zeros(300)
    for seed in range(N_SEEDS):
        env = MaximizationBias(seed=seed)
        q = QRegressor(Tabular(env.n_states, env.n_actions), env.n_actions,
                       n_models=2 if cls is DoubleQLearning else 1)
        agent = cls(env.info, EpsGreedy(Fixed(0.1), seed=seed + 1000), q, Fixed(0.1), seed=seed + 2000)
        data = Core(agent, env).learn(n_episodes=300, n_steps_per_fit=1)
        left += [e[0].action[0] == LEFT for e in split_episodes(data)]
    left /= N_SEEDS
    print(f'{cls.__name__:18s} left in episodes 50-300: {left[50:].mean():.3f}  '
          f'first 10 episodes: {np.round(left[:10], 2)}')
