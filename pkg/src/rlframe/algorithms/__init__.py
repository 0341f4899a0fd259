from rlframe.algorithms.base import Agent
from rlframe.algorithms.td import (DoubleQLearning, ExpectedSARSA, QLearning, RLearning, SARSA,
                                   SpeedyQLearning, TrueOnlineSARSALambda, WeightedQLearning,
                                   argmax_probabilities)
from rlframe.algorithms.batch import FQI, LSPI
from rlframe.algorithms.policy_gradient import ENAC, GPOMDP, PGPE, REINFORCE, RWR
from rlframe.algorithms.replay import ReplayBuffer
from rlframe.algorithms.dqn import DQN, AveragedDQN, DoubleDQN

__all__ = ['Agent', 'QLearning', 'DoubleQLearning', 'WeightedQLearning', 'SpeedyQLearning',
           'RLearning', 'SARSA', 'ExpectedSARSA', 'TrueOnlineSARSALambda', 'argmax_probabilities',
           'FQI', 'LSPI', 'REINFORCE', 'GPOMDP', 'ENAC', 'PGPE', 'RWR', 'ReplayBuffer', 'DQN',
           'DoubleDQN', 'AveragedDQN']
