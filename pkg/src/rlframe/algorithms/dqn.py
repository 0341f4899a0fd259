import copy

import numpy as np

from rlframe.algorithms.base import Agent
from rlframe.algorithms.replay import ReplayBuffer
from rlframe.approximation import QRegressor
from rlframe.errors import DomainError


class DQN(Agent):
    """Deep Q-network with experience replay and a frozen target network.

    Each ``fit`` pushes the new transitions; once the buffer holds
    ``initial_replay_size`` transitions it samples one minibatch and takes
    one optimiser step on the squared error to the target. Every
    ``target_update_period`` steps the online weights are copied into the
    target.
    """

    def __init__(self, mdp_info, policy, q, batch_size=32, target_update_period=200,
                 initial_replay_size=500, max_replay_size=50000, n_targets=1, seed=None):
        if initial_replay_size > max_replay_size:
            raise DomainError('initial replay size exceeds the replay capacity')
        super().__init__(mdp_info, policy, seed)
        self.q = q
        self.target = QRegressor(copy.deepcopy(q.model), q.n_actions, n_models=n_targets)
        self.replay = ReplayBuffer(max_replay_size)
        self.batch_size = int(batch_size)
        self.target_update_period = int(target_update_period)
        self.initial_replay_size = int(initial_replay_size)
        self.n_fits = 0
        self._next_target = 0
        policy.set_q(q)

    def fit(self, dataset):
        self.replay.add(dataset)
        if len(self.replay) < self.initial_replay_size:
            return
        states, actions, rewards, next_states, absorbing = self.replay.sample_arrays(self.batch_size, self.rng)
        y = self._targets(rewards, next_states, absorbing)
        self.q.fit(states, actions, y)
        self.n_fits += 1
        if self.n_fits % self.target_update_period == 0:
            self.update_target()

    def update_target(self):
        self.target.copy_weights(self.q.model, idx=self._next_target)
        self._next_target = (self._next_target + 1) % self.target.n_models

    def compute_target(self, batch):
        """Regression targets for a list of transitions."""
        rewards = np.array([t.reward for t in batch], dtype=float)
        next_states = np.array([t.next_state for t in batch])
        absorbing = np.array([t.absorbing for t in batch], dtype=bool)
        return self._targets(rewards, next_states, absorbing)

    def _next_values(self, next_states):
        return np.max(self.target.predict(next_states), axis=1)

    def _targets(self, rewards, next_states, absorbing):
        return rewards + self.mdp_info.gamma * self._next_values(next_states) * ~absorbing

    def state_dict(self):
        return {'q': self.q, 'target': self.target}

    def load_state_dict(self, state):
        super().load_state_dict(state)
        self.policy.set_q(self.q)


class DoubleDQN(DQN):
    """Target ``r + gamma Q_target(s', argmax_b Q_online(s', b))``."""

    def _next_values(self, next_states):
        best = np.argmax(self.q.predict(next_states), axis=1)
        q_target = self.target.predict(next_states)
        return q_target[np.arange(len(best)), best]


class AveragedDQN(DQN):
    """Bootstraps on the mean of the last ``n_targets`` target snapshots.

    Snapshots are kept in a ring: each scheduled update overwrites the
    oldest one with the online weights.
    """

    def __init__(self, mdp_info, policy, q, n_targets=10, **params):
        super().__init__(mdp_info, policy, q, n_targets=n_targets, **params)
