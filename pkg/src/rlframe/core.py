"""Agent/environment interaction loop and dataset utilities.

A dataset is a plain list of ``Transition`` tuples in interaction order.
Every episode in a dataset produced by ``Core`` ends with ``last=True``.
"""
import hashlib
from typing import NamedTuple

import numpy as np

from rlframe.errors import ConfigurationError, UnsupportedOperationError


class Transition(NamedTuple):
    state: np.ndarray
    action: np.ndarray
    reward: float
    next_state: np.ndarray
    absorbing: bool
    last: bool


def _frozen(x):
    arr = np.array(x, copy=True)
    arr.setflags(write=False)
    return arr


class Core:
    """Runs an agent in an environment.

    ``learn`` calls ``agent.fit`` each time a quantum of fresh transitions
    (``n_steps_per_fit`` steps or ``n_episodes_per_fit`` episodes) has been
    collected and then hands the same quantum to every callback. A partial
    trailing quantum is returned but never fitted. ``evaluate`` runs the
    same loop without fitting.
    """

    def __init__(self, agent, mdp, callbacks=()):
        self.agent = agent
        self.mdp = mdp
        self.callbacks = list(callbacks)
        self.n_fits = 0

    def learn(self, n_steps=None, n_episodes=None, n_steps_per_fit=None,
              n_episodes_per_fit=None, callbacks=None, render=False):
        _check_counts(n_steps, n_episodes, 'n_steps', 'n_episodes')
        _check_counts(n_steps_per_fit, n_episodes_per_fit, 'n_steps_per_fit', 'n_episodes_per_fit')
        callbacks = self.callbacks if callbacks is None else list(callbacks)
        return self._run(n_steps, n_episodes, n_steps_per_fit, n_episodes_per_fit,
                         callbacks, render, None)

    def evaluate(self, n_steps=None, n_episodes=None, render=False, initial_states=None):
        if initial_states is not None:
            if n_steps is not None or n_episodes is not None:
                raise ConfigurationError('initial_states fixes the episode count by itself')
            n_episodes = len(initial_states)
        _check_counts(n_steps, n_episodes, 'n_steps', 'n_episodes')
        return self._run(n_steps, n_episodes, None, None, (), render, initial_states)

    def _run(self, n_steps, n_episodes, steps_per_fit, episodes_per_fit, callbacks, render,
             initial_states):
        agent, mdp = self.agent, self.mdp
        horizon = mdp.info.horizon
        fitting = steps_per_fit is not None or episodes_per_fit is not None
        dataset = []
        fresh = []
        steps = episodes = 0
        fresh_episodes = 0
        episode_steps = 0
        state = None
        while (steps < n_steps) if n_steps is not None else (episodes < n_episodes):
            if state is None:
                init = None if initial_states is None else initial_states[episodes]
                state = mdp.reset(init)
                agent.episode_start()
                episode_steps = 0
            action = _frozen(agent.draw_action(state))
            next_state, reward, absorbing = mdp.step(action)
            steps += 1
            episode_steps += 1
            last = absorbing or episode_steps >= horizon or (n_steps is not None and steps == n_steps)
            transition = Transition(state, action, reward, next_state, absorbing, last)
            dataset.append(transition)
            if render:
                print(mdp.render())
            state = None if last else next_state
            if last:
                episodes += 1
            if not fitting:
                continue
            fresh.append(transition)
            fresh_episodes += last
            if (steps_per_fit is not None and len(fresh) == steps_per_fit
                    or episodes_per_fit is not None and fresh_episodes == episodes_per_fit):
                quantum = tuple(fresh)
                agent.fit(list(quantum))
                self.n_fits += 1
                for callback in callbacks:
                    callback(quantum)
                fresh = []
                fresh_episodes = 0
        return dataset


def _check_counts(a, b, name_a, name_b):
    if (a is None) == (b is None):
        raise ConfigurationError(f'set exactly one of {name_a} and {name_b}')
    value = a if a is not None else b
    if int(value) < 1:
        raise ConfigurationError(f'{name_a if a is not None else name_b} must be >= 1')


def split_episodes(dataset):
    episodes = []
    current = []
    for t in dataset:
        current.append(t)
        if t.last:
            episodes.append(current)
            current = []
    if current:
        episodes.append(current)
    return episodes


def episode_lengths(dataset):
    return [len(e) for e in split_episodes(dataset)]


def compute_J(dataset, gamma=1.):
    """Discounted return ``sum_t gamma**t r_t`` of each episode."""
    returns = []
    for episode in split_episodes(dataset):
        j = 0.
        discount = 1.
        for t in episode:
            j += discount * t.reward
            discount *= gamma
        returns.append(j)
    return np.array(returns)


def parse_dataset(dataset):
    """Column arrays ``(states, actions, rewards, next_states, absorbing, last)``."""
    if not dataset:
        raise ValueError('empty dataset')
    return (np.array([t.state for t in dataset]), np.array([t.action for t in dataset]),
            np.array([t.reward for t in dataset], dtype=float),
            np.array([t.next_state for t in dataset]),
            np.array([t.absorbing for t in dataset], dtype=bool),
            np.array([t.last for t in dataset], dtype=bool))


def check_dataset(dataset, horizon):
    """Raise ``AssertionError`` if the dataset breaks a structural invariant."""
    length = 0
    for t in dataset:
        length += 1
        assert not t.absorbing or t.last, 'absorbing transition not marked last'
        assert length <= horizon, 'episode longer than the horizon'
        if t.last:
            length = 0
    assert not dataset or dataset[-1].last, 'dataset ends inside an episode'


def dataset_digest(dataset):
    """SHA-256 over every field of every transition, for equality checks."""
    h = hashlib.sha256()
    for t in dataset:
        for field in (t.state, t.action, t.next_state):
            a = np.asarray(field)
            h.update(str(a.dtype).encode())
            h.update(a.tobytes())
        h.update(np.array([t.reward, t.absorbing, t.last], dtype=float).tobytes())
    return h.hexdigest()


def max_q_mean(q, states):
    """Mean over ``states`` of ``max_a Q(s, a)``.

    ``q`` may be a ``QRegressor`` or a value-based agent exposing one as
    ``agent.q``.
    """
    if not hasattr(q, 'predict'):
        q = getattr(q, 'q', None)
        if q is None or not hasattr(q, 'predict'):
            raise UnsupportedOperationError('max_q_mean needs a value-based agent')
    states = np.asarray(states)
    values = q.predict(states)
    return float(np.mean(np.max(values, axis=-1)))
