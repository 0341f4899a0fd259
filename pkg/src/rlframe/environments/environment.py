import numpy as np

from rlframe.environments.spaces import Box, Discrete, MdpInfo
from rlframe.errors import DomainError, StateError
from rlframe.seeding import as_rng


class Environment:
    """Base class: subclasses implement ``_reset`` and ``_step``.

    The public ``reset``/``step`` validate their arguments, keep the episode
    step counter and always hand out fresh read-only arrays.
    """

    def __init__(self, info, seed=None):
        self.info = info
        self.rng = as_rng(seed)
        self._state = None
        self.t = 0

    def seed(self, seed):
        self.rng = as_rng(seed)

    def env_info(self):
        return self.info

    def reset(self, state=None):
        if state is not None:
            state = self._as_state(state)
            if not self.info.observation_space.contains(state):
                raise DomainError(f'initial state {state} outside {self.info.observation_space}')
        self._state = self._reset(state)
        self.t = 0
        return self._emit(self._state)

    def step(self, action):
        if self._state is None:
            raise StateError('step called before reset')
        action = self._as_action(action)
        next_state, reward, absorbing = self._step(self._state, action)
        self._state = next_state
        self.t += 1
        return self._emit(next_state), float(reward), bool(absorbing)

    def render(self):
        return repr(self._state)

    def _as_state(self, x):
        if isinstance(self.info.observation_space, Discrete):
            return np.array([int(np.asarray(x).ravel()[0])])
        return np.asarray(x, dtype=float).copy()

    def _as_action(self, a):
        space = self.info.action_space
        if isinstance(space, Discrete):
            arr = np.asarray(a)
            if not space.contains(arr):
                raise DomainError(f'action {a} outside {space}')
            return int(arr.ravel()[0])
        arr = np.atleast_1d(np.asarray(a, dtype=float))
        if not space.contains(arr):
            raise DomainError(f'action {a} outside {space}')
        return arr

    @staticmethod
    def _emit(state):
        out = np.array(state, copy=True)
        out.setflags(write=False)
        return out

    def _reset(self, state):
        raise NotImplementedError

    def _step(self, state, action):
        raise NotImplementedError


class FiniteMDP(Environment):
    """Discrete MDP defined by an explicit kernel.

    ``p[s, a, s']`` are transition probabilities, ``r[s, a, s']`` expected
    rewards and ``terminal[s']`` marks states whose entry is absorbing.
    """

    def __init__(self, p, r, terminal, initial, gamma, horizon, seed=None):
        p = np.asarray(p, dtype=float)
        n_states, n_actions = p.shape[:2]
        if not np.allclose(p.sum(axis=2), 1.0):
            raise DomainError('transition rows must sum to 1')
        self.p = p
        self.r = np.asarray(r, dtype=float)
        self.terminal = np.asarray(terminal, dtype=bool)
        self.initial = np.asarray(initial, dtype=float)
        self._cum_p = np.cumsum(p, axis=2)
        self._cum_p[..., -1] = 1.0
        self._cum_init = np.cumsum(self.initial)
        self._cum_init[-1] = 1.0
        info = MdpInfo(Discrete(n_states), Discrete(n_actions), gamma, horizon)
        super().__init__(info, seed)

    @property
    def n_states(self):
        return self.p.shape[0]

    @property
    def n_actions(self):
        return self.p.shape[1]

    def _reset(self, state):
        if state is not None:
            return state
        return np.array([int(np.searchsorted(self._cum_init, self.rng.random(), side='right'))])

    def _step(self, state, action):
        s = int(state[0])
        next_s = int(np.searchsorted(self._cum_p[s, action], self.rng.random(), side='right'))
        reward = self._reward(s, action, next_s)
        return np.array([next_s]), reward, self.terminal[next_s]

    def _reward(self, s, a, next_s):
        return self.r[s, a, next_s]
