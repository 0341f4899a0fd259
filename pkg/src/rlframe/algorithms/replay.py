import numpy as np

from rlframe.errors import DomainError, StateError


class ReplayBuffer:
    """FIFO ring of transitions with uniform sampling with replacement."""

    def __init__(self, capacity):
        if int(capacity) < 1:
            raise DomainError('replay capacity must be >= 1')
        self.capacity = int(capacity)
        self._items = [None] * self.capacity
        self._arrays = None
        self._next = 0
        self.size = 0

    def __len__(self):
        return self.size

    def push(self, t):
        if self._arrays is None:
            self._arrays = (np.zeros((self.capacity,) + np.shape(t.state)),
                            np.zeros(self.capacity, dtype=int),
                            np.zeros(self.capacity),
                            np.zeros((self.capacity,) + np.shape(t.next_state)),
                            np.zeros(self.capacity, dtype=bool))
        states, actions, rewards, next_states, absorbing = self._arrays
        i = self._next
        self._items[i] = t
        states[i] = t.state
        actions[i] = int(np.asarray(t.action).ravel()[0])
        rewards[i] = t.reward
        next_states[i] = t.next_state
        absorbing[i] = t.absorbing
        self._next = (i + 1) % self.capacity
        self.size = min(self.size + 1, self.capacity)

    def add(self, dataset):
        for t in dataset:
            self.push(t)

    def contents(self):
        """Stored transitions, oldest first."""
        start = self._next if self.size == self.capacity else 0
        return [self._items[(start + k) % self.capacity] for k in range(self.size)]

    def _indices(self, n, rng):
        if self.size == 0:
            raise StateError('cannot sample from an empty replay buffer')
        return rng.integers(0, self.size, size=int(n))

    def sample(self, n, rng):
        return [self._items[i] for i in self._indices(n, rng)]

    def sample_arrays(self, n, rng):
        """Same draw as ``sample`` but as column arrays
        ``(states, actions, rewards, next_states, absorbing)``."""
        idx = self._indices(n, rng)
        return tuple(a[idx] for a in self._arrays)
