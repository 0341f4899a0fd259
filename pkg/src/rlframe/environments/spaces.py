from dataclasses import dataclass

import numpy as np

from rlframe.errors import DomainError


class Discrete:
    """Integer values ``0, ..., n - 1``, carried as arrays of shape ``(1,)``."""

    def __init__(self, n):
        n = int(n)
        if n < 1:
            raise DomainError(f'Discrete space needs n >= 1, got {n}')
        self.n = n

    @property
    def shape(self):
        return (1,)

    @property
    def size(self):
        return self.n

    def contains(self, x):
        x = np.asarray(x)
        if x.size != 1:
            return False
        v = x.ravel()[0]
        if isinstance(v, (bool, np.bool_)) or not float(v).is_integer():
            return False
        return 0 <= v < self.n

    def __eq__(self, other):
        return isinstance(other, Discrete) and other.n == self.n

    def __repr__(self):
        return f'Discrete({self.n})'


class Box:
    """Axis-aligned real box; infinite bounds are allowed."""

    def __init__(self, low, high):
        low = np.atleast_1d(np.asarray(low, dtype=float))
        high = np.atleast_1d(np.asarray(high, dtype=float))
        if low.shape != high.shape or low.ndim != 1:
            raise DomainError('Box bounds must be vectors of equal length')
        if np.any(low > high):
            raise DomainError('Box needs low <= high componentwise')
        self.low = low
        self.high = high

    @property
    def shape(self):
        return self.low.shape

    @property
    def size(self):
        return self.low.size

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != self.low.shape:
            return False
        return bool(np.all(x >= self.low) and np.all(x <= self.high))

    def __eq__(self, other):
        return (isinstance(other, Box) and np.array_equal(other.low, self.low)
                and np.array_equal(other.high, self.high))

    def __repr__(self):
        return f'Box(dim={self.size})'


@dataclass(frozen=True)
class MdpInfo:
    observation_space: object
    action_space: object
    gamma: float
    horizon: int

    def __post_init__(self):
        if not 0 < self.gamma <= 1:
            raise DomainError(f'gamma must lie in (0, 1], got {self.gamma}')
        if int(self.horizon) < 1:
            raise DomainError(f'horizon must be >= 1, got {self.horizon}')
