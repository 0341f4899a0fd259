"""Feature maps for linear approximators.

Every map accepts a single input vector or a batch (one input per row) and
exposes its output dimension through ``size``.
"""
from itertools import combinations_with_replacement

import numpy as np

from rlframe.errors import DomainError


class Features:
    tag = None

    @property
    def size(self):
        raise NotImplementedError

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if x.ndim <= 1:
            return self._phi(np.atleast_1d(x)[None])[0]
        return self._phi(x)

    def _phi(self, x):
        raise NotImplementedError

    def _check(self, x, dim):
        if x.shape[1] != dim:
            raise DomainError(f'{type(self).__name__} expects inputs of dimension {dim}, got {x.shape[1]}')


class Identity(Features):
    """The input itself, optionally followed by a constant 1."""
    tag = 1

    def __init__(self, input_dim, bias=True):
        self.input_dim = int(input_dim)
        self.bias = bool(bias)

    @property
    def size(self):
        return self.input_dim + self.bias

    def _phi(self, x):
        self._check(x, self.input_dim)
        if self.bias:
            return np.hstack([x, np.ones((x.shape[0], 1))])
        return x.copy()

    def to_arrays(self):
        return [np.array([self.input_dim, self.bias], dtype=float)]

    @classmethod
    def from_arrays(cls, arrays):
        dim, bias = arrays[0]
        return cls(int(dim), bool(bias))


class OneHot(Features):
    """Indicator of a discrete input ``i`` among ``n`` values."""
    tag = 2

    def __init__(self, n):
        self.n = int(n)

    @property
    def size(self):
        return self.n

    def _phi(self, x):
        self._check(x, 1)
        idx = x[:, 0].astype(int)
        if np.any((idx < 0) | (idx >= self.n)):
            raise DomainError(f'OneHot index outside [0, {self.n})')
        out = np.zeros((x.shape[0], self.n))
        out[np.arange(x.shape[0]), idx] = 1.
        return out

    def to_arrays(self):
        return [np.array([self.n], dtype=float)]

    @classmethod
    def from_arrays(cls, arrays):
        return cls(int(arrays[0][0]))


class Polynomial(Features):
    """All monomials of the inputs up to ``degree``, constant term first."""
    tag = 3

    def __init__(self, input_dim, degree):
        self.input_dim = int(input_dim)
        self.degree = int(degree)
        self._terms = [c for d in range(self.degree + 1)
                       for c in combinations_with_replacement(range(self.input_dim), d)]

    @property
    def size(self):
        return len(self._terms)

    def _phi(self, x):
        self._check(x, self.input_dim)
        out = np.ones((x.shape[0], self.size))
        for j, term in enumerate(self._terms):
            for i in term:
                out[:, j] *= x[:, i]
        return out

    def to_arrays(self):
        return [np.array([self.input_dim, self.degree], dtype=float)]

    @classmethod
    def from_arrays(cls, arrays):
        dim, degree = arrays[0]
        return cls(int(dim), int(degree))


class RadialBasis(Features):
    """Gaussian bumps ``exp(-0.5 * sum(((x - c) / w)**2))``, one per center."""
    tag = 4

    def __init__(self, centers, widths):
        self.centers = np.atleast_2d(np.asarray(centers, dtype=float))
        self.widths = np.broadcast_to(np.asarray(widths, dtype=float), self.centers.shape).copy()
        if np.any(self.widths <= 0):
            raise DomainError('RBF widths must be positive')

    @classmethod
    def uniform_grid(cls, n_per_dim, low, high):
        low = np.asarray(low, dtype=float)
        high = np.asarray(high, dtype=float)
        n = np.broadcast_to(np.asarray(n_per_dim, dtype=int), low.shape)
        axes = [np.linspace(lo, hi, k) for lo, hi, k in zip(low, high, n)]
        centers = np.stack(np.meshgrid(*axes, indexing='ij'), axis=-1).reshape(-1, low.size)
        widths = (high - low) / np.maximum(n - 1, 1)
        return cls(centers, widths)

    @property
    def size(self):
        return self.centers.shape[0]

    def _phi(self, x):
        self._check(x, self.centers.shape[1])
        z = (x[:, None, :] - self.centers[None]) / self.widths[None]
        return np.exp(-0.5 * np.sum(z ** 2, axis=2))

    def to_arrays(self):
        return [self.centers, self.widths]

    @classmethod
    def from_arrays(cls, arrays):
        return cls(arrays[0], arrays[1])


class Tiles(Features):
    """Binary tile coding with ``n_tilings`` offset grids over a box.

    Each tiling covers the box with ``n_tiles`` tiles per dimension plus one
    extra row for the offset, and tiling ``i`` is shifted by
    ``i * (1, 3, 5, ...) / n_tilings`` tile widths. Inputs are clipped to the
    box, so every input activates exactly one tile per tiling.
    """
    tag = 5

    def __init__(self, n_tilings, n_tiles, low, high):
        self.n_tilings = int(n_tilings)
        self.low = np.atleast_1d(np.asarray(low, dtype=float))
        self.high = np.atleast_1d(np.asarray(high, dtype=float))
        if not np.all(np.isfinite(self.low) & np.isfinite(self.high)) or np.any(self.high <= self.low):
            raise DomainError('tile coding needs finite bounds with low < high')
        self.n_tiles = np.broadcast_to(np.asarray(n_tiles, dtype=int), self.low.shape).copy()
        dim = self.low.size
        self._width = (self.high - self.low) / self.n_tiles
        displacement = 2 * np.arange(dim) + 1
        self._offsets = (np.arange(self.n_tilings)[:, None] * displacement[None] / self.n_tilings) % 1.
        self._grid = tuple(self.n_tiles + 1)
        self._per_tiling = int(np.prod(self._grid))

    @property
    def size(self):
        return self.n_tilings * self._per_tiling

    def active(self, x):
        """Indices of the active tiles, one column per tiling."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        self._check(x, self.low.size)
        u = (np.clip(x, self.low, self.high) - self.low) / self._width
        coords = np.floor(u[:, None, :] + self._offsets[None]).astype(int)
        coords = np.minimum(coords, self.n_tiles)
        flat = np.ravel_multi_index(tuple(np.moveaxis(coords, -1, 0)), self._grid)
        return flat + np.arange(self.n_tilings)[None] * self._per_tiling

    def _phi(self, x):
        idx = self.active(x)
        out = np.zeros((x.shape[0], self.size))
        np.put_along_axis(out, idx, 1., axis=1)
        return out

    def to_arrays(self):
        return [np.array([self.n_tilings], dtype=float), self.n_tiles.astype(float), self.low, self.high]

    @classmethod
    def from_arrays(cls, arrays):
        return cls(int(arrays[0][0]), arrays[1].astype(int), arrays[2], arrays[3])


FEATURE_TYPES = {cls.tag: cls for cls in (Identity, OneHot, Polynomial, RadialBasis, Tiles)}
