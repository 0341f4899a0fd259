"""Scalar parameters that may decay with time or with per-index visits.

Calling a schedule returns the current value and advances it; ``value``
only peeks. Indices are arbitrary tuples, typically ``(state, action)``.
"""
import numpy as np

from rlframe.errors import DomainError


def _key(idx):
    out = []
    for i in idx:
        arr = np.asarray(i)
        if arr.size == 1 and float(arr.ravel()[0]).is_integer():
            out.append(int(arr.ravel()[0]))
        else:
            out.append(arr.tobytes())
    return tuple(out)


class Fixed:
    def __init__(self, value):
        self.v = float(value)

    def value(self, *idx):
        return self.v

    def __call__(self, *idx):
        return self.v


class LinearDecay:
    """Linear interpolation from ``v0`` to ``v_min`` over ``n_steps`` calls."""

    def __init__(self, v0, v_min, n_steps):
        if v_min < 0 or v_min > v0:
            raise DomainError('LinearDecay needs 0 <= v_min <= v0')
        self.v0 = float(v0)
        self.v_min = float(v_min)
        self.n_steps = max(int(n_steps), 1)
        self.t = 0

    def value(self, *idx):
        frac = min(self.t / self.n_steps, 1.)
        return max(self.v0 + frac * (self.v_min - self.v0), self.v_min)

    def __call__(self, *idx):
        v = self.value()
        self.t += 1
        return v


class VisitDecay:
    """``max(v0 / n**exponent, v_min)`` where ``n`` counts visits of the index.

    The first call for an index counts as its first visit, so it returns
    ``v0``.
    """

    def __init__(self, v0, exponent=1., v_min=0.):
        if exponent <= 0 or v_min < 0:
            raise DomainError('VisitDecay needs a positive exponent and v_min >= 0')
        self.v0 = float(v0)
        self.exponent = float(exponent)
        self.v_min = float(v_min)
        self.counts = {}

    def visits(self, *idx):
        return self.counts.get(_key(idx), 0)

    def value(self, *idx):
        n = max(self.visits(*idx), 1)
        return max(self.v0 / n ** self.exponent, self.v_min)

    def __call__(self, *idx):
        k = _key(idx)
        self.counts[k] = self.counts.get(k, 0) + 1
        return max(self.v0 / self.counts[k] ** self.exponent, self.v_min)


def as_schedule(value):
    if isinstance(value, (Fixed, LinearDecay, VisitDecay)):
        return value
    return Fixed(value)
