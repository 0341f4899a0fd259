"""Function approximators sharing one ``predict``/``fit`` interface.

All regressors map an input (single vector or a batch with one input per
row) to ``output_dim`` real outputs. ``fit`` accepts either a full target
matrix or, with ``output_index``, one target per sample for the selected
output only; the other outputs are left out of the objective.
"""
import numpy as np

from rlframe.errors import DomainError, UnsupportedOperationError
from rlframe.seeding import as_rng


def _check_fit_args(n, y, sample_weight):
    if n == 0:
        raise DomainError('cannot fit on an empty input set')
    if len(y) != n:
        raise DomainError(f'{n} inputs but {len(y)} targets')
    if sample_weight is not None:
        sample_weight = np.asarray(sample_weight, dtype=float)
        if sample_weight.shape != (n,) or np.any(sample_weight < 0):
            raise DomainError('sample weights must be a nonnegative vector, one per input')
    return sample_weight


class Tabular:
    """Lookup table indexed by a discrete input, one column per output."""

    def __init__(self, n_inputs, output_dim=1):
        self.table = np.zeros((int(n_inputs), int(output_dim)))

    @property
    def n_inputs(self):
        return self.table.shape[0]

    @property
    def output_dim(self):
        return self.table.shape[1]

    def _indices(self, x):
        x = np.asarray(x)
        single = x.ndim <= 1 and x.size == 1
        if x.ndim == 2:
            if x.shape[1] != 1:
                raise DomainError('tabular inputs must be scalar indices')
            x = x[:, 0]
        idx = np.atleast_1d(x).astype(int)
        if np.any((idx < 0) | (idx >= self.n_inputs)):
            raise DomainError(f'table index outside [0, {self.n_inputs})')
        return idx, single

    def predict(self, x):
        idx, single = self._indices(x)
        out = self.table[idx]
        return out[0] if single else out

    def fit(self, x, y, output_index=None, sample_weight=None, average=False):
        """Write targets into the indexed cells.

        By default cells are assigned in order, so later duplicates win.
        With ``average=True`` each touched cell receives the (weighted) mean
        of all its targets. Zero-weight samples are ignored in that mode.
        """
        idx, _ = self._indices(x)
        y = np.asarray(y, dtype=float)
        sample_weight = _check_fit_args(len(idx), y, sample_weight)
        if output_index is None:
            cols = None
            y = y.reshape(len(idx), self.output_dim)
        else:
            cols = np.broadcast_to(np.asarray(output_index, dtype=int).ravel(), idx.shape)
        if not average:
            if cols is None:
                self.table[idx] = y
            else:
                for i, c, v in zip(idx, cols, y):
                    self.table[i, c] = v
            return self
        w = np.ones(len(idx)) if sample_weight is None else sample_weight
        if cols is None:
            num = np.zeros_like(self.table)
            den = np.zeros(self.n_inputs)
            np.add.at(num, idx, w[:, None] * y)
            np.add.at(den, idx, w)
            hit = den > 0
            self.table[hit] = num[hit] / den[hit, None]
        else:
            num = np.zeros_like(self.table)
            den = np.zeros_like(self.table)
            np.add.at(num, (idx, cols), w * y)
            np.add.at(den, (idx, cols), w)
            hit = den > 0
            self.table[hit] = num[hit] / den[hit]
        return self

    def weights_size(self):
        return self.table.size

    def get_weights(self):
        return self.table.ravel().copy()

    def set_weights(self, w):
        self.table = np.asarray(w, dtype=float).reshape(self.table.shape).copy()


class Linear:
    """Linear model ``W @ features(x)``; fitted by (weighted) least squares.

    Degenerate designs resolve to the minimum-norm solution.
    """

    def __init__(self, features, output_dim=1):
        self.features = features
        self.weights = np.zeros((int(output_dim), features.size))

    @property
    def output_dim(self):
        return self.weights.shape[0]

    def predict(self, x):
        phi = self.features(x)
        if phi.ndim == 1:
            return self.weights @ phi
        return phi @ self.weights.T

    def fit(self, x, y, output_index=None, sample_weight=None):
        phi = np.atleast_2d(self.features(x))
        n = phi.shape[0]
        y = np.asarray(y, dtype=float)
        sample_weight = _check_fit_args(n, y, sample_weight)
        sw = np.ones(n) if sample_weight is None else np.sqrt(sample_weight)
        if output_index is None:
            y = y.reshape(n, self.output_dim)
            sol = np.linalg.lstsq(phi * sw[:, None], y * sw[:, None], rcond=None)[0]
            self.weights = sol.T.copy()
            return self
        cols = np.broadcast_to(np.asarray(output_index, dtype=int).ravel(), (n,))
        for c in np.unique(cols):
            rows = cols == c
            a = phi[rows] * sw[rows, None]
            self.weights[c] = np.linalg.lstsq(a, y[rows] * sw[rows], rcond=None)[0]
        return self

    def weights_size(self):
        return self.weights.size

    def get_weights(self):
        return self.weights.ravel().copy()

    def set_weights(self, w):
        self.weights = np.asarray(w, dtype=float).reshape(self.weights.shape).copy()


_ACTIVATIONS = ('relu', 'tanh')
_OPTIMIZERS = ('sgd', 'rmsprop', 'adam')


class Mlp:
    """Fully connected network trained on squared error.

    Hidden layers use ``activation``, the output layer is linear. Weights are
    He-initialised from ``seed``; biases start at zero.
    """

    def __init__(self, input_dim, output_dim, hidden=(80, 80), activation='relu',
                 optimizer='rmsprop', lr=1e-3, decay=0.95, eps=1e-8, n_epochs=1,
                 batch_size=None, seed=None):
        if activation not in _ACTIVATIONS:
            raise DomainError(f'unknown activation {activation!r}')
        if optimizer not in _OPTIMIZERS:
            raise DomainError(f'unknown optimizer {optimizer!r}')
        self.sizes = [int(input_dim), *[int(h) for h in hidden], int(output_dim)]
        self.activation = activation
        self.optimizer = optimizer
        self.lr = float(lr)
        self.decay = float(decay)
        self.eps = float(eps)
        self.n_epochs = int(n_epochs)
        self.batch_size = None if not batch_size else int(batch_size)
        self._rng = as_rng(seed)
        self.weights = []
        self.biases = []
        for fan_in, fan_out in zip(self.sizes[:-1], self.sizes[1:]):
            self.weights.append(self._rng.normal(0., np.sqrt(2. / fan_in), (fan_in, fan_out)))
            self.biases.append(np.zeros(fan_out))
        self._reset_optimizer()

    @property
    def input_dim(self):
        return self.sizes[0]

    @property
    def output_dim(self):
        return self.sizes[-1]

    def _reset_optimizer(self):
        self._m = [np.zeros_like(p) for p in self.parameters()]
        self._v = [np.zeros_like(p) for p in self.parameters()]
        self._t = 0

    def parameters(self):
        out = []
        for w, b in zip(self.weights, self.biases):
            out += [w, b]
        return out

    def _as_batch(self, x):
        x = np.asarray(x, dtype=float)
        single = x.ndim <= 1
        x = np.atleast_2d(x) if not single else x.reshape(1, -1)
        if x.shape[1] != self.input_dim:
            raise DomainError(f'network expects inputs of dimension {self.input_dim}, got {x.shape[1]}')
        return x, single

    def _forward(self, x):
        acts = [x]
        pre = []
        h = x
        last = len(self.weights) - 1
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            z = h @ w + b
            if i == last:
                h = z
            else:
                pre.append(z)
                h = np.maximum(z, 0.) if self.activation == 'relu' else np.tanh(z)
            acts.append(h)
        return acts, pre

    def predict(self, x):
        x, single = self._as_batch(x)
        out = self._forward(x)[0][-1]
        return out[0] if single else out

    def _targets(self, n, y, output_index):
        y = np.asarray(y, dtype=float)
        if output_index is None:
            return y.reshape(n, self.output_dim), None
        cols = np.broadcast_to(np.asarray(output_index, dtype=int).ravel(), (n,))
        return y.reshape(n), cols

    def _backward(self, x, y, cols, sample_weight):
        acts, pre = self._forward(x)
        n = x.shape[0]
        out = acts[-1]
        if cols is None:
            delta = out - y
        else:
            delta = np.zeros_like(out)
            rows = np.arange(n)
            delta[rows, cols] = out[rows, cols] - y
        if sample_weight is not None:
            delta = delta * sample_weight[:, None]
        delta = delta / n
        grads = [None] * (2 * len(self.weights))
        for i in range(len(self.weights) - 1, -1, -1):
            grads[2 * i] = acts[i].T @ delta
            grads[2 * i + 1] = delta.sum(axis=0)
            if i > 0:
                back = delta @ self.weights[i].T
                if self.activation == 'relu':
                    delta = back * (pre[i - 1] > 0)
                else:
                    delta = back * (1. - acts[i] ** 2)
        return grads

    def gradient(self, x, y, output_index=None, sample_weight=None):
        """Flattened gradient of ``0.5 * (predict(x) - y)**2``.

        For a batch the per-sample gradients are averaged. The layout follows
        ``get_weights``.
        """
        x, _ = self._as_batch(x)
        y, cols = self._targets(x.shape[0], y, output_index)
        return np.concatenate([g.ravel() for g in self._backward(x, y, cols, sample_weight)])

    def _apply(self, grads):
        params = self.parameters()
        self._t += 1
        for p, g, m, v in zip(params, grads, self._m, self._v):
            if self.optimizer == 'sgd':
                p -= self.lr * g
            elif self.optimizer == 'rmsprop':
                v *= self.decay
                v += (1. - self.decay) * g * g
                p -= self.lr * g / (np.sqrt(v) + self.eps)
            else:
                m *= 0.9
                m += 0.1 * g
                v *= 0.999
                v += 0.001 * g * g
                m_hat = m / (1. - 0.9 ** self._t)
                v_hat = v / (1. - 0.999 ** self._t)
                p -= self.lr * m_hat / (np.sqrt(v_hat) + self.eps)

    def fit(self, x, y, output_index=None, sample_weight=None, n_epochs=None, batch_size=None):
        x, _ = self._as_batch(x)
        n = x.shape[0]
        sample_weight = _check_fit_args(n, np.asarray(y), sample_weight)
        y, cols = self._targets(n, y, output_index)
        n_epochs = self.n_epochs if n_epochs is None else int(n_epochs)
        batch_size = batch_size or self.batch_size
        for _ in range(n_epochs):
            if batch_size is None or batch_size >= n:
                batches = [slice(None)]
            else:
                perm = self._rng.permutation(n)
                batches = [perm[i:i + batch_size] for i in range(0, n, batch_size)]
            for b in batches:
                sw = None if sample_weight is None else sample_weight[b]
                c = None if cols is None else cols[b]
                self._apply(self._backward(x[b], y[b], c, sw))
        return self

    def weights_size(self):
        return sum(p.size for p in self.parameters())

    def get_weights(self):
        return np.concatenate([p.ravel() for p in self.parameters()])

    def set_weights(self, w):
        w = np.asarray(w, dtype=float)
        if w.size != self.weights_size():
            raise DomainError(f'expected {self.weights_size()} weights, got {w.size}')
        pos = 0
        for p in self.parameters():
            p[...] = w[pos:pos + p.size].reshape(p.shape)
            pos += p.size


def gradient(regressor, x, y, output_index=None):
    """Parameter gradient of the squared error; defined for networks only."""
    if not isinstance(regressor, Mlp):
        raise UnsupportedOperationError(f'gradient is not defined for {type(regressor).__name__}')
    return regressor.gradient(x, y, output_index)
