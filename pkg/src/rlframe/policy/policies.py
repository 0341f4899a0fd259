import numpy as np

from rlframe.errors import DomainError, UnsupportedOperationError
from rlframe.policy.schedules import as_schedule
from rlframe.seeding import as_rng


class Policy:
    """Common machinery: an owned generator and an evaluation switch.

    In evaluation mode value-based policies act greedily and the Gaussian
    policy returns its mean; schedules are not advanced.
    """

    def __init__(self, seed=None):
        self.rng = as_rng(seed)
        self.evaluation = False

    def seed(self, seed):
        self.rng = as_rng(seed)

    def reset(self):
        pass


class _DiscretePolicy(Policy):
    def __init__(self, q=None, seed=None):
        super().__init__(seed)
        self.q = q

    def set_q(self, q):
        self.q = q

    def _values(self, state):
        return np.asarray(self.q.predict(state), dtype=float)

    def greedy(self, q_values):
        best = np.flatnonzero(q_values == q_values.max())
        if len(best) == 1:
            return int(best[0])
        return int(best[self.rng.integers(len(best))])

    def draw_action(self, state):
        q_values = self._values(state)
        if self.evaluation:
            return np.array([self.greedy(q_values)])
        p = self._probabilities(state, q_values, advance=True)
        return np.array([int(self.rng.choice(len(p), p=p))])

    def probabilities(self, state):
        """Exact action distribution in ``state`` at the current parameter."""
        q_values = self._values(state)
        if self.evaluation:
            best = q_values == q_values.max()
            return best / best.sum()
        return self._probabilities(state, q_values, advance=False)


class EpsGreedy(_DiscretePolicy):
    """Greedy in ``q`` with probability ``1 - epsilon``, uniform otherwise.

    Ties among maximizers are broken uniformly at random.
    """

    def __init__(self, epsilon, q=None, seed=None):
        super().__init__(q, seed)
        self.epsilon = as_schedule(epsilon)

    def _probabilities(self, state, q_values, advance):
        eps = self.epsilon(state) if advance else self.epsilon.value(state)
        n = len(q_values)
        best = q_values == q_values.max()
        return eps / n + (1. - eps) * best / best.sum()

    def draw_action(self, state):
        q_values = self._values(state)
        if self.evaluation:
            return np.array([self.greedy(q_values)])
        eps = self.epsilon(state)
        if eps > 0 and self.rng.random() < eps:
            return np.array([int(self.rng.integers(len(q_values)))])
        return np.array([self.greedy(q_values)])


class Boltzmann(_DiscretePolicy):
    """Softmax of ``beta * q``; ``beta`` is an inverse temperature."""

    def __init__(self, beta, q=None, seed=None):
        super().__init__(q, seed)
        self.beta = as_schedule(beta)

    def _probabilities(self, state, q_values, advance):
        beta = self.beta(state) if advance else self.beta.value(state)
        z = beta * (q_values - q_values.max())
        e = np.exp(z)
        return e / e.sum()


class GaussianLinear(Policy):
    """Gaussian actions with mean ``theta @ features(s)`` and fixed ``sigma``.

    ``theta`` has one row per action dimension; the flattened weight vector
    is ``theta.ravel()``.
    """

    def __init__(self, features, action_dim=1, sigma=1., seed=None):
        super().__init__(seed)
        self.features = features
        self.sigma = np.broadcast_to(np.asarray(sigma, dtype=float), (int(action_dim),)).copy()
        self.theta = np.zeros((int(action_dim), features.size))

    @property
    def action_dim(self):
        return self.theta.shape[0]

    def mean(self, state):
        return self.theta @ self.features(state)

    def draw_action(self, state):
        mu = self.mean(state)
        if self.evaluation:
            return mu
        return mu + self.sigma * self.rng.standard_normal(self.action_dim)

    def log_prob(self, state, action):
        if np.any(self.sigma <= 0):
            raise DomainError('Gaussian policy needs sigma > 0')
        z = (np.asarray(action, dtype=float) - self.mean(state)) / self.sigma
        return float(-0.5 * np.sum(z ** 2) - np.sum(np.log(self.sigma)) - 0.5 * self.action_dim * np.log(2 * np.pi))

    def diff_log(self, state, action):
        """Gradient of ``log pi(a | s)`` with respect to ``theta.ravel()``."""
        if np.any(self.sigma <= 0):
            raise DomainError('Gaussian policy needs sigma > 0')
        phi = self.features(state)
        err = (np.asarray(action, dtype=float) - self.theta @ phi) / self.sigma ** 2
        return np.outer(err, phi).ravel()

    def probabilities(self, state):
        raise UnsupportedOperationError('a continuous policy has no probability vector')

    def weights_size(self):
        return self.theta.size

    def get_weights(self):
        return self.theta.ravel().copy()

    def set_weights(self, w):
        self.theta = np.asarray(w, dtype=float).reshape(self.theta.shape).copy()
