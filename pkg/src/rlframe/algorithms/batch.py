import numpy as np

from rlframe.algorithms.base import Agent
from rlframe.approximation import Linear, Tabular
from rlframe.core import parse_dataset
from rlframe.errors import DomainError


class FQI(Agent):
    """Fitted Q-iteration.

    Each call to ``fit`` runs ``n_iterations`` regressions starting from the
    zero function: iteration ``k`` fits ``r + gamma max_b Q_{k-1}(s', b)``
    (just ``r`` on absorbing transitions). A tabular Q is fitted by per-cell
    averaging.
    """

    fit_mode = 'batch'

    def __init__(self, mdp_info, policy, q, n_iterations, fit_params=None, seed=None):
        if int(n_iterations) < 1:
            raise DomainError('FQI needs at least one iteration')
        super().__init__(mdp_info, policy, seed)
        self.q = q
        self.n_iterations = int(n_iterations)
        self.fit_params = dict(fit_params or {})
        if isinstance(q.model, Tabular):
            self.fit_params.setdefault('average', True)
        policy.set_q(q)

    def fit(self, dataset):
        if not dataset:
            raise DomainError('FQI needs a nonempty dataset')
        states, actions, rewards, next_states, absorbing, _ = parse_dataset(dataset)
        gamma = self.mdp_info.gamma
        y = rewards
        for k in range(self.n_iterations):
            if k > 0:
                y = rewards + gamma * np.max(self.q.predict(next_states), axis=1) * ~absorbing
            self.q.fit(states, actions, y, **self.fit_params)

    def state_dict(self):
        return {'q': self.q}

    def load_state_dict(self, state):
        super().load_state_dict(state)
        self.policy.set_q(self.q)


class LSPI(Agent):
    """Least-squares policy iteration on a linear Q.

    The features of ``(s, a)`` are the state features placed in the block of
    action ``a``. Every iteration solves the LSTD-Q system
    ``A w = b`` with ``A = sum phi (phi - gamma phi')^T`` and
    ``b = sum phi r`` by minimum-norm least squares, where ``phi'`` uses the
    greedy action of the current weights (ties broken at random, so the
    all-zero start acts uniformly). Iteration stops once
    ``max|w_new - w| < tol`` or after ``max_iterations``.
    """

    fit_mode = 'batch'

    def __init__(self, mdp_info, policy, q, tol=1e-4, max_iterations=50, seed=None):
        if not isinstance(q.model, Linear):
            raise DomainError('LSPI needs a linear Q')
        if tol <= 0:
            raise DomainError('LSPI tolerance must be positive')
        super().__init__(mdp_info, policy, seed)
        self.q = q
        self.tol = float(tol)
        self.max_iterations = int(max_iterations)
        self.n_iterations_run = 0
        self.converged = False
        policy.set_q(q)

    def _block(self, phi, actions):
        n, d = phi.shape
        out = np.zeros((n, self.q.n_actions * d))
        for a in range(self.q.n_actions):
            rows = actions == a
            out[rows, a * d:(a + 1) * d] = phi[rows]
        return out

    def greedy(self, phi, weights):
        values = phi @ weights.T
        best = values == values.max(axis=1, keepdims=True)
        noise = self.rng.random(values.shape)
        return np.argmax(np.where(best, noise, -1.), axis=1)

    def lstdq(self, phi_sa, phi_next, rewards, absorbing, weights):
        gamma = self.mdp_info.gamma
        a_next = self.greedy(phi_next, weights)
        phi_next_sa = self._block(phi_next, a_next) * ~absorbing[:, None]
        a = phi_sa.T @ (phi_sa - gamma * phi_next_sa)
        b = phi_sa.T @ rewards
        return np.linalg.lstsq(a, b, rcond=None)[0].reshape(weights.shape)

    def fit(self, dataset):
        if not dataset:
            raise DomainError('LSPI needs a nonempty dataset')
        states, actions, rewards, next_states, absorbing, _ = parse_dataset(dataset)
        features = self.q.model.features
        phi_sa = self._block(np.atleast_2d(features(states)), actions.ravel().astype(int))
        phi_next = np.atleast_2d(features(next_states))
        w = self.q.model.weights.copy()
        self.converged = False
        for i in range(self.max_iterations):
            w_new = self.lstdq(phi_sa, phi_next, rewards, absorbing, w)
            diff = np.max(np.abs(w_new - w))
            w = w_new
            self.n_iterations_run = i + 1
            if diff < self.tol:
                self.converged = True
                break
        self.q.model.weights = w

    def state_dict(self):
        return {'q': self.q}

    def load_state_dict(self, state):
        super().load_state_dict(state)
        self.policy.set_q(self.q)
