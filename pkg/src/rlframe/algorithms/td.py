"""Online temporal-difference agents on tabular or linear action values.

Every update uses the step size ``alpha(s, a)`` of the visited pair and a
zero bootstrap term when the transition is absorbing.
"""
import copy

import numpy as np
from scipy.special import ndtr

from rlframe.algorithms.base import Agent
from rlframe.approximation import Linear, Tabular
from rlframe.errors import DomainError
from rlframe.policy import as_schedule


class TD(Agent):
    def __init__(self, mdp_info, policy, q, alpha, seed=None):
        super().__init__(mdp_info, policy, seed)
        self.q = q
        self.alpha = as_schedule(alpha)
        policy.set_q(q)

    def fit(self, dataset):
        for t in dataset:
            self._update(t.state, int(t.action[0]), t.reward, t.next_state, t.absorbing)

    def state_dict(self):
        return {'q': self.q}

    def load_state_dict(self, state):
        super().load_state_dict(state)
        self.policy.set_q(self.q)

    def _update(self, s, a, r, s_next, absorbing):
        raise NotImplementedError


class QLearning(TD):
    def _update(self, s, a, r, s_next, absorbing):
        q_next = 0. if absorbing else np.max(self.q.predict(s_next))
        q_sa = self.q.predict(s, a)[0]
        self.q.td_update(s, a, self.alpha(s, a) * (r + self.mdp_info.gamma * q_next - q_sa))


class DoubleQLearning(TD):
    """Two independent estimates; a fair coin picks the one updated.

    The picked table chooses the next action and the other one evaluates
    it. The behaviour policy sees the mean of both tables.
    """

    def __init__(self, mdp_info, policy, q, alpha, seed=None):
        if q.n_models != 2:
            raise DomainError('double Q-learning needs a two-member QRegressor')
        super().__init__(mdp_info, policy, q, alpha, seed)
        self.alphas = [self.alpha, copy.deepcopy(self.alpha)]
        self.update_counts = np.zeros(2, dtype=int)

    def _update(self, s, a, r, s_next, absorbing):
        i = int(self.rng.random() < 0.5)
        other = 1 - i
        if absorbing:
            q_next = 0.
        else:
            picked = self.q.predict(s_next, idx=i)
            best = np.flatnonzero(picked == picked.max())
            b = best[self.rng.integers(len(best))] if len(best) > 1 else best[0]
            q_next = self.q.predict(s_next, idx=other)[b]
        q_sa = self.q.predict(s, a, idx=i)[0]
        self.q.td_update(s, a, self.alphas[i](s, a) * (r + self.mdp_info.gamma * q_next - q_sa), idx=i)
        self.update_counts[i] += 1

    def state_dict(self):
        return {'q': self.q, 'update_counts': self.update_counts.astype(float)}

    def load_state_dict(self, state):
        state = dict(state)
        if 'update_counts' in state:
            state['update_counts'] = np.asarray(state['update_counts']).astype(int)
        super().load_state_dict(state)


def argmax_probabilities(means, stds, n_points=11):
    """``P(action b has the largest value)`` for independent Gaussians.

    Each probability is a Gauss-Hermite quadrature of the density of ``b``
    times the CDFs of the other actions; the result is renormalised so it
    sums to one. Zero standard deviations are treated as point masses.
    """
    means = np.asarray(means, dtype=float)
    stds = np.asarray(stds, dtype=float)
    n = len(means)
    nodes, h = np.polynomial.hermite.hermgauss(n_points)
    x = means[:, None] + np.sqrt(2.) * stds[:, None] * nodes[None]
    diff = x[:, :, None] - means[None, None, :]
    with np.errstate(divide='ignore', invalid='ignore'):
        cdf = ndtr(diff / stds[None, None, :])
    point = stds[None, None, :] == 0
    cdf = np.where(point, (diff > 0) + 0.5 * (diff == 0), cdf)
    cdf[np.arange(n), :, np.arange(n)] = 1.
    w = np.prod(cdf, axis=2) @ h / np.sqrt(np.pi)
    total = w.sum()
    if not np.isfinite(total) or total <= 0:
        w = (means == means.max()).astype(float)
        total = w.sum()
    return w / total


class WeightedQLearning(TD):
    """Bootstrap on a probability-weighted average of next-state values.

    The weight of action ``b`` is the probability that it is the maximum
    under independent Gaussians centred on ``Q(s', b)`` with the variance of
    the mean of the targets seen at ``(s', b)``. Pairs with fewer than two
    samples use ``prior_variance``. Tabular values only.
    """

    def __init__(self, mdp_info, policy, q, alpha, prior_variance=1e4, n_points=11, seed=None):
        if not isinstance(q.model, Tabular):
            raise DomainError('weighted Q-learning keeps per-pair statistics and needs a tabular Q')
        super().__init__(mdp_info, policy, q, alpha, seed)
        shape = q.model.table.shape
        self.prior_variance = float(prior_variance)
        self.n_points = int(n_points)
        self.counts = np.zeros(shape)
        self.target_mean = np.zeros(shape)
        self.target_m2 = np.zeros(shape)

    def next_weights(self, s_next):
        i = int(s_next[0])
        n = self.counts[i]
        var = np.where(n >= 2, self.target_m2[i] / np.maximum(n - 1, 1), self.prior_variance)
        return argmax_probabilities(self.q.predict(s_next), np.sqrt(var / np.maximum(n, 1)), self.n_points)

    def _update(self, s, a, r, s_next, absorbing):
        if absorbing:
            q_next = 0.
        else:
            q_next = float(self.next_weights(s_next) @ self.q.predict(s_next))
        target = r + self.mdp_info.gamma * q_next
        i = int(s[0])
        self.counts[i, a] += 1
        delta = target - self.target_mean[i, a]
        self.target_mean[i, a] += delta / self.counts[i, a]
        self.target_m2[i, a] += delta * (target - self.target_mean[i, a])
        q_sa = self.q.predict(s, a)[0]
        self.q.td_update(s, a, self.alpha(s, a) * (target - q_sa))

    def state_dict(self):
        return {'q': self.q, 'counts': self.counts, 'target_mean': self.target_mean,
                'target_m2': self.target_m2}


class SpeedyQLearning(TD):
    """Two-iterate recursion

    ``Q_new = Q + a (T Q_prev - Q) + (1 - a) (T Q - T Q_prev)``

    where ``T`` is the sampled Bellman optimality operator and ``Q_prev`` is
    the estimate before the latest update.
    """

    def __init__(self, mdp_info, policy, q, alpha, seed=None):
        super().__init__(mdp_info, policy, q, alpha, seed)
        self.q_old = copy.deepcopy(q)

    def _update(self, s, a, r, s_next, absorbing):
        gamma = self.mdp_info.gamma
        if absorbing:
            t_old = t_cur = r
        else:
            t_old = r + gamma * np.max(self.q_old.predict(s_next))
            t_cur = r + gamma * np.max(self.q.predict(s_next))
        alpha = self.alpha(s, a)
        q_sa = self.q.predict(s, a)[0]
        new = q_sa + alpha * (t_old - q_sa) + (1. - alpha) * (t_cur - t_old)
        before = self.q.get_weights()
        self.q.td_update(s, a, new - q_sa)
        self.q_old.set_weights(before)

    def state_dict(self):
        return {'q': self.q, 'q_old': self.q_old}


class RLearning(TD):
    """Average-reward learning; the discount factor is ignored.

    ``rho`` tracks the average reward and moves with step ``beta`` only on
    transitions whose action was greedy in the pre-update estimate.
    """

    def __init__(self, mdp_info, policy, q, alpha, beta, seed=None):
        super().__init__(mdp_info, policy, q, alpha, seed)
        self.beta = as_schedule(beta)
        self.rho = 0.

    def _update(self, s, a, r, s_next, absorbing):
        q_s = self.q.predict(s)
        q_sa = q_s[a]
        max_s = np.max(q_s)
        max_next = 0. if absorbing else np.max(self.q.predict(s_next))
        self.q.td_update(s, a, self.alpha(s, a) * (r - self.rho + max_next - q_sa))
        if q_sa == max_s:
            self.rho += self.beta(s, a) * (r + max_next - max_s - self.rho)

    def state_dict(self):
        return {'q': self.q, 'rho': self.rho}


class SARSA(TD):
    """On-policy TD: bootstraps on the next action the agent itself takes.

    Inside a fitted batch the next action is read from the following
    transition. For the last transition of a batch it is drawn from the
    policy and remembered, so the next ``draw_action`` returns it.
    """

    def __init__(self, mdp_info, policy, q, alpha, seed=None):
        super().__init__(mdp_info, policy, q, alpha, seed)
        self._next = None

    def draw_action(self, state):
        if self._next is not None:
            cached_state, action = self._next
            self._next = None
            if np.array_equal(cached_state, state):
                return action
        return self.policy.draw_action(state)

    def episode_start(self):
        self._next = None
        super().episode_start()

    def fit(self, dataset):
        for i, t in enumerate(dataset):
            if t.absorbing:
                a_next = None
            elif i + 1 < len(dataset) and not t.last:
                a_next = int(dataset[i + 1].action[0])
            else:
                a_next = int(self.policy.draw_action(t.next_state)[0])
                if not t.last:
                    self._next = (np.array(t.next_state), np.array([a_next]))
            self._sarsa_update(t.state, int(t.action[0]), t.reward, t.next_state, t.absorbing,
                               a_next, t.last)

    def _sarsa_update(self, s, a, r, s_next, absorbing, a_next, last):
        q_next = 0. if absorbing else self.q.predict(s_next, a_next)[0]
        q_sa = self.q.predict(s, a)[0]
        self.q.td_update(s, a, self.alpha(s, a) * (r + self.mdp_info.gamma * q_next - q_sa))


class ExpectedSARSA(TD):
    def _update(self, s, a, r, s_next, absorbing):
        if absorbing:
            q_next = 0.
        else:
            q_next = float(self.policy.probabilities(s_next) @ self.q.predict(s_next))
        q_sa = self.q.predict(s, a)[0]
        self.q.td_update(s, a, self.alpha(s, a) * (r + self.mdp_info.gamma * q_next - q_sa))


class TrueOnlineSARSALambda(SARSA):
    """True online SARSA(lambda) with linear action values.

    With ``phi`` the features of ``(s, a)`` (the state features placed in
    the row of action ``a``), ``Q = w . phi`` and ``Q' = w . phi'``:

        delta = r + gamma Q' - Q
        e     = gamma lambda e + phi - alpha gamma lambda (e . phi) phi
        w    += alpha (delta + Q - Q_old) e - alpha (Q - Q_old) phi
        Q_old = Q'

    The weight step is evaluated as ``alpha delta e + alpha (Q - Q_old)
    (e - phi)``, the same quantity regrouped. Trace and ``Q_old`` are reset
    at every episode start and after the last transition of an episode.
    """

    def __init__(self, mdp_info, policy, q, alpha, lambda_coeff, seed=None):
        if not isinstance(q.model, Linear):
            raise DomainError('true online SARSA(lambda) needs a linear Q')
        super().__init__(mdp_info, policy, q, alpha, seed)
        self.lambda_coeff = float(lambda_coeff)
        self.trace = np.zeros_like(q.model.weights)
        self.q_old = 0.

    def episode_start(self):
        self.trace = np.zeros_like(self.q.model.weights)
        self.q_old = 0.
        super().episode_start()

    def _sarsa_update(self, s, a, r, s_next, absorbing, a_next, last):
        model = self.q.model
        gamma = self.mdp_info.gamma
        phi = np.zeros_like(model.weights)
        phi[a] = model.features(s)
        q_sa = model.weights[a] @ phi[a]
        if absorbing:
            q_next = 0.
        else:
            q_next = model.weights[a_next] @ model.features(s_next)
        alpha = self.alpha(s, a)
        delta = r + gamma * q_next - q_sa
        decay = gamma * self.lambda_coeff
        e = self.trace
        e = decay * e + phi - (alpha * decay * np.sum(e * phi)) * phi
        model.weights += (alpha * delta) * e + (alpha * (q_sa - self.q_old)) * (e - phi)
        self.trace = e
        self.q_old = q_next
        if last:
            self.trace = np.zeros_like(model.weights)
            self.q_old = 0.
