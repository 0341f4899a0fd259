"""Episodic policy search with a linear Gaussian policy.

All estimators work on the complete episodes of a batch (a trailing episode
without its ``last`` flag is dropped) and use discounted returns
``G = sum_t gamma**t r_t``.
"""
import numpy as np

from rlframe.algorithms.base import Agent
from rlframe.core import split_episodes
from rlframe.errors import DomainError
from rlframe.policy import as_schedule


def complete_episodes(dataset):
    episodes = [e for e in split_episodes(dataset) if e[-1].last]
    if not episodes:
        raise DomainError('the batch contains no complete episode')
    return episodes


def _safe_ratio(num, den):
    out = np.zeros_like(num)
    np.divide(num, den, out=out, where=den != 0)
    return out


class PolicyGradient(Agent):
    fit_mode = 'episodes'

    def __init__(self, mdp_info, policy, learning_rate, n_episodes_per_fit=10, seed=None):
        if int(n_episodes_per_fit) < 1:
            raise DomainError('batch size must be >= 1')
        super().__init__(mdp_info, policy, seed)
        self.learning_rate = as_schedule(learning_rate)
        self.n_episodes_per_fit = int(n_episodes_per_fit)

    def _returns(self, episodes):
        gamma = self.mdp_info.gamma
        return np.array([sum(gamma ** k * t.reward for k, t in enumerate(e)) for e in episodes])

    def _scores(self, episode):
        return np.array([self.policy.diff_log(t.state, t.action) for t in episode])

    def estimate_gradient(self, dataset):
        raise NotImplementedError

    def fit(self, dataset):
        grad = self.estimate_gradient(dataset)
        self.policy.set_weights(self.policy.get_weights() + self.learning_rate() * grad)

    def state_dict(self):
        return {'theta': self.policy.get_weights()}

    def load_state_dict(self, state):
        self.policy.set_weights(state['theta'])


class REINFORCE(PolicyGradient):
    """Likelihood-ratio gradient with the componentwise variance-minimising
    baseline ``b_i = E[S_i^2 G] / E[S_i^2]``, ``S`` the episode score sum."""

    def estimate_gradient(self, dataset):
        episodes = complete_episodes(dataset)
        g = self._returns(episodes)
        s = np.array([self._scores(e).sum(axis=0) for e in episodes])
        s2 = s ** 2
        b = _safe_ratio(np.sum(s2 * g[:, None], axis=0), np.sum(s2, axis=0))
        return np.mean(s * (g[:, None] - b), axis=0)


class GPOMDP(PolicyGradient):
    """Per-step likelihood-ratio gradient: the discounted reward of step
    ``t`` is credited to the scores of steps ``0..t`` only, with a separate
    componentwise optimal baseline for every ``t``."""

    def estimate_gradient(self, dataset):
        episodes = complete_episodes(dataset)
        gamma = self.mdp_info.gamma
        n = len(episodes)
        horizon = max(len(e) for e in episodes)
        dim = self.policy.weights_size()
        cum = np.zeros((n, horizon, dim))
        rew = np.zeros((n, horizon))
        alive = np.zeros((n, horizon), dtype=bool)
        for i, e in enumerate(episodes):
            cum[i, :len(e)] = np.cumsum(self._scores(e), axis=0)
            rew[i, :len(e)] = [gamma ** k * t.reward for k, t in enumerate(e)]
            alive[i, :len(e)] = True
        c2 = cum ** 2
        b = _safe_ratio(np.sum(c2 * rew[:, :, None], axis=0), np.sum(c2, axis=0))
        terms = cum * (rew[:, :, None] - b[None]) * alive[:, :, None]
        return terms.sum(axis=1).mean(axis=0)


class ENAC(PolicyGradient):
    """Episodic natural actor-critic: least squares of the returns on the
    episode score sums plus a constant; the score block is the natural
    gradient."""

    regularization = 1e-8

    def estimate_gradient(self, dataset):
        episodes = complete_episodes(dataset)
        g = self._returns(episodes)
        s = np.array([self._scores(e).sum(axis=0) for e in episodes])
        x = np.hstack([s, np.ones((len(episodes), 1))])
        a = x.T @ x + self.regularization * np.eye(x.shape[1])
        w = np.linalg.solve(a, x.T @ g)
        self.last_residual = g - x @ w
        return w[:-1]


class PGPE(PolicyGradient):
    """Parameter-exploring policy gradient.

    At every episode start the policy weights are drawn from
    ``N(mu, diag(sigma^2))`` and the episode is run with the mean action of
    those weights: all exploration happens in parameter space. The gradient
    with respect to ``(mu, sigma)`` is the batch mean of
    ``grad log p(theta_e) (G_e - mean G)``. ``fit``
    scales that gradient componentwise by ``sigma**2``, which gives the
    classic steps ``(theta - mu) A`` and ``((theta - mu)**2 - sigma**2) A / sigma``
    for advantage ``A``; the unscaled step grows like ``1 / sigma**2`` and
    diverges once ``sigma`` shrinks. ``sigma`` is kept above ``sigma_floor``.
    """

    sigma_floor = 1e-6

    def __init__(self, mdp_info, policy, learning_rate, sigma_init=1., n_episodes_per_fit=10,
                 seed=None):
        super().__init__(mdp_info, policy, learning_rate, n_episodes_per_fit, seed)
        self.mu = policy.get_weights()
        self.sigma = np.broadcast_to(np.asarray(sigma_init, dtype=float), self.mu.shape).copy()
        if np.any(self.sigma <= 0):
            raise DomainError('PGPE sigma must be positive')
        self.thetas = []

    def episode_start(self):
        super().episode_start()
        if self.policy.evaluation:
            self.policy.set_weights(self.mu)
            return
        theta = self.mu + self.sigma * self.rng.standard_normal(self.mu.shape)
        self.thetas.append(theta)
        self.policy.set_weights(theta)

    def draw_action(self, state):
        return self.policy.mean(state)

    def estimate_gradient(self, dataset, thetas=None):
        episodes = complete_episodes(dataset)
        if thetas is None:
            # a trailing incomplete episode has already drawn its parameters
            incomplete = len(split_episodes(dataset)) - len(episodes)
            thetas = self.thetas[len(self.thetas) - len(episodes) - incomplete:
                                 len(self.thetas) - incomplete]
        thetas = np.asarray(thetas, dtype=float)
        if len(thetas) != len(episodes):
            raise DomainError('one sampled parameter vector is needed per episode')
        g = self._returns(episodes)
        adv = g - g.mean()
        diff = thetas - self.mu
        d_mu = diff / self.sigma ** 2
        d_sigma = (diff ** 2 - self.sigma ** 2) / self.sigma ** 3
        return np.concatenate([np.mean(d_mu * adv[:, None], axis=0),
                               np.mean(d_sigma * adv[:, None], axis=0)])

    def fit(self, dataset):
        grad = self.estimate_gradient(dataset)
        lr = self.learning_rate()
        k = self.mu.size
        scale = self.sigma ** 2
        self.mu = self.mu + lr * scale * grad[:k]
        self.sigma = np.maximum(self.sigma + lr * scale * grad[k:], self.sigma_floor)
        self.thetas = []
        self.policy.set_weights(self.mu)

    def state_dict(self):
        return {'mu': self.mu, 'sigma': self.sigma}

    def load_state_dict(self, state):
        self.mu = np.asarray(state['mu'], dtype=float)
        self.sigma = np.asarray(state['sigma'], dtype=float)
        self.policy.set_weights(self.mu)


class RWR(PolicyGradient):
    """Reward-weighted regression.

    Every step of episode ``e`` gets weight ``exp(beta (G_e - max G))`` and
    the new mean weights are the weighted least-squares fit of the actions
    on the state features. ``estimate_gradient`` returns the resulting
    parameter change; ``fit`` applies it in full, ignoring the learning rate.
    """

    def __init__(self, mdp_info, policy, beta=1., n_episodes_per_fit=10, seed=None):
        if beta <= 0:
            raise DomainError('RWR temperature beta must be positive')
        super().__init__(mdp_info, policy, 1., n_episodes_per_fit, seed)
        self.beta = float(beta)

    def estimate_gradient(self, dataset):
        episodes = complete_episodes(dataset)
        g = self._returns(episodes)
        d = np.exp(self.beta * (g - g.max()))
        phi = np.array([self.policy.features(t.state) for e in episodes for t in e])
        actions = np.array([np.atleast_1d(t.action) for e in episodes for t in e], dtype=float)
        w = np.sqrt(np.concatenate([np.full(len(e), d_e) for e, d_e in zip(episodes, d)]))
        theta_new = np.linalg.lstsq(phi * w[:, None], actions * w[:, None], rcond=None)[0].T
        return theta_new.ravel() - self.policy.get_weights()

    def fit(self, dataset):
        self.policy.set_weights(self.policy.get_weights() + self.estimate_gradient(dataset))
