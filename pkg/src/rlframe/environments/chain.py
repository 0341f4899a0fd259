import numpy as np

from rlframe.environments.environment import FiniteMDP

BACK, FORWARD = 0, 1


class Chain(FiniteMDP):
    """Chain of ``n_states`` cells; the last one is the absorbing goal.

    ``FORWARD`` moves one cell right but slips into a ``BACK`` move with
    probability ``slip``; ``BACK`` moves one cell left (cell 0 is a wall).
    Entering the goal pays ``reward``, every other transition pays 0.
    Episodes start uniformly on the non-goal cells.
    """

    def __init__(self, n_states=5, slip=0.1, reward=1., gamma=0.9, horizon=100, seed=None):
        n = int(n_states)
        self.slip = float(slip)
        p = np.zeros((n, 2, n))
        for s in range(n):
            back = max(s - 1, 0)
            fwd = min(s + 1, n - 1)
            p[s, BACK, back] = 1.
            p[s, FORWARD, fwd] += 1. - self.slip
            p[s, FORWARD, back] += self.slip
        r = np.zeros((n, 2, n))
        r[:, :, n - 1] = reward
        terminal = np.zeros(n, dtype=bool)
        terminal[n - 1] = True
        initial = np.full(n, 1. / (n - 1))
        initial[n - 1] = 0.
        super().__init__(p, r, terminal, initial, gamma, horizon, seed)
