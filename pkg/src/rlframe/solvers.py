"""Exact dynamic-programming solutions of finite MDPs, used as oracles."""
import numpy as np


def bellman_optimality(q, p, r, terminal, gamma):
    v = q.max(axis=1) * ~terminal
    return np.einsum('ijk,ijk->ij', p, r) + gamma * p @ v


def value_iteration(p, r, terminal, gamma, n_iterations=None, tol=1e-12, q0=None):
    """Optimal action values of the kernel ``(p, r, terminal)``.

    With ``n_iterations`` set, exactly that many Bellman backups are applied
    starting from ``q0`` (zeros by default); otherwise iterate until the
    sup-norm change drops below ``tol``.
    """
    p = np.asarray(p, dtype=float)
    terminal = np.asarray(terminal, dtype=bool)
    q = np.zeros(p.shape[:2]) if q0 is None else np.array(q0, dtype=float)
    if n_iterations is not None:
        for _ in range(n_iterations):
            q = bellman_optimality(q, p, r, terminal, gamma)
        return q
    while True:
        new_q = bellman_optimality(q, p, r, terminal, gamma)
        if np.max(np.abs(new_q - q)) < tol:
            return new_q
        q = new_q


def greedy_actions(q, atol=1e-9):
    """Per state, the set of actions within ``atol`` of the maximum."""
    return [set(np.flatnonzero(row >= row.max() - atol)) for row in np.asarray(q)]
