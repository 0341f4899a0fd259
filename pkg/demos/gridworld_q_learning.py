"""Q-Learning on the 5x5 grid, checked against value iteration."""
import numpy as np

from rlframe.algorithms import QLearning
from rlframe.approximation import QRegressor, Tabular
from rlframe.core import Core, compute_J
from rlframe.environments import GridWorld
from rlframe.policy import EpsGreedy, LinearDecay, VisitDecay
from rlframe.solvers import greedy_actions, value_iteration

env = GridWorld(gamma=0.9, seed=0)
q = QRegressor(Tabular(env.n_states, env.n_actions), env.n_actions)
pi = EpsGreedy(LinearDecay(1., 0.01, 50_000), seed=1)
agent = QLearning(env.info, pi, q, VisitDecay(1., 0.8))

core = Core(agent, env)
core.learn(n_steps=50_000, n_steps_per_fit=1)

agent.set_evaluation(True)
data = core.evaluate(n_episodes=5)
print('greedy return:', compute_J(data, env.info.gamma).mean())

q_star = value_iteration(env.p, env.r, env.terminal, env.info.gamma)
best = greedy_actions(q_star)
ok = [int(np.argmax(q.model.table[s])) in best[s] for s in range(env.n_states) if not env.terminal[s]]
print('optimal actions:', sum(ok), '/', len(ok))
print('max |Q - Q*|:', np.abs(q.model.table - q_star)[~env.terminal].max())
