"""LSPI and FQI from one batch of random transitions on the chain."""
import numpy as np

from rlframe.algorithms import FQI, LSPI
from rlframe.approximation import Linear, OneHot, QRegressor, Tabular
from rlframe.core import Core
from rlframe.environments import Chain
from rlframe.policy import EpsGreedy
from rlframe.solvers import value_iteration

env = Chain(5, gamma=0.9, seed=1)
random_pi = EpsGreedy(1., seed=2)
lspi = LSPI(env.info, random_pi, QRegressor(Linear(OneHot(5), 2), 2))
data = Core(lspi, env).evaluate(n_steps=5000)

lspi.fit(data)
print('LSPI iterations:', lspi.n_iterations_run, 'converged:', lspi.converged)
# the last state is absorbing, so only the first four actions matter
print('LSPI greedy:', np.argmax(lspi.q.model.weights.T, axis=1)[:4])

fqi = FQI(env.info, random_pi, QRegressor(Tabular(5, 2), 2), n_iterations=50)
fqi.fit(data)
print('FQI greedy: ', np.argmax(fqi.q.model.table, axis=1)[:4])

q_star = value_iteration(env.p, env.r, env.terminal, 0.9)
print('exact:      ', np.argmax(q_star, axis=1)[:4])
