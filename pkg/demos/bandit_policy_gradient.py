"""Policy-gradient methods on a 1-D quadratic bandit with optimum at 2."""
from rlframe.algorithms import ENAC, GPOMDP, PGPE, REINFORCE, RWR
from rlframe.approximation import Identity
from rlframe.core import Core
from rlframe.environments import QuadraticBandit
from rlframe.policy import GaussianLinear

for cls in (REINFORCE, GPOMDP, ENAC, PGPE, RWR):
    env = QuadraticBandit(optimum=2., seed=0)
    pi = GaussianLinear(Identity(1, bias=False), sigma=1., seed=1)
    if cls is RWR:
        agent = RWR(env.info, pi, beta=2., seed=2)
    elif cls is PGPE:
        agent = PGPE(env.info, pi, 0.1, sigma_init=0.5, seed=2)
    else:
        agent = cls(env.info, pi, 0.1, seed=2)
    Core(agent, env).learn(n_episodes=100 * 100, n_episodes_per_fit=100)
    theta = agent.mu if cls is PGPE else pi.get_weights()
    print(f'{cls.__name__:9s} theta = {theta[0]:.3f}')
