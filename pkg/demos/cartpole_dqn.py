"""DQN vs Double-DQN on CartPole through the experiment runner.

Takes roughly ten minutes on one core. Results land in ./cartpole_runs.
"""
import numpy as np

from rlframe.experiment import ExperimentConfig, run_experiment

SEEDS = [0, 1, 2, 3, 4]

for name in ('dqn', 'ddqn'):
    cfg = ExperimentConfig(env='cartpole', algorithm=name, epochs=10, train_steps=10_000,
                           eval_episodes=10, seeds=SEEDS, parallel=len(SEEDS),
                           out=f'cartpole_runs/{name}')
    records, failures = run_experiment(cfg)
    scores = np.array([[r.j_undiscounted for r in records[s]] for s in SEEDS])
    max_q = np.array([records[s][-1].max_q_mean for s in SEEDS])
    print(name, 'final scores', scores[:, -1], 'best per seed', scores.max(axis=1))
    print(name, 'mean max Q', max_q.mean().round(2), 'score std across seeds', scores[:, -1].std().round(1))
