"""Seeded learn/evaluate experiments with CSV metrics and agent snapshots."""
import csv
import json
import os
import time
from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed
from scipy import stats

from rlframe.approximation.serialization import pack, unpack
from rlframe.core import Core, compute_J, max_q_mean
from rlframe.environments import Discrete, make_env
from rlframe.errors import DecodeError, VersionError
from rlframe.experiment.registry import build_agent, is_value_based, resolve_params
from rlframe.seeding import derive_rng, derive_seed

TAG_FILE = 201
FILE_VERSION = 1
METRICS_HEADER = ['seed', 'epoch', 'j_discounted', 'j_undiscounted', 'n_episodes', 'max_q_mean', 'seconds']
AGGREGATE_HEADER = ['epoch', 'metric', 'mean', 'ci95']
AGGREGATED = ('j_discounted', 'j_undiscounted', 'n_episodes', 'max_q_mean')


@dataclass
class EpochRecord:
    seed: int
    epoch: int
    j_discounted: float
    j_undiscounted: float
    n_episodes: int
    max_q_mean: float = None
    seconds: float = None

    def row(self):
        return [self.seed, self.epoch, _fmt(self.j_discounted), _fmt(self.j_undiscounted),
                self.n_episodes, _fmt(self.max_q_mean), _fmt(self.seconds)]


def _fmt(x):
    return '' if x is None else repr(float(x))


def metrics_path(out, seed):
    return os.path.join(out, f'metrics_seed{seed}.csv')


def snapshot_path(out, seed, epoch=None):
    suffix = '' if epoch is None else f'_epoch{epoch}'
    return os.path.join(out, f'agent_seed{seed}{suffix}.rlsnap')


def heldout_states(env_name, env_params, n):
    """States visited by a uniformly random policy in a fixed-seed copy of
    the environment; identical for every run of the same environment."""
    env = make_env(env_name, seed=derive_seed(0, 'heldout-env'), **env_params)
    rng = derive_rng(0, 'heldout-policy')
    n_actions = env.info.action_space.n
    states = []
    while len(states) < n:
        state = env.reset()
        for _ in range(env.info.horizon):
            states.append(state)
            state, _, absorbing = env.step(np.array([rng.integers(n_actions)]))
            if absorbing or len(states) >= n:
                break
    return np.array(states)


def fit_quantum(agent, config):
    if agent.fit_mode == 'step':
        return dict(n_steps_per_fit=1)
    if agent.fit_mode == 'episodes':
        return dict(n_episodes_per_fit=agent.n_episodes_per_fit)
    if config.train_steps is not None:
        return dict(n_steps_per_fit=config.train_steps)
    return dict(n_episodes_per_fit=config.train_episodes)


def build(config, seed):
    env = make_env(config.env, seed=derive_seed(seed, 'env'), **config.env_params)
    agent = build_agent(config.algorithm, env.info, config.params, seed)
    return env, agent


def write_snapshot(path, agent, config, seed, epoch):
    header = dict(format=FILE_VERSION, algorithm=config.algorithm,
                  params=resolve_params(config.algorithm, config.params), env=config.env,
                  env_params=config.env_params, seed=seed, epoch=epoch)
    data = pack(TAG_FILE, [json.dumps(header, sort_keys=True, default=list).encode(), agent.snapshot()])
    tmp = path + '.tmp'
    with open(tmp, 'wb') as f:
        f.write(data)
    os.replace(tmp, path)


def read_snapshot(path):
    """``(header, agent_bytes)`` of a snapshot file."""
    with open(path, 'rb') as f:
        data = f.read()
    tag, blocks = unpack(data)
    if tag != TAG_FILE or len(blocks) != 2:
        raise DecodeError(f'{path} is not an experiment snapshot')
    try:
        header = json.loads(bytes(blocks[0]).decode())
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise DecodeError(f'{path}: bad snapshot header ({e})') from None
    if header.get('format') != FILE_VERSION:
        raise VersionError(header.get('format'), FILE_VERSION)
    return header, blocks[1]


def load_snapshot(path, seed=None):
    """Rebuild the agent stored at ``path``.

    The agent's random streams come from ``seed`` (by default the seed of
    the run that wrote the file); its learned state from the file. The
    matching environment is available as ``agent.environment``.
    """
    header, blob = read_snapshot(path)
    seed = header['seed'] if seed is None else seed
    env = make_env(header['env'], seed=derive_seed(seed, 'env'), **header['env_params'])
    agent = build_agent(header['algorithm'], env.info, header['params'], seed)
    agent.restore(blob)
    agent.environment = env
    agent.header = header
    return agent


def evaluate_agent(agent, env, n_episodes, greedy=True):
    agent.set_evaluation(greedy)
    try:
        return Core(agent, env).evaluate(n_episodes=n_episodes)
    finally:
        agent.set_evaluation(False)


def run_seed(config, seed):
    """One seed of the experiment; writes its metrics and snapshots."""
    env, agent = build(config, seed)
    core = Core(agent, env)
    value_based = is_value_based(config.algorithm) and isinstance(env.info.action_space, Discrete)
    held = heldout_states(config.env, config.env_params, config.heldout_states) if value_based else None
    train = (dict(n_steps=config.train_steps) if config.train_steps is not None
             else dict(n_episodes=config.train_episodes))
    quantum = fit_quantum(agent, config)
    records = []
    with open(metrics_path(config.out, seed), 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(METRICS_HEADER)
        f.flush()
        for epoch in range(config.epochs):
            start = time.perf_counter()
            core.learn(**train, **quantum)
            data = evaluate_agent(agent, env, config.eval_episodes, config.greedy_eval)
            record = EpochRecord(
                seed=seed, epoch=epoch,
                j_discounted=float(np.mean(compute_J(data, env.info.gamma))),
                j_undiscounted=float(np.mean(compute_J(data))),
                n_episodes=int(sum(t.last for t in data)),
                max_q_mean=max_q_mean(agent.q, held) if value_based else None,
                seconds=time.perf_counter() - start if config.record_time else None)
            records.append(record)
            writer.writerow(record.row())
            f.flush()
            if config.snapshot_every and (epoch + 1) % config.snapshot_every == 0:
                write_snapshot(snapshot_path(config.out, seed, epoch), agent, config, seed, epoch)
    write_snapshot(snapshot_path(config.out, seed), agent, config, seed, config.epochs - 1)
    return records


def _run_seed_safe(config, seed):
    try:
        return seed, run_seed(config, seed), None
    except Exception as e:  # reported per seed; the other seeds keep running
        return seed, None, f'{type(e).__name__}: {e}'


def aggregate(records_by_seed, epochs):
    """Per epoch and metric: mean across seeds and the 95% t-interval
    half-width (empty when fewer than two seeds report the metric)."""
    rows = []
    for epoch in range(epochs):
        for metric in AGGREGATED:
            values = [getattr(r[epoch], metric) for r in records_by_seed.values()
                      if r is not None and len(r) > epoch]
            values = np.array([v for v in values if v is not None], dtype=float)
            if len(values) == 0:
                continue
            mean = float(values.mean())
            if len(values) < 2:
                ci = None
            else:
                ci = float(stats.t.ppf(0.975, len(values) - 1) * values.std(ddof=1) / np.sqrt(len(values)))
            rows.append([epoch, metric, _fmt(mean), _fmt(ci)])
    return rows


def prepare_output(out):
    os.makedirs(out, exist_ok=True)
    probe = os.path.join(out, '.write-test')
    with open(probe, 'w') as f:
        f.write('')
    os.remove(probe)


def validate(config):
    config.validate()
    make_env(config.env, **config.env_params)
    resolve_params(config.algorithm, config.params)


def run_experiment(config):
    """Run every seed, up to ``config.parallel`` at a time.

    Returns ``(records_by_seed, failures)``; a failed seed maps to ``None``
    in the first dict and to its error message in the second. Per-seed
    output does not depend on the degree of parallelism.
    """
    validate(config)
    prepare_output(config.out)
    with open(os.path.join(config.out, 'config.json'), 'w') as f:
        json.dump(config.to_dict(), f, indent=2, sort_keys=True, default=list)
    if config.parallel == 1 or len(config.seeds) == 1:
        results = [_run_seed_safe(config, s) for s in config.seeds]
    else:
        results = Parallel(n_jobs=min(config.parallel, len(config.seeds)))(
            delayed(_run_seed_safe)(config, s) for s in config.seeds)
    records = {seed: rec for seed, rec, _ in results}
    failures = {seed: err for seed, _, err in results if err is not None}
    with open(os.path.join(config.out, 'aggregate.csv'), 'w', newline='') as f:
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(AGGREGATE_HEADER)
        writer.writerows(aggregate(records, config.epochs))
    return records, failures


run_parallel = run_experiment
