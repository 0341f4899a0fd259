import argparse
import logging
import sys

import numpy as np

from rlframe.core import compute_J
from rlframe.errors import ConfigurationError, DecodeError, RLFrameError
from rlframe.experiment.config import ExperimentConfig, apply_settings, read_config_file, split_assignment
from rlframe.experiment.runner import evaluate_agent, load_snapshot, run_experiment

log = logging.getLogger('rlframe')


def make_parser():
    parser = argparse.ArgumentParser(
        prog='rlframe', description='Run seeded learn/evaluate experiments.')
    parser.add_argument('--config', help='JSON object or key=value file with default settings')
    parser.add_argument('--env', help='environment name')
    parser.add_argument('--algorithm', help='algorithm name')
    parser.add_argument('--epochs', type=int)
    train = parser.add_mutually_exclusive_group()
    train.add_argument('--train-steps', type=int, help='environment steps learned per epoch')
    train.add_argument('--train-episodes', type=int, help='episodes learned per epoch')
    parser.add_argument('--eval-episodes', type=int, help='evaluation episodes per epoch')
    parser.add_argument('--seed', type=int, action='append', help='repeat for several seeds')
    parser.add_argument('--parallel', type=int, help='seeds run concurrently')
    parser.add_argument('--out', help='output directory (default: $RL_OUT_DIR or ./results)')
    parser.add_argument('--snapshot-every', type=int, help='also snapshot the agent every N epochs')
    parser.add_argument('--param', action='append', default=[], metavar='KEY=VALUE',
                        help='algorithm parameter, or environment parameter when KEY starts with "env."')
    parser.add_argument('--record-time', action='store_true',
                        help='fill the seconds column (metrics are then no longer reproducible bytewise)')
    parser.add_argument('--stochastic-eval', action='store_true',
                        help='evaluate with the exploration policy instead of the greedy one')
    parser.add_argument('--load', metavar='SNAPSHOT',
                        help='evaluate a saved agent instead of training')
    parser.add_argument('-v', '--verbose', action='store_true')
    return parser


def build_config(args):
    config = ExperimentConfig()
    if args.config:
        apply_settings(config, read_config_file(args.config))
    flags = {
        'env': args.env, 'algorithm': args.algorithm, 'epochs': args.epochs,
        'train_steps': args.train_steps, 'train_episodes': args.train_episodes,
        'eval_episodes': args.eval_episodes, 'parallel': args.parallel, 'out': args.out,
        'snapshot_every': args.snapshot_every,
    }
    apply_settings(config, {k: v for k, v in flags.items() if v is not None})
    if args.seed:
        config.seeds = list(args.seed)
    apply_settings(config, dict(split_assignment(p) for p in args.param))
    if args.record_time:
        config.record_time = True
    if args.stochastic_eval:
        config.greedy_eval = False
    return config


def _evaluate_snapshot(args):
    seed = args.seed[0] if args.seed else None
    agent = load_snapshot(args.load, seed=seed)
    env = agent.environment
    data = evaluate_agent(agent, env, args.eval_episodes or 10, not args.stochastic_eval)
    j = compute_J(data, env.info.gamma)
    print(f'episodes={len(j)} j_discounted={np.mean(j)!r} j_undiscounted={np.mean(compute_J(data))!r}')
    return 0


def main(argv=None):
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format='%(levelname)s %(message)s')
    try:
        if args.load:
            return _evaluate_snapshot(args)
        config = build_config(args)
        records, failures = run_experiment(config)
    except ConfigurationError as e:
        print(f'configuration error: {e}', file=sys.stderr)
        return 2
    except DecodeError as e:
        print(f'snapshot error: {e}', file=sys.stderr)
        return 3
    except (OSError, RLFrameError) as e:
        print(f'error: {e}', file=sys.stderr)
        return 1
    for seed, err in failures.items():
        print(f'seed {seed} failed: {err}', file=sys.stderr)
    for seed, rec in records.items():
        if rec:
            log.info('seed %s final j_undiscounted %.4g', seed, rec[-1].j_undiscounted)
    return 0 if not failures else 1


if __name__ == '__main__':
    sys.exit(main())
