"""Build agents by algorithm name from flat parameter dictionaries."""
import numpy as np

from rlframe import algorithms as alg
from rlframe.approximation import Identity, Linear, Mlp, OneHot, Polynomial, QRegressor, RadialBasis, Tabular, Tiles
from rlframe.environments import Box, Discrete
from rlframe.errors import ConfigurationError
from rlframe.policy import Boltzmann, EpsGreedy, Fixed, GaussianLinear, LinearDecay, VisitDecay
from rlframe.seeding import derive_seed

_EXPLORATION = dict(policy='eps_greedy', epsilon=1., epsilon_min=0.01, epsilon_steps=10000, beta=1.)
_FEATURES = dict(features='auto', n_tilings=8, n_tiles=8, rbf_per_dim=5, degree=2, bias=True)
_TD = dict(_EXPLORATION, **_FEATURES, approximator='tabular', alpha=1., alpha_exponent=0.8)

_TD_CLASSES = {
    'q': alg.QLearning,
    'double_q': alg.DoubleQLearning,
    'weighted_q': alg.WeightedQLearning,
    'speedy_q': alg.SpeedyQLearning,
    'r': alg.RLearning,
    'sarsa': alg.SARSA,
    'expected_sarsa': alg.ExpectedSARSA,
    'true_online_sarsa_lambda': alg.TrueOnlineSARSALambda,
}
_PG_CLASSES = {
    'reinforce': alg.REINFORCE,
    'gpomdp': alg.GPOMDP,
    'enac': alg.ENAC,
    'pgpe': alg.PGPE,
    'rwr': alg.RWR,
}
_DQN_CLASSES = {'dqn': alg.DQN, 'ddqn': alg.DoubleDQN, 'averaged_dqn': alg.AveragedDQN}

DEFAULTS = {name: dict(_TD) for name in _TD_CLASSES}
DEFAULTS['weighted_q'].update(prior_variance=1e4, n_points=11)
DEFAULTS['r'].update(rho_rate=0.1)
DEFAULTS['true_online_sarsa_lambda'].update(approximator='linear', alpha=0.1, alpha_exponent=0.,
                                            lambda_coeff=0.9)
DEFAULTS['fqi'] = dict(_FEATURES, approximator='tabular', n_iterations=20, hidden=(80, 80), lr=1e-3,
                       n_epochs=50, batch_size=64)
DEFAULTS['lspi'] = dict(_FEATURES, tol=1e-4, max_iterations=50)
_PG = dict(_FEATURES, features='identity', learning_rate=0.01, n_episodes_per_fit=10, sigma=1.)
for _name in _PG_CLASSES:
    DEFAULTS[_name] = dict(_PG)
DEFAULTS['pgpe'].update(sigma_init=0.5)
DEFAULTS['rwr'].update(beta=1.)
del DEFAULTS['rwr']['learning_rate']
_DQN = dict(_EXPLORATION, hidden=(80, 80), lr=1e-3, optimizer='rmsprop', decay=0.95, batch_size=32,
            target_update_period=200, initial_replay_size=500, max_replay_size=50000)
for _name in _DQN_CLASSES:
    DEFAULTS[_name] = dict(_DQN)
DEFAULTS['averaged_dqn'].update(n_targets=10)

ALGORITHMS = tuple(DEFAULTS)


def resolve_params(name, params):
    if name not in DEFAULTS:
        raise ConfigurationError(f'unknown algorithm {name!r}; valid names: {", ".join(ALGORITHMS)}')
    unknown = set(params) - set(DEFAULTS[name])
    if unknown:
        raise ConfigurationError(f'unknown parameters for {name!r}: {", ".join(sorted(unknown))}; '
                                 f'valid: {", ".join(sorted(DEFAULTS[name]))}')
    out = dict(DEFAULTS[name])
    out.update(params)
    return out


def is_value_based(name):
    return name not in _PG_CLASSES


def _state_features(p, space):
    kind = p['features']
    if kind == 'auto':
        kind = 'onehot' if isinstance(space, Discrete) else 'tiles'
    if kind == 'onehot':
        if not isinstance(space, Discrete):
            raise ConfigurationError('one-hot features need a discrete observation space')
        return OneHot(space.n)
    dim = space.size if isinstance(space, Box) else 1
    if kind == 'identity':
        return Identity(dim, bias=bool(p['bias']))
    if kind == 'poly':
        return Polynomial(dim, int(p['degree']))
    if kind in ('tiles', 'rbf'):
        if not isinstance(space, Box):
            raise ConfigurationError(f'{kind} features need a box observation space')
        if not np.all(np.isfinite(space.low) & np.isfinite(space.high)):
            raise ConfigurationError(f'{kind} features need a bounded observation space')
        if kind == 'tiles':
            return Tiles(int(p['n_tilings']), int(p['n_tiles']), space.low, space.high)
        return RadialBasis.uniform_grid(int(p['rbf_per_dim']), space.low, space.high)
    raise ConfigurationError(f'unknown feature map {kind!r}')


def _n_inputs(space):
    if not isinstance(space, Discrete):
        raise ConfigurationError('a tabular approximator needs a discrete observation space')
    return space.n


def _q(p, info, n_models=1):
    n_actions = info.action_space.n
    if p['approximator'] == 'tabular':
        model = Tabular(_n_inputs(info.observation_space), n_actions)
    elif p['approximator'] == 'linear':
        model = Linear(_state_features(p, info.observation_space), n_actions)
    else:
        raise ConfigurationError(f'unknown approximator {p["approximator"]!r}')
    return QRegressor(model, n_actions, n_models=n_models)


def _exploration(p, seed):
    if p['policy'] == 'boltzmann':
        return Boltzmann(p['beta'], seed=derive_seed(seed, 'policy'))
    if p['policy'] != 'eps_greedy':
        raise ConfigurationError(f'unknown policy {p["policy"]!r}')
    if int(p['epsilon_steps']) > 0 and p['epsilon_min'] < p['epsilon']:
        eps = LinearDecay(p['epsilon'], p['epsilon_min'], p['epsilon_steps'])
    else:
        eps = Fixed(p['epsilon'])
    return EpsGreedy(eps, seed=derive_seed(seed, 'policy'))


def _alpha(p):
    if p['alpha_exponent'] > 0:
        return VisitDecay(p['alpha'], p['alpha_exponent'])
    return Fixed(p['alpha'])


def _hidden(value):
    if isinstance(value, str):
        return tuple(int(v) for v in value.replace(' ', '').split(',') if v)
    if np.isscalar(value):
        return (int(value),)
    return tuple(int(v) for v in value)


def build_agent(name, mdp_info, params=None, seed=0):
    """Agent ``name`` for an environment described by ``mdp_info``.

    Random streams are derived from ``seed``: ``'policy'`` for action
    sampling, ``'agent'`` for initialisation and internal coin flips and
    ``'replay'`` for minibatch sampling.
    """
    p = resolve_params(name, params or {})
    agent_seed = derive_seed(seed, 'agent')
    if name in _TD_CLASSES:
        if not isinstance(mdp_info.action_space, Discrete):
            raise ConfigurationError(f'{name!r} needs a discrete action space')
        q = _q(p, mdp_info, n_models=2 if name == 'double_q' else 1)
        extra = {}
        if name == 'weighted_q':
            extra = dict(prior_variance=p['prior_variance'], n_points=p['n_points'])
        elif name == 'r':
            extra = dict(beta=p['rho_rate'])
        elif name == 'true_online_sarsa_lambda':
            extra = dict(lambda_coeff=p['lambda_coeff'])
        return _TD_CLASSES[name](mdp_info, _exploration(p, seed), q, _alpha(p), seed=agent_seed, **extra)
    if name in ('fqi', 'lspi'):
        if not isinstance(mdp_info.action_space, Discrete):
            raise ConfigurationError(f'{name!r} needs a discrete action space')
        behaviour = EpsGreedy(1., seed=derive_seed(seed, 'policy'))
        if name == 'lspi':
            q = QRegressor(Linear(_state_features(p, mdp_info.observation_space), mdp_info.action_space.n),
                           mdp_info.action_space.n)
            return alg.LSPI(mdp_info, behaviour, q, tol=p['tol'], max_iterations=p['max_iterations'],
                            seed=agent_seed)
        if p['approximator'] == 'mlp':
            n_actions = mdp_info.action_space.n
            model = Mlp(mdp_info.observation_space.size if isinstance(mdp_info.observation_space, Box) else 1,
                        n_actions, hidden=_hidden(p['hidden']), lr=p['lr'], n_epochs=p['n_epochs'],
                        batch_size=p['batch_size'], seed=agent_seed)
            q = QRegressor(model, n_actions)
        else:
            q = _q(p, mdp_info)
        return alg.FQI(mdp_info, behaviour, q, p['n_iterations'], seed=agent_seed)
    if name in _PG_CLASSES:
        if not isinstance(mdp_info.action_space, Box):
            raise ConfigurationError(f'{name!r} needs a continuous action space')
        policy = GaussianLinear(_state_features(p, mdp_info.observation_space),
                                action_dim=mdp_info.action_space.size, sigma=p['sigma'],
                                seed=derive_seed(seed, 'policy'))
        common = dict(n_episodes_per_fit=p['n_episodes_per_fit'], seed=agent_seed)
        if name == 'pgpe':
            return alg.PGPE(mdp_info, policy, p['learning_rate'], sigma_init=p['sigma_init'], **common)
        if name == 'rwr':
            return alg.RWR(mdp_info, policy, beta=p['beta'], **common)
        return _PG_CLASSES[name](mdp_info, policy, p['learning_rate'], **common)
    if not isinstance(mdp_info.action_space, Discrete) or not isinstance(mdp_info.observation_space, Box):
        raise ConfigurationError(f'{name!r} needs a box observation space and discrete actions')
    n_actions = mdp_info.action_space.n
    model = Mlp(mdp_info.observation_space.size, n_actions, hidden=_hidden(p['hidden']),
                optimizer=p['optimizer'], lr=p['lr'], decay=p['decay'], seed=agent_seed)
    q = QRegressor(model, n_actions)
    extra = dict(n_targets=int(p['n_targets'])) if name == 'averaged_dqn' else {}
    return _DQN_CLASSES[name](mdp_info, _exploration(p, seed), q, batch_size=p['batch_size'],
                              target_update_period=p['target_update_period'],
                              initial_replay_size=p['initial_replay_size'],
                              max_replay_size=p['max_replay_size'],
                              seed=derive_seed(seed, 'replay'), **extra)
