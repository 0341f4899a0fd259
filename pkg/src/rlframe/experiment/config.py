import ast
import json
import os
from dataclasses import asdict, dataclass, field

from rlframe.errors import ConfigurationError

_INT_KEYS = ('epochs', 'train_steps', 'train_episodes', 'eval_episodes', 'parallel', 'snapshot_every',
             'heldout_states')


@dataclass
class ExperimentConfig:
    env: str = 'gridworld'
    algorithm: str = 'q'
    env_params: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    epochs: int = 10
    train_steps: int = None
    train_episodes: int = None
    eval_episodes: int = 10
    seeds: list = field(default_factory=lambda: [0])
    parallel: int = 1
    out: str = None
    snapshot_every: int = 0
    greedy_eval: bool = True
    record_time: bool = False
    heldout_states: int = 1000

    def __post_init__(self):
        if self.train_steps is None and self.train_episodes is None:
            self.train_steps = 1000
        if self.out is None:
            self.out = os.environ.get('RL_OUT_DIR', 'results')

    def validate(self):
        if int(self.epochs) < 1:
            raise ConfigurationError('epochs must be >= 1')
        if (self.train_steps is None) == (self.train_episodes is None):
            raise ConfigurationError('set exactly one of train_steps and train_episodes')
        quantum = self.train_steps if self.train_steps is not None else self.train_episodes
        if int(quantum) < 1 or int(self.eval_episodes) < 1:
            raise ConfigurationError('train and eval quanta must be >= 1')
        if not self.seeds:
            raise ConfigurationError('at least one seed is required')
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigurationError('seeds must be pairwise distinct')
        if int(self.parallel) < 1:
            raise ConfigurationError('parallel must be >= 1')
        return self

    def to_dict(self):
        return asdict(self)


def parse_value(text):
    """Python literal if the text is one, otherwise the stripped string."""
    text = text.strip()
    lowered = text.lower()
    if lowered in ('true', 'false'):
        return lowered == 'true'
    if lowered in ('none', 'null'):
        return None
    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError):
        return text


def split_assignment(text):
    if '=' not in text:
        raise ConfigurationError(f'expected key=value, got {text!r}')
    key, value = text.split('=', 1)
    return key.strip(), parse_value(value)


def read_config_file(path):
    """Flat settings from a JSON object or from ``key = value`` lines.

    Blank lines and lines starting with ``#`` are ignored.
    """
    with open(path) as f:
        text = f.read()
    if path.endswith('.json') or text.lstrip().startswith('{'):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f'{path}: {e}') from None
        if not isinstance(data, dict):
            raise ConfigurationError(f'{path}: expected a JSON object')
        return data
    data = {}
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith('#'):
            key, value = split_assignment(line)
            data[key] = value
    return data


def apply_settings(config, settings):
    """Merge flat settings into ``config`` in place.

    ``seed``/``seeds`` accept a single integer or a list; keys prefixed with
    ``env.`` become environment parameters and any other unknown key an
    algorithm parameter. Nested ``env_params``/``params`` objects are merged.
    """
    for key, value in settings.items():
        key = key.replace('-', '_')
        if key in ('seed', 'seeds'):
            if isinstance(value, str):
                value = [int(v) for v in value.split(',') if v.strip()]
            config.seeds = [int(v) for v in (value if isinstance(value, (list, tuple)) else [value])]
        elif key in ('env_params', 'params'):
            getattr(config, key).update(value)
        elif key.startswith('env.'):
            config.env_params[key[4:]] = value
        elif key in ('train_steps', 'train_episodes'):
            setattr(config, key, None if value is None else int(value))
            other = 'train_episodes' if key == 'train_steps' else 'train_steps'
            if value is not None:
                setattr(config, other, None)
        elif key in _INT_KEYS:
            setattr(config, key, int(value))
        elif key in ('env', 'algorithm', 'out'):
            setattr(config, key, str(value))
        elif key in ('greedy_eval', 'record_time'):
            setattr(config, key, bool(value))
        else:
            config.params[key] = value
    return config
