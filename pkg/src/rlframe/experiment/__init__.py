from rlframe.experiment.config import ExperimentConfig, apply_settings, read_config_file
from rlframe.experiment.registry import ALGORITHMS, DEFAULTS, build_agent
from rlframe.experiment.runner import (EpochRecord, aggregate, load_snapshot, run_experiment, run_parallel,
                                       run_seed)

__all__ = ['ExperimentConfig', 'apply_settings', 'read_config_file', 'ALGORITHMS', 'DEFAULTS',
           'build_agent', 'EpochRecord', 'aggregate', 'load_snapshot', 'run_experiment', 'run_parallel',
           'run_seed']
