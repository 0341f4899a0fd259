from rlframe.policy.schedules import Fixed, LinearDecay, VisitDecay, as_schedule
from rlframe.policy.policies import Boltzmann, EpsGreedy, GaussianLinear, Policy

__all__ = ['Fixed', 'LinearDecay', 'VisitDecay', 'as_schedule', 'Boltzmann', 'EpsGreedy',
           'GaussianLinear', 'Policy']
