from rlframe.approximation.features import Identity, OneHot, Polynomial, RadialBasis, Tiles
from rlframe.approximation.regressors import Linear, Mlp, Tabular, gradient
from rlframe.approximation.q_regressor import QRegressor
from rlframe.approximation.serialization import restore, snapshot

__all__ = ['Identity', 'OneHot', 'Polynomial', 'RadialBasis', 'Tiles', 'Linear', 'Mlp',
           'Tabular', 'gradient', 'QRegressor', 'restore', 'snapshot']
