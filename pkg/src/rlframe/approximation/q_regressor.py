import copy

import numpy as np

from rlframe.approximation.regressors import Linear, Tabular
from rlframe.errors import DomainError, UnsupportedOperationError


class QRegressor:
    """Action-value function: one regressor output per action.

    With ``n_models > 1`` the wrapper holds independent deep copies of the
    given model. ``idx`` selects a member; ``idx=None`` predicts with the
    ensemble mean.
    """

    def __init__(self, model, n_actions, n_models=1):
        if model.output_dim != n_actions:
            raise DomainError(f'model has {model.output_dim} outputs for {n_actions} actions')
        if n_models < 1:
            raise DomainError('ensemble size must be >= 1')
        self.n_actions = int(n_actions)
        self.models = [model] + [copy.deepcopy(model) for _ in range(n_models - 1)]

    @property
    def model(self):
        return self.models[0]

    @property
    def n_models(self):
        return len(self.models)

    def predict(self, state, action=None, idx=None):
        """All action values of ``state`` or, with ``action``, ``Q(s, a)``.

        A single state yields a vector of length ``n_actions`` (or a length-1
        vector when ``action`` is given); a batch yields one row per state.
        """
        if idx is not None or self.n_models == 1:
            q = self.models[idx or 0].predict(state)
        else:
            q = np.mean([m.predict(state) for m in self.models], axis=0)
        if action is None:
            return q
        action = np.asarray(action, dtype=int)
        if q.ndim == 1:
            return q[action.ravel()[:1]]
        return q[np.arange(q.shape[0]), action.ravel()]

    def fit(self, states, actions, targets, idx=None, **fit_params):
        members = range(self.n_models) if idx is None else [idx]
        actions = np.asarray(actions, dtype=int).ravel()
        for i in members:
            self.models[i].fit(states, targets, output_index=actions, **fit_params)
        return self

    def td_update(self, state, action, step, idx=0):
        """Move ``Q(s, a)`` by ``step`` along its own parametrisation.

        Tabular models change the single cell; linear models add ``step``
        times the features of ``s`` to the weights of action ``a``.
        """
        model = self.models[idx]
        a = int(np.asarray(action).ravel()[0])
        if isinstance(model, Tabular):
            s, _ = model._indices(state)
            model.table[s[0], a] += step
        elif isinstance(model, Linear):
            model.weights[a] += step * model.features(state)
        else:
            raise UnsupportedOperationError(f'incremental updates are not defined for {type(model).__name__}')

    def copy_weights(self, source, idx=0):
        """Overwrite member ``idx`` with the parameters of ``source``."""
        self.models[idx].set_weights(source.get_weights())

    def get_weights(self, idx=0):
        return self.models[idx].get_weights()

    def set_weights(self, w, idx=0):
        self.models[idx].set_weights(w)
