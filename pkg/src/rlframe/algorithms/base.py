import numpy as np

from rlframe.approximation.serialization import pack, restore, snapshot, unpack
from rlframe.errors import DecodeError
from rlframe.seeding import as_rng

TAG_AGENT = 200


class Agent:
    """Algorithm contract used by ``Core``.

    Subclasses implement ``fit``. ``fit_mode`` tells an experiment driver
    how to feed the agent: ``'step'`` (one transition per fit), ``'batch'``
    (everything collected in a learning phase) or ``'episodes'`` (batches
    of ``n_episodes_per_fit`` complete episodes).
    """

    fit_mode = 'step'

    def __init__(self, mdp_info, policy, seed=None):
        self.mdp_info = mdp_info
        self.policy = policy
        self.rng = as_rng(seed)

    def draw_action(self, state):
        return self.policy.draw_action(state)

    def fit(self, dataset):
        raise NotImplementedError

    def episode_start(self):
        self.policy.reset()

    def set_evaluation(self, flag):
        self.policy.evaluation = bool(flag)

    def state_dict(self):
        """Learned state: name -> array or regressor."""
        return {}

    def load_state_dict(self, state):
        for name, value in state.items():
            setattr(self, name, value)

    def snapshot(self):
        blocks = []
        for name, value in sorted(self.state_dict().items()):
            if not isinstance(value, np.ndarray) and np.isscalar(value):
                value = np.array([value], dtype=float)
            blocks += [name.encode(), snapshot(value)]
        return pack(TAG_AGENT, blocks)

    def restore(self, data):
        tag, blocks = unpack(data)
        if tag != TAG_AGENT or len(blocks) % 2:
            raise DecodeError('not an agent snapshot')
        current = self.state_dict()
        state = {}
        for name, blob in zip(blocks[::2], blocks[1::2]):
            name = bytes(name).decode()
            value = restore(blob)
            old = current.get(name)
            if isinstance(old, (int, float)) and isinstance(value, np.ndarray):
                value = type(old)(value[0])
            state[name] = value
        self.load_state_dict(state)
        return self
