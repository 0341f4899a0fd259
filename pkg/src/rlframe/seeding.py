import hashlib

import numpy as np


def derive_seed(master_seed, label):
    """Stable 64-bit seed for the stream ``label`` of ``master_seed``.

    The mapping depends only on the pair, so the order in which components
    request their streams never changes the numbers they receive.
    """
    digest = hashlib.sha256(f'{int(master_seed)}:{label}'.encode()).digest()
    return int.from_bytes(digest[:8], 'little')


def derive_rng(master_seed, label):
    return np.random.default_rng(derive_seed(master_seed, label))


def as_rng(rng):
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)
