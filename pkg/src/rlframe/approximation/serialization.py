"""Versioned binary snapshots of regressors.

Layout, all integers little-endian::

    magic      4 bytes  b'RLRG'
    version    uint16   FORMAT_VERSION
    tag        uint8    0 array, 1 tabular, 2 linear, 3 mlp, 4 q-regressor,
                        100 + n feature map with tag n, 200 agent state
    reserved   uint8    0
    n_blocks   uint32
    blocks     n_blocks times:
                 kind uint8 = 0: ndim uint8, shape uint32 * ndim,
                                 float64 data in row-major order
                 kind uint8 = 1: length uint32, nested snapshot bytes
    crc32      uint32   over every preceding byte
"""
import struct
import zlib

import numpy as np

from rlframe.approximation.features import FEATURE_TYPES
from rlframe.approximation.q_regressor import QRegressor
from rlframe.approximation.regressors import Linear, Mlp, Tabular
from rlframe.errors import DecodeError, UnsupportedOperationError, VersionError

MAGIC = b'RLRG'
FORMAT_VERSION = 1

TAG_ARRAY, TAG_TABULAR, TAG_LINEAR, TAG_MLP, TAG_Q = range(5)
_FEATURE_OFFSET = 100
_ACTIVATIONS = ['relu', 'tanh']
_OPTIMIZERS = ['sgd', 'rmsprop', 'adam']


def pack(tag, blocks):
    out = [MAGIC, struct.pack('<HBBI', FORMAT_VERSION, tag, 0, len(blocks))]
    for block in blocks:
        if isinstance(block, (bytes, bytearray)):
            out.append(struct.pack('<BI', 1, len(block)))
            out.append(bytes(block))
        else:
            arr = np.ascontiguousarray(block, dtype='<f8')
            out.append(struct.pack('<BB', 0, arr.ndim))
            out.append(struct.pack(f'<{arr.ndim}I', *arr.shape))
            out.append(arr.tobytes(order='C'))
    body = b''.join(out)
    return body + struct.pack('<I', zlib.crc32(body))


def unpack(data):
    """Inverse of ``pack``: returns ``(tag, blocks)``."""
    data = bytes(data)
    if len(data) < 16 or data[:4] != MAGIC:
        raise DecodeError('not a regressor snapshot (bad magic or too short)')
    version, tag, _, n_blocks = struct.unpack_from('<HBBI', data, 4)
    if version != FORMAT_VERSION:
        raise VersionError(version, FORMAT_VERSION)
    (crc,) = struct.unpack_from('<I', data, len(data) - 4)
    if zlib.crc32(data[:-4]) != crc:
        raise DecodeError('snapshot checksum mismatch (truncated or corrupted)')
    pos = 12
    end = len(data) - 4
    blocks = []
    try:
        for _ in range(n_blocks):
            (kind,) = struct.unpack_from('<B', data, pos)
            pos += 1
            if kind == 0:
                (ndim,) = struct.unpack_from('<B', data, pos)
                pos += 1
                shape = struct.unpack_from(f'<{ndim}I', data, pos)
                pos += 4 * ndim
                nbytes = 8 * int(np.prod(shape, dtype=np.int64))
                if pos + nbytes > end:
                    raise DecodeError('array block runs past the end of the snapshot')
                blocks.append(np.frombuffer(data, '<f8', int(np.prod(shape)), pos).reshape(shape).astype(float))
                pos += nbytes
            elif kind == 1:
                (length,) = struct.unpack_from('<I', data, pos)
                pos += 4
                if pos + length > end:
                    raise DecodeError('nested block runs past the end of the snapshot')
                blocks.append(data[pos:pos + length])
                pos += length
            else:
                raise DecodeError(f'unknown block kind {kind}')
    except struct.error as e:
        raise DecodeError(f'malformed snapshot: {e}') from None
    if pos != end:
        raise DecodeError('trailing bytes after the last block')
    return tag, blocks


def snapshot(obj):
    """Serialize an array, feature map, regressor or ``QRegressor`` to bytes."""
    if isinstance(obj, np.ndarray):
        return pack(TAG_ARRAY, [obj])
    if isinstance(obj, Tabular):
        return pack(TAG_TABULAR, [obj.table])
    if isinstance(obj, Linear):
        return pack(TAG_LINEAR, [snapshot(obj.features), obj.weights])
    if isinstance(obj, Mlp):
        meta = np.array([_ACTIVATIONS.index(obj.activation), _OPTIMIZERS.index(obj.optimizer),
                         obj.lr, obj.decay, obj.eps, obj.n_epochs, obj.batch_size or 0])
        return pack(TAG_MLP, [np.array(obj.sizes, dtype=float), meta] + obj.parameters())
    if isinstance(obj, QRegressor):
        return pack(TAG_Q, [np.array([obj.n_actions], dtype=float)] + [snapshot(m) for m in obj.models])
    tag = getattr(obj, 'tag', None)
    if tag in FEATURE_TYPES:
        return pack(_FEATURE_OFFSET + tag, obj.to_arrays())
    raise UnsupportedOperationError(f'cannot snapshot {type(obj).__name__}')


def restore(data):
    tag, blocks = unpack(data)
    try:
        return _build(tag, blocks)
    except DecodeError:
        raise
    except (IndexError, ValueError, TypeError, KeyError) as e:
        raise DecodeError(f'inconsistent snapshot content: {e}') from None


def _build(tag, blocks):
    if tag == TAG_ARRAY:
        return blocks[0]
    if tag == TAG_TABULAR:
        table = blocks[0]
        r = Tabular(*table.shape)
        r.table = table.copy()
        return r
    if tag == TAG_LINEAR:
        r = Linear(restore(blocks[0]), blocks[1].shape[0])
        if r.weights.shape != blocks[1].shape:
            raise DecodeError('linear weights do not match the feature dimension')
        r.weights = blocks[1].copy()
        return r
    if tag == TAG_MLP:
        sizes = [int(s) for s in blocks[0]]
        act, opt, lr, decay, eps, n_epochs, batch_size = blocks[1]
        r = Mlp(sizes[0], sizes[-1], hidden=sizes[1:-1], activation=_ACTIVATIONS[int(act)],
                optimizer=_OPTIMIZERS[int(opt)], lr=lr, decay=decay, eps=eps,
                n_epochs=int(n_epochs), batch_size=int(batch_size))
        params = blocks[2:]
        if len(params) != 2 * (len(sizes) - 1):
            raise DecodeError('network parameter count does not match its layer sizes')
        for p, new in zip(r.parameters(), params):
            if p.shape != new.shape:
                raise DecodeError('network parameter shape does not match its layer sizes')
            p[...] = new
        return r
    if tag == TAG_Q:
        members = [restore(b) for b in blocks[1:]]
        q = QRegressor(members[0], int(blocks[0][0]))
        q.models = members
        return q
    if tag - _FEATURE_OFFSET in FEATURE_TYPES:
        return FEATURE_TYPES[tag - _FEATURE_OFFSET].from_arrays(blocks)
    raise DecodeError(f'unknown snapshot tag {tag}')
