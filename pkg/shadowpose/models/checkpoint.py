# Copyright (c) shadowpose contributors. All rights reserved.
"""Single-file checkpoint archive.

Byte layout (all integers little-endian)::

    offset 0   4 bytes   magic b'SPCK'
    offset 4   uint32    schema version
    offset 8   uint64    header length L
    offset 16  L bytes   UTF-8 JSON header
    offset 16+L          tensor payload

The header holds the network config, its fingerprint, the training meta
(seed, step, loss tail, ...), the optimizer hyper-parameters and a tensor
table. Every table row gives ``name``, ``dtype``, ``shape``, ``offset`` (from
the start of the payload) and ``nbytes``. Network parameters are named as in
``state_dict()``; optimizer state tensors are named
``optimizer/<param index>/<key>``.
"""
import json
import logging
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import torch

from shadowpose.core import FingerprintMismatchError
from .config import NetworkConfig
from .network import EnhancementNetwork, build_network

logger = logging.getLogger(__name__)

MAGIC = b'SPCK'
SCHEMA_VERSION = 1
OPTIMIZER_PREFIX = 'optimizer/'

_PREAMBLE = struct.Struct('<4sIQ')
_DTYPES = {
    torch.float32: 'float32',
    torch.float64: 'float64',
    torch.float16: 'float16',
    torch.int64: 'int64',
    torch.int32: 'int32',
}
_TORCH_DTYPES = {v: k for k, v in _DTYPES.items()}


@dataclass
class Checkpoint:
    """Decoded content of an archive.

    Attributes:
        config (NetworkConfig): The network topology.
        fingerprint (str): Fingerprint stored with the archive.
        meta (dict): Training meta (seed, step, loss tail, ...).
        tensors (dict): Network parameters by ``state_dict`` name.
        optimizer_state (dict, optional): ``torch.optim`` state dict, or
            None when no optimizer was stored.
    """
    config: NetworkConfig
    fingerprint: str
    meta: Dict = field(default_factory=dict)
    tensors: Dict[str, torch.Tensor] = field(default_factory=dict)
    optimizer_state: Optional[Dict] = None

    def build(self) -> EnhancementNetwork:
        """Build the stored network with its weights loaded."""
        dtype = next(iter(self.tensors.values())).dtype
        net = build_network(self.config, dtype=dtype)
        names = set(net.state_dict())
        if names != set(self.tensors):
            raise ValueError(
                'Checkpoint parameters do not match the network: missing '
                f'{sorted(names - set(self.tensors))}, unexpected '
                f'{sorted(set(self.tensors) - names)}')
        net.load_state_dict(self.tensors)
        return net


def _tensor_bytes(tensor: torch.Tensor) -> Tuple[str, bytes]:
    tensor = tensor.detach().cpu().contiguous()
    if tensor.dtype not in _DTYPES:
        raise TypeError(f'Unsupported tensor dtype {tensor.dtype}')
    name = _DTYPES[tensor.dtype]
    array = tensor.numpy().astype(np.dtype(name).newbyteorder('<'))
    return name, array.tobytes()


def _split_optimizer_state(
        state_dict: Dict) -> Tuple[Dict[str, torch.Tensor], Dict]:
    tensors = {}
    scalars: Dict[str, Dict] = {}
    for index, state in state_dict['state'].items():
        for key, value in state.items():
            if isinstance(value, torch.Tensor):
                tensors[f'{OPTIMIZER_PREFIX}{index}/{key}'] = value
            else:
                scalars.setdefault(str(index), {})[key] = value
    return tensors, {
        'param_groups': state_dict['param_groups'],
        'scalars': scalars
    }


def save_checkpoint(path: Union[str, Path],
                    net: EnhancementNetwork,
                    meta: Optional[Dict] = None,
                    optimizer: Optional[torch.optim.Optimizer] = None) -> Path:
    """Write ``net`` (and optionally the optimizer state) to one file.

    Args:
        path (str or Path): Target file. Parent directories are created.
        net (EnhancementNetwork): The network to store.
        meta (dict, optional): JSON-serializable training meta.
        optimizer (torch.optim.Optimizer, optional): Optimizer whose state
            is stored for exact resumption.

    Returns:
        Path: The written file.
    """
    path = Path(path)
    tensors: Dict[str, torch.Tensor] = dict(net.state_dict())
    optimizer_header = None
    if optimizer is not None:
        optimizer_tensors, optimizer_header = _split_optimizer_state(
            optimizer.state_dict())
        tensors.update(optimizer_tensors)

    table: List[Dict] = []
    chunks: List[bytes] = []
    offset = 0
    for name, tensor in tensors.items():
        dtype, data = _tensor_bytes(tensor)
        table.append({
            'name': name,
            'dtype': dtype,
            'shape': list(tensor.shape),
            'offset': offset,
            'nbytes': len(data)
        })
        chunks.append(data)
        offset += len(data)

    header = {
        'schema_version': SCHEMA_VERSION,
        'config': net.cfg.to_dict(),
        'fingerprint': net.cfg.fingerprint,
        'meta': meta or {},
        'optimizer': optimizer_header,
        'tensors': table
    }
    header_bytes = json.dumps(
        header, sort_keys=True, separators=(',', ':')).encode('utf-8')
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + '.tmp')
    with open(tmp, 'wb') as f:
        f.write(_PREAMBLE.pack(MAGIC, SCHEMA_VERSION, len(header_bytes)))
        f.write(header_bytes)
        for chunk in chunks:
            f.write(chunk)
    tmp.replace(path)
    logger.debug(f'Saved checkpoint {path} ({offset} payload bytes)')
    return path


def read_header(path: Union[str, Path]) -> Dict:
    """Read only the JSON header of an archive."""
    with open(path, 'rb') as f:
        header, _ = _read_header(f, Path(path))
    return header


def _read_header(f, path: Path) -> Tuple[Dict, int]:
    preamble = f.read(_PREAMBLE.size)
    if len(preamble) != _PREAMBLE.size:
        raise ValueError(f'{path} is too short to be a checkpoint')
    magic, version, length = _PREAMBLE.unpack(preamble)
    if magic != MAGIC:
        raise ValueError(f'{path} is not a checkpoint archive')
    if version > SCHEMA_VERSION:
        raise ValueError(f'{path} has schema version {version}, this build '
                         f'reads up to {SCHEMA_VERSION}')
    try:
        header = json.loads(f.read(length).decode('utf-8'))
    except ValueError as e:
        raise ValueError(f'Corrupted checkpoint header in {path}: {e}') from e
    return header, _PREAMBLE.size + length


def load_checkpoint(path: Union[str, Path],
                    expected: Optional[NetworkConfig] = None) -> Checkpoint:
    """Read an archive written by :func:`save_checkpoint`.

    Args:
        path (str or Path): Archive path.
        expected (NetworkConfig, optional): If given, the archive must have
            been written for this config.

    Returns:
        Checkpoint: The decoded archive. Use :meth:`Checkpoint.build` to get
        the network back.

    Raises:
        FingerprintMismatchError: If the stored config does not hash to the
            stored fingerprint, or differs from ``expected``.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f'Checkpoint not found: {path}')
    with open(path, 'rb') as f:
        header, _ = _read_header(f, path)
        payload = f.read()

    config = NetworkConfig.from_dict(header['config'])
    stored = header['fingerprint']
    if config.fingerprint != stored:
        raise FingerprintMismatchError(stored, config.fingerprint, str(path))
    if expected is not None and expected.fingerprint != stored:
        raise FingerprintMismatchError(expected.fingerprint, stored,
                                       str(path))

    tensors: Dict[str, torch.Tensor] = {}
    optimizer_tensors: Dict[str, torch.Tensor] = {}
    for row in header['tensors']:
        start, stop = row['offset'], row['offset'] + row['nbytes']
        if stop > len(payload):
            raise ValueError(f'Truncated checkpoint {path}: tensor '
                             f'{row["name"]} ends past the payload')
        dtype = np.dtype(row['dtype']).newbyteorder('<')
        array = np.frombuffer(payload[start:stop], dtype=dtype)
        tensor = torch.from_numpy(
            array.astype(array.dtype.newbyteorder('=')).reshape(
                row['shape']).copy())
        if row['name'].startswith(OPTIMIZER_PREFIX):
            optimizer_tensors[row['name']] = tensor
        else:
            tensors[row['name']] = tensor

    optimizer_state = None
    if header.get('optimizer') is not None:
        optimizer_state = _join_optimizer_state(header['optimizer'],
                                                optimizer_tensors)
    return Checkpoint(
        config=config,
        fingerprint=stored,
        meta=header.get('meta', {}),
        tensors=tensors,
        optimizer_state=optimizer_state)


def _join_optimizer_state(record: Dict,
                          tensors: Dict[str, torch.Tensor]) -> Dict:
    state: Dict[int, Dict] = {}
    for index, values in record['scalars'].items():
        state.setdefault(int(index), {}).update(values)
    for name, tensor in tensors.items():
        index, key = name[len(OPTIMIZER_PREFIX):].split('/', 1)
        state.setdefault(int(index), {})[key] = tensor
    return {'state': state, 'param_groups': record['param_groups']}


def parameter_names(path: Union[str, Path]) -> List[str]:
    """Names of the network parameters listed in an archive."""
    return [
        row['name'] for row in read_header(path)['tensors']
        if not row['name'].startswith(OPTIMIZER_PREFIX)
    ]
