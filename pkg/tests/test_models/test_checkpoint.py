# Copyright (c) shadowpose contributors. All rights reserved.
import json
import struct

import pytest
import torch

from shadowpose.core import FingerprintMismatchError
from shadowpose.models import (NetworkConfig, build_network, load_checkpoint,
                               parameter_names, read_header, save_checkpoint)

SMALL = NetworkConfig(input_size=(16, 16, 3), conv_channels=4,
                      blocks_per_em=1, em_count=2)


def test_save_load(tmp_path):
    net = build_network(SMALL, seed=5)
    path = save_checkpoint(tmp_path / 'a' / 'net.spck', net, {'step': 3})
    assert path.read_bytes()[:4] == b'SPCK'

    ckpt = load_checkpoint(path, expected=SMALL)
    assert ckpt.config == SMALL
    assert ckpt.meta == {'step': 3}
    assert ckpt.optimizer_state is None
    restored = ckpt.build()
    for key, value in net.state_dict().items():
        assert torch.equal(restored.state_dict()[key], value)

    assert parameter_names(path) == list(net.state_dict())
    assert read_header(path)['fingerprint'] == SMALL.fingerprint


def test_optimizer_state_round_trip(tmp_path):
    net = build_network(SMALL, dtype=torch.float64)
    optimizer = torch.optim.Adam(net.parameters(), lr=1e-3)
    net(torch.rand(1, 3, 16, 16, dtype=torch.float64)).mean().backward()
    optimizer.step()

    path = save_checkpoint(tmp_path / 'net.spck', net, optimizer=optimizer)
    ckpt = load_checkpoint(path)
    restored = torch.optim.Adam(ckpt.build().parameters(), lr=1e-3)
    restored.load_state_dict(ckpt.optimizer_state)
    original = optimizer.state_dict()['state']
    for index, state in restored.state_dict()['state'].items():
        for key in ('exp_avg', 'exp_avg_sq'):
            assert torch.equal(state[key], original[index][key])


def test_fingerprint_mismatch(tmp_path):
    path = save_checkpoint(tmp_path / 'net.spck', build_network(SMALL))
    with pytest.raises(FingerprintMismatchError):
        load_checkpoint(path, expected=NetworkConfig())

    # A header whose config no longer hashes to its fingerprint.
    data = path.read_bytes()
    magic, version, length = struct.unpack('<4sIQ', data[:16])
    header = json.loads(data[16:16 + length])
    header['config']['conv_channels'] = 5
    raw = json.dumps(header).encode('utf-8')
    tampered = tmp_path / 'tampered.spck'
    tampered.write_bytes(
        struct.pack('<4sIQ', magic, version, len(raw)) + raw +
        data[16 + length:])
    with pytest.raises(FingerprintMismatchError):
        load_checkpoint(tampered)


def test_load_errors(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_checkpoint(tmp_path / 'missing.spck')
    bad = tmp_path / 'bad.spck'
    bad.write_bytes(b'PK\x03\x04' + b'\x00' * 20)
    with pytest.raises(ValueError, match='not a checkpoint'):
        load_checkpoint(bad)
    (tmp_path / 'short.spck').write_bytes(b'SP')
    with pytest.raises(ValueError, match='too short'):
        load_checkpoint(tmp_path / 'short.spck')

    path = save_checkpoint(tmp_path / 'net.spck', build_network(SMALL))
    (tmp_path / 'cut.spck').write_bytes(path.read_bytes()[:-8])
    with pytest.raises(ValueError, match='Truncated'):
        load_checkpoint(tmp_path / 'cut.spck')
