# Copyright (c) shadowpose contributors. All rights reserved.
import dataclasses
import hashlib
import json
from dataclasses import dataclass
from typing import Dict, Tuple

SHORTCUT_MERGES = ('add', )


@dataclass(frozen=True)
class NetworkConfig:
    """Topology constants of the enhancement network.

    Args:
        input_size (tuple[int, int, int]): Height, width and channels of the
            network input. Defaults to (256, 256, 3).
        em_count (int): Number of sequential enhancement modules.
            Defaults to 3.
        blocks_per_em (int): MiniRes blocks inside one module. Defaults to 3.
        conv_channels (int): Width of every hidden convolution.
            Defaults to 32.
        kernel (int): Spatial side of every convolution kernel, odd.
            Defaults to 3.
        pool (int): Max-pooling window, applied with stride 1 and same
            padding so the spatial size is kept. Defaults to 3.
        shortcut_merge (str): How shortcut branches are merged. Only
            ``'add'`` is supported. Defaults to 'add'.
        network_shortcuts (bool): Whether the raw input is added to the
            input of every module after the first. Defaults to True.
    """
    input_size: Tuple[int, int, int] = (256, 256, 3)
    em_count: int = 3
    blocks_per_em: int = 3
    conv_channels: int = 32
    kernel: int = 3
    pool: int = 3
    shortcut_merge: str = 'add'
    network_shortcuts: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, 'input_size',
                           tuple(int(v) for v in self.input_size))

    def validate(self) -> 'NetworkConfig':
        if len(self.input_size) != 3 or min(self.input_size) <= 0:
            raise ValueError('input_size should be a positive (H, W, C) '
                             f'triple, got {self.input_size}')
        if self.input_size[2] != 3:
            raise ValueError('input_size should have 3 channels, got '
                             f'{self.input_size[2]}')
        if self.em_count < 1:
            raise ValueError(f'em_count should be >= 1, got {self.em_count}')
        if self.blocks_per_em < 1:
            raise ValueError('blocks_per_em should be >= 1, got '
                             f'{self.blocks_per_em}')
        if self.conv_channels <= 0:
            raise ValueError('conv_channels should be > 0, got '
                             f'{self.conv_channels}')
        if self.kernel < 1 or self.kernel % 2 == 0:
            raise ValueError(f'kernel should be odd, got {self.kernel}')
        if self.pool < 1 or self.pool % 2 == 0:
            raise ValueError(f'pool should be odd, got {self.pool}')
        if self.shortcut_merge not in SHORTCUT_MERGES:
            raise ValueError(f'shortcut_merge should be one of '
                             f'{SHORTCUT_MERGES}, got {self.shortcut_merge!r}')
        return self

    def to_dict(self) -> Dict:
        record = dataclasses.asdict(self)
        record['input_size'] = list(self.input_size)
        return record

    @classmethod
    def from_dict(cls, record: Dict) -> 'NetworkConfig':
        unknown = set(record) - {f.name for f in dataclasses.fields(cls)}
        if unknown:
            raise KeyError(f'Unknown network config fields: {sorted(unknown)}')
        return cls(**record)

    @property
    def fingerprint(self) -> str:
        """sha256 of the canonical JSON form of the config."""
        text = json.dumps(self.to_dict(), sort_keys=True,
                          separators=(',', ':'))
        return hashlib.sha256(text.encode('utf-8')).hexdigest()


def _conv_params(kernel: int, c_in: int, c_out: int) -> int:
    return (kernel * kernel * c_in + 1) * c_out


def count_parameters(cfg: NetworkConfig) -> int:
    """Closed-form number of learnable parameters of ``build_network(cfg)``.

    Shortcuts and pooling carry no weights, so only the convolutions count.

    Examples:
        >>> count_parameters(NetworkConfig())
        171753
    """
    cfg.validate()
    channels = cfg.input_size[2]
    width = cfg.conv_channels
    per_em = _conv_params(cfg.kernel, channels, width) + \
        2 * cfg.blocks_per_em * _conv_params(cfg.kernel, width, width) + \
        _conv_params(cfg.kernel, width, channels)
    return cfg.em_count * per_em
