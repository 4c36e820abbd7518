# Copyright (c) shadowpose contributors. All rights reserved.
import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Union

import torch

from shadowpose import fileio
from shadowpose.imaging import RESIZE_POLICIES
from shadowpose.losses import NORM_MODES, LossToggles
from shadowpose.models import NetworkConfig

OPTIMIZERS = ('adam', 'sgd')
DTYPES = {'float32': torch.float32, 'float64': torch.float64}

# Fields that may differ between a checkpoint and the config resuming it.
RESUMABLE_FIELDS = ('steps', 'eval_every', 'checkpoint_every', 'work_dir',
                    'num_workers', 'eval_dataset')


@dataclass
class TrainConfig:
    """Everything that determines a training run.

    Args:
        steps (int): Total optimizer steps. Must be > 0.
        batch_size (int): Samples per step. Defaults to 8.
        learning_rate (float): Defaults to 1e-4.
        optimizer (str): ``'adam'`` (adaptive moment) or ``'sgd'`` (with
            momentum). Defaults to 'adam'.
        momentum (float): SGD momentum. Defaults to 0.9.
        seed (int): Seeds the weight init and the data order. Defaults to 0.
        toggles (LossToggles): Loss terms to optimize.
        eval_every (int): Held-out evaluation cadence in steps, 0 to
            evaluate only at the end. Defaults to 0.
        checkpoint_every (int): Extra checkpoint cadence in steps, 0 for the
            final checkpoint only. Defaults to 0.
        dataset (str): Training manifest path.
        eval_dataset (str, optional): Held-out manifest path.
        resize_policy (str): ``'scale'`` or ``'center-crop'``.
            Defaults to 'scale'.
        grad_clip (float): Global gradient norm clip, 0 disables it.
            Defaults to 5.0.
        dtype (str): ``'float32'`` or ``'float64'``. Defaults to 'float32'.
        network (NetworkConfig): Network topology.
        feature_extractor (str or dict): See
            :func:`shadowpose.losses.build_feature_extractor`.
            Defaults to 'resnet50'.
        norm_mode (str): Norm of the feature and edge terms.
            Defaults to 'sum'.
        work_dir (str): Output directory of logs and checkpoints.
        num_workers (int): Image decoding threads. Defaults to 1.
    """
    steps: int = 1000
    batch_size: int = 8
    learning_rate: float = 1e-4
    optimizer: str = 'adam'
    momentum: float = 0.9
    seed: int = 0
    toggles: LossToggles = field(default_factory=LossToggles)
    eval_every: int = 0
    checkpoint_every: int = 0
    dataset: str = ''
    eval_dataset: Optional[str] = None
    resize_policy: str = 'scale'
    grad_clip: float = 5.0
    dtype: str = 'float32'
    network: NetworkConfig = field(default_factory=NetworkConfig)
    feature_extractor: Union[str, Dict] = 'resnet50'
    norm_mode: str = 'sum'
    work_dir: str = 'work_dirs/train'
    num_workers: int = 1

    def __post_init__(self) -> None:
        if not isinstance(self.toggles, LossToggles):
            self.toggles = LossToggles.parse(self.toggles)
        if isinstance(self.network, dict):
            self.network = NetworkConfig.from_dict(self.network)

    def validate(self) -> 'TrainConfig':
        if self.steps <= 0:
            raise ValueError(f'steps should be > 0, got {self.steps}')
        if self.batch_size < 1:
            raise ValueError(
                f'batch_size should be >= 1, got {self.batch_size}')
        if not self.learning_rate > 0:
            raise ValueError('learning_rate should be > 0, got '
                             f'{self.learning_rate}')
        if self.optimizer not in OPTIMIZERS:
            raise ValueError(f'optimizer should be one of {OPTIMIZERS}, got '
                             f'{self.optimizer!r}')
        if self.eval_every < 0 or self.checkpoint_every < 0:
            raise ValueError('eval_every and checkpoint_every should be >= 0')
        if self.resize_policy not in RESIZE_POLICIES:
            raise ValueError(f'resize_policy should be one of '
                             f'{RESIZE_POLICIES}, got {self.resize_policy!r}')
        if self.grad_clip < 0:
            raise ValueError(f'grad_clip should be >= 0, got {self.grad_clip}')
        if self.dtype not in DTYPES:
            raise ValueError(f'dtype should be one of {sorted(DTYPES)}, got '
                             f'{self.dtype!r}')
        if self.norm_mode not in NORM_MODES:
            raise ValueError(f'norm_mode should be one of {NORM_MODES}, got '
                             f'{self.norm_mode!r}')
        if self.num_workers < 1:
            raise ValueError(
                f'num_workers should be >= 1, got {self.num_workers}')
        self.toggles.validate()
        self.network.validate()
        return self

    @property
    def torch_dtype(self) -> torch.dtype:
        return DTYPES[self.dtype]

    def to_dict(self) -> Dict[str, Any]:
        record = {
            f.name: getattr(self, f.name)
            for f in dataclasses.fields(self)
        }
        record['toggles'] = self.toggles.to_dict()
        record['network'] = self.network.to_dict()
        return record

    @classmethod
    def from_dict(cls, record: Dict[str, Any]) -> 'TrainConfig':
        unknown = set(record) - {f.name for f in dataclasses.fields(cls)}
        if unknown:
            raise KeyError(f'Unknown train config fields: {sorted(unknown)}')
        return cls(**record)

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> 'TrainConfig':
        """Load a JSON or YAML file mirroring the fields of this class.

        Relative ``dataset`` and ``eval_dataset`` paths are resolved against
        the directory of the file.
        """
        path = Path(path)
        record = fileio.load(path)
        if not isinstance(record, dict):
            raise ValueError(f'{path} should contain a mapping')
        for key in ('dataset', 'eval_dataset'):
            value = record.get(key)
            if value and not Path(value).is_absolute():
                record[key] = str(path.parent / value)
        return cls.from_dict(record)

    def merge(self, overrides: Dict[str, Any]) -> 'TrainConfig':
        """Return a copy with the non-None ``overrides`` applied."""
        record = self.to_dict()
        for key, value in overrides.items():
            if value is None:
                continue
            if key not in record:
                raise KeyError(f'Unknown train config field {key!r}')
            record[key] = value
        return self.from_dict(record)

    def changed_fields(self, other: 'TrainConfig') -> Dict[str, tuple]:
        """Fields whose values differ from ``other``."""
        mine, theirs = self.to_dict(), other.to_dict()
        return {
            key: (theirs[key], mine[key])
            for key in mine if mine[key] != theirs[key]
        }
