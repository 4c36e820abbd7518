# Copyright (c) shadowpose contributors. All rights reserved.
from .config import DTYPES, OPTIMIZERS, RESUMABLE_FIELDS, TrainConfig
from .data import PairLoader, StepSampler
from .log import LOG_NAME, TrainLog
from .trainer import (TrainResult, Trainer, build_optimizer, checkpoint_path,
                      evaluate_ssim, resume, train)

__all__ = [
    'TrainConfig', 'OPTIMIZERS', 'DTYPES', 'RESUMABLE_FIELDS', 'StepSampler',
    'PairLoader', 'TrainLog', 'LOG_NAME', 'Trainer', 'TrainResult', 'train',
    'resume', 'evaluate_ssim', 'build_optimizer', 'checkpoint_path'
]
