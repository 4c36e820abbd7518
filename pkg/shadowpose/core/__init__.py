# Copyright (c) shadowpose contributors. All rights reserved.

from shadowpose.core.base_metric import BaseMetric
from shadowpose.core.dispatcher import dispatch
from shadowpose.core.errors import (EstimatorError, FingerprintMismatchError,
                                    TrainingDivergedError)

__all__ = [
    'dispatch', 'BaseMetric', 'FingerprintMismatchError', 'EstimatorError',
    'TrainingDivergedError'
]
