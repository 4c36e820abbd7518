# Copyright (c) shadowpose contributors. All rights reserved.

import numpy as np
import pytest
import torch

from shadowpose.core import dispatch


@dispatch
def _describe(x: np.ndarray):
    return 'numpy'


@dispatch
def _describe(x: torch.Tensor):  # noqa: F811
    return 'torch'


def test_dispatch_by_array_type():
    assert _describe(np.zeros(3)) == 'numpy'
    assert _describe(torch.zeros(3)) == 'torch'


def test_dispatch_unknown_type():
    with pytest.raises(Exception):
        _describe([0, 1, 2])
