# Copyright (c) shadowpose contributors. All rights reserved.
"""Multiple dispatch on array types.

The pixel primitives of :mod:`shadowpose.imaging` have two implementations:
one for ``numpy.ndarray`` images in channel-last layout, used by metrics,
data synthesis and test oracles, and one for ``torch.Tensor`` batches in
channel-first layout, used by the differentiable losses. The implementation
is selected from the type hints of the positional arguments.

Example:

    >>> import numpy as np
    >>> import torch
    >>> from shadowpose.core import dispatch

    >>> @dispatch
    >>> def describe(x: np.ndarray):
    ...     return 'numpy'

    >>> @dispatch
    >>> def describe(x: torch.Tensor):
    ...     return 'torch'

    >>> describe(np.zeros(3)), describe(torch.zeros(3))
    ('numpy', 'torch')

Currently, we use plum (a multiple dispatch library) to implement the
mechanism. Keyword arguments do not take part in the dispatch, so every
dispatched function annotates only its array arguments.
"""
import plum

dispatch = plum.Dispatcher()
