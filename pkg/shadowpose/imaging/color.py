# Copyright (c) shadowpose contributors. All rights reserved.
import numpy as np
import torch

from shadowpose.core import dispatch

# ITU-R BT.601 luma weights for R, G, B.
LUMA_WEIGHTS = (0.299, 0.587, 0.114)


@dispatch
def to_grayscale(img: np.ndarray) -> np.ndarray:
    """Convert an RGB image to luminance.

    Args:
        img (np.ndarray): H x W x 3 image in [0, 1].

    Returns:
        np.ndarray: H x W x 1 image, ``0.299 R + 0.587 G + 0.114 B``.
    """
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError('to_grayscale expects a 3-channel H x W x 3 image, '
                         f'but got shape {img.shape}')
    wr, wg, wb = LUMA_WEIGHTS
    gray = img[..., 0] * wr + img[..., 1] * wg + img[..., 2] * wb
    return gray[..., None]


@dispatch
def to_grayscale(img: torch.Tensor) -> torch.Tensor:  # noqa: F811
    """Convert an RGB tensor (C x H x W or N x C x H x W) to luminance.

    The channel axis is kept with size 1.
    """
    if img.dim() not in (3, 4) or img.shape[-3] != 3:
        raise ValueError('to_grayscale expects a 3-channel (N x) 3 x H x W '
                         f'tensor, but got shape {tuple(img.shape)}')
    wr, wg, wb = LUMA_WEIGHTS
    r, g, b = img.unbind(dim=-3)
    return (r * wr + g * wg + b * wb).unsqueeze(-3)
