# Copyright (c) shadowpose contributors. All rights reserved.
from typing import Tuple

import numpy as np
import torch

from shadowpose.utils import try_import

cv2 = try_import('cv2')

RESIZE_POLICIES = ('scale', 'center-crop')


def center_crop_box(height: int, width: int,
                     size: Tuple[int, int]) -> Tuple[int, int, int, int]:
    """Largest centred box with the aspect ratio of ``size``."""
    target_h, target_w = size
    if height * target_w > width * target_h:
        crop_h, crop_w = round(width * target_h / target_w), width
    else:
        crop_h, crop_w = height, round(height * target_w / target_h)
    top = (height - crop_h) // 2
    left = (width - crop_w) // 2
    return top, left, crop_h, crop_w


def resize_image(img: np.ndarray,
                 size: Tuple[int, int],
                 policy: str = 'scale') -> np.ndarray:
    """Resize a channel-last image to ``size`` (height, width).

    Args:
        img (np.ndarray): H x W x C image.
        size (tuple[int, int]): Target height and width.
        policy (str): ``'scale'`` stretches the whole frame, keeping all of
            the content. ``'center-crop'`` first crops the largest centred
            region with the target aspect ratio. Defaults to 'scale'.

    Returns:
        np.ndarray: Resized float64 image.
    """
    if cv2 is None:
        raise ImportError('resize_image requires opencv-python, please '
                          'install it first.')
    if policy not in RESIZE_POLICIES:
        raise KeyError(f'Unknown resize policy {policy!r}, should be one of '
                       f'{RESIZE_POLICIES}')
    height, width = img.shape[:2]
    if policy == 'center-crop':
        top, left, crop_h, crop_w = center_crop_box(height, width, size)
        img = img[top:top + crop_h, left:left + crop_w]
        height, width = crop_h, crop_w
    if (height, width) == tuple(size):
        return img.astype(np.float64)
    shrink = size[0] <= height and size[1] <= width
    interpolation = cv2.INTER_AREA if shrink else cv2.INTER_LINEAR
    out = cv2.resize(
        img.astype(np.float64), (size[1], size[0]),
        interpolation=interpolation)
    if out.ndim == 2:
        out = out[..., None]
    return np.clip(out, 0., 1.)


def to_tensor(batch: np.ndarray,
              dtype: torch.dtype = torch.float32) -> torch.Tensor:
    """Convert an H x W x C image or N x H x W x C batch to N x C x H x W."""
    if batch.ndim == 3:
        batch = batch[None]
    if batch.ndim != 4:
        raise ValueError(f'Expected H x W x C or N x H x W x C, got '
                         f'{batch.shape}')
    return torch.from_numpy(
        np.ascontiguousarray(batch.transpose(0, 3, 1, 2))).to(dtype)


def to_image(tensor: torch.Tensor) -> np.ndarray:
    """Convert an N x C x H x W tensor to an N x H x W x C float64 array."""
    if tensor.dim() == 3:
        tensor = tensor.unsqueeze(0)
    return tensor.detach().cpu().to(torch.float64).numpy().transpose(
        0, 2, 3, 1)
