# Copyright (c) shadowpose contributors. All rights reserved.
import numpy as np
import torch
import torch.nn.functional as F

from shadowpose.core import dispatch
from shadowpose.utils import try_import
from .color import to_grayscale

cv2 = try_import('cv2')


def safe_sqrt(x: torch.Tensor) -> torch.Tensor:
    """``sqrt`` whose gradient at exactly zero is zero instead of inf."""
    positive = x > 0
    safe = torch.where(positive, x, torch.ones_like(x))
    return torch.where(positive, torch.sqrt(safe), torch.zeros_like(x))


@dispatch
def sobel_edge_map(img: np.ndarray) -> np.ndarray:
    """Sobel gradient magnitude of a channel-last image.

    Colour images are reduced to luminance first. Borders are mirrored
    without repeating the edge pixel.

    Args:
        img (np.ndarray): H x W, H x W x 1 or H x W x 3 image.

    Returns:
        np.ndarray: H x W x 1 float64 map ``sqrt(Gx^2 + Gy^2)``.
    """
    if cv2 is None:
        raise ImportError('sobel_edge_map requires opencv-python, please '
                          'install it first.')
    if img.ndim == 3 and img.shape[2] == 3:
        img = to_grayscale(img)
    if img.ndim == 3:
        if img.shape[2] != 1:
            raise ValueError('sobel_edge_map expects 1 or 3 channels, but '
                             f'got shape {img.shape}')
        img = img[..., 0]
    if img.shape[0] < 3 or img.shape[1] < 3:
        raise ValueError(
            f'sobel_edge_map needs an image of at least 3x3, got {img.shape}')
    img = img.astype(np.float64)
    gx = cv2.Sobel(
        img, cv2.CV_64F, 1, 0, ksize=3, borderType=cv2.BORDER_REFLECT_101)
    gy = cv2.Sobel(
        img, cv2.CV_64F, 0, 1, ksize=3, borderType=cv2.BORDER_REFLECT_101)
    return np.sqrt(gx * gx + gy * gy)[..., None]


@dispatch
def sobel_edge_map(img: torch.Tensor) -> torch.Tensor:  # noqa: F811
    """Sobel gradient magnitude of a (N x) C x H x W tensor.

    Returns a (N x) 1 x H x W tensor. The gradient is zero wherever the
    magnitude is exactly zero.
    """
    squeeze = img.dim() == 3
    if squeeze:
        img = img.unsqueeze(0)
    if img.dim() != 4 or img.shape[1] not in (1, 3):
        raise ValueError('sobel_edge_map expects 1 or 3 channels, but got '
                         f'shape {tuple(img.shape)}')
    if img.shape[-2] < 3 or img.shape[-1] < 3:
        raise ValueError('sobel_edge_map needs an image of at least 3x3, '
                         f'got {tuple(img.shape)}')
    if img.shape[1] == 3:
        img = to_grayscale(img)
    padded = F.pad(img, (1, 1, 1, 1), mode='reflect')
    # Separable form: smooth with (1, 2, 1), then difference. Flat regions
    # subtract equal values and give an exact zero.
    rows = padded[..., :-2, :] + 2 * padded[..., 1:-1, :] + padded[..., 2:, :]
    cols = padded[..., :-2] + 2 * padded[..., 1:-1] + padded[..., 2:]
    gx = rows[..., 2:] - rows[..., :-2]
    gy = cols[..., 2:, :] - cols[..., :-2, :]
    magnitude = safe_sqrt(gx * gx + gy * gy)
    return magnitude.squeeze(0) if squeeze else magnitude
