# Copyright (c) shadowpose contributors. All rights reserved.
"""Windowed local statistics and per-pixel structural similarity.

Local moments are taken over a uniform (box) window centred on every pixel.
Borders are handled by mirror padding that does not repeat the edge pixel
(``cv2.BORDER_REFLECT_101`` / ``torch`` ``'reflect'``), so the numpy and the
torch implementation agree to rounding error.

For each pixel ``x`` and channel::

    SSIM(x) = (2 mu_e mu_c + d1) (2 cov_ec + d2)
              / ((mu_e^2 + mu_c^2 + d1) (var_e + var_c + d2))
"""
from dataclasses import dataclass
from typing import Any

import numpy as np
import torch
import torch.nn.functional as F

from shadowpose.core import dispatch
from shadowpose.utils import try_import

cv2 = try_import('cv2')


@dataclass(frozen=True)
class SsimParams:
    """Parameters of the per-pixel SSIM map.

    Args:
        window (int): Odd side length of the square window. Defaults to 11.
        d1 (float): Stabilizer of the luminance term. Defaults to 0.0001.
        d2 (float): Stabilizer of the contrast-structure term.
            Defaults to 0.0009.
    """
    window: int = 11
    d1: float = 0.0001
    d2: float = 0.0009

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        if not isinstance(self.window, int) or self.window < 3 \
                or self.window % 2 == 0:
            raise ValueError(
                f'window must be an odd integer >= 3, got {self.window}')
        if not self.d1 > 0:
            raise ValueError(f'd1 must be positive, got {self.d1}')
        if not self.d2 > 0:
            raise ValueError(f'd2 must be positive, got {self.d2}')


@dataclass
class WindowStats:
    """Per-pixel local moments, each map shaped like the source image."""
    mu_e: Any
    mu_c: Any
    var_e: Any
    var_c: Any
    cov_ec: Any


def _check_pair(e_shape, c_shape, window: int) -> None:
    if tuple(e_shape) != tuple(c_shape):
        raise ValueError('Image shapes are different: '
                         f'{tuple(e_shape)}, {tuple(c_shape)}.')


def _box_filter_np(img: np.ndarray, window: int) -> np.ndarray:
    """Mean over a ``window`` x ``window`` box of each channel."""
    if cv2 is None:
        raise ImportError('The numpy SSIM requires opencv-python, please '
                          'install it first.')
    if img.ndim == 2:
        return cv2.boxFilter(
            img, -1, (window, window),
            normalize=True,
            borderType=cv2.BORDER_REFLECT_101)
    return np.stack(
        [_box_filter_np(img[..., ch], window) for ch in range(img.shape[2])],
        axis=2)


def _box_filter_torch(img: torch.Tensor, window: int) -> torch.Tensor:
    channels = img.shape[1]
    radius = window // 2
    padded = F.pad(img, (radius, radius, radius, radius), mode='reflect')
    kernel = img.new_full((channels, 1, window, window), 1. / window**2)
    return F.conv2d(padded, kernel, groups=channels)


@dispatch
def window_stats(e: np.ndarray, c: np.ndarray, params=None) -> WindowStats:
    """Local means, variances and covariance of two channel-last images.

    Args:
        e (np.ndarray): H x W or H x W x C image.
        c (np.ndarray): Image of the same shape as ``e``.
        params (SsimParams, optional): Window parameters. Defaults to
            ``SsimParams()``.

    Returns:
        WindowStats: Maps shaped like ``e``.
    """
    params = params or SsimParams()
    _check_pair(e.shape, c.shape, params.window)
    if params.window // 2 >= min(e.shape[0], e.shape[1]):
        raise ValueError(f'Image of shape {e.shape} is too small for a '
                         f'{params.window}x{params.window} window')
    e = e.astype(np.float64)
    c = c.astype(np.float64)
    mu_e = _box_filter_np(e, params.window)
    mu_c = _box_filter_np(c, params.window)
    var_e = _box_filter_np(e * e, params.window) - mu_e * mu_e
    var_c = _box_filter_np(c * c, params.window) - mu_c * mu_c
    cov_ec = _box_filter_np(e * c, params.window) - mu_e * mu_c
    return WindowStats(mu_e, mu_c, var_e, var_c, cov_ec)


@dispatch
def window_stats(  # noqa: F811
        e: torch.Tensor, c: torch.Tensor, params=None) -> WindowStats:
    """Local moments of two channel-first tensors (C x H x W or
    N x C x H x W), differentiable with respect to both inputs."""
    params = params or SsimParams()
    _check_pair(e.shape, c.shape, params.window)
    squeeze = e.dim() == 3
    if squeeze:
        e, c = e.unsqueeze(0), c.unsqueeze(0)
    if params.window // 2 >= min(e.shape[-2], e.shape[-1]):
        raise ValueError(f'Image of shape {tuple(e.shape)} is too small for '
                         f'a {params.window}x{params.window} window')
    mu_e = _box_filter_torch(e, params.window)
    mu_c = _box_filter_torch(c, params.window)
    var_e = _box_filter_torch(e * e, params.window) - mu_e * mu_e
    var_c = _box_filter_torch(c * c, params.window) - mu_c * mu_c
    cov_ec = _box_filter_torch(e * c, params.window) - mu_e * mu_c
    stats = [mu_e, mu_c, var_e, var_c, cov_ec]
    if squeeze:
        stats = [s.squeeze(0) for s in stats]
    return WindowStats(*stats)


def _ssim_from_stats(stats: WindowStats, params: SsimParams):
    numerator = (2 * stats.mu_e * stats.mu_c + params.d1) * \
        (2 * stats.cov_ec + params.d2)
    denominator = (stats.mu_e * stats.mu_e + stats.mu_c * stats.mu_c +
                   params.d1) * (stats.var_e + stats.var_c + params.d2)
    return numerator / denominator


@dispatch
def ssim_map(e: np.ndarray, c: np.ndarray, params=None) -> np.ndarray:
    """Per-pixel, per-channel SSIM map of two channel-last images.

    Args:
        e (np.ndarray): H x W or H x W x C image in [0, 1].
        c (np.ndarray): Image of the same shape as ``e``.
        params (SsimParams, optional): Defaults to ``SsimParams()``.

    Returns:
        np.ndarray: float64 map shaped like ``e`` with values in [-1, 1].

    Examples:
        >>> import numpy as np
        >>> img = np.random.rand(16, 16, 3)
        >>> bool((ssim_map(img, img) == 1).all())
        True
    """
    params = params or SsimParams()
    return _ssim_from_stats(window_stats(e, c, params), params)


@dispatch
def ssim_map(  # noqa: F811
        e: torch.Tensor, c: torch.Tensor, params=None) -> torch.Tensor:
    """Per-pixel SSIM map of two channel-first tensors, differentiable."""
    params = params or SsimParams()
    return _ssim_from_stats(window_stats(e, c, params), params)
