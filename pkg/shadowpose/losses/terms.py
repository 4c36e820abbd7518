# Copyright (c) shadowpose contributors. All rights reserved.
"""Differentiable loss terms on N x C x H x W (or C x H x W) tensors.

Batches are averaged: every term is computed per sample and the batch mean
is returned.
"""
from typing import Optional, Tuple

import torch

from shadowpose.imaging import SsimParams, safe_sqrt, sobel_edge_map, ssim_map
from .extractors import FeatureExtractor

NORM_MODES = ('sum', 'mean')


def _as_batch(e: torch.Tensor, c: torch.Tensor, op: str):
    if e.shape != c.shape:
        raise ValueError(f'{op} expects inputs of the same shape, got '
                         f'{tuple(e.shape)} and {tuple(c.shape)}')
    if e.dim() == 3:
        e, c = e.unsqueeze(0), c.unsqueeze(0)
    if e.dim() != 4:
        raise ValueError(f'{op} expects C x H x W or N x C x H x W inputs, '
                         f'got {tuple(e.shape)}')
    return e, c


def l2_distance(a: torch.Tensor,
                b: torch.Tensor,
                norm_mode: str = 'sum') -> torch.Tensor:
    """Batch mean of the per-sample Euclidean distance.

    ``norm_mode='sum'`` is the plain norm over all elements of a sample;
    ``'mean'`` divides the squared sum by the element count first (a root
    mean square). The gradient at zero distance is zero.
    """
    if norm_mode not in NORM_MODES:
        raise KeyError(f'Unknown norm_mode {norm_mode!r}, should be one of '
                       f'{NORM_MODES}')
    diff = (a - b).flatten(1)
    squared = (diff * diff).sum(dim=1)
    if norm_mode == 'mean':
        squared = squared / diff.shape[1]
    return safe_sqrt(squared).mean()


def structural_loss(e: torch.Tensor,
                    c: torch.Tensor,
                    params: Optional[SsimParams] = None) -> torch.Tensor:
    """``1 - mean(SSIM)`` over pixels and channels, in [0, 2].

    Args:
        e (torch.Tensor): Enhanced image(s), 3 channels.
        c (torch.Tensor): Clear image(s) of the same shape.
        params (SsimParams, optional): Defaults to ``SsimParams()``.

    Examples:
        >>> img = torch.rand(1, 3, 16, 16)
        >>> float(structural_loss(img, img))
        0.0
    """
    e, c = _as_batch(e, c, 'structural_loss')
    if e.shape[1] != 3:
        raise ValueError('structural_loss expects 3-channel images, got '
                         f'{e.shape[1]} channels')
    return 1. - ssim_map(e, c, params or SsimParams()).mean()


def perceptual_loss(
    e: torch.Tensor,
    c: torch.Tensor,
    extractor: FeatureExtractor,
    norm_mode: str = 'sum'
) -> Tuple[torch.Tensor, torch.Tensor, torch.Tensor, torch.Tensor]:
    """Pixel MSE, pixel MAE and feature distance, plus their combination
    ``mse + 2 * mae + feat``.

    Args:
        e (torch.Tensor): Enhanced image(s).
        c (torch.Tensor): Clear image(s) of the same shape.
        extractor (FeatureExtractor): Frozen feature map.
        norm_mode (str): See :func:`l2_distance`. Defaults to 'sum'.

    Returns:
        tuple[torch.Tensor]: ``(mse, mae, feat, combined)``.
    """
    e, c = _as_batch(e, c, 'perceptual_loss')
    diff = e - c
    mse = (diff * diff).mean()
    mae = diff.abs().mean()
    try:
        feat_e = extractor(e)
        feat_c = extractor(c)
    except Exception as err:
        name = getattr(extractor, 'name', type(extractor).__name__)
        raise RuntimeError(
            f'Feature extractor {name} failed: {err}') from err
    feat = l2_distance(feat_e, feat_c, norm_mode)
    return mse, mae, feat, mse + 2 * mae + feat


def edge_loss(e: torch.Tensor,
              c: torch.Tensor,
              norm_mode: str = 'sum') -> torch.Tensor:
    """Euclidean distance between Sobel magnitude maps.

    Constant images have zero edge maps, so any two constants give 0.
    """
    e, c = _as_batch(e, c, 'edge_loss')
    return l2_distance(sobel_edge_map(e), sobel_edge_map(c), norm_mode)
