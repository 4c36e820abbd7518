# Copyright (c) shadowpose contributors. All rights reserved.
import math

import numpy as np

from shadowpose.utils import try_import
from .params import FilmFilterParams

cv2 = try_import('cv2')


def _gaussian_blur(img: np.ndarray, sigma: float) -> np.ndarray:
    ksize = 2 * int(math.ceil(3 * sigma)) + 1
    return cv2.GaussianBlur(
        img, (ksize, ksize),
        sigmaX=sigma,
        sigmaY=sigma,
        borderType=cv2.BORDER_REFLECT_101)


def apply_film_filter(img: np.ndarray, params: FilmFilterParams) -> np.ndarray:
    """Simulate capturing ``img`` through stacked translucent film.

    For each layer: Gaussian blur with ``blur_sigma``, blend
    ``(1 - scatter_alpha) * img + scatter_alpha * light_color``, contrast
    reduction around the per-channel image mean by ``contrast_gain`` and,
    when ``grain_sigma > 0``, seeded Gaussian grain. The result is clipped
    to [0, 1].

    Args:
        img (np.ndarray): H x W x 3 image in [0, 1].
        params (FilmFilterParams): Film parameters.

    Returns:
        np.ndarray: Filtered float64 image of the same shape.
    """
    if cv2 is None:
        raise ImportError('apply_film_filter requires opencv-python, please '
                          'install it first.')
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError('apply_film_filter expects an H x W x 3 image, but '
                         f'got shape {img.shape}')
    params.validate()
    rng = np.random.default_rng(params.seed)
    light = np.asarray(params.light_color, dtype=np.float64)
    out = img.astype(np.float64)
    for _ in range(params.layers):
        out = _gaussian_blur(out, params.blur_sigma)
        if params.scatter_alpha > 0:
            out = (1. - params.scatter_alpha) * out + \
                params.scatter_alpha * light
        if params.contrast_gain < 1:
            mean = out.mean(axis=(0, 1), keepdims=True)
            out = mean + params.contrast_gain * (out - mean)
        if params.grain_sigma > 0:
            out = out + rng.normal(0., params.grain_sigma, size=out.shape)
        out = np.clip(out, 0., 1.)
    return out
