# Copyright (c) shadowpose contributors. All rights reserved.
import numpy as np

from .params import HazeParams


def transmission_from_depth(depth: np.ndarray, beta: float) -> np.ndarray:
    """Transmission map ``exp(-beta * depth)`` of a depth map."""
    if beta < 0:
        raise ValueError(f'beta must be >= 0, got {beta}')
    return np.exp(-beta * np.asarray(depth, dtype=np.float64))


def synthesize_haze(clear: np.ndarray, params: HazeParams) -> np.ndarray:
    """Apply the atmospheric scattering model ``I = J t + A (1 - t)``.

    Args:
        clear (np.ndarray): H x W x 3 clear image ``J`` in [0, 1].
        params (HazeParams): Airlight and transmission (scalar or H x W).

    Returns:
        np.ndarray: Hazy float64 image clipped to [0, 1].
    """
    params.validate()
    if clear.ndim != 3 or clear.shape[2] != 3:
        raise ValueError('synthesize_haze expects an H x W x 3 image, but '
                         f'got shape {clear.shape}')
    t = np.asarray(params.transmission, dtype=np.float64)
    if t.ndim == 2:
        if t.shape != clear.shape[:2]:
            raise ValueError(f'Transmission map shape {t.shape} does not '
                             f'match image shape {clear.shape[:2]}')
        t = t[..., None]
    airlight = np.asarray(params.atmospheric_light, dtype=np.float64)
    hazy = clear.astype(np.float64) * t + airlight * (1. - t)
    return np.clip(hazy, 0., 1.)
