# Copyright (c) shadowpose contributors. All rights reserved.
import numpy as np


def calc_sq_distances(preds: np.ndarray, gts: np.ndarray,
                      mask: np.ndarray) -> np.ndarray:
    """Calculate the squared pixel distances between preds and targets.

    Note:
        - keypoint number: K
        - keypoint dimension: D (normally, D=2)

    Args:
        preds (np.ndarray[K, D]): Detected keypoint locations.
        gts (np.ndarray[K, D]): Reference keypoint locations.
        mask (np.ndarray[K]): False where either keypoint is absent. Masked
            keypoints are ignored.

    Returns:
        np.ndarray[K]: The squared distances, -1 for masked keypoints.
    """
    distances = np.full(mask.shape, -1, dtype=np.float64)
    diff = (preds - gts)[mask]
    distances[mask] = (diff * diff).sum(axis=-1)
    return distances


def count_within(sq_distances: np.ndarray, thr: float) -> int:
    """Count the valid keypoints whose distance is at most ``thr``.

    The comparison is done on squared distances, so a distance exactly
    equal to the threshold counts.

    Args:
        sq_distances (np.ndarray[K]): Output of :func:`calc_sq_distances`.
        thr (float): Pixel threshold.

    Returns:
        int: Number of keypoints within the threshold.
    """
    valid = sq_distances >= 0
    return int((sq_distances[valid] <= thr * thr).sum())
