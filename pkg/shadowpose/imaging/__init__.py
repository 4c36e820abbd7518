# Copyright (c) shadowpose contributors. All rights reserved.
from .color import LUMA_WEIGHTS, to_grayscale
from .edges import safe_sqrt, sobel_edge_map
from .ssim import SsimParams, WindowStats, ssim_map, window_stats
from .transforms import (RESIZE_POLICIES, center_crop_box, resize_image,
                         to_image, to_tensor)

__all__ = [
    'LUMA_WEIGHTS', 'to_grayscale', 'sobel_edge_map', 'safe_sqrt',
    'SsimParams', 'WindowStats', 'window_stats', 'ssim_map', 'resize_image',
    'to_tensor', 'to_image', 'RESIZE_POLICIES', 'center_crop_box'
]
