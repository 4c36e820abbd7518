# Copyright (c) shadowpose contributors. All rights reserved.
import logging
import time
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np

from shadowpose import fileio
from shadowpose.imaging import RESIZE_POLICIES, resize_image
from shadowpose.imaging.transforms import center_crop_box
from shadowpose.utils import list_images, mkdir_or_exist
from .network import EnhancementNetwork, enhance_batch

logger = logging.getLogger(__name__)


@dataclass
class EnhanceSummary:
    """Outcome of a batch of enhanced files."""
    outputs: List[Path] = field(default_factory=list)
    failures: List[Tuple[str, str]] = field(default_factory=list)
    seconds: float = 0.

    @property
    def ms_per_image(self) -> float:
        if not self.outputs:
            return 0.
        return 1000. * self.seconds / len(self.outputs)

    def to_dict(self) -> dict:
        return {
            'images': len(self.outputs),
            'failures': [{
                'file': name,
                'error': error
            } for name, error in self.failures],
            'ms_per_image': self.ms_per_image
        }


def enhance_image(net: EnhancementNetwork,
                  img: np.ndarray,
                  policy: str = 'scale') -> np.ndarray:
    """Enhance one H x W x 3 image of any size.

    The image is brought to the network input size with ``policy`` and the
    result is brought back to the source geometry: stretched back for
    ``'scale'``, or resized to the crop and pasted over the input for
    ``'center-crop'``.
    """
    if policy not in RESIZE_POLICIES:
        raise KeyError(f'Unknown resize policy {policy!r}, should be one of '
                       f'{RESIZE_POLICIES}')
    size = net.cfg.input_size[:2]
    height, width = img.shape[:2]
    out = enhance_batch(net, resize_image(img, size, policy))
    if policy == 'scale':
        return resize_image(out, (height, width), 'scale')
    top, left, crop_h, crop_w = center_crop_box(height, width, size)
    restored = img.astype(np.float64).copy()
    restored[top:top + crop_h, left:left + crop_w] = resize_image(
        out, (crop_h, crop_w), 'scale')
    return restored


def enhance_files(net: EnhancementNetwork,
                  files: Sequence[Union[str, Path]],
                  out_dir: Union[str, Path],
                  policy: str = 'scale') -> EnhanceSummary:
    """Enhance every file into ``<out_dir>/<stem>.png``.

    Files that cannot be decoded are logged and listed in the summary; the
    run continues.

    Raises:
        ValueError: If two files share a stem, e.g. ``a.jpg`` and
            ``a.png``, since their outputs would overwrite each other.
    """
    files = [Path(f) for f in files]
    stems = Counter(p.stem for p in files)
    shared = sorted(p.name for p in files if stems[p.stem] > 1)
    if shared:
        raise ValueError(f'Input files share a stem and would write the '
                         f'same output: {shared}')
    out_dir = mkdir_or_exist(out_dir)
    summary = EnhanceSummary()
    for path in files:
        try:
            img = fileio.imread(path)
        except (OSError, ValueError) as e:
            logger.warning(f'Skipped {path.name}: {e}')
            summary.failures.append((path.name, str(e)))
            continue
        start = time.perf_counter()
        out = enhance_image(net, img, policy)
        summary.seconds += time.perf_counter() - start
        target = out_dir / f'{path.stem}.png'
        fileio.imwrite(out, target)
        summary.outputs.append(target)
    return summary


def enhance_directory(net: EnhancementNetwork,
                      input_dir: Union[str, Path],
                      out_dir: Union[str, Path],
                      policy: str = 'scale') -> EnhanceSummary:
    """Enhance all images directly under ``input_dir``."""
    files = list_images(input_dir)
    if not files:
        logger.info(f'0 images found in {input_dir}, nothing to enhance')
    summary = enhance_files(net, files, out_dir, policy)
    logger.info(f'Enhanced {len(summary.outputs)} images, '
                f'{summary.ms_per_image:.1f} ms per image')
    return summary
