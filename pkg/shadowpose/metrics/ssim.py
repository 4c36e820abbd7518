# Copyright (c) shadowpose contributors. All rights reserved.
from typing import Dict, List, Optional, Sequence

import numpy as np

from shadowpose.core import BaseMetric
from shadowpose.imaging import SsimParams, ssim_map


class StructuralSimilarity(BaseMetric):
    """Mean SSIM between image pairs.

    Each pair contributes the mean of its per-pixel, per-channel SSIM map
    computed with a uniform window and mirrored borders. The metric is the
    mean over pairs.

    Args:
        params (SsimParams, optional): Window and stability constants.
            Defaults to ``SsimParams()``.
        input_order (str): Whether the input order is 'HWC' or 'CHW'.
            Defaults to 'HWC'.
        **kwargs: Keyword parameters passed to :class:`BaseMetric`.

    Examples:

        >>> from shadowpose.metrics import StructuralSimilarity as SSIM
        >>> import numpy as np
        >>>
        >>> ssim = SSIM()
        >>> imgs = [np.random.rand(16, 16, 3) for _ in range(2)]
        >>> ssim(imgs, imgs)
        {'ssim': 1.0}
    """

    def __init__(self,
                 params: Optional[SsimParams] = None,
                 input_order: str = 'HWC',
                 **kwargs) -> None:
        super().__init__(**kwargs)
        if input_order.upper() not in ('CHW', 'HWC'):
            raise ValueError(f'Wrong input_order {input_order}. Supported '
                             'input_orders are "HWC" and "CHW"')
        self.input_order = input_order.upper()
        self.params = params or SsimParams()

    def add(self, predictions: Sequence[np.ndarray], groundtruths: Sequence[np.ndarray]) -> None:  # type: ignore # yapf: disable # noqa: E501
        """Add the SSIM score of each pair to ``self._results``.

        Args:
            predictions (Sequence[np.ndarray]): Enhanced or degraded images.
            groundtruths (Sequence[np.ndarray]): The clear images.
        """
        for pred, gt in zip(predictions, groundtruths):
            if pred.shape != gt.shape:
                raise ValueError(
                    f'Image shapes are different: {pred.shape}, {gt.shape}.')
            if self.input_order == 'CHW' and pred.ndim == 3:
                pred = pred.transpose(1, 2, 0)
                gt = gt.transpose(1, 2, 0)
            score = ssim_map(
                np.asarray(pred, dtype=np.float64),
                np.asarray(gt, dtype=np.float64), self.params)
            self._results.append(float(score.mean()))

    def compute_metric(self, results: List[float]) -> Dict[str, float]:
        """Compute the mean SSIM.

        Args:
            results (List[float]): Per-pair SSIM scores.

        Returns:
            Dict[str, float]: ``{'ssim': mean}``, NaN when empty.
        """
        if not results:
            return {'ssim': float('nan')}
        return {'ssim': float(np.mean(results))}
