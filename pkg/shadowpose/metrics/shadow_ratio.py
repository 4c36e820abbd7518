# Copyright (c) shadowpose contributors. All rights reserved.
from collections import OrderedDict
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from shadowpose.core import BaseMetric
from .sseq import QualityScore

RECOMMENDED_SR_BAND = (0.36, 0.45)

Score = Union[QualityScore, float]


def _value_source(score: Score) -> Tuple[float, Optional[str]]:
    if isinstance(score, QualityScore):
        return score.value, score.source
    return float(score), None


def shadow_ratio(clear_score: Score, shadow_score: Score) -> float:
    """Relative quality-score increase of the shadow image over the clear
    one, ``(shadow - clear) / clear``.

    Args:
        clear_score (QualityScore or float): Score of the clear image.
        shadow_score (QualityScore or float): Score of the shadow image.

    Returns:
        float: The ratio; negative if the shadow image scores lower.

    Raises:
        ValueError: If the two scores come from different sources.
        ZeroDivisionError: If the clear score is 0.

    Examples:
        >>> round(shadow_ratio(42.7710, 52.6125), 4)
        0.2301
    """
    clear, clear_source = _value_source(clear_score)
    shadow, shadow_source = _value_source(shadow_score)
    if clear_source and shadow_source and clear_source != shadow_source:
        raise ValueError('Shadow ratio needs scores from the same source, '
                         f'got {clear_source} and {shadow_source}')
    if clear == 0:
        raise ZeroDivisionError('Shadow ratio is undefined for a clear score '
                                'of 0')
    return (shadow - clear) / clear


def recommended_sr_band() -> Tuple[float, float]:
    """Shadow ratio range that balances privacy against pose accuracy."""
    return RECOMMENDED_SR_BAND


class ShadowRatio(BaseMetric):
    """Mean clear and shadow quality scores and their shadow ratio, per
    condition.

    Args:
        **kwargs: Keyword parameters passed to :class:`BaseMetric`.

    Examples:

        >>> from shadowpose.metrics import ShadowRatio
        >>> metric = ShadowRatio()
        >>> result = metric([42.7710], [52.6125], ['film-1'])
        >>> round(result['film-1']['sr'], 4)
        0.2301
    """

    def add(self, clear_scores: Sequence[Score], shadow_scores: Sequence[Score], conditions: Optional[Sequence[str]] = None) -> None:  # type: ignore # yapf: disable # noqa: E501
        """Add paired scores.

        Args:
            clear_scores (Sequence[QualityScore | float]): Clear image scores.
            shadow_scores (Sequence[QualityScore | float]): Paired shadow
                image scores.
            conditions (Sequence[str], optional): Condition label per pair.
                Defaults to ``'all'``.
        """
        if len(clear_scores) != len(shadow_scores):
            raise ValueError('clear_scores and shadow_scores should have the '
                             'same length')
        if conditions is None:
            conditions = ['all'] * len(clear_scores)
        for clear, shadow, condition in zip(clear_scores, shadow_scores,
                                            conditions):
            clear_value, clear_source = _value_source(clear)
            shadow_value, shadow_source = _value_source(shadow)
            if clear_source and shadow_source and \
                    clear_source != shadow_source:
                raise ValueError('Scores of a pair should share a source, '
                                 f'got {clear_source} and {shadow_source}')
            self._results.append((condition, clear_value, shadow_value))

    def compute_metric(self, results: List[Tuple[str, float, float]]) -> Dict:
        """Group by condition (first-seen order) and compute the ratio of
        the mean scores.

        Returns:
            dict: ``{condition: {'sseq_clear', 'sseq_shadow', 'sr',
            'images'}}``.
        """
        grouped: Dict[str, List[Tuple[float, float]]] = OrderedDict()
        for condition, clear, shadow in results:
            grouped.setdefault(condition, []).append((clear, shadow))
        out: Dict = OrderedDict()
        for condition, pairs in grouped.items():
            clear_mean = float(np.mean([p[0] for p in pairs]))
            shadow_mean = float(np.mean([p[1] for p in pairs]))
            out[condition] = {
                'sseq_clear': clear_mean,
                'sseq_shadow': shadow_mean,
                'sr': shadow_ratio(clear_mean, shadow_mean),
                'images': len(pairs)
            }
        return out
