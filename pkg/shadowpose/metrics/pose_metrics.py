# Copyright (c) shadowpose contributors. All rights reserved.
from dataclasses import dataclass
from typing import TYPE_CHECKING, Dict, List, Optional, Sequence, Tuple

import numpy as np

from shadowpose.core import BaseMetric
from .utils import calc_sq_distances, count_within

if TYPE_CHECKING:
    from shadowpose.pose.skeleton import Skeleton


@dataclass(frozen=True)
class MatchConfig:
    """Keypoint matching rule.

    Args:
        distance_threshold (float): A detected keypoint is precise when it
            lies at most this many pixels from the same part of the paired
            clear skeleton. Defaults to 10.
    """
    distance_threshold: float = 10.

    def __post_init__(self) -> None:
        if not self.distance_threshold > 0:
            raise ValueError('distance_threshold should be > 0, got '
                             f'{self.distance_threshold}')


@dataclass(frozen=True)
class ImageCounts:
    """Integer keypoint counts of one (test, clear) image pair.

    Attributes:
        n_c (int): Present keypoints in the clear image.
        n_e (int): Present keypoints in the test image.
        n_te (int): Test keypoints within the threshold of the same part of
            the paired clear skeleton.
    """
    n_c: int
    n_e: int
    n_te: int

    @property
    def dr(self) -> Optional[float]:
        """Detection rate ``n_e / n_c``, None when ``n_c`` is 0."""
        return self.n_e / self.n_c if self.n_c else None

    @property
    def smap(self) -> Optional[float]:
        """Precision ``n_te / n_e``, None when ``n_e`` is 0."""
        return self.n_te / self.n_e if self.n_e else None


def pair_skeletons(test: Sequence['Skeleton'],
                   clear: Sequence['Skeleton']) -> List[Tuple[int, int]]:
    """Greedy nearest-centroid pairing of test and clear skeletons.

    All centroid distances are sorted (ties broken by index) and pairs are
    taken greedily. Skeletons without any present keypoint stay unpaired.

    Returns:
        list[tuple[int, int]]: ``(test index, clear index)`` pairs.
    """
    candidates = []
    for i, t in enumerate(test):
        tc = t.centroid()
        if tc is None:
            continue
        for j, c in enumerate(clear):
            cc = c.centroid()
            if cc is None:
                continue
            d2 = (tc[0] - cc[0])**2 + (tc[1] - cc[1])**2
            candidates.append((d2, i, j))
    candidates.sort()
    used_t, used_c = set(), set()
    pairs = []
    for _, i, j in candidates:
        if i in used_t or j in used_c:
            continue
        used_t.add(i)
        used_c.add(j)
        pairs.append((i, j))
    return sorted(pairs)


def count_keypoints(test: Sequence['Skeleton'],
                    clear: Sequence['Skeleton'],
                    match_cfg: MatchConfig = MatchConfig()) -> ImageCounts:
    """Count ``N_c``, ``N_e`` and ``N_te`` for one image pair.

    Test keypoints whose part is absent in the paired clear skeleton, or
    whose skeleton is unpaired, count toward ``N_e`` only.
    """
    n_c = sum(s.num_present for s in clear)
    n_e = sum(s.num_present for s in test)
    n_te = 0
    for i, j in pair_skeletons(test, clear):
        t, c = test[i], clear[j]
        if t.num_parts != c.num_parts:
            raise ValueError(f'Cannot match a {t.num_parts}-part skeleton '
                             f'with a {c.num_parts}-part one')
        mask = t.mask() & c.mask()
        sq = calc_sq_distances(t.coords(), c.coords(), mask)
        n_te += count_within(sq, match_cfg.distance_threshold)
    return ImageCounts(n_c, n_e, n_te)


def detection_rate(test: Sequence['Skeleton'],
                   clear: Sequence['Skeleton']) -> float:
    """``N_e / N_c`` of one image pair.

    Raises:
        ValueError: If the clear image has no detected keypoint.

    Examples:
        >>> from shadowpose.pose import Skeleton
        >>> full = Skeleton.from_flat([5., 5., 1.] * 18)
        >>> detection_rate([full], [full])
        1.0
    """
    counts = count_keypoints(test, clear)
    if counts.dr is None:
        raise ValueError('Detection rate is undefined: the clear image has '
                         'no detected keypoint')
    return counts.dr


def smap(test: Sequence['Skeleton'],
         clear: Sequence['Skeleton'],
         match_cfg: MatchConfig = MatchConfig()) -> float:
    """``N_te / N_e`` of one image pair.

    Raises:
        ValueError: If the test image has no detected keypoint.
    """
    counts = count_keypoints(test, clear, match_cfg)
    if counts.smap is None:
        raise ValueError('SmAP is undefined: the test image has no detected '
                         'keypoint')
    return counts.smap


class _KeypointCountMetric(BaseMetric):
    """Accumulates :class:`ImageCounts` per image."""

    def __init__(self,
                 distance_threshold: float = 10.,
                 **kwargs) -> None:
        super().__init__(**kwargs)
        self.match_cfg = MatchConfig(distance_threshold)

    def add(self, predictions: Sequence[Sequence['Skeleton']], groundtruths: Sequence[Sequence['Skeleton']]) -> None:  # type: ignore # yapf: disable # noqa: E501
        """Add the keypoint counts of a batch of images.

        Args:
            predictions (Sequence[Sequence[Skeleton]]): Skeletons detected
                on each test (degraded or enhanced) image.
            groundtruths (Sequence[Sequence[Skeleton]]): Skeletons detected
                on the paired clear images.
        """
        for test, clear in zip(predictions, groundtruths):
            self._results.append(count_keypoints(test, clear, self.match_cfg))

    def add_counts(self, counts: Sequence[ImageCounts]) -> None:
        """Add keypoint counts computed earlier, e.g. read back from a
        report."""
        self._results.extend(counts)

    @staticmethod
    def _mean(values: List[float]) -> float:
        return float(np.mean(values)) if values else float('nan')


class DetectionRate(_KeypointCountMetric):
    """Detection rate of keypoints relative to the clear image.

    Per image ``DR = N_e / N_c``; images with ``N_c = 0`` are excluded and
    counted in ``dr_excluded``. The metric reports the mean over images.

    Examples:

        >>> from shadowpose.metrics import DetectionRate
        >>> from shadowpose.pose import Skeleton
        >>> clear = [Skeleton.from_flat([5., 5., 1.] * 18)]
        >>> test = [Skeleton.from_flat([5., 5., 1.] * 12 + [0., 0., 0.] * 6)]
        >>> DetectionRate()([test], [clear])  # doctest: +ELLIPSIS
        {'dr': 0.666..., 'dr_images': 1, 'dr_excluded': 0}
    """

    def compute_metric(self, results: List[ImageCounts]) -> Dict:
        rates = [r.dr for r in results if r.dr is not None]
        return {
            'dr': self._mean(rates),
            'dr_images': len(rates),
            'dr_excluded': len(results) - len(rates)
        }


class ShadowMeanAP(_KeypointCountMetric):
    """Precision of detected keypoints against the clear image.

    Per image ``SmAP = N_te / N_e`` where a keypoint is precise when it is
    at most ``distance_threshold`` pixels from the same part of the paired
    clear skeleton. Images with ``N_e = 0`` are excluded.

    Args:
        distance_threshold (float): Pixel threshold. Defaults to 10.
    """

    def compute_metric(self, results: List[ImageCounts]) -> Dict:
        rates = [r.smap for r in results if r.smap is not None]
        return {
            'smap': self._mean(rates),
            'smap_images': len(rates),
            'smap_excluded': len(results) - len(rates)
        }
