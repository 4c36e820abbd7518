# Copyright (c) shadowpose contributors. All rights reserved.
"""Spatial and spectral entropy features for no-reference quality scoring.

The image is analysed at three dyadic scales. Each scale is cut into 8x8
blocks; every block gets a spatial entropy (of its 256-bin intensity
histogram) and a spectral entropy (of its normalized squared DCT
coefficients, DC excluded). Both lists are pooled by keeping the central
60% of the sorted values and summarized by mean and skew, giving four
features per scale.
"""
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from shadowpose import fileio
from shadowpose.imaging import to_grayscale
from shadowpose.utils import try_import

cv2 = try_import('cv2')
scipy_fft = try_import('scipy.fft')
scipy_stats = try_import('scipy.stats')

BLOCK_SIZE = 8
NUM_SCALES = 3
HIST_BINS = 256
POOL_FRACTION = 0.6
SCORE_SOURCES = ('injected', 'regressor', 'proxy')
FEATURE_NAMES = tuple(f'{name}_s{scale}' for scale in range(NUM_SCALES)
                      for name in ('spatial_mean', 'spatial_skew',
                                   'spectral_mean', 'spectral_skew'))


def _require_scipy() -> None:
    if scipy_fft is None or scipy_stats is None or cv2 is None:
        raise ImportError('SSEQ features require scipy and opencv-python, '
                          'please install them first.')


@dataclass
class SseqFeatures:
    """The 12 pooled entropy statistics of an image, ordered as
    ``FEATURE_NAMES``."""
    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != (len(FEATURE_NAMES), ):
            raise ValueError(f'SseqFeatures needs {len(FEATURE_NAMES)} '
                             f'values, got shape {self.values.shape}')
        if not np.isfinite(self.values).all():
            raise ValueError('SseqFeatures values should be finite')

    def as_dict(self) -> Dict[str, float]:
        return {k: float(v) for k, v in zip(FEATURE_NAMES, self.values)}

    def select(self, names: Sequence[str]) -> np.ndarray:
        lookup = self.as_dict()
        unknown = [n for n in names if n not in lookup]
        if unknown:
            raise KeyError(f'Unknown SSEQ features {unknown}')
        return np.array([lookup[n] for n in names], dtype=np.float64)

    @property
    def spatial_means(self) -> np.ndarray:
        return self.values[0::4]


@dataclass(frozen=True)
class QualityScore:
    """A quality score where higher means more degraded."""
    value: float
    source: str

    def __post_init__(self) -> None:
        if self.source not in SCORE_SOURCES:
            raise ValueError(f'source should be one of {SCORE_SOURCES}, got '
                             f'{self.source!r}')
        if not math.isfinite(self.value):
            raise ValueError(f'Quality score should be finite, got '
                             f'{self.value}')


def image_blocks(gray: np.ndarray, size: int = BLOCK_SIZE) -> np.ndarray:
    """Non-overlapping ``size`` x ``size`` blocks in raster order; the
    remainder at the right and bottom edges is dropped."""
    rows, cols = gray.shape[0] // size, gray.shape[1] // size
    cropped = gray[:rows * size, :cols * size]
    return cropped.reshape(rows, size, cols, size).transpose(0, 2, 1, 3) \
        .reshape(-1, size, size)


def spatial_entropy(blocks: np.ndarray) -> np.ndarray:
    """Shannon entropy (bits) of each block's 256-bin histogram over
    [0, 1]."""
    _require_scipy()
    levels = np.clip((blocks * HIST_BINS).astype(np.int64), 0, HIST_BINS - 1)
    levels = levels.reshape(len(blocks), -1)
    out = np.empty(len(blocks), dtype=np.float64)
    for i, block in enumerate(levels):
        counts = np.bincount(block, minlength=HIST_BINS)
        out[i] = scipy_stats.entropy(counts[counts > 0], base=2)
    return out


def spectral_entropy(blocks: np.ndarray) -> np.ndarray:
    """Shannon entropy (bits) of each block's normalized squared DCT
    coefficients without DC. Blocks with no AC energy get 0."""
    _require_scipy()
    coeffs = scipy_fft.dctn(blocks, axes=(1, 2), norm='ortho')
    energy = (coeffs * coeffs).reshape(len(blocks), -1)[:, 1:]
    total = energy.sum(axis=1, keepdims=True)
    out = np.zeros(len(blocks), dtype=np.float64)
    nonzero = total[:, 0] > 0
    if nonzero.any():
        p = energy[nonzero] / total[nonzero]
        logs = np.log2(np.where(p > 0, p, 1.))
        out[nonzero] = -(p * logs).sum(axis=1)
    return out


def pool_central(values: np.ndarray,
                 fraction: float = POOL_FRACTION) -> np.ndarray:
    """Keep the central ``fraction`` of the sorted values."""
    values = np.sort(values)
    drop = int(math.floor(len(values) * (1. - fraction) / 2.))
    if len(values) - 2 * drop <= 0:
        return values
    return values[drop:len(values) - drop]


def _mean_skew(values: np.ndarray) -> Tuple[float, float]:
    mean = float(values.mean())
    if np.allclose(values, values[0], rtol=0, atol=1e-12):
        return mean, 0.
    return mean, float(scipy_stats.skew(values, bias=True))


def _scales(gray: np.ndarray) -> List[np.ndarray]:
    scales = [gray]
    for _ in range(NUM_SCALES - 1):
        prev = scales[-1]
        height, width = prev.shape[0] // 2, prev.shape[1] // 2
        if min(height, width) < BLOCK_SIZE:
            raise ValueError(
                f'Image of shape {gray.shape} is too small for one '
                f'{BLOCK_SIZE}x{BLOCK_SIZE} block at scale 1/'
                f'{2**(len(scales))}')
        scales.append(
            cv2.resize(prev, (width, height), interpolation=cv2.INTER_AREA))
    return scales


def block_entropies(img: np.ndarray) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Unpooled ``(spatial, spectral)`` block entropies at every scale."""
    _require_scipy()
    if img.ndim == 3 and img.shape[2] == 3:
        img = to_grayscale(img)
    if img.ndim == 3:
        img = img[..., 0]
    if min(img.shape[:2]) < BLOCK_SIZE:
        raise ValueError(f'Image of shape {img.shape} is smaller than one '
                         f'{BLOCK_SIZE}x{BLOCK_SIZE} block')
    gray = np.clip(img.astype(np.float64), 0., 1.)
    out = []
    for scaled in _scales(gray):
        blocks = image_blocks(scaled)
        out.append((spatial_entropy(blocks), spectral_entropy(blocks)))
    return out


def sseq_features(img: np.ndarray) -> SseqFeatures:
    """Compute the 12 SSEQ-style features of an image.

    Args:
        img (np.ndarray): H x W, H x W x 1 or H x W x 3 image in [0, 1].
            Colour images are converted to luminance.

    Returns:
        SseqFeatures: Features ordered as ``FEATURE_NAMES``.

    Raises:
        ValueError: If the coarsest scale holds no full 8x8 block.

    Examples:
        >>> feats = sseq_features(np.full((64, 64), 0.5))
        >>> float(feats.values.max())
        0.0
    """
    values = []
    for spatial, spectral in block_entropies(img):
        values.extend(_mean_skew(pool_central(spatial)))
        values.extend(_mean_skew(pool_central(spectral)))
    return SseqFeatures(np.array(values))


class Regressor:
    """Maps SSEQ features to a score.

    Weight files are JSON::

        {"type": "affine", "weights": [...], "bias": 0.0,
         "feature_order": ["spatial_mean_s0", ...]}

    or, for a kernel regressor::

        {"type": "rbf", "support_vectors": [[...], ...],
         "dual_coef": [...], "gamma": 0.05, "bias": 0.0,
         "feature_order": [...]}

    ``feature_order`` defaults to ``FEATURE_NAMES``.
    """

    def __init__(self, spec: Dict) -> None:
        try:
            self.type = spec['type']
            self.feature_order = tuple(spec.get('feature_order',
                                                FEATURE_NAMES))
            self.bias = float(spec.get('bias', 0.))
            width = len(self.feature_order)
            if self.type == 'affine':
                self.weights = np.asarray(spec['weights'], dtype=np.float64)
                if self.weights.shape != (width, ):
                    raise ValueError(f'expected {width} weights, got '
                                     f'{self.weights.shape}')
            elif self.type == 'rbf':
                self.support_vectors = np.asarray(
                    spec['support_vectors'], dtype=np.float64)
                self.dual_coef = np.asarray(spec['dual_coef'],
                                            dtype=np.float64)
                self.gamma = float(spec['gamma'])
                if self.support_vectors.ndim != 2 or \
                        self.support_vectors.shape[1] != width or \
                        self.dual_coef.shape != \
                        (self.support_vectors.shape[0], ):
                    raise ValueError('support_vectors and dual_coef shapes '
                                     'do not agree with feature_order')
            else:
                raise ValueError(f'unknown regressor type {self.type!r}')
            unknown = set(self.feature_order) - set(FEATURE_NAMES)
            if unknown:
                raise ValueError(f'unknown features {sorted(unknown)}')
        except (KeyError, TypeError, ValueError) as e:
            raise ValueError(f'Malformed regressor spec: {e}') from e

    @classmethod
    def from_file(cls, path: Union[str, Path]) -> 'Regressor':
        try:
            spec = fileio.load(path, file_format='json')
        except ValueError as e:
            raise ValueError(f'Malformed regressor file {path}: {e}') from e
        if not isinstance(spec, dict):
            raise ValueError(f'Malformed regressor file {path}: expected an '
                             'object')
        return cls(spec)

    def predict(self, features: SseqFeatures) -> float:
        x = features.select(self.feature_order)
        if self.type == 'affine':
            return float(self.weights @ x + self.bias)
        d2 = ((self.support_vectors - x)**2).sum(axis=1)
        return float(self.dual_coef @ np.exp(-self.gamma * d2) + self.bias)


def proxy_score(features: SseqFeatures) -> float:
    """``100 * (1 - mean spatial entropy / max block entropy)``.

    The maximum entropy of an 8x8 block is 6 bits; flatter, blurrier
    images score higher.
    """
    max_entropy = math.log2(BLOCK_SIZE * BLOCK_SIZE)
    return 100. * (1. - float(features.spatial_means.mean()) / max_entropy)


def quality_score(features: Optional[SseqFeatures] = None,
                  regressor: Union[Regressor, Dict, str, Path, None] = None,
                  injected: Optional[float] = None) -> QualityScore:
    """Score features with, in order of precedence, an injected value, a
    regressor, or the entropy proxy.

    Args:
        features (SseqFeatures, optional): Needed unless ``injected``.
        regressor (Regressor, dict, str or Path, optional): Regressor or its
            spec or weight file.
        injected (float, optional): A precomputed score passed through.

    Returns:
        QualityScore: The value and the source that produced it.
    """
    if injected is not None:
        return QualityScore(float(injected), 'injected')
    if features is None:
        raise ValueError('quality_score needs features unless a score is '
                         'injected')
    if regressor is not None:
        if isinstance(regressor, (str, Path)):
            regressor = Regressor.from_file(regressor)
        elif isinstance(regressor, dict):
            regressor = Regressor(regressor)
        return QualityScore(regressor.predict(features), 'regressor')
    return QualityScore(proxy_score(features), 'proxy')
