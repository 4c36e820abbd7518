# Copyright (c) shadowpose contributors. All rights reserved.
from dataclasses import asdict, dataclass, field
from typing import Dict, Tuple, Union

import numpy as np

# Per-layer optics of one sheet of translucent film. Calibrated so that the
# proxy quality score and the SSIM to the clear image move monotonically
# with the number of layers.
DEFAULT_BLUR_SIGMA = 1.6
DEFAULT_SCATTER_ALPHA = 0.22
DEFAULT_CONTRAST_GAIN = 0.78
DEFAULT_LIGHT_COLOR = (0.86, 0.86, 0.84)


def _check_rgb(name: str, value) -> None:
    if len(value) != 3 or any(not 0. <= v <= 1. for v in value):
        raise ValueError(f'{name} must be 3 values in [0, 1], got {value}')


@dataclass(frozen=True)
class FilmFilterParams:
    """Translucent film simulator parameters.

    Every layer applies, in order: Gaussian blur, a blend toward a global
    light colour, a mean-preserving contrast reduction and optional grain.

    Args:
        layers (int): Number of stacked film layers. Defaults to 1.
        blur_sigma (float): Gaussian blur sigma in pixels per layer.
        scatter_alpha (float): Blend weight toward ``light_color`` per layer,
            in [0, 1).
        contrast_gain (float): Contrast multiplier per layer, in (0, 1].
        light_color (tuple[float]): RGB colour of the scattered light.
        grain_sigma (float): Standard deviation of the film texture noise
            added per layer. Defaults to 0, i.e. no noise.
        seed (int): Seed of the grain noise, >= 0. :func:`generate_dataset`
            mixes it with the dataset seed and the sample id into a
            per-sample seed. Defaults to 0.
    """
    layers: int = 1
    blur_sigma: float = DEFAULT_BLUR_SIGMA
    scatter_alpha: float = DEFAULT_SCATTER_ALPHA
    contrast_gain: float = DEFAULT_CONTRAST_GAIN
    light_color: Tuple[float, float, float] = DEFAULT_LIGHT_COLOR
    grain_sigma: float = 0.
    seed: int = 0

    kind = 'film'

    def __post_init__(self) -> None:
        object.__setattr__(self, 'light_color',
                           tuple(float(v) for v in self.light_color))
        self.validate()

    def validate(self) -> None:
        if not isinstance(self.layers, int) or self.layers < 1:
            raise ValueError(f'layers must be an integer >= 1, got '
                             f'{self.layers}')
        if not self.blur_sigma > 0:
            raise ValueError(
                f'blur_sigma must be positive, got {self.blur_sigma}')
        if not 0. <= self.scatter_alpha < 1.:
            raise ValueError('scatter_alpha must be in [0, 1), got '
                             f'{self.scatter_alpha}')
        if not 0. < self.contrast_gain <= 1.:
            raise ValueError('contrast_gain must be in (0, 1], got '
                             f'{self.contrast_gain}')
        if self.grain_sigma < 0:
            raise ValueError(
                f'grain_sigma must be >= 0, got {self.grain_sigma}')
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ValueError(f'seed must be an integer >= 0, got {self.seed}')
        _check_rgb('light_color', self.light_color)

    def to_dict(self) -> Dict:
        record = asdict(self)
        record['light_color'] = list(self.light_color)
        record['kind'] = self.kind
        return record

    @property
    def condition(self) -> str:
        return f'film-{self.layers}'


@dataclass(frozen=True)
class HazeParams:
    """Atmospheric scattering parameters, ``I = J t + A (1 - t)``.

    Args:
        atmospheric_light (tuple[float]): RGB airlight ``A`` in [0, 1].
        transmission (float or np.ndarray): Scalar or H x W map ``t`` in
            (0, 1].
    """
    atmospheric_light: Tuple[float, float, float] = (0.8, 0.8, 0.8)
    transmission: Union[float, np.ndarray] = field(default=0.7)

    kind = 'haze'

    def __post_init__(self) -> None:
        object.__setattr__(self, 'atmospheric_light',
                           tuple(float(v) for v in self.atmospheric_light))
        self.validate()

    def validate(self) -> None:
        _check_rgb('atmospheric_light', self.atmospheric_light)
        t = np.asarray(self.transmission, dtype=np.float64)
        if not np.all(np.isfinite(t)) or np.any(t <= 0) or np.any(t > 1):
            raise ValueError('transmission must be in (0, 1], got '
                             f'min={t.min()}, max={t.max()}')

    def to_dict(self) -> Dict:
        t = self.transmission
        if isinstance(t, np.ndarray):
            t = {'map_shape': list(t.shape), 'mean': float(t.mean())}
        return {
            'kind': self.kind,
            'atmospheric_light': list(self.atmospheric_light),
            'transmission': t
        }

    @property
    def condition(self) -> str:
        if isinstance(self.transmission, np.ndarray):
            return 'haze-map'
        return f'haze-t{self.transmission:g}'


def params_from_dict(record: Dict) -> Union[FilmFilterParams, HazeParams]:
    """Rebuild degradation parameters from a manifest ``params`` record."""
    record = dict(record)
    kind = record.pop('kind', None)
    if kind == 'film':
        return FilmFilterParams(**record)
    elif kind == 'haze':
        if isinstance(record.get('transmission'), dict):
            raise ValueError('Per-pixel transmission maps are not stored in '
                             'manifests and can not be rebuilt')
        return HazeParams(**record)
    raise KeyError(f'Unknown degradation kind {kind!r}, should be one of '
                   "'film', 'haze'")


def classify_space(object_count: int) -> str:
    """Space type of a scene from its background object count.

    Scenes with fewer than 4 background objects are ``'private'`` (plain
    background), the others ``'public'`` (cluttered background).
    """
    if object_count < 0:
        raise ValueError(f'object_count must be >= 0, got {object_count}')
    return 'private' if object_count < 4 else 'public'
