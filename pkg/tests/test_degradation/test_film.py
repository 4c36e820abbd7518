# Copyright (c) shadowpose contributors. All rights reserved.
import numpy as np
import pytest

from shadowpose.degradation import FilmFilterParams, apply_film_filter
from shadowpose.imaging import ssim_map
from shadowpose.metrics import proxy_score, sseq_features


def _charts(num=20, size=64, seed=0):
    """Test charts: smoothed noise, stripes and checkerboards."""
    rng = np.random.default_rng(seed)
    charts = []
    yy, xx = np.mgrid[:size, :size]
    for i in range(num):
        kind = i % 3
        if kind == 0:
            img = rng.random((size, size, 3))
        elif kind == 1:
            period = 4 + i % 5
            img = np.repeat(((xx // period) % 2)[..., None], 3, axis=2) * 1.
            img = 0.2 + 0.6 * img + 0.05 * rng.random((size, size, 3))
        else:
            cell = 6 + i % 4
            img = (((xx // cell) + (yy // cell)) % 2)[..., None] * \
                rng.random(3)
        charts.append(np.clip(img, 0., 1.))
    return charts


def test_film_params_validation():
    with pytest.raises(ValueError, match='layers'):
        FilmFilterParams(layers=0)
    with pytest.raises(ValueError, match='blur_sigma'):
        FilmFilterParams(blur_sigma=0.)
    with pytest.raises(ValueError, match='scatter_alpha'):
        FilmFilterParams(scatter_alpha=1.)
    with pytest.raises(ValueError, match='contrast_gain'):
        FilmFilterParams(contrast_gain=0.)
    with pytest.raises(ValueError, match='light_color'):
        FilmFilterParams(light_color=(1.2, 0., 0.))
    with pytest.raises(ValueError, match='grain_sigma'):
        FilmFilterParams(grain_sigma=-0.1)

    params = FilmFilterParams(layers=2)
    assert params.layers == 2
    assert params.condition == 'film-2'
    assert params.to_dict()['kind'] == 'film'


def test_apply_film_filter_output():
    img = _charts(1)[0]
    out = apply_film_filter(img, FilmFilterParams())
    assert out.shape == img.shape
    assert out.dtype == np.float64
    assert out.min() >= 0. and out.max() <= 1.
    # Input is left untouched.
    np.testing.assert_array_equal(img, _charts(1)[0])

    with pytest.raises(ValueError, match='H x W x 3'):
        apply_film_filter(img[..., 0], FilmFilterParams())


def test_film_grain_is_seeded():
    img = _charts(1)[0]
    a = apply_film_filter(img, FilmFilterParams(grain_sigma=0.02, seed=3))
    b = apply_film_filter(img, FilmFilterParams(grain_sigma=0.02, seed=3))
    c = apply_film_filter(img, FilmFilterParams(grain_sigma=0.02, seed=4))
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)


def test_more_layers_degrade_more():
    charts = _charts()
    ssims, scores = [], []
    for layers in (1, 2, 3):
        params = FilmFilterParams(layers=layers)
        degraded = [apply_film_filter(img, params) for img in charts]
        ssims.append(
            np.mean([ssim_map(d, c).mean() for d, c in zip(degraded, charts)]))
        scores.append(
            np.mean([proxy_score(sseq_features(d)) for d in degraded]))
    assert ssims[0] > ssims[1] > ssims[2]
    assert scores[0] <= scores[1] <= scores[2]
