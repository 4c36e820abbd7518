# Copyright (c) shadowpose contributors. All rights reserved.

# yapf: disable

import numpy as np
import pytest

from shadowpose.imaging import SsimParams
from shadowpose.metrics import StructuralSimilarity as SSIM

# SSIM of two constant images 0.4 and 0.6: only the luminance term is left.
CONSTANT_SSIM = (2 * 0.4 * 0.6 + 1e-4) / (0.4**2 + 0.6**2 + 1e-4)


def test_ssim_init():
    with pytest.raises(ValueError, match='input_order'):
        SSIM(input_order='HH')
    with pytest.raises(ValueError, match='window'):
        SSIM(params=SsimParams(window=4))


@pytest.mark.parametrize(
    argnames=['metric_kwargs', 'img1', 'img2', 'results'],
    argvalues=[
        ({}, [np.full((32, 32), 0.4)], [np.full((32, 32), 0.6)],
         CONSTANT_SSIM),
        ({'input_order': 'HWC'}, [np.full((32, 32, 3), 0.4)],
         [np.full((32, 32, 3), 0.6)], CONSTANT_SSIM),
        ({'input_order': 'CHW'}, [np.full((3, 32, 32), 0.4)],
         [np.full((3, 32, 32), 0.6)], CONSTANT_SSIM),
        ({'params': SsimParams(window=7)}, [np.full((16, 16, 3), 0.4)],
         [np.full((16, 16, 3), 0.6)], CONSTANT_SSIM),
        ({}, [np.full((16, 16, 3), 0.4)] * 2, [np.full((16, 16, 3), 0.6)] * 2,
         CONSTANT_SSIM),
    ]
)
def test_ssim(metric_kwargs, img1, img2, results):
    ssim = SSIM(**metric_kwargs)
    ssim_results = ssim(img1, img2)
    assert isinstance(ssim_results, dict)
    np.testing.assert_almost_equal(ssim_results['ssim'], results)


def test_ssim_mean_over_pairs():
    rng = np.random.default_rng(0)
    imgs = [rng.random((16, 16, 3)) for _ in range(3)]
    noisy = [np.clip(img + 0.1 * rng.standard_normal(img.shape), 0, 1)
             for img in imgs]
    ssim = SSIM()
    per_pair = [SSIM()([a], [b])['ssim'] for a, b in zip(noisy, imgs)]
    assert ssim(noisy, imgs)['ssim'] == pytest.approx(np.mean(per_pair))
    assert SSIM()(imgs, imgs)['ssim'] == 1.


def test_ssim_errors():
    ssim = SSIM()
    with pytest.raises(ValueError, match='shapes are different'):
        ssim.add([np.zeros((16, 16, 3))], [np.zeros((16, 8, 3))])
    assert np.isnan(SSIM().compute()['ssim'])
