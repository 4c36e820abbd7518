# Copyright (c) shadowpose contributors. All rights reserved.

# yapf: disable

import pytest

from shadowpose.metrics import (QualityScore, ShadowRatio,
                                recommended_sr_band, shadow_ratio)


@pytest.mark.parametrize(
    argnames=['clear', 'shadow', 'expected'],
    argvalues=[
        (42.7710, 52.6125, 0.2301),
        (42.7596, 58.4768, 0.3676),
        (39.0658, 57.7562, 0.4784),
    ]
)
def test_shadow_ratio_values(clear, shadow, expected):
    assert shadow_ratio(clear, shadow) == pytest.approx(expected, abs=1e-4)
    scored = shadow_ratio(QualityScore(clear, 'injected'),
                          QualityScore(shadow, 'injected'))
    assert scored == shadow_ratio(clear, shadow)


def test_shadow_ratio_errors():
    with pytest.raises(ValueError, match='same source'):
        shadow_ratio(QualityScore(1., 'proxy'), QualityScore(2., 'regressor'))
    with pytest.raises(ZeroDivisionError):
        shadow_ratio(0., 1.)
    assert shadow_ratio(10., 8.) == pytest.approx(-0.2)
    low, high = recommended_sr_band()
    assert low < 0.3676 < high


def test_shadow_ratio_metric():
    metric = ShadowRatio()
    metric.add([42.7710, 42.7710], [52.6125, 52.6125], ['film-1'] * 2)
    metric.add([39.0658], [57.7562], ['film-3'])
    result = metric.compute()
    assert list(result) == ['film-1', 'film-3']
    assert result['film-1']['images'] == 2
    assert result['film-1']['sr'] == pytest.approx(0.2301, abs=1e-4)
    assert result['film-3']['sseq_clear'] == pytest.approx(39.0658)
    assert result['film-3']['sr'] == pytest.approx(0.4784, abs=1e-4)

    # The ratio of the means, not the mean of the ratios.
    metric = ShadowRatio()
    result = metric([10., 30.], [20., 30.])
    assert result['all']['sr'] == pytest.approx(0.25)

    with pytest.raises(ValueError, match='same length'):
        metric.add([1.], [1., 2.])
    with pytest.raises(ValueError, match='share a source'):
        metric.add([QualityScore(1., 'proxy')],
                   [QualityScore(2., 'injected')])
