# Copyright (c) shadowpose contributors. All rights reserved.

# yapf: disable

import pytest
import torch

from shadowpose.losses import (LinearStubExtractor, LossToggles,
                               composite_loss, edge_loss, perceptual_loss,
                               structural_loss)


@pytest.mark.parametrize(
    argnames=['value', 'expected'],
    argvalues=[
        ('full', LossToggles()),
        ('no_sl', LossToggles(False, True, True)),
        ('no_pl_el', LossToggles(True, False, False)),
        ('sl,el', LossToggles(True, False, True)),
        ({'use_edge': False}, LossToggles(True, True, False)),
        (LossToggles(False, False, True), LossToggles(False, False, True)),
    ]
)
def test_toggles_parse(value, expected):
    assert LossToggles.parse(value) == expected
    assert LossToggles.parse(expected.label) == expected


def test_toggles_errors():
    with pytest.raises(ValueError, match='at least one'):
        LossToggles.parse('no_sl_pl_el')
    with pytest.raises(KeyError, match='Unknown loss terms'):
        LossToggles.parse('sl,ssim')
    assert len(LossToggles.all_valid()) == 7


@pytest.mark.parametrize('toggles', LossToggles.all_valid())
def test_total_is_sum_of_enabled_terms(toggles):
    generator = torch.Generator().manual_seed(0)
    e = torch.rand(2, 3, 8, 8, generator=generator, dtype=torch.float64)
    c = torch.rand(2, 3, 8, 8, generator=generator, dtype=torch.float64)
    extractor = LinearStubExtractor()
    out = composite_loss(e.requires_grad_(True), c, toggles, extractor)

    sl = float(structural_loss(e, c))
    pl = float(perceptual_loss(e, c, extractor)[3])
    el = float(edge_loss(e, c))
    assert out.sl == pytest.approx(sl)
    assert out.pl == pytest.approx(pl)
    assert out.el == pytest.approx(el)
    expected = (sl * toggles.use_structural + pl * toggles.use_perceptual +
                el * toggles.use_edge)
    assert out.total == pytest.approx(expected)
    assert float(out.loss) == pytest.approx(expected)
    assert out.skipped == ()
    out.loss.backward()
    assert e.grad is not None


def test_disabled_terms_do_not_reach_the_gradient():
    e = torch.rand(1, 3, 8, 8, dtype=torch.float64, requires_grad=True)
    c = torch.rand(1, 3, 8, 8, dtype=torch.float64)
    toggles = LossToggles.parse('no_pl_el')
    composite_loss(e, c, toggles).loss.backward()
    grad = e.grad.clone()

    e.grad = None
    structural_loss(e, c).backward()
    assert torch.allclose(grad, e.grad)

    out = composite_loss(e, c, toggles, report_disabled=False)
    assert out.skipped == ('pl', 'el')
    assert out.pl is None and out.el is None
    assert out.to_dict()['skipped'] == ['pl', 'el']
    assert out.total == pytest.approx(out.sl)


def test_composite_norm_mode():
    e = torch.rand(1, 3, 8, 8, dtype=torch.float64)
    with pytest.raises(KeyError, match='norm_mode'):
        composite_loss(e, e, norm_mode='max')
    out = composite_loss(e, e)
    assert out.total == pytest.approx(0., abs=1e-10)


@pytest.mark.filterwarnings('error::UserWarning')
def test_logged_values_are_detached_floats():
    e = torch.rand(2, 3, 8, 8, dtype=torch.float64, requires_grad=True)
    c = torch.rand(2, 3, 8, 8, dtype=torch.float64)
    out = composite_loss(e, c)
    for name in ('sl', 'pl_mse', 'pl_mae', 'pl_feat', 'el', 'total'):
        assert type(out.to_dict()[name]) is float
    assert out.loss.requires_grad
