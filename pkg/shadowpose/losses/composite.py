# Copyright (c) shadowpose contributors. All rights reserved.
import dataclasses
import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union

import torch

from shadowpose.imaging import SsimParams
from .extractors import FeatureExtractor, build_feature_extractor
from .terms import NORM_MODES, edge_loss, perceptual_loss, structural_loss


@dataclass(frozen=True)
class LossToggles:
    """Which loss terms take part in the optimized total."""
    use_structural: bool = True
    use_perceptual: bool = True
    use_edge: bool = True

    def validate(self) -> 'LossToggles':
        if not (self.use_structural or self.use_perceptual or self.use_edge):
            raise ValueError('LossToggles needs at least one enabled term')
        return self

    @property
    def label(self) -> str:
        """Short name: ``full``, or the dropped terms such as ``no_sl``."""
        dropped = [
            name for name, flag in (('sl', self.use_structural),
                                    ('pl', self.use_perceptual),
                                    ('el', self.use_edge)) if not flag
        ]
        return 'full' if not dropped else 'no_' + '_'.join(dropped)

    def to_dict(self) -> Dict:
        return dataclasses.asdict(self)

    @classmethod
    def parse(cls, value: Union[str, Dict, 'LossToggles']) -> 'LossToggles':
        """Build toggles from a dict, an instance or a string.

        Strings are either a label (``full``, ``no_sl``, ``no_pl_el``) or a
        comma separated list of enabled terms (``sl,el``).
        """
        if isinstance(value, LossToggles):
            return value.validate()
        if isinstance(value, dict):
            return cls(**value).validate()
        text = value.strip().lower()
        if text == 'full':
            return cls()
        if text.startswith('no_'):
            dropped = set(text[3:].split('_'))
            enabled = {'sl', 'pl', 'el'} - dropped
        else:
            enabled = {t.strip() for t in text.split(',') if t.strip()}
            dropped = set()
        unknown = (enabled | dropped) - {'sl', 'pl', 'el'}
        if unknown:
            raise KeyError(f'Unknown loss terms {sorted(unknown)}, should be '
                           'among sl, pl, el')
        toggles = cls('sl' in enabled, 'pl' in enabled, 'el' in enabled)
        return toggles.validate()

    @classmethod
    def all_valid(cls) -> List['LossToggles']:
        """The seven combinations with at least one term enabled."""
        return [
            cls(*flags)
            for flags in itertools.product((True, False), repeat=3)
            if any(flags)
        ]


@dataclass
class LossBreakdown:
    """Per-term loss values of one step.

    Floats are detached values. ``total`` is the sum of the enabled terms
    computed from these floats, and ``loss`` is the differentiable tensor
    that is optimized. Disabled terms are either computed without gradient
    and reported, or skipped (None) and listed in ``skipped``.
    """
    sl: Optional[float]
    pl_mse: Optional[float]
    pl_mae: Optional[float]
    pl_feat: Optional[float]
    el: Optional[float]
    total: float
    toggles: LossToggles = field(default_factory=LossToggles)
    skipped: Tuple[str, ...] = ()
    loss: Optional[torch.Tensor] = field(default=None, repr=False)

    @property
    def pl(self) -> Optional[float]:
        if self.pl_mse is None:
            return None
        return self.pl_mse + 2 * self.pl_mae + self.pl_feat

    def to_dict(self) -> Dict:
        return {
            'total': self.total,
            'sl': self.sl,
            'pl': self.pl,
            'pl_mse': self.pl_mse,
            'pl_mae': self.pl_mae,
            'pl_feat': self.pl_feat,
            'el': self.el,
            'skipped': list(self.skipped)
        }


def _scalar(value: Optional[torch.Tensor]) -> Optional[float]:
    return None if value is None else value.detach().item()


def _enabled_total(sl, pl, el, toggles: LossToggles) -> float:
    total = 0.
    if toggles.use_structural:
        total += sl
    if toggles.use_perceptual:
        total += pl
    if toggles.use_edge:
        total += el
    return total


def composite_loss(e: torch.Tensor,
                   c: torch.Tensor,
                   toggles: LossToggles = LossToggles(),
                   extractor: Optional[FeatureExtractor] = None,
                   params: Optional[SsimParams] = None,
                   norm_mode: str = 'sum',
                   report_disabled: bool = True) -> LossBreakdown:
    """Structural + perceptual + edge loss with per-term toggles.

    Args:
        e (torch.Tensor): Enhanced image(s), differentiable.
        c (torch.Tensor): Clear image(s) of the same shape.
        toggles (LossToggles): Terms entering the total.
        extractor (FeatureExtractor, optional): Feature map of the
            perceptual term. Defaults to the linear stub.
        params (SsimParams, optional): Defaults to ``SsimParams()``.
        norm_mode (str): Norm of the feature and edge distances, ``'sum'``
            or ``'mean'``. Defaults to 'sum'.
        report_disabled (bool): Compute disabled terms without gradient
            for logging. If False they are skipped. Defaults to True.

    Returns:
        LossBreakdown: Term values and the differentiable ``loss``.
    """
    toggles.validate()
    if norm_mode not in NORM_MODES:
        raise KeyError(f'Unknown norm_mode {norm_mode!r}, should be one of '
                       f'{NORM_MODES}')
    if extractor is None:
        extractor = build_feature_extractor('stub')
    params = params or SsimParams()

    def run(enabled: bool, fn):
        if enabled:
            return fn()
        if not report_disabled:
            return None
        with torch.no_grad():
            return fn()

    sl = run(toggles.use_structural, lambda: structural_loss(e, c, params))
    pl = run(toggles.use_perceptual,
             lambda: perceptual_loss(e, c, extractor, norm_mode))
    el = run(toggles.use_edge, lambda: edge_loss(e, c, norm_mode))

    terms = []
    if toggles.use_structural:
        terms.append(sl)
    if toggles.use_perceptual:
        terms.append(pl[3])
    if toggles.use_edge:
        terms.append(el)
    loss = torch.stack(terms).sum()

    sl_value = _scalar(sl)
    mse, mae, feat = (None, None, None) if pl is None else \
        (_scalar(pl[0]), _scalar(pl[1]), _scalar(pl[2]))
    pl_value = None if pl is None else mse + 2 * mae + feat
    el_value = _scalar(el)
    skipped = tuple(
        name for name, value in (('sl', sl), ('pl', pl), ('el', el))
        if value is None)
    return LossBreakdown(
        sl=sl_value,
        pl_mse=mse,
        pl_mae=mae,
        pl_feat=feat,
        el=el_value,
        total=_enabled_total(sl_value, pl_value, el_value, toggles),
        toggles=toggles,
        skipped=skipped,
        loss=loss)
