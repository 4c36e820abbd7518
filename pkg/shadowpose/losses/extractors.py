# Copyright (c) shadowpose contributors. All rights reserved.
import inspect
import logging
from pathlib import Path
from typing import Dict, Optional, Sequence, Tuple, Type, Union

import torch
import torch.nn as nn
import torch.nn.functional as F

from shadowpose.utils import try_import

torchvision = try_import('torchvision')

logger = logging.getLogger(__name__)

IMAGENET_MEAN = (0.485, 0.456, 0.406)
IMAGENET_STD = (0.229, 0.224, 0.225)


class FeatureExtractor(nn.Module):
    """Frozen image-to-feature map used by the perceptual loss.

    Subclasses implement :meth:`extract` on inputs already normalized with
    :attr:`mean` and :attr:`std`. Parameters never require grad and the
    module stays in eval mode, so the same input always gives the same
    features.

    Attributes:
        mean (tuple[float], optional): Per-channel mean subtracted before
            extraction.
        std (tuple[float], optional): Per-channel std divided out after.
        input_size (tuple[int, int], optional): Spatial size the extractor
            expects. Inputs of another size are resized bilinearly.
    """
    mean: Optional[Tuple[float, ...]] = None
    std: Optional[Tuple[float, ...]] = None
    input_size: Optional[Tuple[int, int]] = None

    @property
    def name(self) -> str:
        return self.__class__.__name__

    def freeze(self) -> 'FeatureExtractor':
        for param in self.parameters():
            param.requires_grad_(False)
        return super().train(False)

    def train(self, mode: bool = True) -> 'FeatureExtractor':
        return super().train(False)

    def normalize(self, x: torch.Tensor) -> torch.Tensor:
        if self.input_size is not None and \
                tuple(x.shape[-2:]) != tuple(self.input_size):
            x = F.interpolate(
                x, size=self.input_size, mode='bilinear', align_corners=False)
        if self.mean is not None:
            x = x - x.new_tensor(self.mean).view(1, -1, 1, 1)
        if self.std is not None:
            x = x / x.new_tensor(self.std).view(1, -1, 1, 1)
        return x

    def extract(self, x: torch.Tensor) -> torch.Tensor:
        raise NotImplementedError

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.extract(self.normalize(x))


EXTRACTORS: Dict[str, Type[FeatureExtractor]] = {}


def register_extractor(name: str, force: bool = False):
    """Decorator registering a :class:`FeatureExtractor` under ``name``."""

    def _register(cls):
        if not inspect.isclass(cls) or not issubclass(cls, FeatureExtractor):
            raise TypeError(
                f'{cls} is not a subclass of FeatureExtractor')
        if name in EXTRACTORS and not force:
            raise ValueError(f'{name} is already registered as a feature '
                             'extractor, add "force=True" to override it')
        EXTRACTORS[name] = cls
        return cls

    return _register


@register_extractor('identity')
class IdentityExtractor(FeatureExtractor):
    """Returns the image itself, so the feature term is the pixel L2
    distance."""

    def extract(self, x: torch.Tensor) -> torch.Tensor:
        return x


@register_extractor('stub')
class LinearStubExtractor(FeatureExtractor):
    """Fixed random 1x1 linear map, a dependency-free stand-in for a
    pretrained backbone.

    Args:
        in_channels (int): Defaults to 3.
        out_channels (int): Defaults to 8.
        seed (int): Seed of the weight draw. Defaults to 0.
    """

    def __init__(self,
                 in_channels: int = 3,
                 out_channels: int = 8,
                 seed: int = 0) -> None:
        super().__init__()
        generator = torch.Generator().manual_seed(seed)
        weight = torch.randn(
            out_channels, in_channels, 1, 1, generator=generator,
            dtype=torch.float64) / in_channels**0.5
        self.register_buffer('weight', weight)
        self.freeze()

    def extract(self, x: torch.Tensor) -> torch.Tensor:
        return F.conv2d(x, self.weight.to(x.dtype))


@register_extractor('resnet50')
class ResNetFeatureExtractor(FeatureExtractor):
    """The first six top-level children of a ResNet-50 (stem convolution,
    batch norm, relu, max pooling, first and second residual stages).

    Inputs are normalized with the ImageNet statistics.

    Args:
        weights (str, optional): ``'imagenet'`` for the torchvision registry
            weights, a path to a ``state_dict`` file, or None for an
            untrained backbone. Defaults to 'imagenet'.
        layers (int): Number of top-level children kept. Defaults to 6.
        input_size (Sequence[int], optional): Resize inputs to this size
            first. Defaults to None.
    """
    mean = IMAGENET_MEAN
    std = IMAGENET_STD

    def __init__(self,
                 weights: Optional[Union[str, Path]] = 'imagenet',
                 layers: int = 6,
                 input_size: Optional[Sequence[int]] = None) -> None:
        super().__init__()
        if torchvision is None:
            raise ImportError('ResNetFeatureExtractor requires torchvision, '
                              'please install it first.')
        if weights == 'imagenet':
            backbone = torchvision.models.resnet50(
                weights=torchvision.models.ResNet50_Weights.IMAGENET1K_V1)
        else:
            backbone = torchvision.models.resnet50(weights=None)
            if weights is None:
                logger.warning('ResNetFeatureExtractor built without '
                               'pretrained weights')
            else:
                path = Path(weights)
                if not path.is_file():
                    raise FileNotFoundError(
                        f'Feature extractor weights not found: {path}')
                state = torch.load(path, map_location='cpu')
                backbone.load_state_dict(state, strict=False)
        self.body = nn.Sequential(*list(backbone.children())[:layers])
        if input_size is not None:
            self.input_size = tuple(input_size)
        self.freeze()

    def extract(self, x: torch.Tensor) -> torch.Tensor:
        dtype = next(self.body.parameters()).dtype
        return self.body(x.to(dtype)).to(x.dtype)


def build_feature_extractor(
        cfg: Union[str, Dict, FeatureExtractor, None]) -> FeatureExtractor:
    """Build a feature extractor from a name or a config dict.

    Args:
        cfg (str, dict, FeatureExtractor or None): A registered name such as
            ``'resnet50'``, ``'stub'`` or ``'identity'``, or a dict with a
            ``type`` key plus constructor arguments. None gives the stub.

    Examples:
        >>> build_feature_extractor({'type': 'stub', 'out_channels': 4})
        LinearStubExtractor()
    """
    if isinstance(cfg, FeatureExtractor):
        return cfg
    if cfg is None:
        cfg = 'stub'
    if isinstance(cfg, str):
        cfg = {'type': cfg}
    cfg = dict(cfg)
    name = cfg.pop('type')
    if name not in EXTRACTORS:
        raise KeyError(f'Unknown feature extractor {name!r}, should be one '
                       f'of {sorted(EXTRACTORS)}')
    return EXTRACTORS[name](**cfg)
