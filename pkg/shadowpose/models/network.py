# Copyright (c) shadowpose contributors. All rights reserved.
import logging
import math

import numpy as np
import torch
import torch.nn as nn
import torch.nn.functional as F

from shadowpose.core import dispatch
from shadowpose.imaging import to_image, to_tensor
from .config import NetworkConfig

logger = logging.getLogger(__name__)


class MiniRes(nn.Module):
    """Residual block without batch normalization.

    ``y = relu(x + conv2(relu(conv1(x))))``
    """

    def __init__(self, channels: int, kernel: int = 3) -> None:
        super().__init__()
        self.conv1 = nn.Conv2d(
            channels, channels, kernel_size=kernel, padding=kernel // 2)
        self.conv2 = nn.Conv2d(
            channels, channels, kernel_size=kernel, padding=kernel // 2)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        residual = self.conv2(F.relu(self.conv1(x)))
        return F.relu(x + residual)


class EnhancementModule(nn.Module):
    """Lift to ``conv_channels``, pool, run the MiniRes chain with a shortcut
    from its input to its output, project back to the image channels.

    The last convolution is linear.
    """

    def __init__(self, cfg: NetworkConfig) -> None:
        super().__init__()
        channels = cfg.input_size[2]
        width = cfg.conv_channels
        self.conv_in = nn.Conv2d(
            channels, width, kernel_size=cfg.kernel, padding=cfg.kernel // 2)
        self.pool = nn.MaxPool2d(cfg.pool, stride=1, padding=cfg.pool // 2)
        self.blocks = nn.ModuleList(
            MiniRes(width, cfg.kernel) for _ in range(cfg.blocks_per_em))
        self.conv_out = nn.Conv2d(
            width, channels, kernel_size=cfg.kernel, padding=cfg.kernel // 2)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        h = self.pool(F.relu(self.conv_in(x)))
        shortcut = h
        for block in self.blocks:
            h = block(h)
        return self.conv_out(h + shortcut)


class EnhancementNetwork(nn.Module):
    """Sequential enhancement modules with input shortcuts.

    ``out_1 = EM_1(x)`` and ``out_k = EM_k(out_{k-1} + x)`` for ``k > 1``. The
    network output is the output of the last module. Outputs are not clamped
    here, see :func:`enhance_batch` for inference.

    Args:
        cfg (NetworkConfig): Validated topology.
    """

    def __init__(self, cfg: NetworkConfig) -> None:
        super().__init__()
        self.cfg = cfg
        self.ems = nn.ModuleList(
            EnhancementModule(cfg) for _ in range(cfg.em_count))

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        height, width, channels = self.cfg.input_size
        if x.dim() != 4 or tuple(x.shape[1:]) != (channels, height, width):
            raise ValueError(
                f'Expected a N x {channels} x {height} x {width} batch '
                f'({height}x{width} images), got {tuple(x.shape)}')
        out = self.ems[0](x)
        for em in self.ems[1:]:
            out = em(out + x) if self.cfg.network_shortcuts else em(out)
        return out


def init_weights(net: nn.Module, seed: int = 0) -> nn.Module:
    """Fan-in scaled normal init of every convolution, zero biases."""
    generator = torch.Generator().manual_seed(seed)
    with torch.no_grad():
        for module in net.modules():
            if isinstance(module, nn.Conv2d):
                weight = module.weight
                fan_in = weight.shape[1] * weight.shape[2] * weight.shape[3]
                std = math.sqrt(2. / fan_in)
                weight.copy_(
                    torch.randn(
                        weight.shape, generator=generator,
                        dtype=torch.float64).to(weight.dtype) * std)
                if module.bias is not None:
                    module.bias.zero_()
    return net


def build_network(cfg: NetworkConfig = NetworkConfig(),
                  seed: int = 0,
                  dtype: torch.dtype = torch.float32) -> EnhancementNetwork:
    """Build an initialized enhancement network.

    Args:
        cfg (NetworkConfig): Topology. Defaults to ``NetworkConfig()``.
        seed (int): Init seed. Defaults to 0.
        dtype (torch.dtype): Parameter dtype. Defaults to torch.float32.

    Returns:
        EnhancementNetwork: The network in training mode.

    Examples:
        >>> net = build_network(NetworkConfig(input_size=(32, 32, 3)))
        >>> net(torch.zeros(2, 3, 32, 32)).shape
        torch.Size([2, 3, 32, 32])
    """
    cfg.validate()
    # Built in float64 so the init does not depend on the requested dtype.
    net = init_weights(EnhancementNetwork(cfg).to(torch.float64), seed)
    net = net.to(dtype)
    logger.debug(f'Built enhancement network {cfg.fingerprint[:12]} with '
                 f'{sum(p.numel() for p in net.parameters())} parameters')
    return net


def _infer_dtype(net: nn.Module) -> torch.dtype:
    return next(net.parameters()).dtype


@dispatch
def enhance_batch(net: nn.Module, batch: torch.Tensor) -> torch.Tensor:
    """Run inference and clamp the result to [0, 1].

    Accepts an N x C x H x W tensor, or a channel-last numpy image or batch
    which is returned in the same layout as float64.
    """
    training = net.training
    net.eval()
    with torch.no_grad():
        out = net(batch.to(_infer_dtype(net)))
    net.train(training)
    return out.clamp(0., 1.)


@dispatch
def enhance_batch(  # noqa: F811
        net: nn.Module, batch: np.ndarray) -> np.ndarray:
    single = batch.ndim == 3
    tensor = to_tensor(batch, dtype=_infer_dtype(net))
    out = to_image(enhance_batch(net, tensor))
    return out[0] if single else out

