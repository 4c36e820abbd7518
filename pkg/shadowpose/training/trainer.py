# Copyright (c) shadowpose contributors. All rights reserved.
import logging
import math
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

import torch

from shadowpose.core import FingerprintMismatchError, TrainingDivergedError
from shadowpose.degradation import PairedDataset, ingest_paired_dataset
from shadowpose.imaging import to_image
from shadowpose.losses import (FeatureExtractor, build_feature_extractor,
                               composite_loss)
from shadowpose.metrics import StructuralSimilarity
from shadowpose.models import (EnhancementNetwork, build_network,
                               enhance_batch, load_checkpoint,
                               save_checkpoint)
from shadowpose.utils import mkdir_or_exist, set_random_seed
from .config import RESUMABLE_FIELDS, TrainConfig
from .data import PairLoader, StepSampler
from .log import LOG_NAME, TrainLog

logger = logging.getLogger(__name__)

CHECKPOINT_DIR = 'checkpoints'
LAST_GOOD_NAME = 'last_good.spck'


@dataclass
class TrainResult:
    """Outcome of :func:`train` or :func:`resume`."""
    checkpoint: Path
    log: TrainLog
    net: EnhancementNetwork
    config: TrainConfig


def build_optimizer(cfg: TrainConfig,
                    net: EnhancementNetwork) -> torch.optim.Optimizer:
    if cfg.optimizer == 'adam':
        return torch.optim.Adam(net.parameters(), lr=cfg.learning_rate)
    return torch.optim.SGD(
        net.parameters(), lr=cfg.learning_rate, momentum=cfg.momentum)


def checkpoint_path(work_dir: Union[str, Path], step: int) -> Path:
    return Path(work_dir) / CHECKPOINT_DIR / f'step_{step:06d}.spck'


def _open(data) -> Optional[PairedDataset]:
    if data is None or isinstance(data, PairedDataset):
        return data
    return ingest_paired_dataset(data)


def evaluate_ssim(net: EnhancementNetwork,
                  loader: PairLoader,
                  batch_size: int = 8) -> Tuple[float, float]:
    """Mean SSIM to the clear image of the enhanced and of the degraded
    inputs over a whole dataset, at network resolution."""
    enhanced_metric = StructuralSimilarity()
    degraded_metric = StructuralSimilarity()
    for _, degraded, clear in loader.iter_batches(batch_size):
        enhanced = to_image(enhance_batch(net, degraded))
        clear_imgs = to_image(clear)
        enhanced_metric.add(list(enhanced), list(clear_imgs))
        degraded_metric.add(list(to_image(degraded)), list(clear_imgs))
    return (enhanced_metric.compute()['ssim'],
            degraded_metric.compute()['ssim'])


def _all_finite(tensors) -> bool:
    return all(
        bool(torch.isfinite(t).all()) for t in tensors if t is not None)


class Trainer:
    """Optimizes an enhancement network under the composite loss.

    The trainer owns the network parameters; a single instance must not be
    driven from several threads.

    Args:
        cfg (TrainConfig): Validated run configuration.
        net (EnhancementNetwork, optional): Network to train. Built from
            ``cfg.network`` with ``cfg.seed`` if omitted.
        data (PairedDataset or str, optional): Training pairs, defaults to
            ``cfg.dataset``.
        eval_data (PairedDataset or str, optional): Held-out pairs, defaults
            to ``cfg.eval_dataset``.
        extractor (FeatureExtractor, optional): Perceptual feature map,
            defaults to ``build_feature_extractor(cfg.feature_extractor)``.
        optimizer_state (dict, optional): State to restore into the fresh
            optimizer.
        log (TrainLog, optional): Log to continue.
    """

    def __init__(self,
                 cfg: TrainConfig,
                 net: Optional[EnhancementNetwork] = None,
                 data=None,
                 eval_data=None,
                 extractor: Optional[FeatureExtractor] = None,
                 optimizer_state: Optional[Dict] = None,
                 log: Optional[TrainLog] = None) -> None:
        self.cfg = cfg.validate()
        set_random_seed(cfg.seed)
        self.work_dir = mkdir_or_exist(cfg.work_dir)
        if net is None:
            net = build_network(cfg.network, cfg.seed, cfg.torch_dtype)
        if net.cfg.fingerprint != cfg.network.fingerprint:
            raise FingerprintMismatchError(cfg.network.fingerprint,
                                           net.cfg.fingerprint)
        self.net = net.to(cfg.torch_dtype)
        self.optimizer = build_optimizer(cfg, self.net)
        if optimizer_state is not None:
            self.optimizer.load_state_dict(optimizer_state)
        self.extractor = build_feature_extractor(
            extractor if extractor is not None else cfg.feature_extractor)

        dataset = _open(data if data is not None else cfg.dataset or None)
        if dataset is None or len(dataset) == 0:
            raise ValueError('Training needs a non-empty dataset')
        size = cfg.network.input_size[:2]
        self.loader = PairLoader(dataset, size, cfg.resize_policy,
                                 cfg.torch_dtype, cfg.num_workers)
        self.sampler = StepSampler(len(dataset), cfg.batch_size, cfg.seed)
        eval_dataset = _open(
            eval_data if eval_data is not None else cfg.eval_dataset)
        self.eval_loader = None
        if eval_dataset is not None and len(eval_dataset) > 0:
            self.eval_loader = PairLoader(eval_dataset, size,
                                          cfg.resize_policy, cfg.torch_dtype,
                                          cfg.num_workers)
        self.log = log if log is not None else TrainLog(
            path=self.work_dir / LOG_NAME)

    def meta(self, step: int) -> Dict:
        return {
            'seed': self.cfg.seed,
            'step': step,
            'loss_tail': self.log.tail(),
            'train_config': self.cfg.to_dict()
        }

    def save(self, step: int, path: Optional[Path] = None) -> Path:
        path = path or checkpoint_path(self.work_dir, step)
        return save_checkpoint(path, self.net, self.meta(step),
                               self.optimizer)

    def train_step(self, step: int) -> Dict:
        """Run optimizer step ``step`` (0-based) and return its losses."""
        start = time.perf_counter()
        self.net.train()
        degraded, clear = self.loader.batch(self.sampler.indices(step))
        enhanced = self.net(degraded)
        breakdown = composite_loss(
            enhanced,
            clear,
            self.cfg.toggles,
            self.extractor,
            norm_mode=self.cfg.norm_mode)
        if not math.isfinite(breakdown.total) or \
                not torch.isfinite(breakdown.loss):
            self._diverged(step, f'loss is {breakdown.total}')
        self.optimizer.zero_grad()
        breakdown.loss.backward()
        if self.cfg.grad_clip > 0:
            norm = torch.nn.utils.clip_grad_norm_(self.net.parameters(),
                                                  self.cfg.grad_clip)
            if not torch.isfinite(norm):
                self._diverged(step, f'gradient norm is {float(norm)}')
        elif not _all_finite(p.grad for p in self.net.parameters()):
            self._diverged(step, 'gradient is not finite')
        self.optimizer.step()
        if not _all_finite(self.net.parameters()):
            self._diverged(step, 'parameters are not finite')
        losses = breakdown.to_dict()
        return self.log.add_step(step + 1, losses,
                                 time.perf_counter() - start)

    def _diverged(self, step: int, reason: str) -> None:
        path = None
        if _all_finite(self.net.parameters()):
            path = str(
                self.save(step,
                          self.work_dir / CHECKPOINT_DIR / LAST_GOOD_NAME))
        else:
            logger.error('Parameters are not finite, no last good '
                         'checkpoint written')
        logger.error(f'Training diverged at step {step + 1}: {reason}')
        raise TrainingDivergedError(
            f'Training diverged at step {step + 1}: {reason}', path)

    def evaluate(self, step: int) -> Optional[Dict]:
        if self.eval_loader is None:
            return None
        enhanced, degraded = evaluate_ssim(self.net, self.eval_loader,
                                           self.cfg.batch_size)
        logger.info(f'step {step}: held-out SSIM enhanced {enhanced:.4f}, '
                    f'degraded {degraded:.4f}')
        return self.log.add_eval(step, enhanced, degraded)

    def run(self, start_step: int = 0) -> TrainResult:
        """Train from ``start_step`` (completed steps) to ``cfg.steps``."""
        cfg = self.cfg
        if start_step >= cfg.steps:
            raise ValueError(f'Nothing to train: {start_step} of {cfg.steps} '
                             'steps are already done')
        logger.info(f'Training steps {start_step + 1}-{cfg.steps} with '
                    f'{cfg.toggles.label} loss, batch {cfg.batch_size}, '
                    f'{len(self.loader)} pairs')
        for step in range(start_step, cfg.steps):
            record = self.train_step(step)
            done = step + 1
            if done == 1 or done % 50 == 0:
                logger.info(f'step {done}: total {record["total"]:.6f}')
            if cfg.eval_every and done % cfg.eval_every == 0:
                self.evaluate(done)
            if cfg.checkpoint_every and done % cfg.checkpoint_every == 0 \
                    and done != cfg.steps:
                self.save(done)
        if not cfg.eval_every or cfg.steps % cfg.eval_every:
            self.evaluate(cfg.steps)
        final = self.save(cfg.steps)
        logger.info(f'Saved final checkpoint {final}')
        return TrainResult(final, self.log, self.net, cfg)


def train(cfg: TrainConfig,
          data=None,
          net: Optional[EnhancementNetwork] = None,
          extractor: Optional[FeatureExtractor] = None,
          eval_data=None) -> TrainResult:
    """Train a network from scratch.

    Args:
        cfg (TrainConfig): Run configuration.
        data (PairedDataset or str, optional): Training pairs or manifest
            path, defaults to ``cfg.dataset``.
        net (EnhancementNetwork, optional): Network built for
            ``cfg.network``.
        extractor (FeatureExtractor, optional): Perceptual feature map.
        eval_data (PairedDataset or str, optional): Held-out pairs.

    Returns:
        TrainResult: Final checkpoint path, the log and the trained network.

    Raises:
        TrainingDivergedError: If the loss becomes non-finite. The last good
            state is saved first.
    """
    log_path = Path(cfg.work_dir) / LOG_NAME
    if log_path.exists():
        log_path.unlink()
    trainer = Trainer(cfg, net, data, eval_data, extractor)
    return trainer.run(0)


def resume(checkpoint: Union[str, Path],
           cfg_delta: Union[Dict, TrainConfig, None] = None,
           data=None,
           extractor: Optional[FeatureExtractor] = None,
           eval_data=None) -> TrainResult:
    """Continue a run from one of its checkpoints.

    The configuration stored in the checkpoint is reused. Only
    ``RESUMABLE_FIELDS`` (the step budget, evaluation and checkpoint
    cadence, work dir and worker count) may change.

    Args:
        checkpoint (str or Path): Archive written by a training run.
        cfg_delta (dict or TrainConfig, optional): Field overrides, or a full
            config to compare against the stored one.

    Raises:
        FingerprintMismatchError: If the network config differs.
        ValueError: If any other non-resumable field differs.
    """
    ckpt = load_checkpoint(checkpoint)
    if 'train_config' not in ckpt.meta:
        raise ValueError(f'{checkpoint} was not written by a training run')
    stored = TrainConfig.from_dict(ckpt.meta['train_config'])
    if isinstance(cfg_delta, TrainConfig):
        cfg = cfg_delta
    else:
        cfg = stored.merge(cfg_delta or {})
    changed = cfg.changed_fields(stored)
    if 'network' in changed:
        raise FingerprintMismatchError(ckpt.fingerprint,
                                       cfg.network.fingerprint,
                                       str(checkpoint))
    refused = sorted(set(changed) - set(RESUMABLE_FIELDS))
    if refused:
        raise ValueError(f'Cannot resume with changed fields {refused}; only '
                         f'{list(RESUMABLE_FIELDS)} may change')

    step = int(ckpt.meta['step'])
    log = TrainLog.load(Path(cfg.work_dir) / LOG_NAME, up_to=step)
    trainer = Trainer(
        cfg,
        ckpt.build(),
        data,
        eval_data,
        extractor,
        optimizer_state=ckpt.optimizer_state,
        log=log)
    logger.info(f'Resuming {checkpoint} at step {step}')
    return trainer.run(step)
