# Copyright (c) shadowpose contributors. All rights reserved.
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Sequence, Tuple

import numpy as np
import torch

from shadowpose.degradation import PairedDataset
from shadowpose.imaging import resize_image, to_tensor


class StepSampler:
    """Deterministic sample order addressed by step index.

    The stream of sample indices is the concatenation of one permutation
    per epoch, drawn from ``default_rng([seed, epoch])``. Step ``s`` takes
    stream positions ``s * batch_size`` to ``(s + 1) * batch_size - 1``, so
    any step can be reproduced without replaying the earlier ones.

    Args:
        length (int): Number of samples.
        batch_size (int): Samples per step.
        seed (int): Order seed.

    Examples:
        >>> sampler = StepSampler(5, batch_size=2, seed=0)
        >>> sorted(sampler.epoch_order(0)) == list(range(5))
        True
    """

    def __init__(self, length: int, batch_size: int, seed: int = 0) -> None:
        if length <= 0:
            raise ValueError('Cannot sample from an empty dataset')
        self.length = length
        self.batch_size = batch_size
        self.seed = seed
        self._orders: Dict[int, np.ndarray] = {}

    def epoch_order(self, epoch: int) -> np.ndarray:
        if epoch not in self._orders:
            rng = np.random.default_rng([self.seed, epoch])
            self._orders = {epoch: rng.permutation(self.length)}
        return self._orders[epoch]

    def indices(self, step: int) -> List[int]:
        start = step * self.batch_size
        out = []
        for position in range(start, start + self.batch_size):
            epoch, offset = divmod(position, self.length)
            out.append(int(self.epoch_order(epoch)[offset]))
        return out


class PairLoader:
    """Decode, resize and batch pairs of a :class:`PairedDataset`.

    Decoding runs on ``num_workers`` threads; results are always assembled
    in index order, so batches do not depend on the worker count. Resized
    pairs are cached.

    Args:
        dataset (PairedDataset): Source pairs.
        size (tuple[int, int]): Network input height and width.
        policy (str): Resize policy, see
            :func:`shadowpose.imaging.resize_image`.
        dtype (torch.dtype): Tensor dtype of the batches.
        num_workers (int): Decoding threads. Defaults to 1.
        cache (bool): Keep resized pairs in memory. Defaults to True.
    """

    def __init__(self,
                 dataset: PairedDataset,
                 size: Tuple[int, int],
                 policy: str = 'scale',
                 dtype: torch.dtype = torch.float32,
                 num_workers: int = 1,
                 cache: bool = True) -> None:
        self.dataset = dataset
        self.size = tuple(size)
        self.policy = policy
        self.dtype = dtype
        self.num_workers = num_workers
        self.cache = cache
        self._cache: Dict[int, Tuple[np.ndarray, np.ndarray]] = {}

    def __len__(self) -> int:
        return len(self.dataset)

    def _load(self, index: int) -> Tuple[np.ndarray, np.ndarray]:
        if index in self._cache:
            return self._cache[index]
        sample = self.dataset[index]
        pair = (resize_image(sample.degraded, self.size, self.policy),
                resize_image(sample.clear, self.size, self.policy))
        if self.cache:
            self._cache[index] = pair
        return pair

    def load(self, indices: Sequence[int]) -> List[Tuple]:
        if self.num_workers > 1:
            with ThreadPoolExecutor(max_workers=self.num_workers) as pool:
                return list(pool.map(self._load, indices))
        return [self._load(i) for i in indices]

    def batch(self,
              indices: Sequence[int]) -> Tuple[torch.Tensor, torch.Tensor]:
        """Return ``(degraded, clear)`` N x C x H x W tensors."""
        pairs = self.load(indices)
        degraded = np.stack([p[0] for p in pairs])
        clear = np.stack([p[1] for p in pairs])
        return to_tensor(degraded, self.dtype), to_tensor(clear, self.dtype)

    def iter_batches(self, batch_size: int):
        """Yield ``(indices, degraded, clear)`` over the dataset in order."""
        for start in range(0, len(self), batch_size):
            indices = list(range(start, min(start + batch_size, len(self))))
            yield (indices, *self.batch(indices))
