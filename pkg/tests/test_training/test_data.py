# Copyright (c) shadowpose contributors. All rights reserved.
import pytest
import torch

from shadowpose.degradation import ingest_paired_dataset
from shadowpose.training import PairLoader, StepSampler


def test_step_sampler():
    sampler = StepSampler(5, batch_size=2, seed=3)
    stream = [i for step in range(5) for i in sampler.indices(step)]
    # Every epoch is a permutation.
    assert sorted(stream[:5]) == list(range(5))
    assert sorted(stream[5:10]) == list(range(5))
    # Steps are addressable without replaying the earlier ones.
    assert StepSampler(5, 2, seed=3).indices(3) == stream[6:8]
    other = StepSampler(5, 2, seed=4)
    assert [i for step in range(5) for i in other.indices(step)] != stream

    with pytest.raises(ValueError, match='empty'):
        StepSampler(0, 2)


def test_pair_loader(film_manifest):
    dataset = ingest_paired_dataset(film_manifest)
    loader = PairLoader(dataset, (16, 16), dtype=torch.float64)
    degraded, clear = loader.batch([0, 3])
    assert degraded.shape == clear.shape == (2, 3, 16, 16)
    assert degraded.dtype == torch.float64

    threaded = PairLoader(dataset, (16, 16), dtype=torch.float64,
                          num_workers=3, cache=False)
    other_degraded, other_clear = threaded.batch([0, 3])
    assert torch.equal(degraded, other_degraded)
    assert torch.equal(clear, other_clear)

    batches = list(loader.iter_batches(3))
    assert [b[0] for b in batches] == [[0, 1, 2], [3, 4, 5], [6, 7]]
