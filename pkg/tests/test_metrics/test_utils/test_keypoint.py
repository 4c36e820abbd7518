# Copyright (c) shadowpose contributors. All rights reserved.
import numpy as np

from shadowpose.metrics.utils import calc_sq_distances, count_within


def test_calc_sq_distances():
    preds = np.array([[0., 0.], [3., 4.], [1., 1.]])
    gts = np.array([[0., 0.], [0., 0.], [9., 9.]])
    mask = np.array([True, True, False])
    np.testing.assert_array_equal(
        calc_sq_distances(preds, gts, mask), [0., 25., -1.])


def test_count_within():
    sq = np.array([0., 25., 100., 100.0001, -1.])
    assert count_within(sq, 10.) == 3
    assert count_within(sq, 5.) == 2
    assert count_within(np.array([-1., -1.]), 10.) == 0
