# Copyright (c) shadowpose contributors. All rights reserved.
import json

import numpy as np
import pytest

from shadowpose.pose import (BODY_25_PARTS, COCO_18_PARTS, Skeleton,
                             dump_pose_json, load_pose_json, parse_pose_json)


def test_from_flat():
    flat = [1., 2., 0.9, 0., 0., 0., 30., 40., 0.5] + [0., 0., 0.] * 15
    skeleton = Skeleton.from_flat(flat, person_id=2)
    assert skeleton.num_parts == 18
    assert skeleton.part_names == COCO_18_PARTS
    assert skeleton.num_present == 2
    assert skeleton.centroid() == (15.5, 21.)
    np.testing.assert_array_equal(skeleton.mask()[:3], [True, False, True])
    assert skeleton.coords().shape == (18, 2)
    assert skeleton.to_flat() == flat

    assert Skeleton.from_flat([0.] * 75).part_names == BODY_25_PARTS
    assert Skeleton.from_flat([0.] * 75).centroid() is None


def test_from_flat_clips_to_image():
    flat = [5., 5., 1., 50., 5., 1., 5., 40., 1.]
    skeleton = Skeleton.from_flat(flat, image_size=(32, 32))
    assert [k.present for k in skeleton.keypoints] == [True, False, False]
    assert skeleton.keypoints[1].x == 0.


@pytest.mark.parametrize(
    'values, match', [([1., 2.], 'multiple of 3'),
                      ([1., 2., float('nan')], 'confidence nan')])
def test_from_flat_errors(values, match):
    with pytest.raises(ValueError, match=match):
        Skeleton.from_flat(values)


def test_parse_pose_json():
    doc = {'people': [{'pose_keypoints_2d': [1., 1., 1.] * 18}, {
        'pose_keypoints_2d': [0., 0., 0.] * 18
    }]}
    skeletons = parse_pose_json(json.dumps(doc))
    assert [s.person_id for s in skeletons] == [0, 1]
    assert parse_pose_json(b'{"people": []}') == []

    with pytest.raises(ValueError, match='byte offset 12'):
        parse_pose_json('{"people": [}', source='a.json')
    with pytest.raises(ValueError, match='"people" list'):
        parse_pose_json('[]')
    with pytest.raises(ValueError, match='no pose_keypoints_2d'):
        parse_pose_json('{"people": [{}]}')


def test_dump_and_load(tmp_path):
    skeletons = [Skeleton.from_flat([3., 4., 0.5] * 25, person_id=0)]
    dump_pose_json(skeletons, tmp_path / 'out' / 'x_keypoints.json')
    loaded = load_pose_json(tmp_path / 'out' / 'x_keypoints.json')
    assert loaded == skeletons


def test_from_flat_clips_confidence():
    skeleton = Skeleton.from_flat([1., 2., 1.05, 3., 4., -0.2, 5., 6., 0.4])
    assert [k.confidence for k in skeleton.keypoints] == [1., 0., 0.4]
    assert [k.present for k in skeleton.keypoints] == [True, False, True]
    assert skeleton.keypoints[1].x == 0.
