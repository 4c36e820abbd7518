# Copyright (c) shadowpose contributors. All rights reserved.
import json
import shlex
import sys
import textwrap
from pathlib import Path

import pytest

from shadowpose.core import EstimatorError
from shadowpose.pose import (ExternalEstimator, MockEstimator,
                             build_estimator, run_estimator)

FAKE_ESTIMATOR = textwrap.dedent('''
    import json, pathlib, sys
    args = dict(zip(sys.argv[1::2], sys.argv[2::2]))
    image_dir = pathlib.Path(args['--image_dir'])
    json_dir = pathlib.Path(args['--write_json'])
    for image in sorted(image_dir.iterdir()):
        if 'skip' in image.stem:
            continue
        doc = {'people': [{'pose_keypoints_2d': [1.0, 2.0, 0.5] * 18}]}
        if 'bad' in image.stem:
            doc = {'people': 'nobody'}
        path = json_dir / (image.stem + '_keypoints.json')
        path.write_text(json.dumps(doc))
    if args.get('--fail'):
        sys.stderr.write('cuda out of memory')
        sys.exit(1)
''')


@pytest.fixture
def fake_estimator(tmp_path):
    script = tmp_path / 'fake_estimator.py'
    script.write_text(FAKE_ESTIMATOR)
    return f'{shlex.quote(sys.executable)} {shlex.quote(str(script))}'


def _images(tmp_path, *names):
    paths = []
    for name in names:
        path = tmp_path / 'images' / name
        path.parent.mkdir(exist_ok=True)
        path.write_bytes(b'')
        paths.append(path)
    return paths


def test_mock_estimator(tmp_path):
    (tmp_path / 'fx' / 'clear').mkdir(parents=True)
    doc = {'people': [{'pose_keypoints_2d': [1., 1., 1.] * 18}]}
    (tmp_path / 'fx' / 'clear' / 'a_keypoints.json').write_text(
        json.dumps(doc))
    (tmp_path / 'fx' / 'b_keypoints.json').write_text(json.dumps(doc))
    (tmp_path / 'fx' / 'c_keypoints.json').write_text('{')

    estimator = build_estimator(f'mock:{tmp_path / "fx"}')
    assert isinstance(estimator, MockEstimator)
    assert len(estimator.estimate('/data/clear/a.png')) == 1
    assert len(run_estimator('/data/other/b.jpg', estimator)) == 1
    with pytest.raises(EstimatorError, match='No fixture'):
        estimator.estimate('/data/clear/z.png')
    with pytest.raises(EstimatorError, match='Bad fixture'):
        estimator.estimate('/data/c.png')

    results = estimator.estimate_many(['/x/clear/a.png', '/x/z.png'])
    assert isinstance(results[Path('/x/clear/a.png')], list)
    assert isinstance(results[Path('/x/z.png')], EstimatorError)

    with pytest.raises(FileNotFoundError):
        MockEstimator(tmp_path / 'missing')


def test_build_estimator_errors():
    with pytest.raises(ValueError, match='Estimator spec'):
        build_estimator('openpose')
    with pytest.raises(KeyError, match='Unknown estimator kind'):
        build_estimator('remote:http://x')
    with pytest.raises(ValueError, match='placeholders'):
        ExternalEstimator('openpose.bin --image_dir {image_dir}')
    assert build_estimator('external:op --image_dir {image_dir} '
                           '--write_json {json_dir}').command == \
        'op --image_dir {image_dir} --write_json {json_dir}'


def test_external_estimator(tmp_path, fake_estimator):
    estimator = ExternalEstimator(
        f'{fake_estimator} --image_dir {{image_dir}} '
        '--write_json {json_dir}')
    good, skip, bad = _images(tmp_path, 'good.png', 'skip.png', 'bad.png')
    results = estimator.estimate_many([good, skip, bad])
    assert len(results[good]) == 1
    assert results[good][0].num_present == 18
    assert 'wrote no output' in str(results[skip])
    assert 'invalid' in str(results[bad])
    assert len(estimator.estimate(good)) == 1
    assert estimator.estimate_many([]) == {}


def test_external_estimator_failure(tmp_path, fake_estimator):
    estimator = ExternalEstimator(
        f'{fake_estimator} --image_dir {{image_dir}} '
        '--write_json {json_dir} --fail 1')
    (good, ) = _images(tmp_path, 'good.png')
    with pytest.raises(EstimatorError, match='exited with code 1') as info:
        estimator.estimate(good)
    assert 'cuda out of memory' in info.value.diagnostics

    missing = ExternalEstimator(
        f'{tmp_path / "nope"} --image_dir {{image_dir}} '
        '--write_json {json_dir}')
    with pytest.raises(EstimatorError, match='could not run'):
        missing.estimate(good)
