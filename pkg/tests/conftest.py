# Copyright (c) shadowpose contributors. All rights reserved.
import numpy as np
import pytest

from shadowpose import fileio
from shadowpose.degradation import (FilmFilterParams, HazeParams,
                                    generate_dataset)
from shadowpose.pose import Skeleton, dump_pose_json


def make_clear_images(directory, num=4, size=(32, 32), seed=0):
    """Smooth random RGB images written as PNG files."""
    rng = np.random.default_rng(seed)
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    yy, xx = np.mgrid[:size[0], :size[1]] / max(size)
    for i in range(num):
        phase = rng.random(3) * 6.
        img = 0.5 + 0.4 * np.sin(
            (xx[..., None] * (2 + i) + yy[..., None] * 3 + phase) * np.pi)
        img = np.clip(img + 0.05 * rng.random(img.shape), 0., 1.)
        path = directory / f'img{i:02d}.png'
        fileio.imwrite(img, path)
        paths.append(path)
    return paths


@pytest.fixture
def clear_dir(tmp_path):
    directory = tmp_path / 'clear_src'
    make_clear_images(directory)
    return directory


@pytest.fixture
def haze_manifest(tmp_path, clear_dir):
    """Four hazy pairs of 32x32 images."""
    return generate_dataset(clear_dir, [HazeParams(transmission=0.6)],
                            tmp_path / 'haze', seed=0)


@pytest.fixture
def film_manifest(tmp_path, clear_dir):
    """Eight pairs: every image under one and two film layers."""
    specs = [FilmFilterParams(layers=1), FilmFilterParams(layers=2)]
    return generate_dataset(clear_dir, specs, tmp_path / 'film', seed=0)


@pytest.fixture
def image_factory():
    """Access to :func:`make_clear_images` from test modules."""
    return make_clear_images


def _skeleton(present, shifted=(), shift=11.):
    """18-part skeleton on a horizontal line; ``shifted`` parts move down
    by ``shift`` pixels."""
    flat = []
    for part in range(18):
        if part in present:
            flat.extend((10. + 4 * part, 20. + (shift if part in shifted
                                                else 0.), 1.))
        else:
            flat.extend((0., 0., 0.))
    return Skeleton.from_flat(flat)


def write_pose_fixtures(manifest, root, empty_stem='img03'):
    """Precomputed estimator output for every image of ``manifest``.

    Per image with keypoints on the clear side:

    - clear: 18 keypoints;
    - degraded ``film-1``: 12 keypoints, 2 of them 11 px off;
    - degraded ``film-2``: 6 keypoints, all exact;
    - enhanced: 15 keypoints, one exactly 10 px off.

    The clear image ``empty_stem`` has no person at all.
    """
    full = _skeleton(range(18))
    degraded = {
        'film-1': _skeleton(range(12), shifted=(10, 11)),
        'film-2': _skeleton(range(6))
    }
    enhanced = _skeleton(range(15), shifted=(14, ), shift=10.)
    for entry in manifest.entries:
        stem = entry.clear.rsplit('/', 1)[-1].rsplit('.', 1)[0]
        clear = [] if stem == empty_stem else [full]
        dump_pose_json(clear, root / 'clear' / f'{stem}_keypoints.json')
        dump_pose_json([degraded.get(entry.condition, full)],
                       root / 'degraded' / f'{entry.id}_keypoints.json')
        dump_pose_json([enhanced],
                       root / 'enhanced' / f'{entry.id}_keypoints.json')
    return root


@pytest.fixture
def pose_fixtures(tmp_path, film_manifest):
    return write_pose_fixtures(film_manifest, tmp_path / 'poses')
