# Copyright (c) shadowpose contributors. All rights reserved.
import io
from pathlib import Path

import numpy as np
import pytest

import shadowpose.fileio as fileio

test_data_dir = Path(__file__).parent.parent / 'data'


def test_load():
    spec = {'kind': 'film', 'layers': 2, 'seed': 7}
    assert fileio.load(test_data_dir / 'handler.json') == spec
    assert fileio.load(str(test_data_dir / 'handler.yaml')) == spec
    with open(test_data_dir / 'handler.json') as f:
        assert fileio.load(f, file_format='json')['layers'] == 2

    with pytest.raises(TypeError, match='file_format must be given'):
        fileio.load(io.StringIO('{}'))
    with pytest.raises(TypeError, match='Unsupported format'):
        fileio.load(test_data_dir / 'handler.pkl')
    with pytest.raises(TypeError):
        fileio.load(123)


def test_dump(tmp_path):
    obj = {'seed': 3, 'values': [0.25, 0.5]}
    target = tmp_path / 'nested' / 'out.json'
    fileio.dump(obj, target)
    assert fileio.load(target) == obj

    fileio.dump(obj, tmp_path / 'out.yaml')
    assert fileio.load(tmp_path / 'out.yaml') == obj

    # Equal objects are written byte-identically.
    fileio.dump({'values': [0.25, 0.5], 'seed': 3}, tmp_path / 'again.json')
    assert target.read_bytes() == (tmp_path / 'again.json').read_bytes()


def test_imwrite_imread(tmp_path):
    rng = np.random.default_rng(0)
    img = rng.random((12, 10, 3))
    path = tmp_path / 'sub' / 'img.png'
    fileio.imwrite(img, path)
    out = fileio.imread(path)
    assert out.shape == (12, 10, 3)
    assert out.dtype == np.float64
    np.testing.assert_allclose(out, np.round(img * 255) / 255, atol=1e-12)

    # Channel order survives the round trip.
    red = np.zeros((4, 4, 3))
    red[..., 0] = 1.
    fileio.imwrite(red, tmp_path / 'red.png')
    np.testing.assert_array_equal(fileio.imread(tmp_path / 'red.png'), red)

    gray = np.full((5, 5), 0.2)
    fileio.imwrite(gray, tmp_path / 'gray.png')
    out = fileio.imread(tmp_path / 'gray.png')
    assert out.shape == (5, 5, 3)
    np.testing.assert_allclose(out[..., 0], out[..., 2])


def test_imread_errors(tmp_path):
    with pytest.raises(FileNotFoundError):
        fileio.imread(tmp_path / 'missing.png')
    broken = tmp_path / 'broken.png'
    broken.write_bytes(b'not an image')
    with pytest.raises(ValueError, match='Failed to decode'):
        fileio.imread(broken)
