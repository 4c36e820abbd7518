# Copyright (c) shadowpose contributors. All rights reserved.
import random

import numpy as np
import pytest

from shadowpose.utils import (is_list_of, is_seq_of, list_images,
                              mkdir_or_exist, set_random_seed, try_import)


def test_try_import():
    import numpy as np
    assert try_import('numpy') is np
    assert try_import('numpy111') is None


def test_is_seq_of():
    assert is_seq_of([0.1, 0.2], float)
    assert is_seq_of((1, 2), int)
    assert not is_seq_of((1, 'a'), int)
    assert not is_seq_of(1, int)
    assert is_list_of([1, 2], int)
    assert not is_list_of((1, 2), int)


def test_set_random_seed():
    set_random_seed(7)
    a = (random.random(), np.random.rand())
    set_random_seed(7)
    assert (random.random(), np.random.rand()) == a


def test_paths(tmp_path):
    target = mkdir_or_exist(tmp_path / 'a' / 'b')
    assert target.is_dir()
    assert mkdir_or_exist(target) == target

    for name in ('b.png', 'a.JPG', 'notes.txt'):
        (target / name).write_bytes(b'')
    (target / 'sub.png').mkdir()
    assert [p.name for p in list_images(target)] == ['a.JPG', 'b.png']

    with pytest.raises(FileNotFoundError):
        list_images(tmp_path / 'missing')


if __name__ == '__main__':
    pytest.main([__file__, '-v', '--capture=no'])
