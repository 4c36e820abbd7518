# Copyright (c) shadowpose contributors. All rights reserved.
from pathlib import Path

import numpy as np

from shadowpose import JsonHandler

SPEC = {'kind': 'film', 'layers': 2, 'seed': 7}


def test_json_handler():
    data_dir = Path(__file__).parents[2] / 'data'
    content = JsonHandler().load_from_path(str(data_dir / 'handler.json'))
    assert content == SPEC


def test_json_handler_canonical_dump():
    json_handler = JsonHandler()
    a = json_handler.dump_to_str({'b': np.float64(0.5), 'a': np.arange(2)})
    b = json_handler.dump_to_str({'a': [0, 1], 'b': 0.5})
    assert a == b
    assert a.endswith('\n')
