# Copyright (c) shadowpose contributors. All rights reserved.
import json

import pytest

from shadowpose.training import TrainLog


def test_train_log(tmp_path):
    log = TrainLog(path=tmp_path / 'log.jsonl')
    assert log.last_step == 0
    for step in (1, 2, 3):
        log.add_step(step, {'total': float(step), 'skipped': []}, 0.1)
    log.add_eval(3, 0.8, 0.6)
    assert log.totals() == [1., 2., 3.]
    assert log.tail(2) == [2., 3.]

    with pytest.raises(ValueError, match='logged after'):
        log.add_step(3, {'total': 1.}, 0.1)
    with pytest.raises(ValueError, match='Non-finite'):
        log.add_step(4, {'total': float('nan')}, 0.1)

    lines = (tmp_path / 'log.jsonl').read_text().splitlines()
    assert [json.loads(line)['kind'] for line in lines] == \
        ['step', 'step', 'step', 'eval']


def test_load_truncates(tmp_path):
    path = tmp_path / 'log.jsonl'
    log = TrainLog(path=path)
    for step in (1, 2, 3, 4):
        log.add_step(step, {'total': float(step)}, 0.)
    log.add_eval(4, 0.5, 0.4)

    loaded = TrainLog.load(path, up_to=2)
    assert loaded.totals() == [1., 2.]
    assert loaded.evals == []
    assert len(path.read_text().splitlines()) == 2
    assert TrainLog.load(tmp_path / 'missing.jsonl').records == []

    path.write_text('{not json}\n')
    with pytest.raises(ValueError, match='not valid JSON'):
        TrainLog.load(path)
