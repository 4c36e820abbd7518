# Copyright (c) shadowpose contributors. All rights reserved.
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Union

LOG_NAME = 'train_log.jsonl'


@dataclass
class TrainLog:
    """Per-step loss records and held-out evaluation snapshots.

    When ``path`` is set, every record is appended to it as one JSON line
    with a ``kind`` of ``"step"`` or ``"eval"``.
    """
    records: List[Dict] = field(default_factory=list)
    evals: List[Dict] = field(default_factory=list)
    path: Optional[Path] = None

    def _write(self, record: Dict) -> None:
        if self.path is None:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, 'a', encoding='utf-8') as f:
            f.write(json.dumps(record, sort_keys=True) + '\n')

    @property
    def last_step(self) -> int:
        return self.records[-1]['step'] if self.records else 0

    def add_step(self, step: int, losses: Dict, wall_time: float) -> Dict:
        if step <= self.last_step and self.records:
            raise ValueError(f'Step {step} logged after step {self.last_step}')
        values = [v for v in losses.values() if isinstance(v, float)]
        if not all(math.isfinite(v) for v in values):
            raise ValueError(f'Non-finite loss logged at step {step}')
        record = {'kind': 'step', 'step': step, 'time': wall_time, **losses}
        self.records.append(record)
        self._write(record)
        return record

    def add_eval(self, step: int, ssim_enhanced: float,
                 ssim_degraded: float) -> Dict:
        record = {
            'kind': 'eval',
            'step': step,
            'ssim_enhanced': ssim_enhanced,
            'ssim_degraded': ssim_degraded
        }
        self.evals.append(record)
        self._write(record)
        return record

    def totals(self) -> List[float]:
        return [r['total'] for r in self.records]

    def tail(self, n: int = 10) -> List[float]:
        return self.totals()[-n:]

    @classmethod
    def load(cls,
             path: Union[str, Path],
             up_to: Optional[int] = None) -> 'TrainLog':
        """Read a log file, dropping records after step ``up_to``.

        The file is rewritten without the dropped records so that further
        appends keep the step index increasing.
        """
        path = Path(path)
        log = cls(path=path)
        if not path.is_file():
            return log
        kept = []
        with open(path, encoding='utf-8') as f:
            for line_no, line in enumerate(f, 1):
                if not line.strip():
                    continue
                try:
                    record = json.loads(line)
                except ValueError as e:
                    raise ValueError(
                        f'{path}:{line_no} is not valid JSON: {e}') from e
                if up_to is not None and record['step'] > up_to:
                    continue
                kept.append(record)
                if record.get('kind') == 'eval':
                    log.evals.append(record)
                else:
                    log.records.append(record)
        if up_to is not None:
            with open(path, 'w', encoding='utf-8') as f:
                for record in kept:
                    f.write(json.dumps(record, sort_keys=True) + '\n')
        return log
