# Copyright (c) shadowpose contributors. All rights reserved.
import csv
import logging
import math
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

from shadowpose import fileio
from shadowpose.core import EstimatorError
from shadowpose.degradation import DatasetManifest
from shadowpose.metrics import (DetectionRate, ImageCounts, MatchConfig,
                                ShadowMeanAP, count_keypoints)
from .estimators import BaseEstimator, build_estimator

logger = logging.getLogger(__name__)

COMPARISONS = ('degraded', 'enhanced')
AGGREGATE_COLUMNS = ('condition', 'comparison', 'images', 'N_c', 'N_e',
                     'N_te', 'DR_mean', 'SmAP_mean', 'seed')
RECORD_COLUMNS = ('id', 'condition', 'comparison', 'status', 'N_c', 'N_e',
                  'N_te', 'DR', 'SmAP', 'error')


@dataclass
class ImageRecord:
    """DR/SmAP of one test image against its clear image.

    ``status`` is ``ok``, ``failed`` (estimator error) or ``excluded``
    (no keypoint on the clear image).
    """
    id: str
    condition: str
    comparison: str
    status: str
    n_c: int = 0
    n_e: int = 0
    n_te: int = 0
    dr: Optional[float] = None
    smap: Optional[float] = None
    error: str = ''

    def to_row(self) -> Dict:
        return {
            'id': self.id,
            'condition': self.condition,
            'comparison': self.comparison,
            'status': self.status,
            'N_c': self.n_c,
            'N_e': self.n_e,
            'N_te': self.n_te,
            'DR': self.dr,
            'SmAP': self.smap,
            'error': self.error
        }

    @property
    def counts(self) -> ImageCounts:
        return ImageCounts(self.n_c, self.n_e, self.n_te)


@dataclass
class EvalReport:
    """Per-image records plus per (condition, comparison) aggregates."""
    records: List[ImageRecord] = field(default_factory=list)
    aggregates: List[Dict] = field(default_factory=list)
    threshold: float = 10.
    seed: Optional[int] = None

    @property
    def failures(self) -> int:
        return sum(1 for r in self.records if r.status == 'failed')

    @property
    def excluded(self) -> int:
        return sum(1 for r in self.records if r.status == 'excluded')

    def to_dict(self) -> Dict:
        return {
            'threshold': self.threshold,
            'seed': self.seed,
            'failures': self.failures,
            'excluded': self.excluded,
            'aggregates': [_json_row(a) for a in self.aggregates],
            'records': [_json_row(r.to_row()) for r in self.records]
        }

    def to_json(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        fileio.dump(self.to_dict(), path, file_format='json')
        return path

    def to_csv(self, path: Union[str, Path]) -> Path:
        """Write the aggregate table, one row per group tagged with the
        seed."""
        return write_csv(path, AGGREGATE_COLUMNS,
                         [{**a, 'seed': self.seed} for a in self.aggregates])

    def to_records_csv(self, path: Union[str, Path]) -> Path:
        return write_csv(path, RECORD_COLUMNS,
                         [r.to_row() for r in self.records])

    @classmethod
    def from_json(cls, path: Union[str, Path]) -> 'EvalReport':
        content = fileio.load(path, file_format='json')
        records = []
        for row in content.get('records', []):
            records.append(
                ImageRecord(
                    id=row['id'],
                    condition=row['condition'],
                    comparison=row['comparison'],
                    status=row['status'],
                    n_c=row['N_c'],
                    n_e=row['N_e'],
                    n_te=row['N_te'],
                    dr=row['DR'],
                    smap=row['SmAP'],
                    error=row.get('error') or ''))
        aggregates = [{
            k: (float('nan') if v is None and k.endswith('_mean') else v)
            for k, v in row.items()
        } for row in content.get('aggregates', [])]
        return cls(records, aggregates, content.get('threshold', 10.),
                   content.get('seed'))


def _json_row(row: Dict) -> Dict:
    return {
        k: (None if isinstance(v, float) and math.isnan(v) else v)
        for k, v in row.items()
    }


def _csv_value(value):
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ''
    if isinstance(value, float):
        return repr(value)
    return value


def write_csv(path: Union[str, Path], columns: Sequence[str],
              rows: Sequence[Dict]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', newline='', encoding='utf-8') as f:
        writer = csv.DictWriter(
            f, fieldnames=list(columns), extrasaction='ignore')
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _csv_value(row.get(k)) for k in columns})
    return path


def read_csv(path: Union[str, Path]) -> List[Dict[str, str]]:
    with open(path, newline='', encoding='utf-8') as f:
        return list(csv.DictReader(f))


@dataclass
class RecordGroup:
    """Records of one (condition, comparison) group and its metrics.

    Only ``ok`` records reach the metrics.
    """
    records: List[ImageRecord]
    dr: DetectionRate
    smap: ShadowMeanAP

    @property
    def included(self) -> List[ImageRecord]:
        return [r for r in self.records if r.status == 'ok']


def group_records(records: Sequence[ImageRecord],
                  threshold: float = 10.) -> Dict[tuple, RecordGroup]:
    """Split records per (condition, comparison) in first-seen order."""
    groups: Dict[tuple, RecordGroup] = OrderedDict()
    for record in records:
        key = (record.condition, record.comparison)
        if key not in groups:
            meta = {'condition': key[0], 'comparison': key[1]}
            groups[key] = RecordGroup([],
                                      DetectionRate(
                                          threshold, dataset_meta=meta),
                                      ShadowMeanAP(
                                          threshold, dataset_meta=meta))
        group = groups[key]
        group.records.append(record)
        if record.status == 'ok':
            group.dr.add_counts([record.counts])
            group.smap.add_counts([record.counts])
    return groups


def _aggregate_groups(groups: Dict[tuple, RecordGroup]) -> List[Dict]:
    rows = []
    for group in groups.values():
        meta = group.dr.dataset_meta
        ok = group.included
        rows.append({
            **meta,
            'images': len(ok),
            'N_c': sum(r.n_c for r in ok),
            'N_e': sum(r.n_e for r in ok),
            'N_te': sum(r.n_te for r in ok),
            'DR_mean': group.dr.compute()['dr'],
            'SmAP_mean': group.smap.compute()['smap'],
            'failures': sum(1 for r in group.records if r.status == 'failed')
        })
    return rows


def aggregate_records(records: Sequence[ImageRecord]) -> List[Dict]:
    """Aggregate rows per (condition, comparison) in first-seen order.

    Integer counts are summed over the included images; ``DR_mean`` is the
    mean over images with ``N_c > 0`` and ``SmAP_mean`` over those that
    also have ``N_e > 0``. Empty means are NaN.
    """
    return _aggregate_groups(group_records(records))


def evaluate_dataset(manifest: Union[str, Path, DatasetManifest],
                     estimator: Union[str, BaseEstimator],
                     match_cfg: MatchConfig = MatchConfig(),
                     enhanced_dir: Union[str, Path, None] = None,
                     conditions: Optional[Sequence[str]] = None,
                     workers: int = 1,
                     seed: Optional[int] = None) -> EvalReport:
    """Detect poses on clear, degraded and enhanced images and compare.

    Each degraded image, and its enhanced counterpart
    ``<enhanced_dir>/<id>.png`` when ``enhanced_dir`` is given, is scored
    against the clear image of its entry. Every image is estimated once.

    Args:
        manifest (str, Path or DatasetManifest): Paired dataset.
        estimator (str or BaseEstimator): See :func:`build_estimator`.
        match_cfg (MatchConfig): Keypoint matching rule.
        enhanced_dir (str or Path, optional): Enhanced images.
        conditions (Sequence[str], optional): Only evaluate entries with
            these condition labels.
        workers (int): Estimator threads. Defaults to 1.
        seed (int, optional): Recorded in the report.

    Returns:
        EvalReport: Records and aggregates; estimator failures are recorded
        and excluded from the aggregates.
    """
    if not isinstance(manifest, DatasetManifest):
        manifest = DatasetManifest.from_file(manifest, check_files=False)
    estimator = build_estimator(estimator)
    entries = [
        e for e in manifest.entries
        if conditions is None or e.condition in conditions
    ]
    if conditions is not None:
        missing = sorted(set(conditions) - {e.condition for e in entries})
        if missing:
            logger.warning(f'No entries for conditions {missing}')

    jobs = []
    for entry in entries:
        clear = manifest.clear_path(entry)
        jobs.append((entry, 'degraded', manifest.degraded_path(entry), clear))
        if enhanced_dir is not None:
            jobs.append((entry, 'enhanced',
                         Path(enhanced_dir) / f'{entry.id}.png', clear))
    images = list(OrderedDict.fromkeys(p for job in jobs for p in job[2:]))

    chunks = [images[i::max(1, workers)] for i in range(max(1, workers))]
    cache: Dict[Path, object] = {}
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        for result in pool.map(estimator.estimate_many, chunks):
            cache.update(result)

    records = []
    for entry, comparison, test_path, clear_path in jobs:
        test, clear = cache.get(test_path), cache.get(clear_path)
        errors = [r for r in (test, clear) if isinstance(r, EstimatorError)]
        if errors or test is None or clear is None:
            message = str(errors[0]) if errors else 'no estimator result'
            logger.warning(f'Estimator failed on {entry.id} ({comparison}): '
                           f'{message.splitlines()[0]}')
            records.append(
                ImageRecord(entry.id, entry.condition, comparison, 'failed',
                            error=message.splitlines()[0]))
            continue
        counts = count_keypoints(test, clear, match_cfg)
        status = 'ok' if counts.n_c > 0 else 'excluded'
        if status == 'excluded':
            logger.info(f'{entry.id} ({comparison}) excluded: no keypoint '
                        'on the clear image')
        records.append(
            ImageRecord(entry.id, entry.condition, comparison, status,
                        counts.n_c, counts.n_e, counts.n_te, counts.dr,
                        counts.smap))

    groups = group_records(records, match_cfg.distance_threshold)
    report = EvalReport(records, _aggregate_groups(groups),
                        match_cfg.distance_threshold, seed)
    merged_dr = DetectionRate().merge(*(g.dr for g in groups.values()))
    merged_smap = ShadowMeanAP().merge(*(g.smap for g in groups.values()))
    overall_dr, overall_smap = merged_dr.compute(), merged_smap.compute()
    logger.info(f'Evaluated {len(records)} comparisons: DR '
                f'{overall_dr["dr"]:.4f}, SmAP {overall_smap["smap"]:.4f}, '
                f'{report.failures} failures')
    return report

