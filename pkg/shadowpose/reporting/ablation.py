# Copyright (c) shadowpose contributors. All rights reserved.
import logging
import math
from collections import OrderedDict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

from shadowpose.core import EstimatorError, TrainingDivergedError
from shadowpose.degradation import DatasetManifest
from shadowpose.losses import FeatureExtractor, LossToggles
from shadowpose.metrics import MatchConfig
from shadowpose.models import enhance_files
from shadowpose.pose import BaseEstimator, evaluate_dataset, write_csv
from shadowpose.training import TrainConfig, train
from shadowpose.utils import mkdir_or_exist

logger = logging.getLogger(__name__)

ABLATION_VARIANTS = ('full', 'no_sl', 'no_pl', 'no_el')
GRID_CSV = 'ablation.csv'
STATUS_CSV = 'ablation_status.csv'
STATUS_COLUMNS = ('variant', 'status', 'steps', 'final_total',
                  'ssim_enhanced', 'ssim_degraded', 'DR', 'SmAP', 'seed',
                  'error')


@dataclass
class VariantResult:
    """Outcome of one loss variant: training, held-out SSIM and pose
    scores of its enhanced images."""
    variant: str
    status: str = 'ok'
    steps: int = 0
    final_total: Optional[float] = None
    ssim_enhanced: Optional[float] = None
    ssim_degraded: Optional[float] = None
    dr: Optional[float] = None
    smap: Optional[float] = None
    error: str = ''

    def to_row(self) -> Dict:
        return {
            'variant': self.variant,
            'status': self.status,
            'steps': self.steps,
            'final_total': self.final_total,
            'ssim_enhanced': self.ssim_enhanced,
            'ssim_degraded': self.ssim_degraded,
            'DR': self.dr,
            'SmAP': self.smap,
            'error': self.error
        }


@dataclass
class AblationReport:
    results: List[VariantResult] = field(default_factory=list)
    seed: int = 0

    @property
    def complete(self) -> bool:
        return all(r.status == 'ok' for r in self.results)

    def grid(self) -> List[Dict]:
        """Metric rows (DR, SmAP) by variant columns, plus the seed."""
        rows = []
        for metric, attr in (('DR', 'dr'), ('SmAP', 'smap')):
            row: Dict = OrderedDict(metric=metric)
            for result in self.results:
                row[result.variant] = getattr(result, attr)
            row['seed'] = self.seed
            rows.append(row)
        return rows

    def write(self, out_dir: Union[str, Path]) -> Dict[str, str]:
        out_dir = mkdir_or_exist(out_dir)
        columns = ['metric'] + [r.variant for r in self.results] + ['seed']
        grid = write_csv(out_dir / GRID_CSV, columns, self.grid())
        status = write_csv(out_dir / STATUS_CSV, STATUS_COLUMNS,
                           [{**r.to_row(), 'seed': self.seed}
                            for r in self.results])
        return {'grid': str(grid), 'status': str(status)}


def _mean(values: Sequence[Optional[float]]) -> Optional[float]:
    values = [v for v in values if v is not None and not math.isnan(v)]
    return sum(values) / len(values) if values else None


def run_variant(variant: str,
                base: TrainConfig,
                eval_manifest: DatasetManifest,
                estimator: Union[str, BaseEstimator],
                out_dir: Path,
                match_cfg: MatchConfig = MatchConfig(),
                data=None,
                extractor: Optional[FeatureExtractor] = None) -> VariantResult:
    """Train one loss variant and score its enhanced held-out images.

    Training divergence and estimator failures end the variant with a
    ``failed`` status instead of raising.
    """
    result = VariantResult(variant)
    work_dir = out_dir / variant
    cfg = base.merge({
        'toggles': LossToggles.parse(variant).to_dict(),
        'work_dir': str(work_dir)
    })
    try:
        trained = train(cfg, data, extractor=extractor,
                        eval_data=eval_manifest)
    except TrainingDivergedError as e:
        logger.error(f'Variant {variant} aborted: {e}')
        result.status, result.error = 'failed', str(e)
        return result
    result.steps = trained.log.last_step
    result.final_total = trained.log.totals()[-1]
    if trained.log.evals:
        result.ssim_enhanced = trained.log.evals[-1]['ssim_enhanced']
        result.ssim_degraded = trained.log.evals[-1]['ssim_degraded']

    enhanced_dir = work_dir / 'enhanced'
    enhance_files(trained.net, [
        eval_manifest.degraded_path(e) for e in eval_manifest.entries
    ], enhanced_dir, cfg.resize_policy)
    try:
        report = evaluate_dataset(
            eval_manifest,
            estimator,
            match_cfg,
            enhanced_dir=enhanced_dir,
            seed=cfg.seed)
    except EstimatorError as e:
        result.status, result.error = 'failed', str(e)
        return result
    report.to_json(work_dir / 'eval.json')
    enhanced = [r for r in report.records
                if r.comparison == 'enhanced' and r.status == 'ok']
    result.dr = _mean([r.dr for r in enhanced])
    result.smap = _mean([r.smap for r in enhanced])
    return result


def run_ablation(base: TrainConfig,
                 eval_manifest: Union[str, Path, DatasetManifest],
                 estimator: Union[str, BaseEstimator],
                 out_dir: Union[str, Path],
                 match_cfg: MatchConfig = MatchConfig(),
                 variants: Sequence[str] = ABLATION_VARIANTS,
                 data=None,
                 extractor: Optional[FeatureExtractor] = None
                 ) -> AblationReport:
    """Retrain with each loss term removed and compare pose scores.

    Every variant shares ``base.seed``, so they start from the same weights
    and see the same batches. A failed variant keeps its column with a
    ``failed`` status; the report is written either way.

    Args:
        base (TrainConfig): Configuration of the full variant.
        eval_manifest (str, Path or DatasetManifest): Held-out pairs for
            SSIM and pose evaluation.
        estimator (str or BaseEstimator): Pose estimator.
        out_dir (str or Path): Root of the per-variant work dirs and the
            report CSVs.
        match_cfg (MatchConfig): Keypoint matching rule.
        variants (Sequence[str]): Toggle labels to run.
        data (optional): Training pairs, defaults to ``base.dataset``.
        extractor (FeatureExtractor, optional): Perceptual feature map.

    Returns:
        AblationReport: One result per variant, in order.
    """
    if not isinstance(eval_manifest, DatasetManifest):
        eval_manifest = DatasetManifest.from_file(eval_manifest)
    out_dir = mkdir_or_exist(out_dir)
    report = AblationReport(seed=base.seed)
    for variant in variants:
        logger.info(f'Ablation variant {variant}')
        report.results.append(
            run_variant(variant, base, eval_manifest, estimator, out_dir,
                        match_cfg, data, extractor))
    report.write(out_dir)
    failed = [r.variant for r in report.results if r.status != 'ok']
    if failed:
        logger.warning(f'Ablation finished with failed variants: {failed}')
    return report
