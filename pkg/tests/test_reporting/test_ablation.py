# Copyright (c) shadowpose contributors. All rights reserved.
import pytest

from shadowpose.losses import IdentityExtractor
from shadowpose.models import NetworkConfig
from shadowpose.pose import read_csv
from shadowpose.reporting import (ABLATION_VARIANTS, AblationReport,
                                  VariantResult, run_ablation, run_variant)
from shadowpose.training import TrainConfig


@pytest.fixture
def base_cfg(tmp_path, film_manifest):
    return TrainConfig(
        steps=2,
        batch_size=4,
        learning_rate=1e-3,
        network=NetworkConfig(
            input_size=(16, 16, 3), conv_channels=4, blocks_per_em=1,
            em_count=1),
        feature_extractor='stub',
        dataset=str(film_manifest.root / 'manifest.json'),
        work_dir=str(tmp_path / 'unused'))


def test_run_ablation(base_cfg, film_manifest, pose_fixtures, tmp_path):
    out = tmp_path / 'ablation'
    report = run_ablation(base_cfg.merge({'seed': 5}), film_manifest,
                          f'mock:{pose_fixtures}', out)
    assert [r.variant for r in report.results] == list(ABLATION_VARIANTS)
    assert report.complete
    for result in report.results:
        assert result.steps == 2
        assert result.ssim_enhanced is not None
        # The mock estimator reads the same enhanced fixtures every time.
        assert result.dr == pytest.approx(15 / 18)
        assert (out / result.variant / 'eval.json').is_file()
        assert len(list((out / result.variant / 'enhanced').iterdir())) == 8

    grid = read_csv(out / 'ablation.csv')
    assert [row['metric'] for row in grid] == ['DR', 'SmAP']
    assert list(grid[0]) == ['metric', *ABLATION_VARIANTS, 'seed']
    assert {row['seed'] for row in grid} == {'5'}
    status = read_csv(out / 'ablation_status.csv')
    assert [row['status'] for row in status] == ['ok'] * 4
    assert [row['seed'] for row in status] == ['5'] * 4


class PoisonedExtractor(IdentityExtractor):

    def extract(self, x):
        return x * float('nan')


def test_failed_variant_keeps_its_column(base_cfg, film_manifest,
                                         pose_fixtures, tmp_path):
    result = run_variant('no_sl', base_cfg, film_manifest,
                         f'mock:{pose_fixtures}', tmp_path,
                         extractor=PoisonedExtractor())
    assert result.status == 'failed'
    assert 'diverged' in result.error
    assert result.dr is None

    report = AblationReport([result, VariantResult('full', dr=0.5)])
    assert not report.complete
    assert report.grid()[0] == {
        'metric': 'DR',
        'no_sl': None,
        'full': 0.5,
        'seed': 0
    }
    paths = report.write(tmp_path / 'out')
    assert read_csv(paths['status'])[0]['status'] == 'failed'
