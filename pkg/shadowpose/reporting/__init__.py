# Copyright (c) shadowpose contributors. All rights reserved.
from .ablation import (ABLATION_VARIANTS, AblationReport, VariantResult,
                       run_ablation, run_variant)
from .report import (PLOT_METRICS, build_plot_data, collect_rows,
                     plot_grouped_bars, write_report)

__all__ = [
    'build_plot_data', 'collect_rows', 'plot_grouped_bars', 'write_report',
    'PLOT_METRICS', 'ABLATION_VARIANTS', 'AblationReport', 'VariantResult',
    'run_ablation', 'run_variant'
]
