# Copyright (c) shadowpose contributors. All rights reserved.
import logging
import math
import warnings
from collections import OrderedDict
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

from shadowpose.pose import (AGGREGATE_COLUMNS, COMPARISONS, EvalReport,
                             read_csv, write_csv)
from shadowpose.utils import mkdir_or_exist, try_import

matplotlib = try_import('matplotlib')

logger = logging.getLogger(__name__)

REPORT_CSV = 'report.csv'
PLOT_METRICS = OrderedDict([('DR', 'DR_mean'), ('SmAP', 'SmAP_mean')])
SERIES_LABELS = {'degraded': 'shadow', 'enhanced': 'enhanced'}

ReportSource = Union[EvalReport, str, Path]


def _as_float(value) -> float:
    if value is None or value == '':
        return float('nan')
    return float(value)


def _as_seed(value) -> Optional[int]:
    if value is None or value == '':
        return None
    return int(value)


def collect_rows(sources: Sequence[ReportSource]) -> List[Dict]:
    """Aggregate rows of several evaluation reports.

    A source is an :class:`EvalReport`, its JSON file, or a report CSV
    written by :func:`write_report`. When two sources hold the same
    (condition, comparison) group the first one is kept.
    """
    if not sources:
        raise ValueError('A report needs at least one evaluation report')
    rows: Dict = OrderedDict()
    for source in sources:
        seed = None
        if isinstance(source, EvalReport):
            items, seed = source.aggregates, source.seed
        elif Path(source).suffix.lower() == '.csv':
            items = read_csv(source)
        else:
            report = EvalReport.from_json(source)
            items, seed = report.aggregates, report.seed
        for row in items:
            key = (row['condition'], row['comparison'])
            if key in rows:
                warnings.warn(f'Duplicate group {key} in {source}, keeping '
                              'the first one')
                continue
            rows[key] = {
                'condition': row['condition'],
                'comparison': row['comparison'],
                'images': int(row.get('images') or 0),
                'N_c': _as_float(row.get('N_c')),
                'N_e': _as_float(row.get('N_e')),
                'N_te': _as_float(row.get('N_te')),
                'DR_mean': _as_float(row.get('DR_mean')),
                'SmAP_mean': _as_float(row.get('SmAP_mean')),
                'seed': _as_seed(row.get('seed', seed))
            }
    return list(rows.values())


def build_plot_data(rows: Sequence[Dict],
                    comparisons: Sequence[str] = COMPARISONS) -> Dict:
    """Arrange aggregate rows as grouped-bar series.

    Returns:
        dict: ``{'conditions': [...], 'DR': {comparison: [...]},
        'SmAP': {comparison: [...]}}`` with one value per condition in
        first-seen order. Groups without a row, or without a defined mean,
        are NaN and trigger a warning; they are never zero.
    """
    conditions = list(OrderedDict.fromkeys(r['condition'] for r in rows))
    lookup = {(r['condition'], r['comparison']): r for r in rows}
    data: Dict = {'conditions': conditions}
    for metric, column in PLOT_METRICS.items():
        data[metric] = OrderedDict()
        for comparison in comparisons:
            data[metric][comparison] = [
                _as_float(lookup.get((c, comparison), {}).get(column))
                for c in conditions
            ]
    missing = [(c, k) for c in conditions for k in comparisons
               if math.isnan(data['DR'][k][conditions.index(c)])]
    if missing:
        warnings.warn(f'Missing report groups {missing}, plotted as absent')
    return data


def _report_rows(rows: Sequence[Dict],
                 comparisons: Sequence[str]) -> List[Dict]:
    """Complete the condition x comparison grid with empty rows."""
    lookup = {(r['condition'], r['comparison']): r for r in rows}
    conditions = OrderedDict.fromkeys(r['condition'] for r in rows)
    out = []
    for condition in conditions:
        for comparison in comparisons:
            out.append(
                lookup.get((condition, comparison), {
                    'condition': condition,
                    'comparison': comparison,
                    'images': 0
                }))
    return out


def plot_grouped_bars(data: Dict, metric: str, path: Union[str, Path]) -> Path:
    """Draw one metric as bars grouped by condition, one bar per series."""
    if matplotlib is None:
        raise ImportError('Report plots require matplotlib, please install '
                          'it first.')
    matplotlib.use('Agg')
    import matplotlib.pyplot as plt

    conditions = data['conditions']
    series = data[metric]
    width = 0.8 / max(1, len(series))
    fig, ax = plt.subplots(figsize=(max(4., 1.5 * len(conditions)), 3.5))
    for i, (comparison, values) in enumerate(series.items()):
        xs = [x + (i - (len(series) - 1) / 2) * width
              for x in range(len(conditions))]
        shown = [(x, v) for x, v in zip(xs, values) if not math.isnan(v)]
        ax.bar([x for x, _ in shown], [v for _, v in shown],
               width=width,
               label=SERIES_LABELS.get(comparison, comparison))
    ax.set_xticks(range(len(conditions)))
    ax.set_xticklabels(conditions)
    ax.set_ylim(0., 1.)
    ax.set_ylabel(metric)
    ax.legend()
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path)
    plt.close(fig)
    return path


def write_report(sources: Sequence[ReportSource],
                 out_dir: Union[str, Path],
                 comparisons: Sequence[str] = COMPARISONS,
                 plots: bool = True) -> Dict:
    """Write the aggregate CSV and the DR and SmAP bar charts.

    The CSV holds one row per condition and comparison and is the source
    of truth; the plots are drawn from it.

    Args:
        sources (Sequence): Evaluation reports, see :func:`collect_rows`.
        out_dir (str or Path): Output directory.
        comparisons (Sequence[str]): Series to report.
        plots (bool): Draw the PNG charts. Defaults to True.

    Returns:
        dict: Paths of the written files and the plot data.
    """
    out_dir = mkdir_or_exist(out_dir)
    rows = _report_rows(collect_rows(sources), comparisons)
    csv_path = write_csv(out_dir / REPORT_CSV, AGGREGATE_COLUMNS, rows)
    data = build_plot_data(read_csv(csv_path), comparisons)
    outputs = {'csv': str(csv_path), 'plots': []}
    if plots:
        for metric in PLOT_METRICS:
            path = plot_grouped_bars(data, metric,
                                     out_dir / f'{metric.lower()}.png')
            outputs['plots'].append(str(path))
    logger.info(f'Report of {len(data["conditions"])} conditions written to '
                f'{out_dir}')
    outputs['plot_data'] = data
    return outputs
