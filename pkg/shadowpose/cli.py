# Copyright (c) shadowpose contributors. All rights reserved.
"""Command line entry point ``shadowpose <subcommand>``.

Every subcommand writes ``summary.json`` into ``--out`` and prints the same
summary as one JSON line. Exit codes: 0 on success, 2 on invalid input or
configuration, 3 on any other failure.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

from shadowpose import fileio
from shadowpose.degradation import (DatasetManifest, FilmFilterParams,
                                    HazeParams, generate_dataset,
                                    params_from_dict)
from shadowpose.metrics import (MatchConfig, ShadowRatio, quality_score,
                                sseq_features)
from shadowpose.models import enhance_directory, load_checkpoint
from shadowpose.pose import evaluate_dataset
from shadowpose.reporting import run_ablation, write_report
from shadowpose.training import TrainConfig, resume, train
from shadowpose.utils import list_images, mkdir_or_exist, set_random_seed
from shadowpose.version import __version__

logger = logging.getLogger('shadowpose')

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_FAILED = 3
SUMMARY_NAME = 'summary.json'
DEFAULT_FILM_LAYERS = (1, 2, 3)


def _load_config(path: Optional[str]) -> Dict:
    if path is None:
        return {}
    content = fileio.load(path)
    if not isinstance(content, dict):
        raise ValueError(f'{path} should contain a mapping')
    return content


def _train_config(args) -> TrainConfig:
    """Config file values overridden by the flags that were given."""
    cfg = TrainConfig.from_file(args.config) if args.config else TrainConfig()
    return cfg.merge({
        'seed': args.seed,
        'dataset': args.dataset,
        'eval_dataset': getattr(args, 'eval_dataset', None),
        'steps': getattr(args, 'steps', None),
        'toggles': getattr(args, 'toggles', None),
        'feature_extractor': getattr(args, 'extractor', None),
        'work_dir': args.work_dir
    })


def cmd_generate(args) -> Dict:
    """Degrade a directory of clear images into a paired dataset."""
    config = _load_config(args.config)
    clear_dir = args.input or config.get('clear_dir')
    if not clear_dir:
        raise ValueError('generate needs --input or clear_dir in --config')
    specs = [params_from_dict(r) for r in config.get('specs', [])]
    if not specs:
        specs = [FilmFilterParams(layers=n) for n in DEFAULT_FILM_LAYERS]
    if args.haze is not None:
        specs.append(HazeParams(transmission=args.haze))
    manifest = generate_dataset(
        clear_dir,
        specs,
        args.out,
        seed=args.seed or 0,
        workers=args.workers or config.get('workers', 1))
    return {
        'manifest': str(Path(args.out) / 'manifest.json'),
        'samples': len(manifest),
        'conditions': manifest.conditions,
        'skipped': manifest.skipped
    }


def cmd_train(args) -> Dict:
    """Train from scratch, or resume from ``--checkpoint``."""
    if args.checkpoint:
        delta = {
            'steps': args.steps,
            'work_dir': args.work_dir,
            'eval_dataset': args.eval_dataset
        }
        result = resume(args.checkpoint, delta, data=args.dataset)
    else:
        result = train(_train_config(args))
    return {
        'checkpoint': str(result.checkpoint),
        'seed': result.config.seed,
        'steps': result.log.last_step,
        'final_total': result.log.totals()[-1],
        'toggles': result.config.toggles.label,
        'evals': result.log.evals[-1:]
    }


def cmd_enhance(args) -> Dict:
    """Enhance every image of ``--input`` with a trained checkpoint."""
    if not args.checkpoint:
        raise ValueError('enhance needs --checkpoint')
    if not args.input:
        raise ValueError('enhance needs --input')
    net = load_checkpoint(args.checkpoint).build()
    summary = enhance_directory(net, args.input, Path(args.out) / 'enhanced',
                                args.resize_policy)
    if not summary.outputs:
        print('0 images enhanced', file=sys.stderr)
    for name, error in summary.failures:
        print(f'failed: {name}: {error}', file=sys.stderr)
    return summary.to_dict()


def cmd_evaluate(args) -> Dict:
    """Score pose estimates of degraded and enhanced images."""
    if not args.dataset or not args.estimator:
        raise ValueError('evaluate needs --dataset and --estimator')
    report = evaluate_dataset(
        args.dataset,
        args.estimator,
        MatchConfig(args.threshold),
        enhanced_dir=args.enhanced,
        conditions=args.conditions,
        workers=args.workers or 1,
        seed=args.seed)
    out = Path(args.out)
    report.to_json(out / 'eval.json')
    report.to_csv(out / 'eval.csv')
    report.to_records_csv(out / 'eval_records.csv')
    return {
        'report': str(out / 'eval.json'),
        'failures': report.failures,
        'excluded': report.excluded,
        'groups': len(report.aggregates)
    }


def cmd_ablate(args) -> Dict:
    """Retrain without each loss term and compare pose scores."""
    if not args.eval_dataset or not args.estimator:
        raise ValueError('ablate needs --eval-dataset and --estimator')
    cfg = _train_config(args)
    report = run_ablation(cfg, args.eval_dataset, args.estimator, args.out,
                          MatchConfig(args.threshold))
    return {
        'seed': cfg.seed,
        'grid': report.grid(),
        'status': {r.variant: r.status
                   for r in report.results}
    }


def _score(path, regressor) -> Dict:
    score = quality_score(sseq_features(fileio.imread(path)), regressor)
    return {'value': score.value, 'source': score.source}


def cmd_score(args) -> Dict:
    """SSEQ quality scores of images, or shadow ratios of a dataset."""
    out = Path(args.out)
    if args.dataset:
        manifest = DatasetManifest.from_file(args.dataset)
        metric = ShadowRatio()
        clear_cache: Dict[Path, Dict] = {}
        source = None
        for entry in manifest.entries:
            clear_path = manifest.clear_path(entry)
            if clear_path not in clear_cache:
                clear_cache[clear_path] = _score(clear_path, args.regressor)
            clear = clear_cache[clear_path]
            shadow = _score(manifest.degraded_path(entry), args.regressor)
            source = shadow['source']
            metric.add([clear['value']], [shadow['value']], [entry.condition])
        table = metric.compute()
        fileio.dump(table, out / 'shadow_ratio.json')
        for condition, row in table.items():
            print(f'{condition}: SSEQ clear {row["sseq_clear"]:.4f}, shadow '
                  f'{row["sseq_shadow"]:.4f}, SR {row["sr"]:.4f} ({source})',
                  file=sys.stderr)
        return {'source': source, 'shadow_ratio': table}

    images: List[Path] = []
    for item in args.inputs:
        path = Path(item)
        images.extend(list_images(path) if path.is_dir() else [path])
    if not images:
        raise ValueError('score needs image paths or --dataset')
    scores = {str(p): _score(p, args.regressor) for p in images}
    fileio.dump(scores, out / 'scores.json')
    for path, score in scores.items():
        print(f'{path}: {score["value"]:.4f} ({score["source"]})',
              file=sys.stderr)
    return {'scores': scores}


def cmd_report(args) -> Dict:
    """CSV and bar charts from evaluation reports."""
    outputs = write_report(args.inputs, args.out, plots=not args.no_plots)
    outputs.pop('plot_data')
    return outputs


COMMANDS = {
    'generate': cmd_generate,
    'train': cmd_train,
    'enhance': cmd_enhance,
    'evaluate': cmd_evaluate,
    'ablate': cmd_ablate,
    'score': cmd_score,
    'report': cmd_report
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help='JSON or YAML config file')
    common.add_argument(
        '--seed', type=int, help='global seed, defaults to 0')
    common.add_argument('--out', help='output directory')
    common.add_argument(
        '--log-level',
        default='INFO',
        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])

    parser = argparse.ArgumentParser(
        prog='shadowpose',
        description='Privacy-preserving pose estimation toolkit')
    parser.add_argument(
        '--version', action='version', version=f'%(prog)s {__version__}')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('generate', parents=[common], help=cmd_generate.__doc__)
    p.add_argument('--input', help='directory of clear images')
    p.add_argument(
        '--haze', type=float, help='also add haze with this transmission')
    p.add_argument('--workers', type=int)

    for name in ('train', 'ablate'):
        p = sub.add_parser(name, parents=[common], help=COMMANDS[name].__doc__)
        p.add_argument('--dataset', help='training manifest')
        p.add_argument('--eval-dataset', help='held-out manifest')
        p.add_argument('--steps', type=int)
        p.add_argument('--extractor', help='perceptual feature extractor')
        if name == 'train':
            p.add_argument('--checkpoint', help='resume from this archive')
            p.add_argument('--toggles', help='e.g. "sl,pl,el" or "no_el"')
        else:
            p.add_argument('--estimator', help='mock:<dir> | external:<cmd>')
            p.add_argument('--threshold', type=float, default=10.)

    p = sub.add_parser('enhance', parents=[common], help=cmd_enhance.__doc__)
    p.add_argument('--checkpoint')
    p.add_argument('--input', help='directory of images to enhance')
    p.add_argument(
        '--resize-policy', default='scale', choices=['scale', 'center-crop'])

    p = sub.add_parser('evaluate', parents=[common], help=cmd_evaluate.__doc__)
    p.add_argument('--dataset', help='paired manifest')
    p.add_argument('--estimator', help='mock:<dir> | external:<cmd>')
    p.add_argument('--threshold', type=float, default=10.)
    p.add_argument('--enhanced', help='directory of enhanced images')
    p.add_argument('--conditions', nargs='+')
    p.add_argument('--workers', type=int)

    p = sub.add_parser('score', parents=[common], help=cmd_score.__doc__)
    p.add_argument('inputs', nargs='*', help='images or directories')
    p.add_argument('--dataset', help='paired manifest')
    p.add_argument('--regressor', help='regressor weight file')

    p = sub.add_parser('report', parents=[common], help=cmd_report.__doc__)
    p.add_argument('inputs', nargs='+', help='eval JSON or report CSV files')
    p.add_argument('--no-plots', action='store_true')
    return parser


def _emit(out: Path, summary: Dict) -> None:
    line = json.dumps(summary, sort_keys=True, default=str)
    fileio.dump(json.loads(line), out / SUMMARY_NAME, file_format='json')
    print(line)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format='%(asctime)s %(name)s %(levelname)s: %(message)s')
    # Training configs keep their own work_dir and seed unless the flags
    # are given.
    args.work_dir = args.out
    if args.out is None:
        args.out = str(Path('work_dirs') / args.command)
    out = mkdir_or_exist(args.out)
    seed = 0 if args.seed is None else args.seed
    set_random_seed(seed)
    try:
        result = COMMANDS[args.command](args)
    except (ValueError, KeyError, TypeError) as e:
        logger.error(f'{args.command}: {e}')
        _emit(out, {
            'command': args.command,
            'status': 'invalid',
            'seed': seed,
            'error': str(e)
        })
        return EXIT_INVALID
    except Exception as e:
        logger.exception(f'{args.command} failed')
        _emit(out, {
            'command': args.command,
            'status': 'failed',
            'seed': seed,
            'error': str(e)
        })
        return EXIT_FAILED
    _emit(out, {
        'command': args.command,
        'status': 'ok',
        'seed': seed,
        **result
    })
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
