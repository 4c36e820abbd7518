# Copyright (c) shadowpose contributors. All rights reserved.
from .estimators import (BaseEstimator, ExternalEstimator, MockEstimator,
                         build_estimator, run_estimator)
from .evaluation import (AGGREGATE_COLUMNS, COMPARISONS, RECORD_COLUMNS,
                         EvalReport, ImageRecord, RecordGroup,
                         aggregate_records, evaluate_dataset, group_records,
                         read_csv, write_csv)
from .skeleton import (BODY_25_PARTS, COCO_18_PARTS, PART_MAPS, Keypoint,
                       Skeleton, dump_pose_json, load_pose_json,
                       parse_pose_json)

__all__ = [
    'Keypoint', 'Skeleton', 'PART_MAPS', 'COCO_18_PARTS', 'BODY_25_PARTS',
    'parse_pose_json', 'load_pose_json', 'dump_pose_json', 'BaseEstimator',
    'MockEstimator', 'ExternalEstimator', 'build_estimator', 'run_estimator',
    'ImageRecord', 'EvalReport', 'RecordGroup', 'evaluate_dataset',
    'group_records', 'aggregate_records',
    'write_csv', 'read_csv', 'COMPARISONS', 'AGGREGATE_COLUMNS',
    'RECORD_COLUMNS'
]
