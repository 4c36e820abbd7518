# Copyright (c) shadowpose contributors. All rights reserved.
from .dataset import (MANIFEST_NAME, DatasetManifest, ManifestEntry,
                      PairedDataset, PairedSample, generate_dataset,
                      ingest_paired_dataset, scan_paired_directory)
from .film import apply_film_filter
from .haze import synthesize_haze, transmission_from_depth
from .params import (FilmFilterParams, HazeParams, classify_space,
                     params_from_dict)

__all__ = [
    'FilmFilterParams', 'HazeParams', 'params_from_dict', 'classify_space',
    'apply_film_filter', 'synthesize_haze', 'transmission_from_depth',
    'DatasetManifest', 'ManifestEntry', 'PairedSample', 'PairedDataset',
    'generate_dataset', 'ingest_paired_dataset', 'scan_paired_directory',
    'MANIFEST_NAME'
]
