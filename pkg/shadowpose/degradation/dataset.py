# Copyright (c) shadowpose contributors. All rights reserved.
"""Paired (degraded, clear) datasets.

A dataset is described by a JSON manifest::

    {
      "schema_version": 1,
      "seed": 0,
      "entries": [
        {"id": "0001__00-film-2", "clear": "clear/0001.png",
         "degraded": "degraded/0001__00-film-2.png",
         "params": {"kind": "film", "layers": 2, ...},
         "condition": "film-2"}
      ]
    }

Paths are relative to the directory holding the manifest.
"""
import dataclasses
import logging
import os
import zlib
from collections import abc
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from shadowpose import fileio
from shadowpose.utils import list_images, mkdir_or_exist
from .film import apply_film_filter
from .haze import synthesize_haze
from .params import FilmFilterParams, HazeParams

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
MANIFEST_NAME = 'manifest.json'

DegradationSpec = Union[FilmFilterParams, HazeParams]


@dataclass
class ManifestEntry:
    """One (clear, degraded) pair of a manifest.

    ``clear`` and ``degraded`` are stored relative to the manifest
    directory.
    """
    id: str
    clear: str
    degraded: str
    params: Dict = field(default_factory=dict)
    condition: str = 'default'

    def to_dict(self) -> Dict:
        return dataclasses.asdict(self)


@dataclass
class PairedSample:
    """A decoded pair sharing one shape."""
    id: str
    clear: np.ndarray
    degraded: np.ndarray
    condition: str = 'default'


@dataclass
class DatasetManifest:
    """Entries of a paired dataset plus where they live on disk.

    Args:
        entries (list[ManifestEntry]): Pairs in manifest order.
        root (Path): Directory the entry paths are relative to.
        seed (int): Seed the dataset was generated with.
        schema_version (int): Manifest layout version.
        skipped (list[tuple[str, str]]): Source images skipped during
            generation with the reason. Not serialized.
    """
    entries: List[ManifestEntry]
    root: Path = Path('.')
    seed: int = 0
    schema_version: int = SCHEMA_VERSION
    skipped: List[Tuple[str, str]] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.root = Path(self.root)
        ids = [entry.id for entry in self.entries]
        if len(set(ids)) != len(ids):
            dup = sorted({i for i in ids if ids.count(i) > 1})
            raise ValueError(f'Duplicated sample ids in manifest: {dup}')

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def conditions(self) -> List[str]:
        return sorted({entry.condition for entry in self.entries})

    def clear_path(self, entry: ManifestEntry) -> Path:
        return self.root / entry.clear

    def degraded_path(self, entry: ManifestEntry) -> Path:
        return self.root / entry.degraded

    def to_dict(self) -> Dict:
        return {
            'schema_version': self.schema_version,
            'seed': self.seed,
            'entries': [entry.to_dict() for entry in self.entries]
        }

    def dump(self, path: Union[str, Path, None] = None) -> Path:
        """Write the manifest as canonical JSON and return its path."""
        path = Path(path) if path is not None else self.root / MANIFEST_NAME
        fileio.dump(self.to_dict(), path, file_format='json')
        return path

    def check_files(self) -> None:
        """Raise ``FileNotFoundError`` naming the first incomplete sample."""
        for entry in self.entries:
            for path in (self.clear_path(entry), self.degraded_path(entry)):
                if not path.is_file():
                    raise FileNotFoundError(
                        f'Sample {entry.id!r} references a missing file: '
                        f'{path}')

    @classmethod
    def from_file(cls,
                  path: Union[str, Path],
                  check_files: bool = True) -> 'DatasetManifest':
        """Load and validate a manifest file.

        Args:
            path (str or Path): Manifest JSON path.
            check_files (bool): Whether to verify that every referenced
                image exists. Defaults to True.
        """
        path = Path(path)
        content = fileio.load(path, file_format='json')
        version = content.get('schema_version')
        if version != SCHEMA_VERSION:
            raise ValueError(f'Unsupported manifest schema_version {version} '
                             f'in {path}, expected {SCHEMA_VERSION}')
        try:
            entries = [ManifestEntry(**item) for item in content['entries']]
        except (KeyError, TypeError) as e:
            raise ValueError(f'Malformed manifest {path}: {e}') from e
        manifest = cls(
            entries=entries,
            root=path.parent,
            seed=content.get('seed', 0),
            schema_version=version)
        if check_files:
            manifest.check_files()
        return manifest


class PairedDataset(abc.Sequence):
    """Lazily decoded, indexable view of a manifest.

    Args:
        manifest (DatasetManifest): The validated manifest.
    """

    def __init__(self, manifest: DatasetManifest) -> None:
        self.manifest = manifest

    def __len__(self) -> int:
        return len(self.manifest)

    def __getitem__(self, index):
        if isinstance(index, slice):
            return [self[i] for i in range(*index.indices(len(self)))]
        entry = self.manifest.entries[index]
        clear_path = self.manifest.clear_path(entry)
        degraded_path = self.manifest.degraded_path(entry)
        for path in (clear_path, degraded_path):
            if not path.is_file():
                raise FileNotFoundError(
                    f'Sample {entry.id!r} references a missing file: {path}')
        clear = fileio.imread(clear_path)
        degraded = fileio.imread(degraded_path)
        if clear.shape != degraded.shape:
            raise ValueError(
                f'Sample {entry.id!r} has mismatched shapes: clear '
                f'{clear.shape}, degraded {degraded.shape}')
        return PairedSample(entry.id, clear, degraded, entry.condition)


def ingest_paired_dataset(
        manifest: Union[str, Path, DatasetManifest]) -> PairedDataset:
    """Open a paired dataset in manifest order.

    Args:
        manifest (str, Path or DatasetManifest): Manifest path or object.

    Returns:
        PairedDataset: A sequence of :class:`PairedSample` decoded to
        [0, 1].

    Raises:
        FileNotFoundError: If a referenced image is missing; the message
            names the sample id.
    """
    if not isinstance(manifest, DatasetManifest):
        manifest = DatasetManifest.from_file(manifest)
    else:
        manifest.check_files()
    return PairedDataset(manifest)


def _sample_seed(seed: int, spec_seed: int, sample_id: str) -> int:
    """Grain seed of one sample, mixed from the dataset seed, the seed of
    the spec and the sample id."""
    entropy = [seed, spec_seed, zlib.crc32(sample_id.encode('utf-8'))]
    return int(np.random.SeedSequence(entropy).generate_state(1)[0])


def _degrade(img: np.ndarray, spec: DegradationSpec, seed: int,
             sample_id: str) -> Tuple[np.ndarray, DegradationSpec]:
    if isinstance(spec, FilmFilterParams):
        spec = dataclasses.replace(
            spec, seed=_sample_seed(seed, spec.seed, sample_id))
        return apply_film_filter(img, spec), spec
    elif isinstance(spec, HazeParams):
        return synthesize_haze(img, spec), spec
    raise TypeError(f'Unsupported degradation spec {type(spec)}')


def generate_dataset(clear_dir: Union[str, Path],
                     specs: Sequence[DegradationSpec],
                     out_dir: Union[str, Path],
                     seed: int = 0,
                     workers: int = 1) -> DatasetManifest:
    """Degrade every clear image with every spec and write a manifest.

    Clear images are re-encoded to ``<out_dir>/clear/<stem>.png`` and
    degraded ones written to ``<out_dir>/degraded/<id>.png``. Sample ids are
    ``<stem>__<spec index>-<condition>``. Unreadable images are skipped,
    logged and listed in ``DatasetManifest.skipped``.

    Args:
        clear_dir (str or Path): Directory of clear images.
        specs (Sequence[FilmFilterParams | HazeParams]): Degradations.
        out_dir (str or Path): Output directory.
        seed (int): Base seed. Film grain of each sample is seeded from
            it, the ``seed`` of the film spec and the sample id, and the
            derived seed is what the manifest records. Defaults to 0.
        workers (int): Number of worker threads. Defaults to 1.

    Returns:
        DatasetManifest: The written manifest, sorted by sample id.
    """
    if not specs:
        raise ValueError('At least one degradation spec is required')
    images = list_images(clear_dir)
    if not images:
        raise ValueError(f'No images found in {clear_dir}')
    stems = [p.stem for p in images]
    if len(set(stems)) != len(stems):
        raise ValueError(f'Clear images in {clear_dir} share basenames')
    out_dir = mkdir_or_exist(out_dir)

    def process(path: Path):
        try:
            img = fileio.imread(path)
        except (OSError, ValueError) as e:
            return path.name, None, str(e)
        clear_rel = f'clear/{path.stem}.png'
        fileio.imwrite(img, out_dir / clear_rel)
        entries = []
        for index, spec in enumerate(specs):
            sample_id = f'{path.stem}__{index:02d}-{spec.condition}'
            degraded, used = _degrade(img, spec, seed, sample_id)
            degraded_rel = f'degraded/{sample_id}.png'
            fileio.imwrite(degraded, out_dir / degraded_rel)
            entries.append(
                ManifestEntry(sample_id, clear_rel, degraded_rel,
                              used.to_dict(), spec.condition))
        return path.name, entries, None

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        results = list(pool.map(process, images))

    entries: List[ManifestEntry] = []
    skipped = []
    for name, items, error in results:
        if items is None:
            logger.warning(f'Skipped unreadable image {name}: {error}')
            skipped.append((name, error))
        else:
            entries.extend(items)
    entries.sort(key=lambda entry: entry.id)
    manifest = DatasetManifest(
        entries=entries, root=out_dir, seed=seed, skipped=skipped)
    manifest.dump()
    logger.info(f'Generated {len(entries)} pairs from '
                f'{len(images) - len(skipped)} clear images into {out_dir}')
    return manifest


def scan_paired_directory(root: Union[str, Path],
                          condition: Optional[str] = None,
                          write: bool = True) -> DatasetManifest:
    """Build a manifest for hand-paired data.

    The directory follows ``<root>/clear/<name>.<ext>`` and
    ``<root>/shadow/<name>.<ext>``; pairs are matched by basename. Names
    present on one side only are skipped with a warning.

    Args:
        root (str or Path): Dataset root.
        condition (str, optional): Condition label for every entry. Defaults
            to the name of ``root``.
        write (bool): Whether to write ``<root>/manifest.json``.
            Defaults to True.
    """
    root = Path(root)
    clear = {p.stem: p for p in list_images(root / 'clear')}
    shadow = {p.stem: p for p in list_images(root / 'shadow')}
    unmatched = sorted(set(clear) ^ set(shadow))
    if unmatched:
        logger.warning(f'{len(unmatched)} unpaired images in {root} are '
                       f'skipped: {unmatched[:5]}')
    condition = condition or root.name
    entries = [
        ManifestEntry(
            id=stem,
            clear=os.path.relpath(clear[stem], root).replace(os.sep, '/'),
            degraded=os.path.relpath(shadow[stem], root).replace(os.sep, '/'),
            params={'kind': 'captured'},
            condition=condition) for stem in sorted(set(clear) & set(shadow))
    ]
    if not entries:
        raise ValueError(f'No paired images found under {root}')
    manifest = DatasetManifest(entries=entries, root=root)
    if write:
        manifest.dump()
    return manifest
