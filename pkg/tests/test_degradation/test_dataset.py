# Copyright (c) shadowpose contributors. All rights reserved.
import numpy as np
import pytest

from shadowpose import fileio
from shadowpose.degradation import (MANIFEST_NAME, DatasetManifest,
                                    FilmFilterParams, ManifestEntry,
                                    PairedDataset, generate_dataset,
                                    ingest_paired_dataset,
                                    scan_paired_directory)


def test_generate_dataset(tmp_path, clear_dir):
    specs = [FilmFilterParams(layers=1, grain_sigma=0.01),
             FilmFilterParams(layers=3)]
    manifest = generate_dataset(clear_dir, specs, tmp_path / 'out', seed=7)
    assert len(manifest) == 8
    assert manifest.conditions == ['film-1', 'film-3']
    assert [e.id for e in manifest.entries] == sorted(
        e.id for e in manifest.entries)
    assert manifest.entries[0].id == 'img00__00-film-1'
    assert manifest.entries[0].degraded == 'degraded/img00__00-film-1.png'
    assert manifest.entries[0].clear == 'clear/img00.png'
    assert (tmp_path / 'out' / MANIFEST_NAME).is_file()

    # Every sample gets its own grain seed.
    seeds = {e.params['seed'] for e in manifest.entries
             if e.condition == 'film-1'}
    assert len(seeds) == 4

    loaded = DatasetManifest.from_file(tmp_path / 'out' / MANIFEST_NAME)
    assert loaded.to_dict() == manifest.to_dict()
    assert loaded.seed == 7


def test_generate_dataset_is_reproducible(tmp_path, clear_dir):
    specs = [FilmFilterParams(layers=2, grain_sigma=0.02)]
    generate_dataset(clear_dir, specs, tmp_path / 'a', seed=1, workers=2)
    generate_dataset(clear_dir, specs, tmp_path / 'b', seed=1)
    for name in ('manifest.json', 'degraded/img01__00-film-2.png'):
        assert (tmp_path / 'a' / name).read_bytes() == \
            (tmp_path / 'b' / name).read_bytes()


def test_generate_dataset_skips_unreadable(tmp_path, clear_dir):
    (clear_dir / 'broken.png').write_bytes(b'no image')
    manifest = generate_dataset(clear_dir, [FilmFilterParams()],
                                tmp_path / 'out')
    assert len(manifest) == 4
    assert [name for name, _ in manifest.skipped] == ['broken.png']


def test_generate_dataset_errors(tmp_path, clear_dir):
    with pytest.raises(ValueError, match='At least one'):
        generate_dataset(clear_dir, [], tmp_path / 'out')
    (tmp_path / 'empty').mkdir()
    with pytest.raises(ValueError, match='No images'):
        generate_dataset(tmp_path / 'empty', [FilmFilterParams()],
                         tmp_path / 'out')


def test_ingest_paired_dataset(film_manifest):
    dataset = ingest_paired_dataset(film_manifest.root / MANIFEST_NAME)
    assert len(dataset) == 8
    sample = dataset[0]
    assert sample.id == film_manifest.entries[0].id
    assert sample.clear.shape == sample.degraded.shape == (32, 32, 3)
    assert sample.condition == 'film-1'
    assert 0. <= sample.degraded.min() and sample.degraded.max() <= 1.
    assert len(dataset[1:3]) == 2


def test_ingest_missing_file(film_manifest):
    entry = film_manifest.entries[2]
    (film_manifest.root / entry.degraded).unlink()
    with pytest.raises(FileNotFoundError, match=entry.id):
        ingest_paired_dataset(film_manifest.root / MANIFEST_NAME)
    # Without the up-front check the error surfaces on access.
    manifest = DatasetManifest.from_file(
        film_manifest.root / MANIFEST_NAME, check_files=False)
    dataset = PairedDataset(manifest)
    dataset[0]
    with pytest.raises(FileNotFoundError, match=entry.id):
        dataset[2]


def test_shape_mismatch(tmp_path):
    fileio.imwrite(np.zeros((8, 8, 3)), tmp_path / 'clear/a.png')
    fileio.imwrite(np.zeros((8, 6, 3)), tmp_path / 'degraded/a.png')
    manifest = DatasetManifest(
        [ManifestEntry('a', 'clear/a.png', 'degraded/a.png')], tmp_path)
    with pytest.raises(ValueError, match="'a' has mismatched shapes"):
        ingest_paired_dataset(manifest)[0]


def test_manifest_validation(tmp_path):
    entry = ManifestEntry('a', 'clear/a.png', 'degraded/a.png')
    with pytest.raises(ValueError, match='Duplicated'):
        DatasetManifest([entry, entry])

    fileio.dump({'schema_version': 9, 'entries': []}, tmp_path / 'm.json')
    with pytest.raises(ValueError, match='schema_version'):
        DatasetManifest.from_file(tmp_path / 'm.json')
    fileio.dump({'schema_version': 1, 'entries': [{'id': 'a'}]},
                tmp_path / 'm.json')
    with pytest.raises(ValueError, match='Malformed'):
        DatasetManifest.from_file(tmp_path / 'm.json')


def test_scan_paired_directory(tmp_path):
    root = tmp_path / 'private'
    for name in ('a', 'b'):
        fileio.imwrite(np.zeros((8, 8, 3)), root / 'clear' / f'{name}.png')
        fileio.imwrite(np.ones((8, 8, 3)), root / 'shadow' / f'{name}.jpg')
    fileio.imwrite(np.zeros((8, 8, 3)), root / 'clear' / 'lonely.png')

    manifest = scan_paired_directory(root)
    assert [e.id for e in manifest.entries] == ['a', 'b']
    assert manifest.entries[0].degraded == 'shadow/a.jpg'
    assert manifest.conditions == ['private']
    assert (root / MANIFEST_NAME).is_file()
    assert len(ingest_paired_dataset(root / MANIFEST_NAME)) == 2

    assert scan_paired_directory(root, 'lab', write=False).conditions == \
        ['lab']


def test_spec_seed_feeds_the_sample_seed(tmp_path, clear_dir):

    def grain_seeds(spec_seed, out):
        spec = FilmFilterParams(grain_sigma=0.02, seed=spec_seed)
        manifest = generate_dataset(clear_dir, [spec], tmp_path / out)
        return [e.params['seed'] for e in manifest.entries]

    a, b = grain_seeds(0, 'a'), grain_seeds(5, 'b')
    assert grain_seeds(5, 'c') == b
    assert all(x != y for x, y in zip(a, b))
    name = 'degraded/img00__00-film-1.png'
    assert (tmp_path / 'a' / name).read_bytes() != \
        (tmp_path / 'b' / name).read_bytes()

    with pytest.raises(ValueError, match='seed'):
        FilmFilterParams(seed=-1)
