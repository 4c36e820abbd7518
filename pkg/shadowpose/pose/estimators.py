# Copyright (c) shadowpose contributors. All rights reserved.
import logging
import os
import shlex
import shutil
import subprocess
import tempfile
from abc import ABCMeta, abstractmethod
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

from shadowpose.core import EstimatorError
from .skeleton import Skeleton, load_pose_json

logger = logging.getLogger(__name__)

JSON_SUFFIX = '_keypoints.json'
OPENPOSE_ARGS = ('--image_dir {image_dir} --write_json {json_dir} '
                 '--display 0 --render_pose 0')

EstimateResult = Union[List[Skeleton], EstimatorError]


class BaseEstimator(metaclass=ABCMeta):
    """Turns image files into skeletons.

    Subclasses implement :meth:`estimate`. :meth:`estimate_many` may be
    overridden to process several images per call; it must never raise for
    a single bad image but return the error in its place.
    """

    @property
    def name(self) -> str:
        return self.__class__.__name__

    @abstractmethod
    def estimate(self, image: Union[str, Path]) -> List[Skeleton]:
        """Detect the skeletons of one image."""

    def estimate_many(
            self,
            images: Sequence[Union[str, Path]]) -> Dict[Path, EstimateResult]:
        results: Dict[Path, EstimateResult] = {}
        for image in images:
            try:
                results[Path(image)] = self.estimate(image)
            except EstimatorError as e:
                results[Path(image)] = e
        return results


class MockEstimator(BaseEstimator):
    """Reads precomputed estimator JSON files.

    The fixture of ``<dir>/<stem>.<ext>`` is
    ``<fixtures>/<dir name>/<stem>_keypoints.json``, falling back to
    ``<fixtures>/<stem>_keypoints.json``.

    Args:
        fixtures (str or Path): Fixture root directory.
    """

    def __init__(self, fixtures: Union[str, Path]) -> None:
        self.fixtures = Path(fixtures)
        if not self.fixtures.is_dir():
            raise FileNotFoundError(
                f'Fixture directory not found: {self.fixtures}')

    def fixture_path(self, image: Union[str, Path]) -> Path:
        image = Path(image)
        candidates = [
            self.fixtures / image.parent.name / f'{image.stem}{JSON_SUFFIX}',
            self.fixtures / f'{image.stem}{JSON_SUFFIX}'
        ]
        for candidate in candidates:
            if candidate.is_file():
                return candidate
        raise EstimatorError(
            f'No fixture for {image}; looked for '
            f'{", ".join(str(c) for c in candidates)}')

    def estimate(self, image: Union[str, Path]) -> List[Skeleton]:
        path = self.fixture_path(image)
        try:
            return load_pose_json(path)
        except ValueError as e:
            raise EstimatorError(f'Bad fixture for {image}: {e}') from e


class ExternalEstimator(BaseEstimator):
    """Runs a pose-estimation program over a directory of images.

    The command template gets ``{image_dir}`` and ``{json_dir}``
    substituted; the program must write ``<stem>_keypoints.json`` per image
    into ``json_dir``. Images are staged into a temporary directory under
    unique names, so one process run serves a whole batch.

    Args:
        command (str): Command template, e.g.
            ``'openpose.bin --image_dir {image_dir} --write_json {json_dir}'``.
        timeout (float, optional): Seconds before the run is killed.
        cwd (str, optional): Working directory of the program.
    """

    def __init__(self,
                 command: str,
                 timeout: Optional[float] = None,
                 cwd: Optional[str] = None) -> None:
        if '{image_dir}' not in command or '{json_dir}' not in command:
            raise ValueError('Estimator command should contain {image_dir} '
                             f'and {{json_dir}} placeholders: {command!r}')
        self.command = command
        self.timeout = timeout
        self.cwd = cwd

    def _run(self, image_dir: Path, json_dir: Path) -> None:
        args = [
            token.format(image_dir=image_dir, json_dir=json_dir)
            for token in shlex.split(self.command)
        ]
        logger.debug(f'Running pose estimator: {args}')
        try:
            proc = subprocess.run(
                args,
                cwd=self.cwd,
                capture_output=True,
                text=True,
                timeout=self.timeout)
        except (OSError, subprocess.TimeoutExpired) as e:
            raise EstimatorError(f'Pose estimator could not run: {e}') from e
        if proc.returncode != 0:
            raise EstimatorError(
                f'Pose estimator exited with code {proc.returncode}',
                diagnostics=(proc.stderr or '') + (proc.stdout or ''))

    def estimate(self, image: Union[str, Path]) -> List[Skeleton]:
        result = self.estimate_many([image])[Path(image)]
        if isinstance(result, EstimatorError):
            raise result
        return result

    def estimate_many(
            self,
            images: Sequence[Union[str, Path]]) -> Dict[Path, EstimateResult]:
        images = [Path(p) for p in images]
        results: Dict[Path, EstimateResult] = {}
        if not images:
            return results
        with tempfile.TemporaryDirectory(prefix='shadowpose_') as tmp:
            image_dir = Path(tmp) / 'images'
            json_dir = Path(tmp) / 'json'
            image_dir.mkdir()
            json_dir.mkdir()
            staged = {}
            for index, image in enumerate(images):
                name = f'{index:06d}_{image.stem}'
                target = image_dir / f'{name}{image.suffix}'
                try:
                    os.symlink(image.resolve(), target)
                except OSError:
                    shutil.copyfile(image, target)
                staged[image] = name
            try:
                self._run(image_dir, json_dir)
            except EstimatorError as e:
                return {image: e for image in images}
            for image, name in staged.items():
                output = json_dir / f'{name}{JSON_SUFFIX}'
                if not output.is_file():
                    results[image] = EstimatorError(
                        f'Pose estimator wrote no output for {image}')
                    continue
                try:
                    results[image] = load_pose_json(output)
                except ValueError as e:
                    results[image] = EstimatorError(
                        f'Pose estimator output for {image} is invalid: {e}')
        return results


def build_estimator(spec: Union[str, BaseEstimator]) -> BaseEstimator:
    """Build an estimator from ``mock:<fixtures>`` or ``external:<cmd>``.

    For ``external:`` a bare executable path gets the OpenPose directory
    flags appended; otherwise the value is used as the command template.

    Examples:
        >>> build_estimator('external:openpose.bin').command
        'openpose.bin --image_dir {image_dir} --write_json {json_dir} --display 0 --render_pose 0'
    """  # noqa: E501
    if isinstance(spec, BaseEstimator):
        return spec
    kind, sep, value = spec.partition(':')
    if not sep or not value:
        raise ValueError(f'Estimator spec should be "mock:<fixtures>" or '
                         f'"external:<command>", got {spec!r}')
    if kind == 'mock':
        return MockEstimator(value)
    if kind == 'external':
        if '{image_dir}' not in value:
            value = f'{shlex.quote(value)} {OPENPOSE_ARGS}'
        return ExternalEstimator(value)
    raise KeyError(f'Unknown estimator kind {kind!r}, should be "mock" or '
                   '"external"')


def run_estimator(image: Union[str, Path],
                  estimator: Union[str, BaseEstimator]) -> List[Skeleton]:
    """Detect the skeletons of one image with the configured estimator.

    Raises:
        EstimatorError: If the estimator fails; carries its diagnostics.
    """
    return build_estimator(estimator).estimate(image)
