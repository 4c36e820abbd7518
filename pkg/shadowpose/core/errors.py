# Copyright (c) shadowpose contributors. All rights reserved.
from typing import Optional


class FingerprintMismatchError(ValueError):
    """A checkpoint does not belong to the requested network config."""

    def __init__(self, expected: str, found: str, source: str = '') -> None:
        self.expected = expected
        self.found = found
        where = f' in {source}' if source else ''
        super().__init__(
            f'Network config fingerprint mismatch{where}: expected '
            f'{expected}, found {found}')


class EstimatorError(RuntimeError):
    """The pose estimator failed on an image.

    Args:
        message (str): What went wrong.
        diagnostics (str, optional): Captured stderr/stdout of the estimator.
    """

    def __init__(self, message: str, diagnostics: Optional[str] = None):
        self.diagnostics = diagnostics or ''
        if diagnostics:
            message = f'{message}\n--- estimator output ---\n{diagnostics}'
        super().__init__(message)


class TrainingDivergedError(RuntimeError):
    """The training loss became non-finite.

    Args:
        message (str): Diagnostic of the diverged step.
        checkpoint (str, optional): Path of the last good checkpoint.
    """

    def __init__(self, message: str, checkpoint: Optional[str] = None):
        self.checkpoint = checkpoint
        if checkpoint:
            message = f'{message} (last good checkpoint: {checkpoint})'
        super().__init__(message)
