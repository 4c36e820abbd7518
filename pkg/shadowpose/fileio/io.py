# Copyright (c) shadowpose contributors. All rights reserved.
"""Unified file I/O for configs, manifests, reports and images.

Structured files (json, yaml/yml) go through the handler registry in
:mod:`shadowpose.fileio.handlers`; the format is inferred from the file
extension unless given. Images are decoded to ``float64`` RGB arrays in
[0, 1] (channel-last) and encoded as 8-bit files, PNG being the lossless
default for everything this package writes.

Examples:
    >>> from shadowpose import fileio
    >>> cfg = fileio.load('configs/train.yaml')
    >>> fileio.dump(cfg, 'work_dir/train.json')
    >>> img = fileio.imread('clear/0001.png')
    >>> fileio.imwrite(img, 'copy/0001.png')
"""
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np

from shadowpose.utils import try_import
from .handlers import file_handlers

cv2 = try_import('cv2')


def _infer_format(file: Union[str, Path], file_format: Optional[str]) -> str:
    if file_format is None:
        file_format = str(file).split('.')[-1].lower()
    if file_format not in file_handlers:
        raise TypeError(f'Unsupported format: {file_format}')
    return file_format


def load(file, file_format: Optional[str] = None, **kwargs) -> Any:
    """Load data from json/yaml files.

    Args:
        file (str or :obj:`Path` or file-like object): Filename or a file-like
            object.
        file_format (str, optional): If not specified, the file format will be
            inferred from the file extension, otherwise use the specified one.
            Currently supported formats include "json" and "yaml/yml".

    Returns:
        The content from the file.
    """
    if isinstance(file, (str, Path)):
        handler = file_handlers[_infer_format(file, file_format)]
        return handler.load_from_path(str(file), **kwargs)
    elif hasattr(file, 'read'):
        if file_format is None:
            raise TypeError('file_format must be given for file objects')
        return file_handlers[file_format].load_from_fileobj(file, **kwargs)
    raise TypeError('"file" must be a filepath str or a file-object')


def dump(obj: Any,
         file: Union[str, Path],
         file_format: Optional[str] = None,
         **kwargs) -> None:
    """Dump data to a json/yaml file.

    Args:
        obj (Any): The python object to be dumped.
        file (str or :obj:`Path`): The target filename. Parent directories
            are created when missing.
        file_format (str, optional): Same as :func:`load`.
    """
    handler = file_handlers[_infer_format(file, file_format)]
    Path(file).parent.mkdir(parents=True, exist_ok=True)
    handler.dump_to_path(obj, str(file), **kwargs)


def _require_cv2():
    if cv2 is None:
        raise ImportError('Image I/O requires opencv-python, please install '
                          'it first.')


def imread(path: Union[str, Path]) -> np.ndarray:
    """Read an image into a float64 RGB array in [0, 1].

    Args:
        path (str or Path): Image file path.

    Returns:
        np.ndarray: H x W x 3 image. Grayscale files are expanded to three
        identical channels.

    Raises:
        FileNotFoundError: If the file does not exist.
        ValueError: If the file can not be decoded.
    """
    _require_cv2()
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f'Image not found: {path}')
    data = np.frombuffer(path.read_bytes(), dtype=np.uint8)
    img = cv2.imdecode(data, cv2.IMREAD_UNCHANGED)
    if img is None:
        raise ValueError(f'Failed to decode image: {path}')
    if img.dtype == np.uint16:
        scale = 65535.
    elif img.dtype == np.uint8:
        scale = 255.
    else:
        raise ValueError(f'Unsupported image dtype {img.dtype}: {path}')
    if img.ndim == 2:
        img = np.repeat(img[..., None], 3, axis=2)
    elif img.shape[2] == 4:
        img = cv2.cvtColor(img, cv2.COLOR_BGRA2RGB)
    else:
        img = cv2.cvtColor(img, cv2.COLOR_BGR2RGB)
    return img.astype(np.float64) / scale


def imwrite(img: np.ndarray, path: Union[str, Path]) -> None:
    """Write a [0, 1] RGB (or single channel) image as an 8-bit file.

    Values are clipped to [0, 1] and rounded to the nearest 8-bit level. The
    codec is chosen from the suffix; use ``.png`` for lossless output.

    Args:
        img (np.ndarray): H x W, H x W x 1 or H x W x 3 image.
        path (str or Path): Target file path. Parent directories are created.
    """
    _require_cv2()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    out = np.clip(np.round(np.clip(img, 0., 1.) * 255.), 0, 255)
    out = out.astype(np.uint8)
    if out.ndim == 3 and out.shape[2] == 3:
        out = cv2.cvtColor(out, cv2.COLOR_RGB2BGR)
    elif out.ndim == 3:
        out = out[..., 0]
    ok, buf = cv2.imencode(path.suffix or '.png', out)
    if not ok:
        raise ValueError(f'Failed to encode image: {path}')
    path.write_bytes(buf.tobytes())
