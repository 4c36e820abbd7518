# Copyright (c) shadowpose contributors. All rights reserved.
import os
from pathlib import Path
from typing import List, Union

IMG_EXTENSIONS = ('.png', '.jpg', '.jpeg', '.bmp', '.tif', '.tiff')


def mkdir_or_exist(dir_name: Union[str, Path]) -> Path:
    """Create a directory (and parents) if it does not exist yet."""
    path = Path(dir_name)
    path.mkdir(parents=True, exist_ok=True)
    return path


def list_images(dir_name: Union[str, Path]) -> List[Path]:
    """List image files directly under ``dir_name``, sorted by name.

    Args:
        dir_name (str or Path): Directory to scan. Sub-directories are not
            visited.

    Returns:
        List[Path]: Image paths whose suffix is a known image extension.
    """
    dir_name = Path(dir_name)
    if not dir_name.is_dir():
        raise FileNotFoundError(f'{dir_name} is not a directory')
    return sorted(
        p for p in dir_name.iterdir()
        if p.is_file() and p.suffix.lower() in IMG_EXTENSIONS
        and not os.path.basename(p).startswith('.'))
