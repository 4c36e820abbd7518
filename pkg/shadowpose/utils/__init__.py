# Copyright (c) shadowpose contributors. All rights reserved.

from .misc import is_list_of, is_seq_of, set_random_seed, try_import
from .path import list_images, mkdir_or_exist

__all__ = [
    'try_import', 'is_seq_of', 'is_list_of', 'set_random_seed',
    'list_images', 'mkdir_or_exist'
]
