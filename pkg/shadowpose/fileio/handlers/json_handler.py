# Copyright (c) shadowpose contributors. All rights reserved.
import json

import numpy as np

from .base import BaseFileHandler


def _default(obj):
    """Convert numpy scalars and arrays, which ``json`` can not encode."""
    if isinstance(obj, (set, range)):
        return list(obj)
    elif isinstance(obj, np.ndarray):
        return obj.tolist()
    elif isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f'{type(obj)} is unsupported for json dump')


class JsonHandler(BaseFileHandler):
    """A Json handler that parse json data from file object.

    Dumps are canonical (sorted keys, two-space indent, trailing newline) so
    that equal objects always produce byte-identical files.
    """

    def load_from_fileobj(self, file):
        return json.load(file)

    def dump_to_str(self, obj, **kwargs):
        kwargs.setdefault('default', _default)
        kwargs.setdefault('sort_keys', True)
        kwargs.setdefault('indent', 2)
        return json.dumps(obj, **kwargs) + '\n'
