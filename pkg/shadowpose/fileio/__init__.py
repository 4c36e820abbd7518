# Copyright (c) shadowpose contributors. All rights reserved.
from .handlers import (BaseFileHandler, JsonHandler, YamlHandler,
                       register_handler)
from .io import dump, imread, imwrite, load

__all__ = [
    'load', 'dump', 'imread', 'imwrite', 'register_handler',
    'BaseFileHandler', 'JsonHandler', 'YamlHandler'
]
