# Copyright (c) shadowpose contributors. All rights reserved.
from .base import BaseFileHandler
from .json_handler import JsonHandler
from .registry_utils import file_handlers, register_handler
from .yaml_handler import YamlHandler

__all__ = [
    'BaseFileHandler', 'JsonHandler', 'YamlHandler', 'register_handler',
    'file_handlers'
]
