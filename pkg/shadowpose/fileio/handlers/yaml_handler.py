# Copyright (c) shadowpose contributors. All rights reserved.
import yaml

try:
    from yaml import CDumper as Dumper  # type: ignore
    from yaml import CSafeLoader as Loader  # type: ignore
except ImportError:
    from yaml import Dumper  # type: ignore
    from yaml import SafeLoader as Loader  # type: ignore

from .base import BaseFileHandler  # isort:skip


class YamlHandler(BaseFileHandler):
    """A Yaml handler that parse yaml data from file object."""

    def load_from_fileobj(self, file, **kwargs):
        kwargs.setdefault('Loader', Loader)
        return yaml.load(file, **kwargs)

    def dump_to_str(self, obj, **kwargs):
        kwargs.setdefault('Dumper', Dumper)
        kwargs.setdefault('sort_keys', True)
        return yaml.dump(obj, **kwargs)
