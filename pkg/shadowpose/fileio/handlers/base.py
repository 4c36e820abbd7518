# Copyright (c) shadowpose contributors. All rights reserved.
from abc import ABCMeta, abstractmethod


class BaseFileHandler(metaclass=ABCMeta):
    """A base class for file handler."""

    # `str_like` is a flag to indicate whether the type of file object is
    # str-like object or bytes-like object.
    str_like = True

    @abstractmethod
    def load_from_fileobj(self, file, **kwargs):
        pass

    @abstractmethod
    def dump_to_str(self, obj, **kwargs) -> str:
        pass

    def load_from_path(self, filepath, mode='r', **kwargs):
        with open(filepath, mode, encoding='utf-8') as f:
            return self.load_from_fileobj(f, **kwargs)

    def dump_to_path(self, obj, filepath, **kwargs) -> None:
        with open(filepath, 'w', encoding='utf-8', newline='\n') as f:
            f.write(self.dump_to_str(obj, **kwargs))
