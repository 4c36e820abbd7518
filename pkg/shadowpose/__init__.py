# Copyright (c) shadowpose contributors. All rights reserved.

# flake8: noqa

from .core import *
from .fileio import *
from .metrics import *
from .utils import *
from .version import __version__
