# Copyright (c) shadowpose contributors. All rights reserved.
from .checkpoint import (Checkpoint, load_checkpoint, parameter_names,
                         read_header, save_checkpoint)
from .config import NetworkConfig, count_parameters
from .inference import (EnhanceSummary, enhance_directory, enhance_files,
                        enhance_image)
from .network import (EnhancementModule, EnhancementNetwork, MiniRes,
                      build_network, enhance_batch, init_weights)

__all__ = [
    'NetworkConfig', 'count_parameters', 'MiniRes', 'EnhancementModule',
    'EnhancementNetwork', 'build_network', 'init_weights', 'enhance_batch',
    'Checkpoint', 'save_checkpoint', 'load_checkpoint', 'read_header',
    'parameter_names', 'EnhanceSummary', 'enhance_image', 'enhance_files',
    'enhance_directory'
]
