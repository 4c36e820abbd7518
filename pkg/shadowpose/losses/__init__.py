# Copyright (c) shadowpose contributors. All rights reserved.
from .composite import LossBreakdown, LossToggles, composite_loss
from .extractors import (EXTRACTORS, FeatureExtractor, IdentityExtractor,
                         LinearStubExtractor, ResNetFeatureExtractor,
                         build_feature_extractor, register_extractor)
from .terms import (NORM_MODES, edge_loss, l2_distance, perceptual_loss,
                    structural_loss)

__all__ = [
    'structural_loss', 'perceptual_loss', 'edge_loss', 'l2_distance',
    'NORM_MODES', 'LossToggles', 'LossBreakdown', 'composite_loss',
    'FeatureExtractor', 'IdentityExtractor', 'LinearStubExtractor',
    'ResNetFeatureExtractor', 'build_feature_extractor',
    'register_extractor', 'EXTRACTORS'
]
