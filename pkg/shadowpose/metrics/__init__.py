# Copyright (c) shadowpose contributors. All rights reserved.
from .pose_metrics import (DetectionRate, ImageCounts, MatchConfig,
                           ShadowMeanAP, count_keypoints, detection_rate,
                           pair_skeletons, smap)
from .shadow_ratio import (RECOMMENDED_SR_BAND, ShadowRatio,
                           recommended_sr_band, shadow_ratio)
from .sseq import (FEATURE_NAMES, QualityScore, Regressor, SseqFeatures,
                   block_entropies, pool_central, proxy_score, quality_score,
                   spatial_entropy, spectral_entropy, sseq_features)
from .ssim import StructuralSimilarity

__all__ = [
    'StructuralSimilarity', 'MatchConfig', 'ImageCounts', 'pair_skeletons',
    'count_keypoints', 'detection_rate', 'smap', 'DetectionRate',
    'ShadowMeanAP', 'SseqFeatures', 'QualityScore', 'Regressor',
    'FEATURE_NAMES', 'sseq_features', 'block_entropies', 'spatial_entropy',
    'spectral_entropy', 'pool_central', 'proxy_score', 'quality_score',
    'shadow_ratio', 'recommended_sr_band', 'RECOMMENDED_SR_BAND',
    'ShadowRatio'
]
