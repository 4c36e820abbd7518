# Copyright (c) shadowpose contributors. All rights reserved.
from .keypoint import calc_sq_distances, count_within

__all__ = ['calc_sq_distances', 'count_within']
