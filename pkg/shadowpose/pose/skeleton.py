# Copyright (c) shadowpose contributors. All rights reserved.
"""Keypoint containers and the estimator JSON format.

Estimators write one JSON file per image::

    {"people": [{"pose_keypoints_2d": [x1, y1, c1, x2, y2, c2, ...]}]}

The part count (18 for the COCO map, 25 for BODY_25) is read from the array
length. Triples with zero confidence are absent keypoints.
"""
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

COCO_18_PARTS = ('nose', 'neck', 'r_shoulder', 'r_elbow', 'r_wrist',
                 'l_shoulder', 'l_elbow', 'l_wrist', 'r_hip', 'r_knee',
                 'r_ankle', 'l_hip', 'l_knee', 'l_ankle', 'r_eye', 'l_eye',
                 'r_ear', 'l_ear')
BODY_25_PARTS = ('nose', 'neck', 'r_shoulder', 'r_elbow', 'r_wrist',
                 'l_shoulder', 'l_elbow', 'l_wrist', 'mid_hip', 'r_hip',
                 'r_knee', 'r_ankle', 'l_hip', 'l_knee', 'l_ankle', 'r_eye',
                 'l_eye', 'r_ear', 'l_ear', 'l_big_toe', 'l_small_toe',
                 'l_heel', 'r_big_toe', 'r_small_toe', 'r_heel')
PART_MAPS: Dict[int, Tuple[str, ...]] = {
    18: COCO_18_PARTS,
    25: BODY_25_PARTS
}


@dataclass(frozen=True)
class Keypoint:
    """One body-part detection; absent parts have confidence 0."""
    part_id: int
    x: float
    y: float
    confidence: float

    @property
    def present(self) -> bool:
        return self.confidence > 0


@dataclass
class Skeleton:
    """One person: a keypoint slot for every part of the part map."""
    person_id: int
    keypoints: Tuple[Keypoint, ...]

    @property
    def num_parts(self) -> int:
        return len(self.keypoints)

    @property
    def part_names(self) -> Optional[Tuple[str, ...]]:
        return PART_MAPS.get(self.num_parts)

    def present(self) -> List[Keypoint]:
        return [k for k in self.keypoints if k.present]

    @property
    def num_present(self) -> int:
        return sum(1 for k in self.keypoints if k.present)

    def centroid(self) -> Optional[Tuple[float, float]]:
        """Mean position of the present keypoints, None if there are none."""
        points = self.present()
        if not points:
            return None
        return (sum(k.x for k in points) / len(points),
                sum(k.y for k in points) / len(points))

    def coords(self) -> np.ndarray:
        """K x 2 float64 array of keypoint positions."""
        return np.array([[k.x, k.y] for k in self.keypoints],
                        dtype=np.float64).reshape(-1, 2)

    def mask(self) -> np.ndarray:
        """K boolean array of present keypoints."""
        return np.array([k.present for k in self.keypoints], dtype=bool)

    def to_flat(self) -> List[float]:
        flat: List[float] = []
        for k in self.keypoints:
            flat.extend((k.x, k.y, k.confidence))
        return flat

    @classmethod
    def from_flat(cls,
                  values: Sequence[float],
                  person_id: int = 0,
                  image_size: Optional[Tuple[int, int]] = None) -> 'Skeleton':
        """Build a skeleton from flat ``x, y, confidence`` triples.

        Confidences outside [0, 1] are clipped into it; some estimators
        report heatmap peaks slightly above 1.

        Args:
            values (Sequence[float]): Flat triples, length divisible by 3.
            person_id (int): Index of the person in the frame.
            image_size (tuple[int, int], optional): Image height and width.
                Keypoints outside the image are marked absent.
        """
        if len(values) % 3:
            raise ValueError('pose_keypoints_2d length should be a multiple '
                             f'of 3, got {len(values)}')
        keypoints = []
        for part_id in range(len(values) // 3):
            start = 3 * part_id
            x, y, conf = (float(v) for v in values[start:start + 3])
            if not np.isfinite(conf):
                raise ValueError(f'Keypoint {part_id} of person {person_id} '
                                 f'has confidence {conf}')
            conf = float(np.clip(conf, 0., 1.))
            if image_size is not None and conf > 0:
                height, width = image_size
                if not (0 <= x < width and 0 <= y < height):
                    conf = 0.
            if conf == 0:
                x, y = 0., 0.
            keypoints.append(Keypoint(part_id, x, y, conf))
        return cls(person_id, tuple(keypoints))


def parse_pose_json(text: Union[str, bytes],
                    source: str = '<string>',
                    image_size: Optional[Tuple[int, int]] = None
                    ) -> List[Skeleton]:
    """Parse estimator output into skeletons.

    Args:
        text (str or bytes): JSON document.
        source (str): Name used in error messages.
        image_size (tuple[int, int], optional): See
            :meth:`Skeleton.from_flat`.

    Returns:
        list[Skeleton]: One skeleton per person, empty for an empty scene.

    Raises:
        ValueError: On malformed JSON (the message gives the byte offset)
            or a document that does not follow the format.

    Examples:
        >>> parse_pose_json('{"people": []}')
        []
    """
    if isinstance(text, bytes):
        raw = text
        text = text.decode('utf-8')
    else:
        raw = text.encode('utf-8')
    try:
        content = json.loads(text)
    except json.JSONDecodeError as e:
        offset = len(text[:e.pos].encode('utf-8'))
        raise ValueError(f'Malformed pose JSON in {source} at byte offset '
                         f'{offset} of {len(raw)}: {e.msg}') from e
    if not isinstance(content, dict) or \
            not isinstance(content.get('people'), list):
        raise ValueError(f'{source} should hold an object with a "people" '
                         'list')
    skeletons = []
    for person_id, person in enumerate(content['people']):
        values = person.get('pose_keypoints_2d') \
            if isinstance(person, dict) else None
        if values is None:
            raise ValueError(f'Person {person_id} in {source} has no '
                             'pose_keypoints_2d')
        skeletons.append(Skeleton.from_flat(values, person_id, image_size))
    return skeletons


def load_pose_json(path: Union[str, Path],
                   image_size: Optional[Tuple[int, int]] = None
                   ) -> List[Skeleton]:
    path = Path(path)
    return parse_pose_json(path.read_bytes(), str(path), image_size)


def dump_pose_json(skeletons: Sequence[Skeleton],
                   path: Union[str, Path]) -> None:
    """Write skeletons in the estimator format."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    content = {
        'version': 1.3,
        'people': [{
            'person_id': [s.person_id],
            'pose_keypoints_2d': s.to_flat()
        } for s in skeletons]
    }
    path.write_text(json.dumps(content), encoding='utf-8')
