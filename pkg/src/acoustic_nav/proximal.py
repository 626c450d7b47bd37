"""Proximal danger zone geometry and the 0/1/2/3 labelling of object maps.

The zone is a rectangle split into two bands sharing a column range. The
near band (``a1``, bottom of the frame) earns label 3, the far band
(``a2``, directly above it) label 2, and object pixels elsewhere label 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import InvalidInputError
from .imaging import GRID, _check_binary

Span = Tuple[int, int]  # inclusive (first, last)


def _span_len(span: Span) -> int:
    return span[1] - span[0] + 1


@dataclass(frozen=True)
class RegionMasks:
    a1_rows: Span = (24, 31)
    a1_cols: Span = (8, 23)
    a2_rows: Span = (8, 23)
    a2_cols: Span = (8, 23)

    def __post_init__(self) -> None:
        for name in ("a1_rows", "a1_cols", "a2_rows", "a2_cols"):
            lo, hi = getattr(self, name)
            if not (0 <= lo <= hi < GRID):
                raise InvalidInputError(f"{name}={lo, hi} is not an inclusive range inside 0..{GRID - 1}")
        if self.a1_cols != self.a2_cols:
            raise InvalidInputError("A1 and A2 must share the same column range")
        if self.a2_rows[1] + 1 != self.a1_rows[0]:
            raise InvalidInputError("A1 must sit directly below A2 (a2 last row + 1 == a1 first row)")

    @property
    def a1_size(self) -> int:
        return _span_len(self.a1_rows) * _span_len(self.a1_cols)

    @property
    def a2_size(self) -> int:
        return _span_len(self.a2_rows) * _span_len(self.a2_cols)

    def _rect(self, rows: Span, cols: Span) -> np.ndarray:
        m = np.zeros((GRID, GRID), dtype=np.uint8)
        m[rows[0] : rows[1] + 1, cols[0] : cols[1] + 1] = 1
        return m

    @property
    def m1(self) -> np.ndarray:
        """Whole proximal area, A1 and A2 together."""
        return self._rect((self.a2_rows[0], self.a1_rows[1]), self.a1_cols)

    @property
    def m2(self) -> np.ndarray:
        """A1 only."""
        return self._rect(self.a1_rows, self.a1_cols)

    @property
    def a2(self) -> np.ndarray:
        return self._rect(self.a2_rows, self.a2_cols)


def default_masks() -> RegionMasks:
    """Centred, bottom-anchored zone: A1 rows 24..31, A2 rows 8..23, cols 8..23."""
    return RegionMasks()


def label_regions(img: np.ndarray, masks: RegionMasks | None = None) -> np.ndarray:
    masks = masks or default_masks()
    image = _check_binary(img)
    near_and_far = image & masks.m1
    near = image & masks.m2
    return image + near_and_far + near
