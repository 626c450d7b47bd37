"""Destructive 8-connected flood that measures every object in a labelled map."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InvalidInputError
from .imaging import GRID

_NEIGHBOURS = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


@dataclass(frozen=True)
class ObjectStats:
    """Measurements of one connected object.

    ``c1`` counts pixels labelled 3 (near band), ``c2`` pixels labelled 2
    (far band). ``id`` is the discovery ordinal of a row-major scan.
    """

    id: int
    size: int
    c1: int
    c2: int
    centroid_row: float
    centroid_col: float
    pixels: Optional[frozenset] = field(default=None, compare=False, repr=False)

    @property
    def centroid(self) -> tuple[float, float]:
        return (self.centroid_row, self.centroid_col)


def flood_extract(
    labels: np.ndarray, *, in_place: bool = False, keep_pixels: bool = False
) -> tuple[list[ObjectStats], np.ndarray]:
    """Measure and erase every 8-connected object of nonzero labels.

    Scans row-major; each nonzero cell found starts a flood driven by an
    explicit stack, and every visited cell is set to 0 so it is never counted
    twice. Returns the objects in discovery order together with the (now
    all-zero) image. Works on a copy unless ``in_place`` is set;
    ``keep_pixels`` records each object's ``(row, col)`` set.
    """
    arr = np.asarray(labels)
    if arr.shape != (GRID, GRID):
        raise InvalidInputError(f"labelled image must be {GRID}x{GRID}, got shape {arr.shape}")
    if np.any((arr < 0) | (arr > 3)):
        raise InvalidInputError("labels must lie in {0, 1, 2, 3}")
    h, w = arr.shape
    grid = arr.tolist()

    objects: list[ObjectStats] = []
    for r0 in range(h):
        row0 = grid[r0]
        for c0 in range(w):
            if not row0[c0]:
                continue
            size = c1 = c2 = 0
            sum_r = sum_c = 0
            stack = [(r0, c0)]
            members = [] if keep_pixels else None
            while stack:
                r, c = stack.pop()
                v = grid[r][c]
                if not v:
                    continue
                grid[r][c] = 0
                size += 1
                sum_r += r
                sum_c += c
                if members is not None:
                    members.append((r, c))
                if v == 3:
                    c1 += 1
                elif v == 2:
                    c2 += 1
                for dr, dc in _NEIGHBOURS:
                    nr, nc = r + dr, c + dc
                    if 0 <= nr < h and 0 <= nc < w and grid[nr][nc]:
                        stack.append((nr, nc))
            objects.append(
                ObjectStats(
                    len(objects),
                    size,
                    c1,
                    c2,
                    sum_r / size,
                    sum_c / size,
                    None if members is None else frozenset(members),
                )
            )

    flooded = np.array(grid, dtype=arr.dtype)
    if in_place and isinstance(labels, np.ndarray):
        labels[...] = flooded
        return objects, labels
    return objects, flooded
