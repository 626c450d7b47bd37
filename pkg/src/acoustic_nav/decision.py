"""Threat scoring, winner selection, sound category and stereo position."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import InvalidInputError
from .flood import ObjectStats
from .imaging import GRID

# Capacity of the default far band (16 rows x 16 cols).
A2_CAPACITY = 256
_CENTRE = (GRID - 1) / 2


class Category(str, enum.Enum):
    IMMEDIATE = "Immediate"
    APPROACHING = "Approaching"
    SILENT = "Silent"


@dataclass(frozen=True)
class PriorityConfig:
    """Per-pixel weights for near-band (``k1``) and far-band (``k2``) presence.

    ``k1 > k2 * 256`` makes a single near-band pixel outweigh a completely
    filled default far band.
    """

    k1: float = 257
    k2: float = 1

    def __post_init__(self) -> None:
        if self.k1 <= 0 or self.k2 <= 0:
            raise InvalidInputError("k1 and k2 must be positive")
        if not self.k1 > self.k2 * A2_CAPACITY:
            raise InvalidInputError(f"k1 must exceed {A2_CAPACITY} * k2 (got k1={self.k1}, k2={self.k2})")


@dataclass(frozen=True)
class AcousticEvent:
    category: Category
    pan: Optional[float]
    winner: Optional[ObjectStats]


def score(obj: ObjectStats, cfg: PriorityConfig = PriorityConfig()) -> float:
    return cfg.k1 * obj.c1 + cfg.k2 * obj.c2


def _rank_key(obj: ObjectStats, cfg: PriorityConfig):
    # concentration first, then size, then earliest discovery
    return (score(obj, cfg), obj.size, -obj.id)


def select_winner(objs: Sequence[ObjectStats], cfg: PriorityConfig = PriorityConfig()) -> Optional[int]:
    """Index of the highest-threat object in ``objs``, or None when empty."""
    if not objs:
        return None
    return max(range(len(objs)), key=lambda i: _rank_key(objs[i], cfg))


def categorize(winner: Optional[ObjectStats]) -> Category:
    if winner is None or (winner.c1 == 0 and winner.c2 == 0):
        return Category.SILENT
    if winner.c1 > 0:
        return Category.IMMEDIATE
    return Category.APPROACHING


def pan_from_centroid(centroid_col: float) -> float:
    """Map a column in [0, 31] linearly onto [-1, 1] (left to right)."""
    if not 0 <= centroid_col <= GRID - 1:
        raise InvalidInputError(f"centroid column {centroid_col} outside 0..{GRID - 1}")
    return (centroid_col - _CENTRE) / _CENTRE


def decide(objs: Sequence[ObjectStats], cfg: PriorityConfig = PriorityConfig()) -> tuple[Optional[int], AcousticEvent]:
    idx = select_winner(objs, cfg)
    winner = None if idx is None else objs[idx]
    pan = None if winner is None else pan_from_centroid(winner.centroid_col)
    return idx, AcousticEvent(categorize(winner), pan, winner)
