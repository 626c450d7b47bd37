"""Pixel kernels: box resize, Sobel edges, OR combine and binary morphology.

Every binary map in the package is a ``(32, 32)`` ``uint8`` array holding
0/1, row 0 at the top of the frame and column 0 at the left.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np

from .errors import InvalidInputError

GRID = 32
DEFAULT_EDGE_THRESHOLD = 128

Offset = Tuple[int, int]


@dataclass(frozen=True)
class RgbImage:
    """An 8-bit RGB frame stored as a ``(height, width, 3)`` uint8 array."""

    pixels: np.ndarray

    def __post_init__(self) -> None:
        px = np.asarray(self.pixels)
        if px.ndim != 3 or px.shape[2] != 3:
            raise InvalidInputError(f"expected (height, width, 3) pixels, got shape {px.shape}")
        if px.shape[0] < 1 or px.shape[1] < 1:
            raise InvalidInputError(f"image must be at least 1x1, got {px.shape[1]}x{px.shape[0]}")
        if px.dtype != np.uint8:
            if np.any(px < 0) or np.any(px > 255):
                raise InvalidInputError("samples must lie in [0, 255]")
            px = px.astype(np.uint8)
        object.__setattr__(self, "pixels", px)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def r(self) -> np.ndarray:
        return self.pixels[:, :, 0]

    @property
    def g(self) -> np.ndarray:
        return self.pixels[:, :, 1]

    @property
    def b(self) -> np.ndarray:
        return self.pixels[:, :, 2]

    def planes(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self.r, self.g, self.b


@dataclass(frozen=True)
class StructuringElement:
    """Neighbourhood offsets ``(drow, dcol)`` relative to the anchor pixel."""

    offsets: frozenset

    def __init__(self, offsets: Iterable[Offset]):
        offs = frozenset((int(dr), int(dc)) for dr, dc in offsets)
        if not offs:
            raise InvalidInputError("structuring element must not be empty")
        object.__setattr__(self, "offsets", offs)

    def __iter__(self):
        return iter(sorted(self.offsets))

    def __len__(self) -> int:
        return len(self.offsets)


# 2 rows x 3 cols of ones, anchored top-centre: grows objects downward.
DILATE_2X3 = StructuringElement([(0, -1), (0, 0), (0, 1), (1, -1), (1, 0), (1, 1)])
# Discrete disk of radius one.
DISK_R1 = StructuringElement([(0, 0), (-1, 0), (1, 0), (0, -1), (0, 1)])


def _check_grid(img: np.ndarray, what: str = "image") -> np.ndarray:
    arr = np.asarray(img)
    if arr.shape != (GRID, GRID):
        raise InvalidInputError(f"{what} must be {GRID}x{GRID}, got shape {arr.shape}")
    return arr


def _check_binary(img: np.ndarray) -> np.ndarray:
    arr = _check_grid(img)
    if arr.dtype == np.bool_:
        return arr.astype(np.uint8)
    if np.any((arr != 0) & (arr != 1)):
        raise InvalidInputError("binary image must contain only 0 and 1")
    return arr.astype(np.uint8, copy=False)


def _bins(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Start index and length of each of the 32 source bins along one axis."""
    if n >= GRID:
        step = n // GRID
        starts = np.arange(GRID) * step
        lengths = np.full(GRID, step)
        lengths[-1] = n - starts[-1]
    else:
        # Upsampling: each output cell takes the single source pixel under it.
        starts = (np.arange(GRID) * n) // GRID
        lengths = np.ones(GRID, dtype=np.int64)
    return starts, lengths


def _axis_sum(arr: np.ndarray, n: int, axis: int) -> np.ndarray:
    starts, _ = _bins(n)
    if n >= GRID:
        return np.add.reduceat(arr, starts, axis=axis)
    return np.take(arr, starts, axis=axis)


def resize_box(img: RgbImage) -> RgbImage:
    """Area-average ``img`` down to 32x32.

    Each axis is cut into 32 bins of ``n // 32`` pixels and the last bin
    absorbs the remainder. Means are rounded half up. Inputs narrower than 32
    along an axis are replicated (nearest source pixel) along that axis.
    """
    h, w = img.height, img.width
    if (h, w) == (GRID, GRID):
        return RgbImage(img.pixels.copy())
    acc = img.pixels.astype(np.int64)
    acc = _axis_sum(acc, h, axis=0)
    acc = _axis_sum(acc, w, axis=1)
    counts = np.outer(_bins(h)[1], _bins(w)[1])[:, :, None]
    out = (2 * acc + counts) // (2 * counts)
    return RgbImage(out.astype(np.uint8))


def sobel_edges(plane: np.ndarray, threshold: float = DEFAULT_EDGE_THRESHOLD) -> np.ndarray:
    """Binary edge map where ``|Gx| + |Gy| > threshold``.

    Gradients are the 3x3 Sobel responses with clamp-to-edge borders.
    """
    p = _check_grid(plane, "plane").astype(np.int32)
    if threshold < 0:
        raise InvalidInputError(f"threshold must be >= 0, got {threshold}")
    q = np.pad(p, 1, mode="edge")
    top, mid, bot = q[:-2], q[1:-1], q[2:]
    left, right = slice(0, -2), slice(2, None)
    centre = slice(1, -1)
    gx = (top[:, right] + 2 * mid[:, right] + bot[:, right]) - (
        top[:, left] + 2 * mid[:, left] + bot[:, left]
    )
    gy = (bot[:, left] + 2 * bot[:, centre] + bot[:, right]) - (
        top[:, left] + 2 * top[:, centre] + top[:, right]
    )
    return ((np.abs(gx) + np.abs(gy)) > threshold).astype(np.uint8)


def combine_or(e_r: np.ndarray, e_g: np.ndarray, e_b: np.ndarray) -> np.ndarray:
    return (_check_binary(e_r) | _check_binary(e_g) | _check_binary(e_b)).astype(np.uint8)


def _shift(img: np.ndarray, dr: int, dc: int) -> np.ndarray:
    """``out[r, c] = img[r - dr, c - dc]``, zero where that falls off the grid."""
    out = np.zeros_like(img)
    h, w = img.shape
    if abs(dr) >= h or abs(dc) >= w:
        return out
    src_r = slice(max(0, -dr), h - max(0, dr))
    dst_r = slice(max(0, dr), h - max(0, -dr))
    src_c = slice(max(0, -dc), w - max(0, dc))
    dst_c = slice(max(0, dc), w - max(0, -dc))
    out[dst_r, dst_c] = img[src_r, src_c]
    return out


def dilate(img: np.ndarray, se: StructuringElement = DILATE_2X3) -> np.ndarray:
    src = _check_binary(img)
    out = np.zeros_like(src)
    for dr, dc in se:
        out |= _shift(src, dr, dc)
    return out


def erode(img: np.ndarray, se: StructuringElement = DISK_R1) -> np.ndarray:
    src = _check_binary(img)
    out = np.ones_like(src)
    for dr, dc in se:
        # img(p + o) is img shifted by -o
        out &= _shift(src, -dr, -dc)
    return out


def fill_holes(img: np.ndarray) -> np.ndarray:
    """Turn every background pixel not 4-connected to the border into foreground."""
    src = _check_binary(img)
    h, w = src.shape
    bg = (src == 0).tolist()
    reached = [[False] * w for _ in range(h)]
    queue: deque = deque()
    for r in range(h):
        for c in range(w):
            if (r in (0, h - 1) or c in (0, w - 1)) and bg[r][c]:
                reached[r][c] = True
                queue.append((r, c))
    while queue:
        r, c = queue.popleft()
        for nr, nc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
            if 0 <= nr < h and 0 <= nc < w and bg[nr][nc] and not reached[nr][nc]:
                reached[nr][nc] = True
                queue.append((nr, nc))
    return (~np.array(reached, dtype=bool)).astype(np.uint8)
