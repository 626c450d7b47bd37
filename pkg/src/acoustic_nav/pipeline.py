"""Frame ingestion, the per-frame processing chain, event logging and timing."""
from __future__ import annotations

import json
import logging
import os
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterator, List, Mapping, Optional, Union

import numpy as np

from . import imaging
from .decision import AcousticEvent, Category, PriorityConfig, decide
from .errors import AcousticNavError, InvalidInputError, MalformedFileError, UnsupportedDepthError, UnsupportedFormatError
from .flood import ObjectStats, flood_extract
from .imaging import DILATE_2X3, DISK_R1, RgbImage
from .proximal import RegionMasks, label_regions
from .synth import DEFAULT_BEEPS, BeepSpec, synth_beep, write_wav

log = logging.getLogger(__name__)

PathArg = Union[str, os.PathLike]

STAGE_NAMES = ("resized", "edges_r", "edges_g", "edges_b", "edges", "dilated", "filled", "eroded", "labeled")


@dataclass(frozen=True)
class PipelineConfig:
    edge_threshold: float = imaging.DEFAULT_EDGE_THRESHOLD
    masks: RegionMasks = field(default_factory=RegionMasks)
    priority: PriorityConfig = field(default_factory=PriorityConfig)
    beeps: Mapping[Category, BeepSpec] = field(default_factory=lambda: dict(DEFAULT_BEEPS))
    emit_wav: bool = False
    dump_stages: bool = False

    def __post_init__(self) -> None:
        if self.edge_threshold < 0:
            raise InvalidInputError("edge threshold must be >= 0")
        cap = self.masks.a2_size
        if not self.priority.k1 > self.priority.k2 * cap:
            raise InvalidInputError(f"k1 must exceed k2 * |A2| = {self.priority.k2 * cap} for this mask geometry")
        missing = {Category.IMMEDIATE, Category.APPROACHING} - set(self.beeps)
        if missing:
            raise InvalidInputError(f"no beep spec for {sorted(c.value for c in missing)}")


@dataclass
class FrameResult:
    frame_index: int
    source: str
    objects: List[ObjectStats]
    winner: Optional[int]
    event: AcousticEvent
    elapsed_us: int
    stages: Optional[Dict[str, np.ndarray]] = None

    def to_record(self) -> dict:
        w = self.event.winner
        return {
            "frame": self.frame_index,
            "file": self.source,
            "category": self.event.category.value,
            "pan": self.event.pan,
            "winner": None
            if w is None
            else {"size": w.size, "c1": w.c1, "c2": w.c2, "centroid": [w.centroid_row, w.centroid_col]},
            "objects": len(self.objects),
            "micros": self.elapsed_us,
        }


# --- PPM input ---------------------------------------------------------------

_TOKEN = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(\S+)")


def parse_ppm(data: bytes) -> RgbImage:
    """Decode a binary (P6) PPM with maxval 255."""
    if data[:2] != b"P6":
        raise UnsupportedFormatError(f"expected magic P6, got {data[:2]!r}")
    pos = 2
    fields = []
    for _ in range(3):
        m = _TOKEN.match(data, pos)
        if m is None:
            raise MalformedFileError("truncated PPM header")
        fields.append(m.group(1))
        pos = m.end()
    try:
        width, height, maxval = (int(f) for f in fields)
    except ValueError:
        raise MalformedFileError(f"non-numeric PPM header fields {fields!r}") from None
    if maxval != 255:
        raise UnsupportedDepthError(f"maxval {maxval} unsupported, only 255")
    if width < 1 or height < 1:
        raise MalformedFileError(f"bad dimensions {width}x{height}")
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise MalformedFileError("missing whitespace after maxval")
    pos += 1
    need = width * height * 3
    payload = data[pos : pos + need]
    if len(payload) < need:
        raise MalformedFileError(f"expected {need} payload bytes, found {len(payload)}")
    pixels = np.frombuffer(payload, dtype=np.uint8).reshape(height, width, 3)
    return RgbImage(pixels.copy())


def read_ppm(path: PathArg) -> RgbImage:
    with open(path, "rb") as fh:
        return parse_ppm(fh.read())


def ppm_bytes(img: RgbImage) -> bytes:
    return b"P6\n%d %d\n255\n" % (img.width, img.height) + img.pixels.tobytes()


def write_ppm(img: RgbImage, path: PathArg) -> None:
    with open(path, "wb") as fh:
        fh.write(ppm_bytes(img))


# --- per-frame chain ---------------------------------------------------------


def process_frame(
    img: RgbImage, cfg: PipelineConfig = PipelineConfig(), *, frame_index: int = 0, source: str = ""
) -> FrameResult:
    t0 = time.perf_counter_ns()
    small = imaging.resize_box(img)
    er, eg, eb = (imaging.sobel_edges(p, cfg.edge_threshold) for p in small.planes())
    edges = imaging.combine_or(er, eg, eb)
    dilated = imaging.dilate(edges, DILATE_2X3)
    filled = imaging.fill_holes(dilated)
    eroded = imaging.erode(filled, DISK_R1)
    labeled = label_regions(eroded, cfg.masks)
    objects, _ = flood_extract(labeled)
    winner, event = decide(objects, cfg.priority)
    elapsed = max(1, (time.perf_counter_ns() - t0) // 1000)

    stages = None
    if cfg.dump_stages:
        stages = dict(
            zip(STAGE_NAMES, (small.pixels, er, eg, eb, edges, dilated, filled, eroded, labeled))
        )
    return FrameResult(frame_index, source, objects, winner, event, int(elapsed), stages)


# --- directory runner --------------------------------------------------------


@dataclass
class RunSummary:
    frames: int = 0
    skipped: int = 0
    categories: Dict[str, int] = field(default_factory=lambda: {c.value: 0 for c in Category})
    mean_micros: float = 0.0
    max_micros: int = 0

    def as_dict(self) -> dict:
        return {
            "frames": self.frames,
            "skipped": self.skipped,
            "categories": dict(self.categories),
            "mean_micros": self.mean_micros,
            "max_micros": self.max_micros,
        }


def list_frames(input_dir: PathArg) -> List[Path]:
    """PPM files in ``input_dir``, lexicographic by filename."""
    root = Path(input_dir)
    return sorted((p for p in root.iterdir() if p.is_file() and p.suffix.lower() == ".ppm"), key=lambda p: p.name)


def _load_and_process(index: int, path: Path, cfg: PipelineConfig) -> Optional[FrameResult]:
    try:
        img = read_ppm(path)
    except (AcousticNavError, OSError) as exc:
        log.warning("skipping %s: %s", path.name, exc)
        return None
    return process_frame(img, cfg, frame_index=index, source=path.name)


def iter_results(input_dir: PathArg, cfg: PipelineConfig, workers: int = 1) -> Iterator[Optional[FrameResult]]:
    """Yield one result (None for a skipped file) per frame, in input order."""
    paths = list_frames(input_dir)
    if workers <= 1:
        for i, p in enumerate(paths):
            yield _load_and_process(i, p, cfg)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(lambda ip: _load_and_process(ip[0], ip[1], cfg), enumerate(paths))


def dump_stages(result: FrameResult, stage_dir: PathArg) -> Path:
    path = Path(stage_dir) / f"{result.frame_index:05d}.npz"
    np.savez(path, **(result.stages or {}))
    return path


def run(
    input_dir: PathArg,
    cfg: PipelineConfig = PipelineConfig(),
    out_path: PathArg = "events.jsonl",
    wav_dir: Optional[PathArg] = None,
    stage_dir: Optional[PathArg] = None,
    workers: int = 1,
) -> RunSummary:
    """Process every PPM frame in ``input_dir`` and write one JSON line per frame.

    Unreadable ``input_dir`` raises. Frames that fail to parse are logged and
    skipped. With ``cfg.emit_wav`` a ``<frame>.wav`` is written to ``wav_dir``
    for every non-silent frame; with ``cfg.dump_stages`` the intermediate
    maps go to ``stage_dir`` as ``<frame>.npz``.
    """
    if cfg.emit_wav and wav_dir is None:
        raise InvalidInputError("emit_wav requires a wav directory")
    if cfg.dump_stages and stage_dir is None:
        raise InvalidInputError("dump_stages requires a stage directory")
    for d in (wav_dir if cfg.emit_wav else None, stage_dir if cfg.dump_stages else None):
        if d is not None:
            Path(d).mkdir(parents=True, exist_ok=True)

    summary = RunSummary()
    total = 0
    results = iter_results(input_dir, cfg, workers)
    with open(out_path, "w", encoding="utf-8", newline="\n") as sink:
        for res in results:
            if res is None:
                summary.skipped += 1
                continue
            sink.write(json.dumps(res.to_record()) + "\n")
            summary.frames += 1
            summary.categories[res.event.category.value] += 1
            total += res.elapsed_us
            summary.max_micros = max(summary.max_micros, res.elapsed_us)
            if cfg.emit_wav and res.event.category is not Category.SILENT:
                pcm = synth_beep(res.event.category, res.event.pan, cfg.beeps)
                write_wav(pcm, Path(wav_dir) / f"{res.frame_index}.wav")
            if cfg.dump_stages:
                dump_stages(res, stage_dir)
    if summary.frames:
        summary.mean_micros = total / summary.frames
    return summary
