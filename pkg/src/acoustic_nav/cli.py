"""Command line entry point: ``acoustic-nav run --input DIR --out FILE``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Optional, Sequence

from .decision import PriorityConfig
from .errors import AcousticNavError
from .imaging import DEFAULT_EDGE_THRESHOLD
from .pipeline import PipelineConfig, run
from .proximal import RegionMasks


def _span(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    if not sep:
        lo, sep, hi = text.partition("-")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected FIRST:LAST, got {text!r}")
    return int(lo), int(hi)


def parse_mask(text: str) -> RegionMasks:
    """``a1rows,a1cols,a2rows,a2cols`` where each range is ``first:last`` (inclusive)."""
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("mask needs four ranges: a1rows,a1cols,a2rows,a2cols")
    try:
        return RegionMasks(*(_span(p.strip()) for p in parts))
    except (ValueError, AcousticNavError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="acoustic-nav", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="process a directory of P6 PPM frames")
    r.add_argument("--input", required=True, help="directory of .ppm frames")
    r.add_argument("--out", required=True, help="JSONL event log to write")
    r.add_argument("--wav-dir", help="where per-frame beeps go (implies --emit-wav)")
    r.add_argument("--edge-threshold", type=float, default=DEFAULT_EDGE_THRESHOLD)
    r.add_argument("--k1", type=float, default=PriorityConfig.k1)
    r.add_argument("--k2", type=float, default=PriorityConfig.k2)
    r.add_argument("--mask", type=parse_mask, default=None, metavar="A1ROWS,A1COLS,A2ROWS,A2COLS")
    r.add_argument("--emit-wav", action="store_true")
    r.add_argument("--dump-stages", metavar="DIR", help="save intermediate maps per frame as .npz")
    r.add_argument("--workers", type=int, default=1)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")

    try:
        emit_wav = args.emit_wav or args.wav_dir is not None
        wav_dir = args.wav_dir
        if emit_wav and wav_dir is None:
            wav_dir = str(args.out) + ".wav"
        cfg = PipelineConfig(
            edge_threshold=args.edge_threshold,
            masks=args.mask or RegionMasks(),
            priority=PriorityConfig(args.k1, args.k2),
            emit_wav=emit_wav,
            dump_stages=args.dump_stages is not None,
        )
        summary = run(args.input, cfg, args.out, wav_dir=wav_dir, stage_dir=args.dump_stages, workers=args.workers)
    except (AcousticNavError, OSError) as exc:
        print(f"acoustic-nav: error: {exc}", file=sys.stderr)
        return 1
    json.dump(summary.as_dict(), sys.stdout)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
