"""Obstacle alerting from video frames to stereo beeps.

Each frame is reduced to a 32x32 object map, objects are measured against a
proximal danger zone, the most threatening one is picked and rendered as a
panned beep.
"""
from .decision import AcousticEvent, Category, PriorityConfig, categorize, pan_from_centroid, score, select_winner
from .errors import (
    AcousticNavError,
    InvalidInputError,
    MalformedFileError,
    UnsupportedDepthError,
    UnsupportedFormatError,
)
from .flood import ObjectStats, flood_extract
from .imaging import (
    DILATE_2X3,
    DISK_R1,
    RgbImage,
    StructuringElement,
    combine_or,
    dilate,
    erode,
    fill_holes,
    resize_box,
    sobel_edges,
)
from .pipeline import FrameResult, PipelineConfig, process_frame, read_ppm, run
from .proximal import RegionMasks, default_masks, label_regions
from .synth import BeepSpec, StereoPcm, synth_beep, write_wav

__version__ = "0.1.0"
