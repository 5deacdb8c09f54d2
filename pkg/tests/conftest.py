"""Shared fixtures: tiny hand-built traces plus the bundled libraries."""

from pathlib import Path

import pytest

from vmac.experiments import bursty_library
from vmac.trace_model import FrameRecord, FrameType, VideoTrace

REPO_ROOT = Path(__file__).resolve().parent.parent
TRACES_DIR = REPO_ROOT / "traces"


def make_trace(sizes, fps=30.0, trace_id="t", content_class=None):
    """Build a VideoTrace from a plain list of frame sizes in bytes."""
    frames = tuple(
        FrameRecord(index=k, frame_type=FrameType.UNKNOWN, size=s)
        for k, s in enumerate(sizes)
    )
    if content_class is None:
        return VideoTrace(id=trace_id, frames=frames, fps=fps)
    return VideoTrace(
        id=trace_id, frames=frames, fps=fps, content_class=content_class
    )


@pytest.fixture(scope="session")
def cbr_library():
    """Three constant-bitrate traces at different levels, shared fps."""
    return tuple(
        make_trace([size] * 50, fps=30.0, trace_id=f"cbr-{size}")
        for size in (1000, 2500, 4000)
    )


@pytest.fixture(scope="session")
def bursty_lib():
    return bursty_library(42)


@pytest.fixture(scope="session")
def traces_dir():
    return TRACES_DIR
