"""Instantaneous and windowed-average aggregate rates over a set of flows.

All aggregation is done in integer frame bytes and converted to bits/s at
the end, so that for constant-bitrate input the windowed average equals the
instantaneous rate bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import MixedFps, WindowOutOfRange
from .trace_model import BITS_PER_BYTE, FlowInstance


@dataclass(frozen=True)
class MeasurementWindow:
    """Trailing window of `length_slots` frame slots ending at `end_slot`."""

    end_slot: int
    length_slots: int

    def __post_init__(self):
        if self.length_slots < 1:
            raise ValueError(f"length_slots must be >= 1, got {self.length_slots}")
        if self.end_slot < self.length_slots - 1:
            raise WindowOutOfRange(
                f"window of {self.length_slots} slots does not fit before "
                f"end_slot {self.end_slot}"
            )

    @property
    def start_slot(self) -> int:
        return self.end_slot - self.length_slots + 1


@dataclass(frozen=True)
class RateSample:
    """Paired measurement at a decision instant: the rate of the final window
    slot and the average over the whole window, both in bits/s."""

    instantaneous: float
    average: float
    window: MeasurementWindow


def _shared_fps(flows: Sequence[FlowInstance]) -> float:
    fps = flows[0].trace.fps
    for flow in flows[1:]:
        if flow.trace.fps != fps:
            raise MixedFps(
                f"flows mix frame rates {fps} and {flow.trace.fps}; "
                "a common slot grid requires one fps"
            )
    return fps


def instantaneous_aggregate_rate(flows: Sequence[FlowInstance], slot: int) -> float:
    """Sum of all flows' rates at one frame slot, in bits/s; 0 for no flows."""
    if not flows:
        return 0.0
    fps = _shared_fps(flows)
    total_bytes = sum(f.trace.size_at(f.start_offset + slot) for f in flows)
    return total_bytes * BITS_PER_BYTE * fps


def average_aggregate_rate(
    flows: Sequence[FlowInstance], window: MeasurementWindow
) -> float:
    """Mean aggregate rate over the window's slots, in bits/s.

    Equals the time integral of the aggregate rate over the window divided
    by its duration, exactly, because rates are constant within a slot.
    """
    if not flows:
        return 0.0
    fps = _shared_fps(flows)
    total_bytes = sum(
        f.trace.window_bytes(f.start_offset + window.start_slot, window.length_slots)
        for f in flows
    )
    # integer bytes summed exactly; divide before the fps multiply so the
    # CBR case reduces to the instantaneous expression bit-for-bit
    return total_bytes * BITS_PER_BYTE / window.length_slots * fps


def rate_sample(flows: Sequence[FlowInstance], window: MeasurementWindow) -> RateSample:
    """Measure both rates at a decision instant: the instantaneous rate at the
    window's final slot and the average over the window."""
    return RateSample(
        instantaneous=instantaneous_aggregate_rate(flows, window.end_slot),
        average=average_aggregate_rate(flows, window),
        window=window,
    )
