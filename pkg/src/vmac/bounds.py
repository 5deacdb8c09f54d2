"""Concentration bound on the gap between instantaneous and average rate.

For n independent flows whose per-slot rates are confined to known ranges,
the probability that the aggregate rate exceeds its windowed average by
n*epsilon is at most

    delta = exp(-2 n^2 epsilon^2 / sum_i (max_i - min_i)^2)

`empirical_exceedance` measures that probability on simulated flows so the
bound can be checked end to end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateRanges, InsufficientHistory
from .rate_engine import MeasurementWindow, _shared_fps
from .trace_model import BITS_PER_BYTE, FlowInstance, FlowRateBounds

# exp() underflows to 0 below this exponent; we clamp instead so delta
# stays strictly positive
_MIN_EXPONENT = math.log(math.ulp(0.0)) + 1.0


@dataclass(frozen=True)
class HoeffdingQuery:
    n: int
    epsilon: float  # bits/s, per-flow deviation
    ranges: tuple[FlowRateBounds, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"flow count must be >= 1, got {self.n}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if len(self.ranges) != self.n:
            raise ValueError(
                f"expected {self.n} ranges, got {len(self.ranges)}"
            )


@dataclass(frozen=True)
class BoundResult:
    delta: float
    exponent: float
    underflow: bool = False


def hoeffding_delta(query: HoeffdingQuery) -> BoundResult:
    """Evaluate the exceedance bound for a query.

    Raises DegenerateRanges when every range has zero width (the exponent's
    denominator vanishes).
    """
    denom = sum(r.width ** 2 for r in query.ranges)
    if denom == 0.0:
        raise DegenerateRanges(
            "all flow rate ranges have zero width; the bound is undefined"
        )
    exponent = -2.0 * query.n ** 2 * query.epsilon ** 2 / denom
    if exponent < _MIN_EXPONENT:
        return BoundResult(delta=math.ulp(0.0), exponent=exponent, underflow=True)
    return BoundResult(delta=math.exp(exponent), exponent=exponent)


def empirical_exceedance(
    flows: Sequence[FlowInstance],
    window: MeasurementWindow,
    epsilon: float,
    samples: int,
    seed: int,
) -> float:
    """Fraction of random decision instants where the instantaneous aggregate
    rate is at least the windowed average plus n*epsilon (ties count).

    Decision instants are drawn uniformly over one full period of valid end
    slots, deterministically per seed.  Only the window's length is taken
    from `window`; its end slot is resampled.
    """
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    w = window.length_slots
    shortest = min(len(f.trace) for f in flows)
    if shortest < w:
        raise InsufficientHistory(
            f"shortest trace has {shortest} slots, window needs {w}"
        )
    horizon = max(len(f.trace) for f in flows)
    n = len(flows)
    fps = _shared_fps(flows)
    rng = np.random.Generator(np.random.PCG64(seed))

    # aggregate byte series over every slot any sampled window can touch;
    # integer cumsum keeps window sums exact
    n_slots = w - 1 + horizon
    slots = np.arange(n_slots)
    agg = np.zeros(n_slots, dtype=np.int64)
    for f in flows:
        agg += np.take(f.trace.sizes, f.start_offset + slots, mode="wrap")
    cum = np.concatenate([[0], np.cumsum(agg)])

    ends = rng.integers(w - 1, w - 1 + horizon, size=samples)
    inst = agg[ends] * BITS_PER_BYTE * fps
    avg = (cum[ends + 1] - cum[ends + 1 - w]) * BITS_PER_BYTE / w * fps
    hits = int(np.count_nonzero(inst >= avg + n * epsilon))
    return hits / samples
