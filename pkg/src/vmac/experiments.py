"""Monte Carlo harness for the rate-relationship experiments.

Every experiment derives its randomness from a single master seed through
`derive_run_seed`, so results are bit-identical across re-runs regardless
of worker count.  Flow sets are composed per run: each flow independently
picks a trace uniformly from the library and a start offset uniformly
within it; the decision instant is then drawn uniformly over one full
period of valid window end slots.

The probability of interest per run is whether the windowed average
aggregate rate is strictly below the instantaneous aggregate rate at the
decision instant; per repetition it is estimated over `runs_per_rep` runs,
and the sweep reports mean plus confidence interval over `reps`
repetitions.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ClassMissing, EmptyLibrary, InsufficientHistory, MixedFps
from .stats import MeanWithCI, mean_and_ci
from .trace_model import (
    BITS_PER_BYTE,
    MBPS,
    ContentClass,
    VideoTrace,
    synth_onoff_trace,
)


def derive_run_seed(master_seed: int, rep_index: int, run_index: int) -> int:
    """Collision-resistant 63-bit seed mixed from the three inputs.

    SHA-256 over the decimal-encoded triple, truncated; pure and identical
    on every platform.
    """
    if rep_index < 0 or run_index < 0:
        raise ValueError("rep_index and run_index must be >= 0")
    payload = f"vmac:{master_seed}:{rep_index}:{run_index}".encode()
    digest = hashlib.sha256(payload).digest()
    return int.from_bytes(digest[:8], "big") >> 1


@dataclass(frozen=True)
class ExperimentConfig:
    trace_library: tuple[VideoTrace, ...]
    flow_counts: tuple[int, ...] = (2, 5, 10, 15, 20, 30, 40)
    window_slots: int = 5
    runs_per_rep: int = 100
    reps: int = 5
    master_seed: int = 0
    confidence: float = 0.95
    workers: int = 1

    def __post_init__(self):
        if not self.trace_library:
            raise EmptyLibrary("experiment needs at least one trace")
        fps = self.trace_library[0].fps
        for t in self.trace_library:
            if t.fps != fps:
                raise MixedFps(
                    f"library mixes frame rates {fps} and {t.fps}"
                )
        if any(n < 1 for n in self.flow_counts):
            raise ValueError("flow counts must be >= 1")
        if self.window_slots < 1 or self.runs_per_rep < 1 or self.reps < 1:
            raise ValueError("window_slots, runs_per_rep and reps must be >= 1")
        shortest = min(len(t) for t in self.trace_library)
        if shortest < self.window_slots:
            raise InsufficientHistory(
                f"shortest trace has {shortest} slots, window needs "
                f"{self.window_slots}"
            )
        if not 0.0 < self.confidence < 1.0:
            raise ValueError(f"confidence must be in (0, 1), got {self.confidence}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    @property
    def fps(self) -> float:
        return self.trace_library[0].fps


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[tuple[int, MeanWithCI], ...]


@dataclass(frozen=True)
class TimeSeriesResult:
    slots: tuple[int, ...]
    instantaneous: tuple[float, ...]
    average: tuple[float, ...]


@dataclass(frozen=True)
class BurstinessRow:
    flow_count: int
    rate_kind: str  # "instantaneous" or "average"
    peak_to_mean: float
    cov: float


def _draw_flow_tables(rng, library, n):
    """Per-run flow composition: (trace indices, start offsets)."""
    tr = np.floor(rng.random(n) * len(library)).astype(np.int64)
    lens = np.array([len(library[i]) for i in tr], dtype=np.int64)
    offs = np.floor(rng.random(n) * lens).astype(np.int64)
    return tr, offs


def _run_avg_below_inst(rng, library, horizon, n, w) -> bool:
    """One run: compose a flow set, pick a decision instant, compare rates.

    The comparison win_bytes < w * inst_bytes is exact integer arithmetic,
    so ties (the CBR case) never count.
    """
    tr, offs = _draw_flow_tables(rng, library, n)
    end = w - 1 + int(np.floor(rng.random() * horizon))
    inst_bytes = 0
    win_bytes = 0
    for i in range(n):
        trace = library[tr[i]]
        off = int(offs[i])
        inst_bytes += trace.size_at(off + end)
        win_bytes += trace.window_bytes(off + end - w + 1, w)
    return win_bytes < w * inst_bytes


def _rep_probability(library, horizon, n, w, runs, seed) -> float:
    rng = np.random.Generator(np.random.PCG64(seed))
    hits = 0
    for _ in range(runs):
        if _run_avg_below_inst(rng, library, horizon, n, w):
            hits += 1
    return hits / runs


def _probability_scenario(
    library, n, w, scenario_seed, reps, runs, confidence, workers
) -> MeanWithCI:
    horizon = max(len(t) for t in library)
    seeds = [derive_run_seed(scenario_seed, rep, 0) for rep in range(reps)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(
                pool.map(
                    lambda s: _rep_probability(library, horizon, n, w, runs, s),
                    seeds,
                )
            )
    else:
        values = [_rep_probability(library, horizon, n, w, runs, s) for s in seeds]
    return mean_and_ci(values, confidence)


def run_probability_sweep(cfg: ExperimentConfig) -> SweepResult:
    """Probability that the windowed average is below the instantaneous rate,
    per flow count, with mean and confidence interval over repetitions."""
    rows = []
    for idx, n in enumerate(cfg.flow_counts):
        scenario_seed = derive_run_seed(cfg.master_seed, idx, 0)
        rows.append(
            (
                n,
                _probability_scenario(
                    cfg.trace_library, n, cfg.window_slots, scenario_seed,
                    cfg.reps, cfg.runs_per_rep, cfg.confidence, cfg.workers,
                ),
            )
        )
    return SweepResult(rows=tuple(rows))


def run_rate_timeseries(
    cfg: ExperimentConfig, flow_count: int, duration_slots: int, seed: int
) -> TimeSeriesResult:
    """One fixed random flow set, per-slot instantaneous aggregate and
    sliding-window average for every slot where the window fits."""
    w = cfg.window_slots
    if duration_slots < w:
        raise InsufficientHistory(
            f"duration of {duration_slots} slots cannot fit a {w}-slot window"
        )
    rng = np.random.Generator(np.random.PCG64(seed))
    tr, offs = _draw_flow_tables(rng, cfg.trace_library, flow_count)
    slots = np.arange(duration_slots)
    agg = np.zeros(duration_slots, dtype=np.int64)
    for i in range(flow_count):
        trace = cfg.trace_library[tr[i]]
        agg += np.take(trace.sizes, offs[i] + slots, mode="wrap")
    fps = cfg.fps
    cum = np.concatenate([[0], np.cumsum(agg)])
    inst = agg[w - 1:] * BITS_PER_BYTE * fps
    avg = (cum[w:] - cum[:-w]) * BITS_PER_BYTE / w * fps
    return TimeSeriesResult(
        slots=tuple(range(w - 1, duration_slots)),
        instantaneous=tuple(float(x) for x in inst),
        average=tuple(float(x) for x in avg),
    )


def run_burstiness_table(
    cfg: ExperimentConfig,
    flow_counts: Sequence[int],
    duration_slots: int = 300,
) -> tuple[BurstinessRow, ...]:
    """Peak-to-mean ratio and coefficient of variation of both rate series,
    one fixed scenario per flow count."""
    from .stats import coefficient_of_variation, peak_to_mean

    rows = []
    for idx, n in enumerate(flow_counts):
        seed = derive_run_seed(cfg.master_seed, idx, 1)
        ts = run_rate_timeseries(cfg, n, duration_slots, seed)
        for kind, series in (
            ("instantaneous", ts.instantaneous),
            ("average", ts.average),
        ):
            rows.append(
                BurstinessRow(
                    flow_count=n,
                    rate_kind=kind,
                    peak_to_mean=peak_to_mean(series),
                    cov=coefficient_of_variation(series),
                )
            )
    return tuple(rows)


def run_window_sweep(
    cfg: ExperimentConfig, flow_count: int, window_list: Sequence[int]
) -> tuple[tuple[int, MeanWithCI], ...]:
    """Probability sweep at a fixed flow count across window lengths."""
    shortest = min(len(t) for t in cfg.trace_library)
    for w in window_list:
        if w < 1:
            raise ValueError("window lengths must be >= 1")
        if w > shortest:
            raise InsufficientHistory(
                f"window of {w} slots exceeds shortest trace ({shortest} slots)"
            )
    rows = []
    for idx, w in enumerate(window_list):
        scenario_seed = derive_run_seed(cfg.master_seed, idx, 2)
        rows.append(
            (
                w,
                _probability_scenario(
                    cfg.trace_library, flow_count, w, scenario_seed,
                    cfg.reps, cfg.runs_per_rep, cfg.confidence, cfg.workers,
                ),
            )
        )
    return tuple(rows)


def run_content_comparison(
    cfg: ExperimentConfig,
    classes: Sequence[ContentClass],
    flow_counts: Sequence[int],
) -> tuple[tuple[ContentClass, int, MeanWithCI], ...]:
    """Probability sweep restricted to each content class in turn."""
    rows = []
    scenario = 0
    for content_class in classes:
        sub = tuple(
            t for t in cfg.trace_library if t.content_class is content_class
        )
        if not sub:
            raise ClassMissing(content_class)
        for n in flow_counts:
            scenario_seed = derive_run_seed(cfg.master_seed, scenario, 3)
            scenario += 1
            rows.append(
                (
                    content_class,
                    n,
                    _probability_scenario(
                        sub, n, cfg.window_slots, scenario_seed,
                        cfg.reps, cfg.runs_per_rep, cfg.confidence, cfg.workers,
                    ),
                )
            )
    return tuple(rows)


# -- bundled synthetic libraries ---------------------------------------------
#
# Parameter choices follow the observed character of VBR video aggregates:
# most slots sit near a base rate, with occasional near-silent frames and
# short quiet episodes a few slots long.  The "bursty" library mixes
# low-rate bursty feeds with high-rate near-constant feeds; the content
# libraries differ only in how violent the rate swings are.

def bursty_library(
    seed: int, n_traces: int = 10, length: int = 3000, fps: float = 30.0
) -> tuple[VideoTrace, ...]:
    """Mixed library: 70% low-rate bursty traces, 30% high-rate smooth ones."""
    rng = np.random.Generator(np.random.PCG64(seed))
    traces = []
    n_bursty = (7 * n_traces + 9) // 10
    for i in range(n_traces):
        child = int(rng.integers(0, 2 ** 62))
        if i < n_bursty:
            base = rng.uniform(0.5, 0.7) * MBPS
            traces.append(
                synth_onoff_trace(
                    length, fps, child, base,
                    dip_prob=0.09, dip_factor=0.70,
                    quiet_enter=0.0075, quiet_exit=0.20, quiet_factor=0.02,
                    noise=0.05, trace_id=f"bursty-{i}",
                )
            )
        else:
            base = rng.uniform(7.0, 9.0) * MBPS
            traces.append(
                synth_onoff_trace(
                    length, fps, child, base, noise=0.003,
                    trace_id=f"smooth-{i}",
                )
            )
    return tuple(traces)


def content_library(
    seed: int,
    content_class: ContentClass,
    n_traces: int = 5,
    length: int = 3000,
    fps: float = 30.0,
) -> tuple[VideoTrace, ...]:
    """Synthetic per-class library: sports-like traces swing hard between
    near-silence and full rate, news-like traces barely move."""
    rng = np.random.Generator(np.random.PCG64(seed))
    traces = []
    for i in range(n_traces):
        child = int(rng.integers(0, 2 ** 62))
        base = rng.uniform(2.5, 4.0) * MBPS
        name = f"{content_class.value}-{i}"
        if content_class is ContentClass.SPORTS:
            traces.append(
                synth_onoff_trace(
                    length, fps, child, base,
                    dip_prob=0.10, dip_factor=0.05,
                    quiet_enter=0.04, quiet_exit=0.33, quiet_factor=0.05,
                    noise=0.04, trace_id=name, content_class=content_class,
                )
            )
        elif content_class is ContentClass.NEWS:
            traces.append(
                synth_onoff_trace(
                    length, fps, child, base, noise=0.05,
                    trace_id=name, content_class=content_class,
                )
            )
        else:
            traces.append(
                synth_onoff_trace(
                    length, fps, child, base,
                    dip_prob=0.05, dip_factor=0.3,
                    noise=0.05, trace_id=name, content_class=content_class,
                )
            )
    return tuple(traces)
