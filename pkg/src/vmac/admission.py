"""Admission policies: instantaneous-rate and average-rate based.

Both policies admit a request when the measured aggregate rate plus the
requested rate fits within the link capacity (equality admits).  The
requested rate is either explicit or one of the video quality classes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .rate_engine import RateSample
from .trace_model import MBPS


class QualityClass(enum.Enum):
    FULL_HD = "fullhd"
    HD_READY = "hdready"
    SD = "sd"
    HD_WEB = "hdweb"


_CLASS_RATES = {
    QualityClass.FULL_HD: 11 * MBPS,
    QualityClass.HD_READY: 8 * MBPS,
    QualityClass.SD: 2 * MBPS,
    QualityClass.HD_WEB: 1.25 * MBPS,
}


def quality_class_rate(quality: QualityClass) -> float:
    """Requested rate in bits/s for a video quality class."""
    return _CLASS_RATES[quality]


class Verdict(enum.Enum):
    ADMIT = "admit"
    REJECT = "reject"


class Policy(enum.Enum):
    INSTANTANEOUS = "inst"
    AVERAGE = "avg"


@dataclass(frozen=True)
class LinkConfig:
    link_id: str
    capacity: float  # bits/s

    def __post_init__(self):
        if not self.capacity > 0:
            raise ValueError(f"capacity must be positive, got {self.capacity}")


@dataclass(frozen=True)
class AdmissionRequest:
    requested_rate: float  # bits/s

    def __post_init__(self):
        if not self.requested_rate > 0:
            raise ValueError(
                f"requested rate must be positive, got {self.requested_rate}"
            )

    @classmethod
    def for_class(cls, quality: QualityClass) -> "AdmissionRequest":
        return cls(requested_rate=quality_class_rate(quality))


@dataclass(frozen=True)
class AdmissionDecision:
    verdict: Verdict
    measured_rate: float  # bits/s
    headroom: float  # bits/s, negative on reject
    policy: Policy


def _decide(
    measured: float, req: AdmissionRequest, link: LinkConfig,
    policy: Policy, utilization_target: float,
) -> AdmissionDecision:
    budget = utilization_target * link.capacity
    headroom = budget - measured - req.requested_rate
    verdict = Verdict.ADMIT if measured + req.requested_rate <= budget else Verdict.REJECT
    return AdmissionDecision(
        verdict=verdict, measured_rate=measured, headroom=headroom, policy=policy
    )


def decide_instantaneous(
    sample: RateSample,
    req: AdmissionRequest,
    link: LinkConfig,
    utilization_target: float = 1.0,
) -> AdmissionDecision:
    """Admit iff instantaneous aggregate rate + requested rate <= capacity.

    `utilization_target` scales the capacity budget; the default of 1.0 is
    the plain capacity comparison, anything else is an extension.
    """
    return _decide(sample.instantaneous, req, link, Policy.INSTANTANEOUS,
                   utilization_target)


def decide_average(
    sample: RateSample,
    req: AdmissionRequest,
    link: LinkConfig,
    utilization_target: float = 1.0,
) -> AdmissionDecision:
    """Admit iff windowed average aggregate rate + requested rate <= capacity."""
    return _decide(sample.average, req, link, Policy.AVERAGE, utilization_target)
