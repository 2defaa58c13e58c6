"""Run observables: compare-event error sampling, packet counters, energy.

Synchronization error is measured the way the bench measurement does it, but
virtualized: both nodes fire a compare event whenever their corrected absolute
tick count crosses the next shared multiple of the compare period, and the
error sample is the signed gap between the two crossing instants in oracle
time (positive = receiver late).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .clock import LocalClock


def sample_error(initiator: LocalClock, receiver: LocalClock, oracle_ns: int,
                 compare_period_ticks: int) -> int:
    """Signed ns between the two nodes' next shared compare events."""
    a = initiator.absolute_ticks(oracle_ns)
    b = receiver.absolute_ticks(oracle_ns)
    level = (max(a, b) // compare_period_ticks + 1) * compare_period_ticks
    return receiver.crossing_instant(level) - initiator.crossing_instant(level)


@dataclass(frozen=True)
class EnergyParams:
    p_idle_mw: float = 5.0
    p_tx_mw: float = 25.0
    p_rx_mw: float = 20.0
    tx_on_ns: int = 400_000

    def __post_init__(self) -> None:
        if min(self.p_idle_mw, self.p_tx_mw, self.p_rx_mw) < 0:
            raise ValueError("mode powers must be >= 0")


def duty_cycle_power_mw(p_active_mw: float, p_idle_mw: float,
                        active_ns: int, total_ns: int) -> float:
    """Average power of a node that spends active_ns of total_ns in one mode."""
    if total_ns <= 0:
        raise ValueError("total_ns must be > 0")
    return p_idle_mw + (active_ns / total_ns) * (p_active_mw - p_idle_mw)


def energy_joules(avg_power_mw: float, total_ns: int) -> float:
    return avg_power_mw * total_ns * 1e-12


@dataclass
class NodeEnergy:
    avg_power_mw: float = 0.0
    joules: float = 0.0


@dataclass
class Summary:
    sample_count: int
    mean_abs_error_ns: float
    p95_abs_error_ns: float
    max_abs_error_ns: float

    @property
    def empty(self) -> bool:
        return self.sample_count == 0


def summarize(samples: list[tuple[int, int]]) -> Summary:
    """Deterministic statistics over (oracle_ns, error_ns) samples."""
    if not samples:
        return Summary(0, math.nan, math.nan, math.nan)
    magnitudes = np.abs(np.array([e for _, e in samples], dtype=np.float64))
    return Summary(
        sample_count=len(samples),
        mean_abs_error_ns=float(np.mean(magnitudes)),
        p95_abs_error_ns=float(np.percentile(magnitudes, 95)),
        max_abs_error_ns=float(np.max(magnitudes)),
    )


@dataclass
class RunMetrics:
    """Append-only collectors for one run, finalized after the run ends."""

    duration_ns: int = 0
    error_samples: list[tuple[int, int]] = field(default_factory=list)
    tx_count: int = 0
    rx_count: int = 0
    blocked_count: int = 0
    cancelled_count: int = 0
    grant_starts: list[int] = field(default_factory=list)
    correction_times: list[int] = field(default_factory=list)
    clamp_warnings: int = 0
    initiator: NodeEnergy = field(default_factory=NodeEnergy)
    receiver: NodeEnergy = field(default_factory=NodeEnergy)

    def finalize_energy(self, params: EnergyParams, rx_continuous: bool,
                        rx_listen_ns: int) -> None:
        tx_busy = self.tx_count * params.tx_on_ns
        self.initiator.avg_power_mw = duty_cycle_power_mw(
            params.p_tx_mw, params.p_idle_mw, tx_busy, self.duration_ns)
        listen = self.duration_ns if rx_continuous else rx_listen_ns
        self.receiver.avg_power_mw = duty_cycle_power_mw(
            params.p_rx_mw, params.p_idle_mw, listen, self.duration_ns)
        self.initiator.joules = energy_joules(self.initiator.avg_power_mw, self.duration_ns)
        self.receiver.joules = energy_joules(self.receiver.avg_power_mw, self.duration_ns)

    def summary(self) -> Summary:
        return summarize(self.error_samples)

    def max_correction_gap_ns(self) -> int:
        """Largest spacing between consecutive applied corrections."""
        times = self.correction_times
        if len(times) < 2:
            return self.duration_ns
        return max(b - a for a, b in zip(times, times[1:]))
