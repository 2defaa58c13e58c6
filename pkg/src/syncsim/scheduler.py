"""Timeslot scheduling: quantized spacing, occupancy blocking, overload cancellation.

Slot requests below the protocol stack's priority get a nominal period
quantized to the scheduler resolution and clamped to a minimum gap.  A
candidate slot is blocked when it touches any reserved region around protocol
radio activity; requests past the overload knee are additionally cancelled at
random.  Blocked and cancelled candidates are retried one period later, never
as catch-up bursts.
"""

from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SchedulerParams:
    resolution_ns: int = 100_000
    min_gap_ns: int = 1_000_000
    cancel_overhead_ns: int = 435_000
    jitter_sd_ns: float = 100.0
    # reserved lockout around each protocol busy interval
    occupancy_margin_pre_ns: int = 6_500_000
    occupancy_margin_post_ns: int = 2_800_000
    # spare window kept free inside every connection interval, and how far
    # its position roams (decorrelates it from the candidate slot grid)
    guard_free_ns: int = 700_000
    guard_roam_ns: int = 1_000_000
    # request-overload model: cancellation rises linearly past the knee
    overload_knee_hz: float = 2300.0
    overload_full_hz: float = 3125.0
    overload_p_at_full: float = 0.2
    overload_p_max: float = 0.95

    def __post_init__(self) -> None:
        if self.resolution_ns <= 0:
            raise ValueError("resolution_ns must be > 0")
        if self.min_gap_ns <= 0:
            raise ValueError("min_gap_ns must be > 0")


@dataclass(frozen=True)
class SlotGrant:
    start: int
    len_ns: int
    jitter_ns: int


@dataclass(frozen=True)
class BlockedSlot:
    nominal: int
    reason: str  # "occupancy" | "overload"


def plan_spacing(requested_hz: float, params: SchedulerParams) -> int:
    """Nominal slot period: requested spacing rounded to the resolution grid,
    never below the minimum gap."""
    if requested_hz < 1:
        raise ValueError("requested_hz must be >= 1")
    raw = 10**9 / requested_hz
    quantized = max(int(raw / params.resolution_ns + 0.5), 1) * params.resolution_ns
    return max(quantized, params.min_gap_ns)


def cancel_probability(requested_hz: float, spare_fraction: float,
                       params: SchedulerParams) -> float:
    """Per-candidate cancellation probability under request overload.

    Active only once the per-second request processing cost exceeds the spare
    radio time; below the knee frequency the probability is zero either way.
    """
    if requested_hz * params.cancel_overhead_ns <= spare_fraction * 1e9:
        return 0.0
    rise = (requested_hz - params.overload_knee_hz) / (
        params.overload_full_hz - params.overload_knee_hz)
    return float(min(max(rise * params.overload_p_at_full, 0.0), params.overload_p_max))


def merge_intervals(intervals: list[tuple[int, int]]) -> list[tuple[int, int]]:
    merged: list[tuple[int, int]] = []
    for start, end in sorted(intervals):
        if end <= start:
            continue
        if merged and start <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], end))
        else:
            merged.append((start, end))
    return merged


def subtract_intervals(intervals: list[tuple[int, int]],
                       cuts: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Remove sorted disjoint cuts from a sorted disjoint interval list."""
    bounds = sorted(itertools.chain.from_iterable(cuts))

    def keep(s: int, e: int) -> list[tuple[int, int]]:
        pieces = []
        i = bisect.bisect_right(bounds, s)
        cur = s
        if i % 2 == 1:  # starts inside a cut
            if i < len(bounds):
                cur = bounds[i]
                i += 1
            else:
                return []
        while cur < e:
            nxt = bounds[i] if i < len(bounds) else e
            if cur < min(nxt, e):
                pieces.append((cur, min(nxt, e)))
            if i + 1 < len(bounds):
                cur = bounds[i + 1]
            else:
                cur = e
            i += 2
        return pieces

    out: list[tuple[int, int]] = []
    for s, e in intervals:
        out.extend(keep(s, e))
    return out


class _Coverage:
    """O(log n) total-overlap queries against a fixed disjoint interval list."""

    def __init__(self, intervals: list[tuple[int, int]]) -> None:
        self.starts = [s for s, _ in intervals]
        self.ends = [e for _, e in intervals]
        self.cum = [0]
        for s, e in intervals:
            self.cum.append(self.cum[-1] + (e - s))

    def covered(self, w0: int, w1: int) -> int:
        lo = bisect.bisect_right(self.ends, w0)
        hi = bisect.bisect_left(self.starts, w1)
        if lo >= hi:
            return 0
        total = self.cum[hi] - self.cum[lo]
        total -= max(w0 - self.starts[lo], 0)
        total -= max(self.ends[hi - 1] - w1, 0)
        return total


def reserve_blocked_regions(occupancy: list[tuple[int, int]], params: SchedulerParams,
                            interval_ns: int | None, horizon_ns: int,
                            rng: np.random.Generator) -> list[tuple[int, int]]:
    """Expand protocol busy intervals by the scheduler lockout margins.

    When the lockout would swallow a whole connection interval, a spare window
    of guard_free_ns is carved back out near the end of that interval; its
    exact position roams by up to guard_roam_ns so it does not phase-lock to
    the candidate slot grid.
    """
    inflated = [(max(s - params.occupancy_margin_pre_ns, 0),
                 min(e + params.occupancy_margin_post_ns, horizon_ns))
                for s, e in occupancy]
    blocked = merge_intervals(inflated)
    if interval_ns is None or not blocked:
        return blocked
    guard = params.guard_free_ns
    cov = _Coverage(blocked)
    holes: list[tuple[int, int]] = []
    for k in range(horizon_ns // interval_ns + 1):
        w0, w1 = k * interval_ns, min((k + 1) * interval_ns, horizon_ns)
        if w1 - w0 <= guard:
            break
        if (w1 - w0) - cov.covered(w0, w1) >= guard:
            continue
        roam = int(rng.integers(0, max(params.guard_roam_ns, 1)))
        hole_end = max(w1 - roam, w0 + guard)
        holes.append((hole_end - guard, hole_end))
    if holes:
        blocked = subtract_intervals(blocked, holes)
    return blocked


class TimeslotScheduler:
    """Evaluates candidate slots on a fixed nominal grid for one run."""

    def __init__(self, params: SchedulerParams, requested_hz: float, slot_len_ns: int,
                 blocked: list[tuple[int, int]], spare_fraction: float,
                 rng: np.random.Generator) -> None:
        if params.min_gap_ns < slot_len_ns:
            raise ValueError("min_gap_ns must cover the slot length")
        self.params = params
        self.slot_len_ns = slot_len_ns
        self.period_ns = plan_spacing(requested_hz, params)
        self.p_cancel = cancel_probability(requested_hz, spare_fraction, params)
        self._blocked_starts = [s for s, _ in blocked]
        self._blocked = blocked
        self._rng = rng
        # jitter is clipped to +-1.5 sd and shifted non-negative so a grant
        # never starts before its candidate event fires
        self._jitter_clip = math.ceil(1.5 * params.jitter_sd_ns)

    def _overlaps_blocked(self, start: int, end: int) -> bool:
        i = bisect.bisect_right(self._blocked_starts, start)
        if i > 0 and self._blocked[i - 1][1] > start:
            return True
        return i < len(self._blocked) and self._blocked[i][0] < end

    def evaluate(self, nominal: int) -> SlotGrant | BlockedSlot:
        """One candidate at a nominal grid point -> grant or a counted rejection."""
        jitter = 0
        if self.params.jitter_sd_ns > 0:
            raw = self._rng.normal(0.0, self.params.jitter_sd_ns)
            clip = 1.5 * self.params.jitter_sd_ns
            jitter = int(round(min(max(raw, -clip), clip)))
        start = nominal + self._jitter_clip + jitter
        if self._overlaps_blocked(start, start + self.slot_len_ns):
            return BlockedSlot(nominal, "occupancy")
        if self.p_cancel > 0.0 and self._rng.random() < self.p_cancel:
            return BlockedSlot(nominal, "overload")
        return SlotGrant(start, self.slot_len_ns, jitter)
