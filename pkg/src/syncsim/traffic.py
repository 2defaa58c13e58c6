"""Protocol-stack radio occupancy: periodic connection events sized by throughput.

Connection events anchor every interval_ms and hold the radio for a duration
that grows with offered application load.  The sync layer never inspects which
logical role (central/peripheral) initiates; occupancy is identical either
way.  Event durations get a data-dependent jitter so the leftover idle windows
do not phase-lock to the sync slot grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ROLE_CENTRAL = "central"
ROLE_PERIPHERAL = "peripheral"

MIN_INTERVAL_MS = 7.5
MAX_INTERVAL_MS = 4000.0


@dataclass(frozen=True)
class ConnectionParams:
    interval_ms: float = 50.0
    initiator_role: str = ROLE_CENTRAL
    anchor_jitter_ns: int = 50_000

    def __post_init__(self) -> None:
        if not MIN_INTERVAL_MS <= self.interval_ms <= MAX_INTERVAL_MS:
            raise ValueError(
                f"interval_ms must be within [{MIN_INTERVAL_MS}, {MAX_INTERVAL_MS}]")
        if self.initiator_role not in (ROLE_CENTRAL, ROLE_PERIPHERAL):
            raise ValueError("initiator_role must be 'central' or 'peripheral'")

    @property
    def interval_ns(self) -> int:
        return round(self.interval_ms * 1_000_000)


@dataclass(frozen=True)
class AppTraffic:
    throughput_kbps: float = 0.0
    phy_rate_bps: int = 2_000_000
    per_event_overhead_ns: int = 300_000
    efficiency: float = 0.75
    event_len_jitter_ns: int = 800_000

    def __post_init__(self) -> None:
        if self.throughput_kbps < 0:
            raise ValueError("throughput_kbps must be >= 0")
        if not 0 < self.efficiency <= 1:
            raise ValueError("efficiency must be in (0, 1]")
        if self.throughput_kbps * 1000 > self.phy_rate_bps * self.efficiency:
            raise ValueError("offered load exceeds phy_rate_bps * efficiency")


def payload_airtime_ns(traffic: AppTraffic, conn: ConnectionParams) -> int:
    """Radio time needed per connection event for the offered bits."""
    bits_per_interval = traffic.throughput_kbps * 1000 * conn.interval_ns / 1e9
    return round(bits_per_interval * 1e9 / (traffic.phy_rate_bps * traffic.efficiency))


def event_duration_ns(traffic: AppTraffic, conn: ConnectionParams, guard_ns: int) -> int:
    """Connection-event radio occupancy, capped so one sync slot can still fit."""
    duration = traffic.per_event_overhead_ns + payload_airtime_ns(traffic, conn)
    return min(conn.interval_ns - guard_ns, duration)


def occupancy_stream(conn: ConnectionParams, traffic: AppTraffic, horizon_ns: int,
                     guard_ns: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    """Sorted, non-overlapping busy intervals, one per connection anchor."""
    if horizon_ns <= 0:
        raise ValueError("horizon_ns must be > 0")
    interval = conn.interval_ns
    base = event_duration_ns(traffic, conn, guard_ns)
    # duration wander is bounded by the data actually carried: empty events
    # are near-constant, loaded events vary with packetization
    len_jitter = min(traffic.event_len_jitter_ns, payload_airtime_ns(traffic, conn))
    anchor_clip = min(3 * conn.anchor_jitter_ns, interval // 10)
    busy: list[tuple[int, int]] = []
    for k in range(horizon_ns // interval):
        anchor = k * interval
        start = anchor
        if conn.anchor_jitter_ns > 0:
            wobble = rng.normal(0.0, conn.anchor_jitter_ns)
            start = anchor + int(round(min(max(wobble, -anchor_clip), anchor_clip)))
        duration = base
        if len_jitter > 0:
            duration = base + int(rng.integers(-len_jitter, len_jitter + 1))
        duration = min(max(duration, traffic.per_event_overhead_ns // 2),
                       interval - guard_ns)
        start = max(start, busy[-1][1] if busy else 0)
        busy.append((start, start + duration))
    return busy
