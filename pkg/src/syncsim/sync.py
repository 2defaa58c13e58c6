"""Timeslot beacon protocol: capture at radio READY, wrap-aware offset, correction.

One link has exactly one initiator and one receiver.  The initiator timestamps
each beacon at the radio-READY instant of a granted slot; the receiver
timestamps the arrival, recovers the signed tick offset across wrap-counter
differences, and shifts its own timer by that offset.  The deterministic
on-air duration is known to both ends and stripped before correcting (the
radio-chain constant); the residual path bias is deliberately left in.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clock import LocalClock


@dataclass(frozen=True)
class Beacon:
    fine_ticks: int   # initiator fine timer at radio READY
    wraps: int        # initiator wrap counter at radio READY
    seq: int
    air_time_ns: int


@dataclass(frozen=True)
class CorrectionRecord:
    seq: int
    offset_ticks: int    # raw receiver-minus-initiator capture offset
    applied_ticks: int   # offset minus the known on-air ticks
    oracle_ns: int


def offset_ticks(tx_fine: int, tx_wraps: int, rx_fine: int, rx_wraps: int,
                 wrap_period_ticks: int) -> int:
    """Signed absolute-tick difference (receiver capture minus beacon timestamp)."""
    return (rx_wraps - tx_wraps) * wrap_period_ticks + rx_fine - tx_fine


class SyncLink:
    """Initiator/receiver pair exchanging timestamped beacons over one link."""

    def __init__(self, initiator: LocalClock, receiver: LocalClock,
                 air_time_ns: int, path_bias_ns: int,
                 rng_initiator: np.random.Generator,
                 rng_receiver: np.random.Generator) -> None:
        if initiator.params.tick_hz != receiver.params.tick_hz:
            raise ValueError("both nodes must run the same nominal tick rate")
        if initiator.params.t_max_ticks != receiver.params.t_max_ticks:
            raise ValueError("both nodes must share the same wrap period")
        self.initiator = initiator
        self.receiver = receiver
        self.air_time_ns = air_time_ns
        self.path_bias_ns = path_bias_ns
        self._rng_initiator = rng_initiator
        self._rng_receiver = rng_receiver
        # on-air duration in nominal ticks, floored; exact when tick-aligned
        self._air_ticks = air_time_ns * initiator.params.tick_hz // 10**9
        self.next_seq = 0
        self.tx_count = 0
        self.rx_count = 0
        self.corrections: list[CorrectionRecord] = []

    def on_granted_slot(self, ready_ns: int) -> Beacon:
        """Initiator side: timestamp and emit one beacon at the READY instant."""
        cap = self.initiator.capture(ready_ns, self._rng_initiator)
        beacon = Beacon(cap.t_ticks, cap.c_wraps, self.next_seq, self.air_time_ns)
        self.next_seq += 1
        self.tx_count += 1
        return beacon

    def on_beacon(self, beacon: Beacon, arrival_ns: int) -> CorrectionRecord:
        """Receiver side: timestamp the accepted beacon and correct the timer."""
        cap = self.receiver.capture(arrival_ns, self._rng_receiver)
        raw = offset_ticks(beacon.fine_ticks, beacon.wraps, cap.t_ticks, cap.c_wraps,
                           self.receiver.params.t_max_ticks)
        applied = raw - self._air_ticks
        self.receiver.apply_correction(applied, arrival_ns)
        record = CorrectionRecord(beacon.seq, raw, applied, arrival_ns)
        self.rx_count += 1
        self.corrections.append(record)
        return record
