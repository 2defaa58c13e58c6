"""Deterministic discrete-event core: event queue, run loop, named RNG streams.

All simulation time is integer nanoseconds.  Events with equal timestamps are
processed in insertion order, so a run is a deterministic function of its
configuration and master seed.
"""

from __future__ import annotations

import hashlib
import heapq
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

SimTime = int  # nanoseconds since simulation start (global/oracle time)


class SchedulingError(Exception):
    """An event was scheduled in the past, or time was asked to run backwards."""


@dataclass(frozen=True)
class Event:
    at: SimTime
    seq: int
    kind: str
    handler: Callable[[SimTime, Any], None] = field(repr=False)
    payload: Any = None


class EventQueue:
    """Time-ordered event queue with insertion-order tie-breaking."""

    def __init__(self) -> None:
        self.now: SimTime = 0
        self._heap: list[tuple[SimTime, int, Event]] = []
        self._next_id = 0

    def __len__(self) -> int:
        return len(self._heap)

    def schedule(self, at: SimTime, kind: str, handler: Callable, payload: Any = None) -> int:
        if at < self.now:
            raise SchedulingError(f"cannot schedule {kind!r} at {at} ns; now is {self.now} ns")
        event_id = self._next_id
        self._next_id += 1
        heapq.heappush(self._heap, (at, event_id, Event(at, event_id, kind, handler, payload)))
        return event_id

    def run_until(self, t_end: SimTime) -> None:
        """Process every event with timestamp <= t_end, then advance time to t_end."""
        if t_end < self.now:
            raise SchedulingError(f"cannot run until {t_end} ns; now is {self.now} ns")
        heap = self._heap
        while heap and heap[0][0] <= t_end:
            at, _, event = heapq.heappop(heap)
            self.now = at
            event.handler(at, event.payload)
        self.now = t_end


def _label_key(label: str) -> int:
    return int.from_bytes(hashlib.sha256(label.encode("utf-8")).digest()[:8], "big")


def stream(label: str, master_seed: int) -> np.random.Generator:
    """Independent PCG64 stream for one subsystem.

    The same (label, master_seed) pair yields the identical draw sequence on
    every platform; distinct labels or seeds never share a sequence.
    """
    if not label:
        raise ValueError("stream label must be non-empty")
    seq = np.random.SeedSequence(master_seed, spawn_key=(_label_key(label),))
    return np.random.Generator(np.random.PCG64(seq))


def derive_seed(master_seed: int, *parts: object) -> int:
    """Stable 63-bit seed for a child run (sweep point, repeat, ...)."""
    text = repr((master_seed,) + parts).encode("utf-8")
    return int.from_bytes(hashlib.sha256(text).digest()[:8], "big") >> 1
