"""Per-node drifting oscillator with a wrapping fine timer and wrap counter.

Each node owns a fine hardware timer that counts at ``tick_hz`` and wraps at
``t_max_ticks``, plus an unbounded wrap counter, so the absolute tick count is
``wraps * t_max_ticks + fine``.  Tick arithmetic is exact: local elapsed time
is tracked as (oracle ns) * (rate in parts-per-billion), and tick counts are
floor divisions of that product.  Values exceed 64-bit range by design; Python
integers keep the math exact, which is what makes runs replay bit-identically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# raw ticks = (rate_ppb * oracle_ns + phase0_ns * 1e9) * tick_hz // _SCALE
_SCALE = 10**18


@dataclass(frozen=True)
class ClockParams:
    drift_ppm: float = 0.0
    capture_jitter_sd_ns: float = 0.0
    tick_hz: int = 16_000_000
    t_max_ticks: int = 65536
    phase0_ns: int = 0

    def __post_init__(self) -> None:
        if self.tick_hz <= 0:
            raise ValueError("tick_hz must be > 0")
        if self.t_max_ticks < 2:
            raise ValueError("t_max_ticks must be >= 2")
        if abs(self.drift_ppm) >= 1000:
            raise ValueError("|drift_ppm| must be < 1000")
        if self.capture_jitter_sd_ns < 0:
            raise ValueError("capture_jitter_sd_ns must be >= 0")
        if self.phase0_ns < 0:
            raise ValueError("phase0_ns must be >= 0")


@dataclass(frozen=True)
class TimerValue:
    t_ticks: int   # fine timer, in [0, t_max_ticks)
    c_wraps: int   # wrap counter
    corr_ticks: int  # cumulative signed correction already folded in


def split_ticks(absolute: int, t_max_ticks: int) -> tuple[int, int]:
    """Decompose an absolute tick count into (wraps, fine)."""
    wraps, fine = divmod(absolute, t_max_ticks)
    return wraps, fine


def merge_ticks(c_wraps: int, t_ticks: int, t_max_ticks: int) -> int:
    return c_wraps * t_max_ticks + t_ticks


def shift_timer_value(value: TimerValue, delta_ticks: int, t_max_ticks: int) -> TimerValue:
    """Subtract delta_ticks from a timer value, renormalizing wraps/fine.

    Mirrors what a correction does to the visible registers: the absolute tick
    count moves by -delta_ticks with borrow/carry so the fine value stays in
    range.  Corrections that would drive the count negative clamp at zero.
    """
    absolute = merge_ticks(value.c_wraps, value.t_ticks, t_max_ticks)
    shifted = absolute - delta_ticks
    applied = delta_ticks if shifted >= 0 else absolute
    wraps, fine = split_ticks(absolute - applied, t_max_ticks)
    return TimerValue(fine, wraps, value.corr_ticks - applied)


class LocalClock:
    """Mutable clock state for one node within a single run."""

    def __init__(self, params: ClockParams) -> None:
        self.params = params
        # exact integer rate: 1e9 + drift in ppb (ppm rounded to 1e-3 ppm)
        self._rate_ppb = 10**9 + round(params.drift_ppm * 1000)
        self._phase_scaled = params.phase0_ns * 10**9
        self.corr_ticks = 0
        self.clamp_warnings = 0
        self._last_oracle = 0

    def raw_ticks(self, oracle_ns: int) -> int:
        """Uncorrected absolute tick count at a global instant."""
        n = self._rate_ppb * oracle_ns + self._phase_scaled
        ticks = (n * self.params.tick_hz) // _SCALE
        return ticks if ticks > 0 else 0

    def absolute_ticks(self, oracle_ns: int) -> int:
        return self.raw_ticks(oracle_ns) + self.corr_ticks

    def read(self, oracle_ns: int) -> TimerValue:
        if oracle_ns < self._last_oracle:
            raise ValueError(f"clock read at {oracle_ns} ns precedes previous read")
        self._last_oracle = oracle_ns
        wraps, fine = split_ticks(self.absolute_ticks(oracle_ns), self.params.t_max_ticks)
        return TimerValue(fine, wraps, self.corr_ticks)

    def capture(self, oracle_ns: int, rng: np.random.Generator) -> TimerValue:
        """Hardware-style timestamp: read with Gaussian capture noise, floored to ticks."""
        sd = self.params.capture_jitter_sd_ns
        if sd == 0.0:
            return self.read(oracle_ns)
        if oracle_ns < self._last_oracle:
            raise ValueError(f"clock capture at {oracle_ns} ns precedes previous read")
        self._last_oracle = oracle_ns
        jitter_ns = rng.normal(0.0, sd)
        n = self._rate_ppb * oracle_ns + self._phase_scaled + round(jitter_ns * self._rate_ppb)
        raw = (n * self.params.tick_hz) // _SCALE
        absolute = max(raw, 0) + self.corr_ticks
        wraps, fine = split_ticks(absolute, self.params.t_max_ticks)
        return TimerValue(fine, wraps, self.corr_ticks)

    def apply_correction(self, delta_ticks: int, oracle_ns: int) -> TimerValue:
        """Shift the timer by -delta_ticks, clamping if it would go negative."""
        absolute = self.absolute_ticks(oracle_ns)
        applied = delta_ticks
        if delta_ticks > absolute:
            self.clamp_warnings += 1
            applied = absolute
        self.corr_ticks -= applied
        wraps, fine = split_ticks(absolute - applied, self.params.t_max_ticks)
        return TimerValue(fine, wraps, self.corr_ticks)

    def crossing_instant(self, level_ticks: int) -> int:
        """Earliest oracle ns at which the corrected absolute count reaches a level.

        Inverts raw_ticks exactly: the smallest integer o with
        (rate_ppb * o + phase_scaled) * tick_hz >= (level - corr) * 1e18.
        """
        w = level_ticks - self.corr_ticks
        if w <= 0:
            return 0
        num = w * _SCALE - self._phase_scaled * self.params.tick_hz
        den = self._rate_ppb * self.params.tick_hz
        return max(-(-num // den), 0)
