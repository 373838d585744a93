"""Simulated clock. All engine time comes from here; wall-clock is never read."""

from __future__ import annotations

SECONDS_PER_MINUTE = 60.0
SECONDS_PER_HOUR = 3600.0
SECONDS_PER_DAY = 86400.0


class SimClock:
    """Monotonically nondecreasing simulated time, in seconds."""

    __slots__ = ("now",)

    def __init__(self, start: float = 0.0):
        if start < 0:
            raise ValueError("clock cannot start before t=0")
        self.now = float(start)

    def advance(self, dt_seconds: float) -> float:
        if dt_seconds < 0:
            raise ValueError("clock cannot move backwards")
        self.now += dt_seconds
        return self.now

    def advance_days(self, days: float) -> float:
        return self.advance(days * SECONDS_PER_DAY)

    @property
    def days(self) -> float:
        return self.now / SECONDS_PER_DAY


def days(seconds: float) -> float:
    """Convert a duration in seconds to days."""
    return seconds / SECONDS_PER_DAY


def seconds_from_days(d: float) -> float:
    return d * SECONDS_PER_DAY
