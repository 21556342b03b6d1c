"""Exception types raised by evofss."""

from typing import Optional


class EvofssError(Exception):
    """Base class for all evofss errors."""


class ConfigError(EvofssError, ValueError):
    """Invalid or unreadable configuration."""


class DataError(EvofssError, ValueError):
    """A dataset could not be loaded, encoded or split."""


class FitnessError(EvofssError, RuntimeError):
    """A fitness evaluation failed for a specific population member."""

    def __init__(self, message: str, member_id: Optional[int] = None):
        super().__init__(message)
        self.member_id = member_id


class ScheduleError(EvofssError, RuntimeError):
    """Seeded runs that differ only in lane count produced different results."""
