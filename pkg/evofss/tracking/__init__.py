"""Run tracking."""

from .tracking import ExperimentTracker, LocalTracker, NullTracker, RunMetadata, create_tracker

__all__ = ["ExperimentTracker", "LocalTracker", "NullTracker", "RunMetadata", "create_tracker"]
