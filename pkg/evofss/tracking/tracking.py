"""Run progress tracking."""

import json
import uuid
from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional, Union


@dataclass
class RunMetadata:
    """Metadata of one tracked search run."""
    run_id: str
    experiment_name: str
    start_time: str = field(default_factory=lambda: datetime.now().isoformat())
    end_time: Optional[str] = None
    status: str = "running"
    params: Dict[str, Any] = field(default_factory=dict)


class ExperimentTracker(ABC):
    """Base class for run trackers."""

    @abstractmethod
    def init_run(self, experiment_name: str, config: Dict[str, Any]) -> str:
        """Initialize a new run and return its id."""

    @abstractmethod
    def log_params(self, params: Dict[str, Any]) -> None:
        """Log run parameters."""

    @abstractmethod
    def log_metrics(self, metrics: Dict[str, Union[int, float]], step: Optional[int] = None) -> None:
        """Log metrics at a given step."""

    @abstractmethod
    def finish_run(self, status: str = "completed") -> None:
        """Finish the run."""


class NullTracker(ExperimentTracker):
    """Tracker that records nothing."""

    def init_run(self, experiment_name: str, config: Dict[str, Any]) -> str:
        return experiment_name

    def log_params(self, params: Dict[str, Any]) -> None:
        pass

    def log_metrics(self, metrics: Dict[str, Union[int, float]], step: Optional[int] = None) -> None:
        pass

    def finish_run(self, status: str = "completed") -> None:
        pass


class LocalTracker(ExperimentTracker):
    """File-based tracker writing ``metadata.json`` and ``metrics.jsonl`` per run."""

    def __init__(self, log_dir: Union[str, Path] = "tracking"):
        self.log_dir = Path(log_dir)
        self.log_dir.mkdir(parents=True, exist_ok=True)
        self.run_dir: Optional[Path] = None
        self.metadata: Optional[RunMetadata] = None

    def init_run(self, experiment_name: str, config: Dict[str, Any]) -> str:
        run_id = f"{experiment_name}_{datetime.now().strftime('%Y%m%d_%H%M%S')}_{uuid.uuid4().hex[:8]}"
        self.run_dir = self.log_dir / run_id
        self.run_dir.mkdir(parents=True, exist_ok=True)
        self.metadata = RunMetadata(run_id=run_id, experiment_name=experiment_name, params=dict(config))
        self._save_metadata()
        return run_id

    def log_params(self, params: Dict[str, Any]) -> None:
        if self.metadata:
            self.metadata.params.update(params)
            self._save_metadata()

    def log_metrics(self, metrics: Dict[str, Union[int, float]], step: Optional[int] = None) -> None:
        if not self.run_dir:
            return
        entry = {"timestamp": datetime.now().isoformat(), "step": step, **metrics}
        with open(self.run_dir / "metrics.jsonl", "a") as f:
            f.write(json.dumps(entry) + "\n")

    def finish_run(self, status: str = "completed") -> None:
        if self.metadata:
            self.metadata.status = status
            self.metadata.end_time = datetime.now().isoformat()
            self._save_metadata()

    def _save_metadata(self) -> None:
        if self.run_dir and self.metadata:
            with open(self.run_dir / "metadata.json", "w") as f:
                json.dump(asdict(self.metadata), f, indent=2, default=str)


def create_tracker(tracker_type: str, **kwargs) -> ExperimentTracker:
    """Factory function to create run trackers."""
    if tracker_type.lower() == "local":
        return LocalTracker(**kwargs)
    if tracker_type.lower() == "none":
        return NullTracker()
    raise ValueError(f"Unknown tracker type: {tracker_type}")
