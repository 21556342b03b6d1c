"""Concurrent fitness lanes and submitit-based campaign dispatch."""

import logging
import shlex
import uuid
from concurrent.futures import Executor, Future, ProcessPoolExecutor, ThreadPoolExecutor
from datetime import datetime
from pathlib import Path
from typing import Any, Callable, List, Optional, Sequence, Tuple

import submitit

from .config import ClusterConfig

logger = logging.getLogger(__name__)


# Set once per worker process by the pool initializer.
_WORKER_FN: Optional[Callable[[Any], Any]] = None


def _init_worker(fn: Callable[[Any], Any]) -> None:
    global _WORKER_FN
    _WORKER_FN = fn


def _call_in_worker(item: Any) -> Any:
    """Top-level so it can be pickled for process pools."""
    assert _WORKER_FN is not None, "worker used before initialization"
    return _WORKER_FN(item)


class EvaluationLanes:
    """
    Ordered map of one pure function with up to ``parallelism`` calls in flight.

    ``backend="thread"`` shares the function between threads; ``"process"``
    ships it once to every worker through the pool initializer. With
    parallelism 1 calls run inline.
    """

    def __init__(self, fn: Callable[[Any], Any], parallelism: int = 1, backend: str = "thread"):
        if parallelism < 1:
            raise ValueError("parallelism must be >= 1")
        if backend not in ("thread", "process"):
            raise ValueError(f"Unknown lane backend: {backend}")
        self.fn = fn
        self.parallelism = parallelism
        self.backend = backend
        self._pool: Optional[Executor] = None

    def _get_pool(self) -> Optional[Executor]:
        if self.parallelism == 1:
            return None
        if self._pool is None:
            if self.backend == "process":
                self._pool = ProcessPoolExecutor(
                    max_workers=self.parallelism, initializer=_init_worker, initargs=(self.fn,)
                )
            else:
                self._pool = ThreadPoolExecutor(max_workers=self.parallelism)
        return self._pool

    def submit_all(self, items: Sequence[Any]) -> List["Future[Any]"]:
        pool = self._get_pool()
        futures: List["Future[Any]"] = []
        for item in items:
            if pool is None:
                future: "Future[Any]" = Future()
                try:
                    future.set_result(self.fn(item))
                except Exception as e:
                    future.set_exception(e)
            elif self.backend == "process":
                future = pool.submit(_call_in_worker, item)
            else:
                future = pool.submit(self.fn, item)
            futures.append(future)
        return futures

    def evaluate(self, items: Sequence[Any]) -> List[Any]:
        """Results in input order; the first failure in input order is re-raised."""
        return [f.result() for f in self.submit_all(items)]

    def shutdown(self) -> None:
        if self._pool is not None:
            self._pool.shutdown(wait=True)
            self._pool = None

    def __enter__(self) -> "EvaluationLanes":
        return self

    def __exit__(self, *exc_info: Any) -> None:
        self.shutdown()


def _shlex_join(argv):
    """Join arguments with proper shell escaping."""
    try:
        return shlex.join(argv)
    except AttributeError:
        return " ".join(shlex.quote(a) for a in argv)


class SSHSlurmExecutor(submitit.SlurmExecutor):
    """SLURM executor that submits jobs via SSH."""

    def __init__(self, *args, login_node: str, **kwargs):
        super().__init__(*args, **kwargs)
        self._login_node = login_node
        self.ssh_base = [
            "ssh", "-q",
            "-o", "BatchMode=yes",
            "-o", "StrictHostKeyChecking=no",
            "-o", "ConnectTimeout=10",
            login_node,
        ]

    def _make_submission_command(self, submission_file_path: str):
        """Wrap sbatch command with SSH."""
        sbatch_cmd = super()._make_submission_command(submission_file_path)
        return self.ssh_base + [_shlex_join(sbatch_cmd)]


class InlineJob:
    """Already-finished job with the submitit ``result()`` interface."""

    def __init__(self, job_id: str, value: Any = None, error: Optional[BaseException] = None):
        self.job_id = job_id
        self._value = value
        self._error = error

    def result(self) -> Any:
        if self._error is not None:
            raise self._error
        return self._value


class CampaignExecutor:
    """Dispatch independent campaign runs inline, as local subprocesses, or to SLURM."""

    def __init__(self, config: ClusterConfig):
        self.config = config
        self._submitted = 0
        self._campaign_dir: Optional[Path] = None

    def _job_folder(self) -> Path:
        if self._campaign_dir is None:
            timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
            unique_id = str(uuid.uuid4())[:8]
            self._campaign_dir = self.config.log_dir / f"campaign_{timestamp}_{unique_id}"
            self._campaign_dir.mkdir(parents=True, exist_ok=True)
        return self._campaign_dir

    def _make_executor(self):
        folder = self._job_folder()
        if self.config.backend == "local":
            executor = submitit.LocalExecutor(folder=folder)
            executor.update_parameters(timeout_min=self.config.get_walltime_minutes())
            return executor

        if self.config.login_node:
            executor = SSHSlurmExecutor(folder=folder, login_node=self.config.login_node)
        else:
            executor = submitit.SlurmExecutor(folder=folder)
        self._configure_executor(executor)
        return executor

    def _configure_executor(self, executor) -> None:
        """Configure a SLURM executor with the cluster parameters."""
        executor.update_parameters(
            job_name=self.config.job_name,
            partition=self.config.partition,
            nodes=1,
            ntasks_per_node=1,
            cpus_per_task=self.config.cpus_per_task,
            time=self.config.get_walltime_minutes(),
            use_srun=False,
            setup=self.config.setup_commands,
            additional_parameters={"export": self.config.get_export_string()},
            account=self.config.account,
            qos=self.config.qos,
        )

    def submit(self, fn: Callable[..., Any], *args: Any) -> Any:
        """Submit one call; returns a handle with ``.job_id`` and ``.result()``."""
        self._submitted += 1
        if self.config.backend == "inline":
            job_id = f"inline-{self._submitted}"
            try:
                return InlineJob(job_id, value=fn(*args))
            except Exception as e:
                return InlineJob(job_id, error=e)

        job = self._make_executor().submit(fn, *args)
        logger.info("Submitted %s job %s", self.config.backend, job.job_id)
        return job

    def map_runs(self, fn: Callable[..., Any], arg_tuples: Sequence[Tuple[Any, ...]]) -> List[Any]:
        """Submit every call, then gather results in submission order."""
        jobs = [self.submit(fn, *args) for args in arg_tuples]
        return [job.result() for job in jobs]
