"""Test configuration and fixtures for evofss tests."""

from pathlib import Path
from unittest.mock import Mock

import numpy as np
import pytest
import submitit

from evofss.core.config import ClusterConfig, EngineConfig, ExperimentConfig
from evofss.data.ingest import Dataset, stratified_split
from evofss.data.synthetic import make_planted_dataset


@pytest.fixture
def planted_dataset():
    """120 rows, 8 features of which the first 3 carry signal."""
    return make_planted_dataset(nrows=120, nfeat=8, informative=3, seed=5)


@pytest.fixture
def planted_split(planted_dataset):
    return stratified_split(planted_dataset, ratio=0.8, seed=0)


@pytest.fixture
def separable_dataset():
    """Four rows perfectly separated by the first feature."""
    return Dataset(
        ("a", "b"),
        np.array([[0.0, 1.0], [0.2, 0.0], [1.0, 1.0], [1.2, 0.0]]),
        np.array([0, 0, 1, 1]),
    )


@pytest.fixture
def quick_engine_config():
    """Short runs that still exercise both DE and TA phases."""
    return EngineConfig(n=6, bias=0.5, max_iter1=3, max_iter2=2, master_seed=11)


@pytest.fixture
def planted_csv(tmp_path, planted_dataset):
    """The planted dataset written as CSV with a ``label`` column."""
    path = tmp_path / "planted.csv"
    header = ",".join(planted_dataset.feature_names) + ",label"
    lines = [header]
    for row, label in zip(planted_dataset.matrix, planted_dataset.labels):
        lines.append(",".join(repr(float(v)) for v in row) + f",{int(label)}")
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def experiment_config(tmp_path, planted_csv):
    """Inline campaign over the planted CSV."""
    return ExperimentConfig(
        data_path=planted_csv,
        runs=3,
        algorithms=["pbde", "pbtade"],
        output_dir=tmp_path / "results",
        engine=EngineConfig(n=6, bias=0.5, max_iter1=2, max_iter2=2, master_seed=3),
    )


@pytest.fixture
def slurm_cluster_config(tmp_path):
    """SLURM dispatch through an SSH login node."""
    return ClusterConfig(
        backend="slurm",
        job_name="test-campaign",
        partition="test",
        walltime="00:30:00",
        login_node="test.cluster.com",
        log_dir=tmp_path / "logs",
    )


@pytest.fixture
def mock_submitit_job():
    """Mock submitit Job object."""
    job = Mock(spec=submitit.Job)
    job.job_id = "12345"
    job.state = "PENDING"
    job.result.return_value = "Test completed"
    return job


@pytest.fixture
def mock_slurm_executor(mock_submitit_job):
    """Mock SlurmExecutor."""
    executor = Mock()
    executor.update_parameters = Mock()
    executor.submit = Mock(return_value=mock_submitit_job)
    return executor
