"""Tests for evaluation lanes and campaign dispatch."""

import threading
from pathlib import Path
from unittest.mock import Mock, patch

import pytest

from evofss.core.config import ClusterConfig
from evofss.core.executor import (
    CampaignExecutor,
    EvaluationLanes,
    InlineJob,
    SSHSlurmExecutor,
)


def _square(x):
    return x * x


def _fail_on_three(x):
    if x == 3:
        raise RuntimeError(f"bad item {x}")
    return x


class TestEvaluationLanes:
    """Tests for the ordered concurrent map."""

    @pytest.mark.parametrize("parallelism", [1, 2, 5])
    def test_results_in_input_order(self, parallelism):
        """Results come back in input order whatever the lane count."""
        with EvaluationLanes(_square, parallelism=parallelism) as lanes:
            assert lanes.evaluate(list(range(10))) == [x * x for x in range(10)]

    def test_inline_when_single_lane(self):
        """Parallelism 1 calls the function on the caller's thread."""
        seen = []
        lanes = EvaluationLanes(lambda x: seen.append(threading.get_ident()) or x)
        lanes.evaluate([1, 2, 3])
        assert set(seen) == {threading.get_ident()}
        assert lanes._pool is None

    @pytest.mark.parametrize("parallelism", [1, 3])
    def test_failure_is_reraised(self, parallelism):
        """The failing item's exception reaches the caller."""
        with EvaluationLanes(_fail_on_three, parallelism=parallelism) as lanes:
            with pytest.raises(RuntimeError, match="bad item 3"):
                lanes.evaluate([1, 2, 3, 4])

    def test_pool_is_reused_and_shut_down(self):
        """One pool serves every batch until shutdown."""
        lanes = EvaluationLanes(_square, parallelism=2)
        lanes.evaluate([1, 2])
        pool = lanes._pool
        lanes.evaluate([3, 4])
        assert lanes._pool is pool
        lanes.shutdown()
        assert lanes._pool is None

    @pytest.mark.slow
    def test_process_backend(self):
        """Process lanes receive the function through the pool initializer."""
        with EvaluationLanes(_square, parallelism=2, backend="process") as lanes:
            assert lanes.evaluate([2, 3, 4]) == [4, 9, 16]

    def test_invalid_arguments(self):
        """Bad lane counts and backends are rejected."""
        with pytest.raises(ValueError):
            EvaluationLanes(_square, parallelism=0)
        with pytest.raises(ValueError, match="Unknown lane backend"):
            EvaluationLanes(_square, backend="gpu")


class TestInlineJob:
    """Tests for the finished-job handle."""

    def test_result_returns_value(self):
        assert InlineJob("inline-1", value=42).result() == 42

    def test_result_raises_stored_error(self):
        job = InlineJob("inline-2", error=KeyError("missing"))
        with pytest.raises(KeyError):
            job.result()


class TestCampaignExecutor:
    """Tests for campaign run dispatch."""

    def test_inline_map_runs_keeps_order(self, tmp_path):
        """Inline backend runs every call in the calling process."""
        executor = CampaignExecutor(ClusterConfig(log_dir=tmp_path))
        results = executor.map_runs(pow, [(2, 3), (3, 2), (5, 1)])
        assert results == [8, 9, 5]
        assert not any(tmp_path.iterdir())

    def test_inline_error_surfaces_on_result(self, tmp_path):
        """An inline failure is raised when its result is gathered."""
        executor = CampaignExecutor(ClusterConfig(log_dir=tmp_path))
        job = executor.submit(_fail_on_three, 3)
        assert job.job_id == "inline-1"
        with pytest.raises(RuntimeError):
            job.result()

    def test_slurm_uses_ssh_executor_with_login_node(self, slurm_cluster_config, mock_slurm_executor, mock_submitit_job):
        """A login node routes submission through SSHSlurmExecutor."""
        with patch("evofss.core.executor.SSHSlurmExecutor") as mock_ssh_class:
            mock_ssh_class.return_value = mock_slurm_executor

            executor = CampaignExecutor(slurm_cluster_config)
            job = executor.submit(_square, 4)

            mock_ssh_class.assert_called_once()
            call_args = mock_ssh_class.call_args
            assert isinstance(call_args.kwargs["folder"], Path)
            assert call_args.kwargs["login_node"] == "test.cluster.com"
            mock_slurm_executor.submit.assert_called_once_with(_square, 4)
            assert job is mock_submitit_job

    def test_slurm_without_login_node(self, slurm_cluster_config, mock_slurm_executor):
        """Without a login node the plain submitit SlurmExecutor is used."""
        slurm_cluster_config.login_node = None

        with patch("evofss.core.executor.submitit.SlurmExecutor") as mock_regular_class:
            mock_regular_class.return_value = mock_slurm_executor

            CampaignExecutor(slurm_cluster_config).submit(_square, 2)

            mock_regular_class.assert_called_once()
            mock_slurm_executor.update_parameters.assert_called_once()

    def test_slurm_parameters(self, slurm_cluster_config, mock_slurm_executor):
        """Cluster settings map onto submitit parameters."""
        slurm_cluster_config.walltime = "01:30:00"
        slurm_cluster_config.env_vars = {"OMP_NUM_THREADS": "1"}
        slurm_cluster_config.setup_commands = ["module load python"]

        with patch("evofss.core.executor.SSHSlurmExecutor") as mock_ssh_class:
            mock_ssh_class.return_value = mock_slurm_executor
            CampaignExecutor(slurm_cluster_config).submit(_square, 2)

        params = mock_slurm_executor.update_parameters.call_args.kwargs
        assert params["job_name"] == "test-campaign"
        assert params["partition"] == "test"
        assert params["time"] == 90
        assert params["nodes"] == 1
        assert params["ntasks_per_node"] == 1
        assert params["cpus_per_task"] == 4
        assert params["use_srun"] is False
        assert params["setup"] == ["module load python"]
        assert params["account"] == "test"
        assert params["qos"] == "test"
        assert params["additional_parameters"]["export"] == "ALL,OMP_NUM_THREADS=1"

    def test_local_backend_sets_timeout(self, tmp_path):
        """The local backend uses submitit's LocalExecutor with the walltime as timeout."""
        cfg = ClusterConfig(backend="local", walltime="00:20:00", log_dir=tmp_path)
        with patch("evofss.core.executor.submitit.LocalExecutor") as mock_local_class:
            local = Mock()
            local.submit.return_value = Mock(job_id="777")
            mock_local_class.return_value = local

            job = CampaignExecutor(cfg).submit(_square, 3)

        local.update_parameters.assert_called_once_with(timeout_min=20)
        assert job.job_id == "777"

    def test_campaign_folder_is_shared(self, slurm_cluster_config, mock_slurm_executor):
        """All jobs of one campaign log into the same folder."""
        with patch("evofss.core.executor.SSHSlurmExecutor") as mock_ssh_class:
            mock_ssh_class.return_value = mock_slurm_executor
            executor = CampaignExecutor(slurm_cluster_config)
            executor.map_runs(_square, [(1,), (2,)])

        folders = {c.kwargs["folder"] for c in mock_ssh_class.call_args_list}
        assert len(folders) == 1
        folder = folders.pop()
        assert folder.parent == slurm_cluster_config.log_dir
        assert folder.name.startswith("campaign_")


class TestSSHSlurmExecutor:
    """Tests for SSH-based SLURM executor."""

    def test_initialization_sets_attributes_correctly(self):
        """SSH options and the login node form the command prefix."""
        with patch("evofss.core.executor.submitit.SlurmExecutor.__init__") as mock_super:
            mock_super.return_value = None

            executor = SSHSlurmExecutor(folder="/test/logs", login_node="cluster.example.com")

            assert executor._login_node == "cluster.example.com"
            assert executor.ssh_base == [
                "ssh", "-q", "-o", "BatchMode=yes",
                "-o", "StrictHostKeyChecking=no",
                "-o", "ConnectTimeout=10",
                "cluster.example.com",
            ]

    def test_make_submission_command_wraps_with_ssh(self):
        """The sbatch command is quoted and run on the login node."""
        with patch("evofss.core.executor.submitit.SlurmExecutor.__init__") as mock_super:
            mock_super.return_value = None
            executor = SSHSlurmExecutor(folder="/test/logs", login_node="cluster.example.com")

            with patch(
                "evofss.core.executor.submitit.SlurmExecutor._make_submission_command",
                return_value=["sbatch", "/path/with space/job.sh"],
            ):
                command = executor._make_submission_command("/path/with space/job.sh")

        assert command[:-1] == executor.ssh_base
        assert command[-1] == "sbatch '/path/with space/job.sh'"


class TestClusterConfigHelpers:
    """Tests for walltime and export helpers."""

    def test_walltime_conversion(self):
        assert ClusterConfig(walltime="02:30:45").get_walltime_minutes() == 150
        assert ClusterConfig(walltime="00:15:30").get_walltime_minutes() == 15
        assert ClusterConfig(walltime="10:00:00").get_walltime_minutes() == 600

    def test_export_string(self):
        cfg = ClusterConfig(env_vars={"OMP_NUM_THREADS": "1", "EVOFSS_TAG": "bench"})
        export_string = cfg.get_export_string()
        assert export_string.startswith("ALL,")
        assert "OMP_NUM_THREADS=1" in export_string
        assert "EVOFSS_TAG=bench" in export_string
        assert ClusterConfig().get_export_string() == "ALL"
