"""Full-size benchmark campaign with every run submitted as its own SLURM job."""

from pathlib import Path

from evofss import ClusterConfig, EngineConfig, ExperimentConfig, benchmark_preset

de, ta = benchmark_preset("microsoft_malware", "pbtade")

config = ExperimentConfig(
    data_path=Path("/shared/datasets/microsoft_malware.csv"),
    label_column="HasDetections",
    runs=20,
    algorithms=["pbde", "pbdeta", "pbtade"],
    output_dir=Path("/shared/results/microsoft_malware"),
    tracker="local",
    engine=EngineConfig(de=de, ta=ta, islands=2, parallelism=8, lane_backend="process"),
    cluster=ClusterConfig(
        backend="slurm",
        job_name="evofss-malware",
        partition="cpu",
        walltime="12:00:00",
        cpus_per_task=8,
        login_node="login.cluster.example",
        log_dir=Path("/shared/logs/evofss"),
        env_vars={"OMP_NUM_THREADS": "1"},
    ),
)
