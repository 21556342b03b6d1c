"""Setup script for evofss package."""

from setuptools import setup, find_packages
from pathlib import Path

# Read README for long description
readme_path = Path(__file__).parent / "README.md"
long_description = readme_path.read_text(encoding="utf-8") if readme_path.exists() else ""

setup(
    name="evofss",
    version="0.1.0",
    description="Parallel evolutionary wrapper feature subset selection (binary DE and threshold accepting hybrids)",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["tests*"]),
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: POSIX :: Linux",
        "Programming Language :: Python :: 3",
        "Topic :: Scientific/Engineering :: Artificial Intelligence",
        "Topic :: System :: Distributed Computing",
    ],
    python_requires=">=3.8",
    install_requires=[
        "submitit>=1.4.0",
        "numpy>=1.20",
        "pandas>=1.3",
    ],
    extras_require={
        "dev": [
            "pytest>=6.0",
            "pytest-cov",
            "pytest-mock",
            "scipy",
            "black",
            "flake8",
            "mypy",
        ],
    },
    entry_points={
        "console_scripts": [
            "evofss=evofss.cli:main",
        ],
    },
    keywords="feature-selection differential-evolution threshold-accepting wrapper slurm",
)
