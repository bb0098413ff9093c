"""Utility modules for configuration, host metrics and dataset files"""

from .config import load_branch_config, load_config, max_workers
from .datasets import read_dataset_csv, write_dataset_csv
from .system_metrics import SystemMonitor

__all__ = [
    "load_config",
    "load_branch_config",
    "max_workers",
    "read_dataset_csv",
    "write_dataset_csv",
    "SystemMonitor",
]
