"""
Host load sampler for timing runs.
Uses `psutil` when it is importable; otherwise every sample reads as zero.
"""

from __future__ import annotations

import time
from typing import Dict, List, Optional

try:
    import psutil  # type: ignore
except Exception:
    psutil = None  # type: ignore


class SystemMonitor:
    """Collects CPU, host memory and process RSS samples between start() and stop()."""

    def __init__(self) -> None:
        self.cpu_samples: List[float] = []
        self.memory_samples: List[float] = []
        self.rss_samples: List[float] = []
        self.start_time: Optional[float] = None
        self.end_time: Optional[float] = None
        self._process = psutil.Process() if psutil else None

    def start(self) -> None:
        self.start_time = time.perf_counter()
        if psutil:
            # primes the counter; the first cpu_percent(None) call always returns 0.0
            psutil.cpu_percent(interval=None)

    def sample(self) -> None:
        if not psutil:
            self.cpu_samples.append(0.0)
            self.memory_samples.append(0.0)
            self.rss_samples.append(0.0)
            return
        try:
            self.cpu_samples.append(psutil.cpu_percent(interval=None))
        except Exception:
            self.cpu_samples.append(0.0)
        try:
            self.memory_samples.append(psutil.virtual_memory().used / (1024 * 1024))
        except Exception:
            self.memory_samples.append(0.0)
        try:
            self.rss_samples.append(self._process.memory_info().rss / (1024 * 1024))
        except Exception:
            self.rss_samples.append(0.0)

    def stop(self) -> None:
        self.end_time = time.perf_counter()

    @property
    def elapsed_s(self) -> float:
        if self.start_time is None:
            return 0.0
        end = self.end_time if self.end_time is not None else time.perf_counter()
        return end - self.start_time

    def get_averages(self) -> Dict[str, float]:
        def mean(samples: List[float]) -> float:
            return sum(samples) / len(samples) if samples else 0.0

        return {
            "cpu_usage_percent": round(mean(self.cpu_samples), 2),
            "memory_usage_mb": round(mean(self.memory_samples), 2),
            "peak_rss_mb": round(max(self.rss_samples, default=0.0), 2),
        }
