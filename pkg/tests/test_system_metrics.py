"""Tests for system metrics module"""

import time

from besselk_ad.utils.system_metrics import SystemMonitor


def test_system_monitor_initialization():
    """Test SystemMonitor initialization"""
    monitor = SystemMonitor()

    assert monitor.cpu_samples == []
    assert monitor.memory_samples == []
    assert monitor.rss_samples == []
    assert monitor.start_time is None
    assert monitor.elapsed_s == 0.0


def test_system_monitor_sample():
    """Test taking a sample"""
    monitor = SystemMonitor()
    monitor.start()

    monitor.sample()
    time.sleep(0.05)
    monitor.sample()

    assert len(monitor.cpu_samples) == 2
    assert len(monitor.memory_samples) == 2
    assert len(monitor.rss_samples) == 2


def test_system_monitor_elapsed():
    """Elapsed time is frozen by stop()"""
    monitor = SystemMonitor()
    monitor.start()
    time.sleep(0.02)
    monitor.stop()
    elapsed = monitor.elapsed_s

    assert elapsed >= 0.02
    time.sleep(0.02)
    assert monitor.elapsed_s == elapsed


def test_system_monitor_averages():
    """Test getting averages"""
    monitor = SystemMonitor()
    monitor.start()

    for _ in range(3):
        monitor.sample()
        time.sleep(0.02)

    averages = monitor.get_averages()

    assert set(averages) == {"cpu_usage_percent", "memory_usage_mb", "peak_rss_mb"}
    assert isinstance(averages["cpu_usage_percent"], float)
    assert averages["peak_rss_mb"] >= 0.0


def test_system_monitor_empty_averages():
    """Test averages with no samples"""
    monitor = SystemMonitor()
    averages = monitor.get_averages()

    assert averages["cpu_usage_percent"] == 0
    assert averages["memory_usage_mb"] == 0
    assert averages["peak_rss_mb"] == 0
