"""Timing of the discrete WMC operator."""

from __future__ import annotations

import hashlib
import logging
import os
import time
from dataclasses import dataclass, field

import numpy as np

from .core import ParameterError
from .operators import wmc_half_laplace

log = logging.getLogger(__name__)

COLUMNS = ("size", "pixels", "threads", "reps", "median_s", "throughput_px_s", "checksum")


@dataclass
class BenchRow:
    size: int
    threads: int
    times: list[float]
    checksum: str

    @property
    def pixels(self) -> int:
        return self.size * self.size

    @property
    def median(self) -> float:
        return float(np.median(self.times))

    @property
    def throughput(self) -> float:
        """Pixels per second over all timed repetitions."""
        return self.pixels * len(self.times) / float(np.sum(self.times))

    def as_tuple(self):
        return (self.size, self.pixels, self.threads, len(self.times), self.median,
                self.throughput, self.checksum)


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)

    def row(self, size: int, threads: int) -> BenchRow:
        for r in self.rows:
            if r.size == size and r.threads == threads:
                return r
        raise KeyError((size, threads))

    def scaling_ratio(self, small: int, large: int, threads: int = 1) -> float:
        return self.row(large, threads).median / self.row(small, threads).median

    def checksums_agree(self) -> bool:
        by_size: dict[int, set] = {}
        for r in self.rows:
            by_size.setdefault(r.size, set()).add(r.checksum)
        return all(len(s) == 1 for s in by_size.values())


def checksum(img: np.ndarray) -> str:
    return hashlib.sha256(np.ascontiguousarray(img).tobytes()).hexdigest()[:16]


def bench_image(size: int, seed: int = 0) -> np.ndarray:
    return np.random.default_rng(seed).uniform(0.0, 255.0, (size, size))


def bench_wmc(sizes, reps: int = 5, threads=1, seed: int = 0) -> BenchReport:
    """Median wall time of ``wmc_half_laplace`` on seeded random images.

    ``threads`` is an int or a list of ints; every size is timed at every
    thread count after one untimed warm-up call.
    """
    sizes = [int(s) for s in sizes]
    thread_list = [int(threads)] if np.isscalar(threads) else [int(t) for t in threads]
    if reps < 3:
        raise ParameterError(f"need at least 3 repetitions, got {reps}")
    if any(s < 64 for s in sizes):
        raise ParameterError("sizes must be at least 64")
    if any(t < 1 for t in thread_list):
        raise ParameterError("thread counts must be >= 1")
    report = BenchReport()
    for size in sizes:
        img = bench_image(size, seed)
        for t in thread_list:
            out = wmc_half_laplace(img, threads=t)
            times = []
            for _ in range(reps):
                t0 = time.perf_counter()
                wmc_half_laplace(img, threads=t)
                times.append(time.perf_counter() - t0)
            report.rows.append(BenchRow(size, t, times, checksum(out)))
    _check_thread_scaling(report)
    return report


def _check_thread_scaling(report: BenchReport) -> None:
    cores = os.cpu_count() or 1
    for size in {r.size for r in report.rows}:
        rows = sorted((r for r in report.rows if r.size == size and r.threads <= cores),
                      key=lambda r: r.threads)
        for a, b in zip(rows, rows[1:]):
            if b.throughput < a.throughput:
                log.warning("size %d: throughput drops from %d to %d threads", size, a.threads, b.threads)
