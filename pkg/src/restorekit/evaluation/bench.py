"""Inference latency benchmark.

Each pipeline is a named callable taking (height, width) and returning an
image; any input preparation must happen when the closure is built so the
timed region covers only the pipeline itself. Per (pipeline, size) the
harness runs untimed warmup iterations, then timed repetitions on a
monotonic clock, and reports mean/std seconds.
"""

import time
from dataclasses import dataclass

import numpy as np

from ..errors import PipelineFailureError


@dataclass(frozen=True)
class TimingRow:
    pipeline: str
    height: int
    width: int
    mean_seconds: float
    std_seconds: float
    reps: int

    def __post_init__(self):
        if self.mean_seconds <= 0:
            raise ValueError(f"mean must be positive, got {self.mean_seconds}")
        if self.reps < 1:
            raise ValueError(f"reps must be >= 1, got {self.reps}")

    @property
    def size_label(self) -> str:
        return f"{self.height}x{self.width}"


class TimingTable:
    def __init__(self, rows):
        self.rows = list(rows)

    @classmethod
    def from_recorded(cls, data, reps: int = 1) -> "TimingTable":
        """Build a table from recorded means: {pipeline: {(H, W): seconds}}."""
        rows = []
        for pipeline, sizes in data.items():
            for (h, w), mean in sizes.items():
                rows.append(TimingRow(pipeline, h, w, float(mean), 0.0, reps))
        return cls(rows)

    def mean(self, pipeline: str, size) -> float:
        h, w = size
        for row in self.rows:
            if row.pipeline == pipeline and row.height == h and row.width == w:
                return row.mean_seconds
        raise KeyError(f"no timing row for {pipeline!r} at {h}x{w}")

    def speedup(self, pipeline: str, versus: str, size) -> float:
        """Fractional time saved by `pipeline` relative to `versus`."""
        return 1.0 - self.mean(pipeline, size) / self.mean(versus, size)

    def overhead(self, pipeline: str, versus: str, size) -> float:
        """Fractional extra time of `pipeline` relative to `versus`."""
        return self.mean(pipeline, size) / self.mean(versus, size) - 1.0

    def pipelines(self):
        seen = []
        for row in self.rows:
            if row.pipeline not in seen:
                seen.append(row.pipeline)
        return seen


def benchmark_inference(pipelines, sizes, reps: int, warmup: int) -> TimingTable:
    """Time named pipelines over image sizes.

    pipelines: iterable of (name, callable(h, w) -> image).
    """
    if reps < 3:
        raise ValueError(f"reps must be >= 3, got {reps}")
    if warmup < 1:
        raise ValueError(f"warmup must be >= 1, got {warmup}")
    rows = []
    for name, fn in pipelines:
        for h, w in sizes:
            try:
                for _ in range(warmup):
                    fn(h, w)
                samples = []
                for _ in range(reps):
                    t0 = time.perf_counter()
                    fn(h, w)
                    samples.append(time.perf_counter() - t0)
            except Exception as exc:
                raise PipelineFailureError(f"{name} at {h}x{w}: {exc}") from exc
            rows.append(
                TimingRow(name, h, w, float(np.mean(samples)), float(np.std(samples)), reps)
            )
    return TimingTable(rows)
