import time

import pytest

from restorekit.errors import PipelineFailureError
from restorekit.evaluation import TimingTable, benchmark_inference
from restorekit.reference import TIMING_REFERENCE, timing_reference_table


def sleeper(seconds):
    def fn(h, w):
        time.sleep(seconds)
        return None
    return fn


def test_stub_delay_speedup():
    table = benchmark_inference(
        [("fast", sleeper(0.010)), ("slow", sleeper(0.050))],
        sizes=[(64, 64)], reps=8, warmup=2,
    )
    speedup = table.speedup("fast", "slow", (64, 64))
    assert abs(speedup - 0.80) < 0.05


def test_identical_pipeline_zero_speedup():
    table = benchmark_inference(
        [("one", sleeper(0.010)), ("two", sleeper(0.010))],
        sizes=[(32, 32)], reps=8, warmup=1,
    )
    assert abs(table.speedup("one", "two", (32, 32))) < 0.1


def test_means_reproducible_within_twenty_percent():
    results = []
    for _ in range(2):
        table = benchmark_inference(
            [("p", sleeper(0.010))], sizes=[(16, 16)], reps=6, warmup=1
        )
        results.append(table.mean("p", (16, 16)))
    assert abs(results[0] - results[1]) / max(results) < 0.2


def test_recorded_reference_replay():
    table = timing_reference_table()
    speedup = table.speedup("flux-schnell+i2i", "flux-dev", (512, 512))
    assert abs(speedup - (1 - 1.24 / 7.05)) < 1e-12
    assert abs(speedup - 0.824) < 5e-4          # the published "82%"
    overhead = table.overhead("flux-schnell+i2i", "flux-schnell", (512, 512))
    assert abs(overhead - (1.24 / 1.15 - 1)) < 1e-12
    assert abs(overhead - 0.078) < 5e-4


def test_reference_table_complete():
    table = timing_reference_table()
    assert set(table.pipelines()) == set(TIMING_REFERENCE)
    assert len(table.rows) == 9


def test_parameter_validation():
    with pytest.raises(ValueError):
        benchmark_inference([("p", sleeper(0))], sizes=[(8, 8)], reps=2, warmup=1)
    with pytest.raises(ValueError):
        benchmark_inference([("p", sleeper(0))], sizes=[(8, 8)], reps=3, warmup=0)


def test_pipeline_failure_wrapped():
    def broken(h, w):
        raise RuntimeError("boom")

    with pytest.raises(PipelineFailureError, match="broken"):
        benchmark_inference([("broken", broken)], sizes=[(8, 8)], reps=3, warmup=1)


def test_timing_row_validation():
    from restorekit.evaluation.bench import TimingRow

    with pytest.raises(ValueError):
        TimingRow("p", 8, 8, mean_seconds=0.0, std_seconds=0.0, reps=3)
    with pytest.raises(ValueError):
        TimingRow("p", 8, 8, mean_seconds=1.0, std_seconds=0.0, reps=0)


def test_missing_row_raises():
    table = TimingTable.from_recorded({"p": {(8, 8): 1.0}})
    with pytest.raises(KeyError):
        table.mean("p", (16, 16))
