from .quality import ssim, psnr
from .fid import GaussianStats, fit_gaussian, fid, fid_diff
from .scoring import ConstantScorer, no_reference_quality
from .bench import TimingTable, TimingRow, benchmark_inference
from .report import MetricReport, QualityRow, write_metrics_report, write_timing_csv

__all__ = [
    "ssim",
    "psnr",
    "GaussianStats",
    "fit_gaussian",
    "fid",
    "fid_diff",
    "ConstantScorer",
    "no_reference_quality",
    "TimingTable",
    "TimingRow",
    "benchmark_inference",
    "MetricReport",
    "QualityRow",
    "write_metrics_report",
    "write_timing_csv",
]
