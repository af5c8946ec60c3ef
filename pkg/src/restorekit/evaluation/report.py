"""Result rendering: quality report and timing CSVs, optional plots.

CSV output is byte-stable for identical inputs: fixed column order, %.6g
float formatting, no timestamps. Plot emission imports matplotlib lazily so
the core pipeline carries no graphics dependency.
"""

from dataclasses import dataclass
from pathlib import Path

from ..errors import WriteError


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


@dataclass
class QualityRow:
    variant: str
    fid_schnell: float | None = None
    fid_dev: float | None = None
    clip_iqa: float | None = None
    ssim: float | None = None
    psnr: float | None = None

    @property
    def fid_diff(self) -> float | None:
        # always derived, never stored: keeps the subtraction exact
        if self.fid_schnell is None or self.fid_dev is None:
            return None
        return self.fid_schnell - self.fid_dev


class MetricReport:
    def __init__(self, rows, note: str = ""):
        self.rows = list(rows)
        self.note = note

    def row(self, variant: str) -> QualityRow:
        for r in self.rows:
            if r.variant == variant:
                return r
        raise KeyError(variant)


def _write_text(path, text: str) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise WriteError(f"{path}: {exc}") from exc
    return path


def write_metrics_report(report: MetricReport, path) -> Path:
    lines = []
    if report.note:
        lines.append(f"# {report.note}")
    lines.append("variant,fid_schnell,fid_dev,fid_diff,clip_iqa")
    for r in report.rows:
        lines.append(
            ",".join([r.variant, _fmt(r.fid_schnell), _fmt(r.fid_dev),
                      _fmt(r.fid_diff), _fmt(r.clip_iqa)])
        )
    return _write_text(path, "\n".join(lines) + "\n")


def write_timing_csv(table, path) -> Path:
    lines = ["pipeline,size,mean_seconds,std_seconds,reps"]
    for row in table.rows:
        lines.append(
            ",".join([row.pipeline, row.size_label, _fmt(row.mean_seconds),
                      _fmt(row.std_seconds), str(row.reps)])
        )
    return _write_text(path, "\n".join(lines) + "\n")


def plot_timing(table, path) -> Path:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(6, 4))
    for name in table.pipelines():
        rows = sorted(
            (r for r in table.rows if r.pipeline == name),
            key=lambda r: r.height * r.width,
        )
        ax.plot([r.size_label for r in rows], [r.mean_seconds for r in rows],
                marker="o", label=name)
    ax.set_xlabel("Image size")
    ax.set_ylabel("Avg. inference time [s]")
    ax.set_ylim(bottom=0)
    ax.grid(True)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_scatter(points, labels, path, title: str = "") -> Path:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(5, 5))
    seen = {}
    for (x, y), lab in zip(points, labels):
        seen.setdefault(lab, []).append((x, y))
    for lab, pts in seen.items():
        xs, ys = zip(*pts)
        ax.scatter(xs, ys, s=12, label=str(lab))
    if title:
        ax.set_title(title)
    if len(seen) > 1:
        ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path
