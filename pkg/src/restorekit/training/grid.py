"""Hyperparameter grid over (lambda_cycle, learning rate).

Cells run in deterministic order; failures are recorded and ranking
proceeds over the successes. Records rank ascending by best loss L with
ties broken by descending full-cycle SSIM.
"""

import logging
from dataclasses import dataclass
from pathlib import Path

from ..core.config import RunConfig
from ..errors import ToolkitError
from .common import RunRecord
from .cyclegan import train_cyclegan

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class GridSpec:
    lambda_values: tuple
    lr_values: tuple

    def __post_init__(self):
        if not self.lambda_values or not self.lr_values:
            raise ValueError("grid axes must be non-empty")

    def cells(self):
        return [(lam, lr) for lam in self.lambda_values for lr in self.lr_values]


def rank_records(records) -> list:
    """Ascending by loss L, ties broken by descending SSIM."""
    def key(r: RunRecord):
        ssim = r.ssim_full_cycle if r.ssim_full_cycle is not None else -1.0
        return (r.best_loss, -ssim)
    return sorted(records, key=key)


def grid_search(spec: GridSpec, dir_a, dir_b, base_config: RunConfig,
                out_dir="runs/grid"):
    """Run every (lambda, lr) cell; returns (ranked records, failures)."""
    out_dir = Path(out_dir)
    records = []
    failures = []
    for lam, lr in spec.cells():
        cell_name = f"lam{lam:g}_lr{lr:g}"
        cell_cfg = base_config.with_overrides(
            {"loss.lambda_cycle": float(lam), "optim.lr": float(lr)}
        )
        try:
            _, record = train_cyclegan(cell_cfg, dir_a, dir_b, out_dir=out_dir / cell_name)
            records.append(record)
        except ToolkitError as exc:
            log.warning("grid cell %s failed: %s", cell_name, exc)
            failures.append((cell_name, str(exc)))
    ranked = rank_records(records)
    write_grid_summary(ranked, out_dir / "grid_summary.csv", failures)
    return ranked, failures


def write_grid_summary(ranked, path, failures=()) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["rank,lambda_cycle,learning_rate,best_loss,ssim_full_cycle,epochs,seconds,checkpoint"]
    for rank, r in enumerate(ranked, start=1):
        ssim = "" if r.ssim_full_cycle is None else f"{r.ssim_full_cycle:.6g}"
        lines.append(
            f"{rank},{r.hyperparams.get('lambda_cycle', '')},{r.hyperparams.get('lr', '')},"
            f"{r.best_loss:.6g},{ssim},{r.epochs_run},{r.seconds:.3f},{r.checkpoint}"
        )
    for name, err in failures:
        lines.append(f"failed,{name},,,,,,{err}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
