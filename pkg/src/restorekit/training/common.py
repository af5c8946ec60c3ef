"""Shared training machinery: early stopping, run records, metrics logging."""

from dataclasses import dataclass, field
from pathlib import Path


@dataclass
class RunRecord:
    hyperparams: dict
    best_loss: float
    ssim_full_cycle: float | None
    checkpoint: str
    seconds: float
    epochs_run: int = 0


@dataclass
class EarlyStopper:
    """Stop after `patience` consecutive epochs without strict improvement."""

    patience: int
    best: float = float("inf")
    best_epoch: int = 0
    epochs_since_improvement: int = 0

    def update(self, epoch: int, value: float) -> bool:
        if value < self.best:
            self.best = value
            self.best_epoch = epoch
            self.epochs_since_improvement = 0
            return True
        self.epochs_since_improvement += 1
        return False

    @property
    def should_stop(self) -> bool:
        return self.epochs_since_improvement >= self.patience


@dataclass
class MetricsLog:
    path: Path
    rows: list = field(default_factory=list)

    def add(self, epoch, train_loss, val_loss, val_ssim, seconds):
        self.rows.append((epoch, train_loss, val_loss, val_ssim, seconds))
        self.flush()

    def flush(self):
        def fmt(v):
            if v is None:
                return ""
            if isinstance(v, float):
                return f"{v:.6g}"
            return str(v)

        lines = ["epoch,train_loss,val_loss,val_ssim,seconds"]
        for row in self.rows:
            lines.append(",".join(fmt(v) for v in row))
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.path.write_text("\n".join(lines) + "\n", encoding="utf-8")
