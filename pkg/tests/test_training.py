import pytest
import torch

from restorekit.core import RunConfig
from restorekit.errors import DivergenceDetectedError
from restorekit.training import EarlyStopper, rank_records, train_cyclegan, train_pairwise
from restorekit.training.common import RunRecord

TINY_PAIRWISE = {
    "model": {"depth": 3, "base_channels": 8},
    "train": {"batch_size": 8, "max_epochs": 3, "seed": 4},
}
TINY_CYCLEGAN = {
    "model": {"base_channels": 8, "residual_blocks": 1, "disc_base": 16, "use_esa": True},
    "loss": {"lambda_cycle": 2.0},
    "train": {"batch_size": 4, "max_epochs": 2, "seed": 9, "val_fraction": 0.2,
              "buffer_size": 6},
}


def test_early_stopper_policy():
    stopper = EarlyStopper(patience=10)
    assert stopper.update(1, 1.0)  # first value always improves
    for epoch in range(2, 12):
        assert not stopper.update(epoch, 1.0)
    assert stopper.should_stop
    assert stopper.best_epoch == 1


def test_early_stopper_resets_on_improvement():
    stopper = EarlyStopper(patience=2)
    stopper.update(1, 1.0)
    stopper.update(2, 1.0)
    assert stopper.update(3, 0.5)
    assert stopper.epochs_since_improvement == 0
    assert not stopper.should_stop


def test_pairwise_deterministic_checkpoints(tiny_splits, tmp_path):
    train_m, val_m = tiny_splits
    cfg = RunConfig(TINY_PAIRWISE)
    train_pairwise(cfg, train_m, val_m, out_dir=tmp_path / "a")
    train_pairwise(cfg, train_m, val_m, out_dir=tmp_path / "b")
    assert (tmp_path / "a/checkpoints/best.tensors").read_bytes() == \
           (tmp_path / "b/checkpoints/best.tensors").read_bytes()
    assert (tmp_path / "a/checkpoints/best.json").read_bytes() == \
           (tmp_path / "b/checkpoints/best.json").read_bytes()


def test_pairwise_patience_injected_constant(tiny_splits, tmp_path):
    train_m, val_m = tiny_splits
    cfg = RunConfig({"model": {"depth": 2, "base_channels": 8},
                     "train": {"batch_size": 8, "max_epochs": 60, "seed": 0}})
    _, record = train_pairwise(cfg, train_m, val_m, out_dir=tmp_path,
                               val_metric_fn=lambda epoch, value: 1.0)
    assert record.epochs_run == 11  # 1 baseline + 10 non-improving


def test_pairwise_resume_equals_uninterrupted(tiny_splits, tmp_path):
    train_m, val_m = tiny_splits
    cfg4 = RunConfig(TINY_PAIRWISE).with_overrides({"train.max_epochs": 4})
    cfg2 = RunConfig(TINY_PAIRWISE).with_overrides({"train.max_epochs": 2})
    train_pairwise(cfg4, train_m, val_m, out_dir=tmp_path / "full")
    train_pairwise(cfg2, train_m, val_m, out_dir=tmp_path / "part")
    train_pairwise(cfg4, train_m, val_m, out_dir=tmp_path / "part",
                   resume_from=tmp_path / "part/checkpoints/last")
    assert (tmp_path / "full/checkpoints/last.tensors").read_bytes() == \
           (tmp_path / "part/checkpoints/last.tensors").read_bytes()


def test_pairwise_divergence_guard(tiny_splits, tmp_path, monkeypatch):
    train_m, val_m = tiny_splits
    import restorekit.training.pairwise as pw

    def poisoned(*args, **kwargs):
        return torch.tensor(float("nan"), requires_grad=True)

    monkeypatch.setattr(pw, "combined_loss", poisoned)
    cfg = RunConfig(TINY_PAIRWISE)
    with pytest.raises(DivergenceDetectedError):
        train_pairwise(cfg, train_m, val_m, out_dir=tmp_path)


def test_pairwise_metrics_csv_written(tiny_splits, tmp_path):
    train_m, val_m = tiny_splits
    cfg = RunConfig(TINY_PAIRWISE).with_overrides({"train.max_epochs": 1})
    train_pairwise(cfg, train_m, val_m, out_dir=tmp_path)
    lines = (tmp_path / "metrics.csv").read_text().splitlines()
    assert lines[0] == "epoch,train_loss,val_loss,val_ssim,seconds"
    assert lines[1].startswith("0,,")  # epoch-0 validation row
    assert len(lines) == 3
    assert (tmp_path / "config.yaml").exists()


def test_cyclegan_deterministic_and_resume(tiny_dataset, tmp_path):
    data_root = tiny_dataset.root
    cfg = RunConfig(TINY_CYCLEGAN)
    train_cyclegan(cfg, data_root / "domain_a", data_root / "domain_b",
                   out_dir=tmp_path / "a")
    train_cyclegan(cfg, data_root / "domain_a", data_root / "domain_b",
                   out_dir=tmp_path / "b")
    assert (tmp_path / "a/checkpoints/last.tensors").read_bytes() == \
           (tmp_path / "b/checkpoints/last.tensors").read_bytes()

    cfg4 = cfg.with_overrides({"train.max_epochs": 4})
    train_cyclegan(cfg4, data_root / "domain_a", data_root / "domain_b",
                   out_dir=tmp_path / "full")
    train_cyclegan(cfg4, data_root / "domain_a", data_root / "domain_b",
                   out_dir=tmp_path / "b", resume_from=tmp_path / "b/checkpoints/last")
    assert (tmp_path / "full/checkpoints/last.tensors").read_bytes() == \
           (tmp_path / "b/checkpoints/last.tensors").read_bytes()


def test_cyclegan_val_ssim_reported(tiny_dataset, tmp_path):
    cfg = RunConfig(TINY_CYCLEGAN).with_overrides({"train.max_epochs": 1})
    _, record = train_cyclegan(cfg, tiny_dataset.root / "domain_a",
                               tiny_dataset.root / "domain_b", out_dir=tmp_path)
    assert record.ssim_full_cycle is not None
    assert -1.0 <= record.ssim_full_cycle <= 1.0
    assert record.hyperparams["lambda_cycle"] == 2.0


def test_rank_records_orders_by_loss_then_ssim():
    records = [
        RunRecord({"lambda_cycle": 10.0, "lr": 1e-4}, 0.9, 0.90, "", 0.0),
        RunRecord({"lambda_cycle": 5.0, "lr": 1e-4}, 0.7, 0.92, "", 0.0),
        RunRecord({"lambda_cycle": 2.0, "lr": 1e-4}, 0.7, 0.95, "", 0.0),
    ]
    ranked = rank_records(records)
    assert ranked[0].ssim_full_cycle == 0.95  # tie on L broken by SSIM
    assert ranked[-1].best_loss == 0.9
