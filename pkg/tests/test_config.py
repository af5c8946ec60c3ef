import pytest

from restorekit.core import RunConfig
from restorekit.core.config import parse_override


def test_yaml_round_trip(tmp_path):
    cfg = RunConfig({"model": {"depth": 6, "base_channels": 32},
                     "optim": {"lr": 5e-5}, "name": "toy"})
    path = cfg.to_file(tmp_path / "c.yaml")
    assert RunConfig.from_file(path) == cfg


def test_dotted_access_and_overrides():
    cfg = RunConfig({"train": {"seed": 0, "batch_size": 8}})
    assert cfg.get("train.batch_size") == 8
    assert cfg.get("train.missing", "fallback") == "fallback"
    updated = cfg.with_overrides({"train.seed": 9, "optim.lr": 1e-4})
    assert updated.get("train.seed") == 9
    assert updated.get("optim.lr") == 1e-4
    assert cfg.get("train.seed") == 0  # original untouched


def test_defaults_merge():
    defaults = {"a": {"x": 1, "y": 2}, "b": 3}
    cfg = RunConfig({"a": {"y": 20}}).merged_over(defaults)
    assert cfg.get("a.x") == 1
    assert cfg.get("a.y") == 20
    assert cfg.get("b") == 3


def test_content_hash_stable_and_sensitive():
    a = RunConfig({"x": 1, "y": {"z": [1, 2]}})
    b = RunConfig({"y": {"z": [1, 2]}, "x": 1})
    assert a.content_hash() == b.content_hash()
    assert a.content_hash() != RunConfig({"x": 2, "y": {"z": [1, 2]}}).content_hash()


def test_parse_override_types():
    assert parse_override("train.lr=1e-4") == ("train.lr", 1e-4)
    assert parse_override("model.use_esa=true") == ("model.use_esa", True)
    assert parse_override("name=toy") == ("name", "toy")
    with pytest.raises(ValueError):
        parse_override("no-equals-sign")


def test_require_raises():
    with pytest.raises(KeyError):
        RunConfig({}).require("nope.nope")
