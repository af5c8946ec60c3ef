import pytest
import torch

from restorekit.errors import FingerprintMismatchError, VersionMismatchError
from restorekit.models import UNetCBAMConfig, architecture_fingerprint, init_unet
from restorekit.training import load_checkpoint, load_tensors, save_checkpoint, save_tensors


def test_tensor_archive_round_trip(tmp_path):
    tensors = {
        "a": torch.arange(12, dtype=torch.float32).reshape(3, 4),
        "b/c": torch.randn(2, 2, dtype=torch.float64),
        "count": torch.tensor([7], dtype=torch.int64),
        "bytes": torch.zeros(5, dtype=torch.uint8),
    }
    path = save_tensors(tmp_path / "t.tensors", tensors)
    back = load_tensors(path)
    assert set(back) == set(tensors)
    for k in tensors:
        assert torch.equal(back[k], tensors[k])
        assert back[k].dtype == tensors[k].dtype


def test_archive_bytes_deterministic(tmp_path):
    tensors = {"x": torch.randn(4, 4), "y": torch.randn(2)}
    a = save_tensors(tmp_path / "a.tensors", tensors).read_bytes()
    b = save_tensors(tmp_path / "b.tensors", dict(reversed(tensors.items()))).read_bytes()
    assert a == b


def test_bad_magic_rejected(tmp_path):
    path = tmp_path / "bad.tensors"
    path.write_bytes(b"ZZZZ" + b"0" * 64)
    with pytest.raises(VersionMismatchError):
        load_tensors(path)


def make_state(seed=0):
    cfg = UNetCBAMConfig(depth=2, base_channels=8)
    net = init_unet(cfg, seed)
    opt = torch.optim.Adam(net.parameters(), lr=1e-3)
    out = net(torch.rand(1, 3, 8, 8))
    out.mean().backward()
    opt.step()
    fp = {"model": architecture_fingerprint("unet_cbam", cfg, net)}
    return cfg, net, opt, fp


def save_state(stem, net, opt, fp):
    return save_checkpoint(
        stem, kind="pairwise", modules={"model": net}, optimizers={"model": opt},
        fingerprints=fp, config={"model": {"depth": 2}}, epoch=1,
        best_val_metric=0.5, epochs_since_improvement=0, seed=3,
    )


def test_checkpoint_round_trip_restores_exactly(tmp_path):
    cfg, net, opt, fp = make_state()
    save_state(tmp_path / "ck", net, opt, fp)

    net2 = init_unet(cfg, 99)
    opt2 = torch.optim.Adam(net2.parameters(), lr=1e-3)
    sidecar = load_checkpoint(tmp_path / "ck", modules={"model": net2},
                              optimizers={"model": opt2}, fingerprints=fp)
    assert sidecar["epoch"] == 1
    for a, b in zip(net.state_dict().values(), net2.state_dict().values()):
        assert torch.equal(a, b)
    s1, s2 = opt.state_dict()["state"], opt2.state_dict()["state"]
    assert set(s1) == set(s2)
    for idx in s1:
        for key in s1[idx]:
            assert torch.equal(torch.as_tensor(s1[idx][key]).float(),
                               torch.as_tensor(s2[idx][key]).float())


def test_save_load_save_idempotent(tmp_path):
    cfg, net, opt, fp = make_state()
    save_state(tmp_path / "one", net, opt, fp)

    net2 = init_unet(cfg, 1)
    opt2 = torch.optim.Adam(net2.parameters(), lr=1e-3)
    load_checkpoint(tmp_path / "one", modules={"model": net2},
                    optimizers={"model": opt2}, fingerprints=fp)
    save_state(tmp_path / "two", net2, opt2, fp)
    assert (tmp_path / "one.tensors").read_bytes() == (tmp_path / "two.tensors").read_bytes()
    assert (tmp_path / "one.json").read_bytes() == (tmp_path / "two.json").read_bytes()


def test_fingerprint_mismatch(tmp_path):
    cfg, net, opt, fp = make_state()
    save_state(tmp_path / "ck", net, opt, fp)

    other_cfg = UNetCBAMConfig(depth=3, base_channels=8)
    other = init_unet(other_cfg, 0)
    other_fp = {"model": architecture_fingerprint("unet_cbam", other_cfg, other)}
    with pytest.raises(FingerprintMismatchError):
        load_checkpoint(tmp_path / "ck", modules={"model": other}, fingerprints=other_fp)


def test_missing_sidecar(tmp_path):
    with pytest.raises(VersionMismatchError):
        load_checkpoint(tmp_path / "absent", modules={})
