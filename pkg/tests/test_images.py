import numpy as np
import pytest
import torch

from restorekit.core import as_image, load_image, save_image
from restorekit.errors import DecodeError, FileMissingError


def test_saturated_png_loads_as_ones(tmp_path):
    save_image(torch.ones(3, 2, 2), tmp_path / "white.png")
    img = load_image(tmp_path / "white.png")
    assert torch.equal(img, torch.ones(3, 2, 2))


def test_black_png_loads_as_zeros(tmp_path):
    save_image(torch.zeros(3, 2, 2), tmp_path / "black.png")
    assert torch.equal(load_image(tmp_path / "black.png"), torch.zeros(3, 2, 2))


def test_mid_value_quantization(tmp_path):
    # 0.5 stores as round(0.5*255) = 128, reloads as 128/255
    save_image(torch.full((3, 2, 2), 0.5), tmp_path / "mid.png")
    img = load_image(tmp_path / "mid.png")
    assert torch.allclose(img, torch.full((3, 2, 2), 128.0 / 255.0))
    assert abs(img[0, 0, 0].item() - 0.50196) < 1e-4


def test_round_trip_within_half_quantum(tmp_path):
    rng = np.random.Generator(np.random.PCG64(0))
    for trial in range(5):
        img = as_image(rng.uniform(0, 1, size=(3, 9, 7)).astype(np.float32))
        save_image(img, tmp_path / f"t{trial}.png")
        back = load_image(tmp_path / f"t{trial}.png")
        assert (back - img).abs().max().item() <= 1.0 / 510.0 + 1e-7


def test_second_save_is_byte_identical(tmp_path):
    rng = np.random.Generator(np.random.PCG64(1))
    img = as_image(rng.uniform(0, 1, size=(3, 8, 8)).astype(np.float32))
    save_image(img, tmp_path / "a.png")
    once = load_image(tmp_path / "a.png")
    save_image(once, tmp_path / "b.png")
    save_image(load_image(tmp_path / "b.png"), tmp_path / "c.png")
    assert (tmp_path / "b.png").read_bytes() == (tmp_path / "c.png").read_bytes()


def test_grayscale_round_trip(tmp_path):
    img = as_image(np.linspace(0, 1, 16, dtype=np.float32).reshape(1, 4, 4))
    save_image(img, tmp_path / "gray.png")
    back = load_image(tmp_path / "gray.png")
    assert back.shape == (1, 4, 4)
    assert (back - img).abs().max().item() <= 1.0 / 510.0 + 1e-7


def test_missing_file_raises():
    with pytest.raises(FileMissingError):
        load_image("/nonexistent/nope.png")


def test_non_png_raises(tmp_path):
    bad = tmp_path / "fake.png"
    bad.write_bytes(b"not an image at all")
    with pytest.raises(DecodeError):
        load_image(bad)


def test_jpeg_content_rejected(tmp_path):
    from PIL import Image

    path = tmp_path / "actually.jpg.png"
    Image.new("RGB", (4, 4)).save(path, format="JPEG")
    with pytest.raises(DecodeError):
        load_image(path)


def test_validation_rejects_bad_shapes():
    with pytest.raises(ValueError):
        as_image(np.zeros((2, 4, 4), dtype=np.float32))
    with pytest.raises(ValueError):
        as_image(np.full((3, 4, 4), 2.0, dtype=np.float32))
