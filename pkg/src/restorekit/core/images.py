"""PNG image I/O.

In-memory images are float32 torch tensors of shape (C, H, W) with values in
[0, 1] and C in {1, 3}. PNG at the boundary is 8-bit, so a save/load round
trip moves values by at most 1/510 (half a quantization step).
"""

from pathlib import Path

import numpy as np
import torch
from PIL import Image, UnidentifiedImageError

from ..errors import DecodeError, FileMissingError, WriteError

ImageTensor = torch.Tensor


def validate_image(img: torch.Tensor) -> torch.Tensor:
    if not isinstance(img, torch.Tensor):
        raise TypeError(f"expected a torch.Tensor, got {type(img)!r}")
    if img.ndim != 3 or img.shape[0] not in (1, 3):
        raise ValueError(f"expected shape (C, H, W) with C in {{1, 3}}, got {tuple(img.shape)}")
    if img.shape[1] < 1 or img.shape[2] < 1:
        raise ValueError(f"degenerate spatial size {tuple(img.shape)}")
    if not torch.isfinite(img).all():
        raise ValueError("image contains non-finite values")
    if img.min() < 0.0 or img.max() > 1.0:
        raise ValueError("image values outside [0, 1]")
    return img


def as_image(array) -> torch.Tensor:
    """Convert an (C, H, W) or (H, W) numpy array to a validated image tensor."""
    arr = np.asarray(array, dtype=np.float32)
    if arr.ndim == 2:
        arr = arr[None]
    return validate_image(torch.from_numpy(np.ascontiguousarray(arr)))


def load_image(path) -> torch.Tensor:
    """Load a PNG file into a (C, H, W) float32 tensor with values v/255."""
    path = Path(path)
    if not path.exists():
        raise FileMissingError(str(path))
    try:
        with Image.open(path) as im:
            if im.format != "PNG":
                raise DecodeError(f"{path}: not a PNG file (format={im.format})")
            if im.mode not in ("L", "RGB"):
                im = im.convert("RGB" if im.mode not in ("1", "I", "F") else "L")
            arr = np.asarray(im, dtype=np.float32) / 255.0
    except UnidentifiedImageError as exc:
        raise DecodeError(f"{path}: {exc}") from exc
    except OSError as exc:
        raise DecodeError(f"{path}: {exc}") from exc
    if arr.ndim == 2:
        arr = arr[None]
    else:
        arr = arr.transpose(2, 0, 1)
    return validate_image(torch.from_numpy(np.ascontiguousarray(arr)))


def save_image(img: torch.Tensor, path) -> None:
    """Quantize to 8 bits (round(v * 255)) and write a PNG."""
    validate_image(img)
    arr = img.detach().cpu().numpy()
    quant = np.clip(np.rint(arr * 255.0), 0, 255).astype(np.uint8)
    if quant.shape[0] == 1:
        pil = Image.fromarray(quant[0], mode="L")
    else:
        pil = Image.fromarray(quant.transpose(1, 2, 0), mode="RGB")
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        pil.save(path, format="PNG")
    except OSError as exc:
        raise WriteError(f"{path}: {exc}") from exc
