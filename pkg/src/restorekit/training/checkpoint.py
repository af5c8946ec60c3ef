"""Checkpoint store: versioned binary tensor archive plus JSON sidecar.

The archive is a flat name->tensor map written in sorted-name order with no
timestamps, so identical training states serialize to identical bytes (zip
containers do not guarantee that). The sidecar carries architecture
fingerprints, the run config, epoch counters and the run seed; loading
verifies the fingerprint of the receiving architecture.
"""

import json
import struct
from pathlib import Path

import numpy as np
import torch

from ..errors import FingerprintMismatchError, VersionMismatchError

MAGIC = b"RKTA"
FORMAT_VERSION = 1

_DTYPES = {
    "float32": np.float32,
    "float64": np.float64,
    "int64": np.int64,
    "uint8": np.uint8,
}


def save_tensors(path, tensors: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    index = {}
    blobs = []
    offset = 0
    for name in sorted(tensors):
        t = tensors[name]
        arr = t.detach().cpu().numpy() if isinstance(t, torch.Tensor) else np.asarray(t)
        if arr.dtype.name not in _DTYPES:
            raise ValueError(f"{name}: unsupported dtype {arr.dtype}")
        raw = np.ascontiguousarray(arr).tobytes()
        index[name] = {
            "dtype": arr.dtype.name,
            "shape": list(arr.shape),
            "offset": offset,
            "nbytes": len(raw),
        }
        blobs.append(raw)
        offset += len(raw)
    header = json.dumps({"tensors": index}, sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", FORMAT_VERSION))
        fh.write(struct.pack("<Q", len(header)))
        fh.write(header)
        for raw in blobs:
            fh.write(raw)
    return path


def load_tensors(path) -> dict:
    path = Path(path)
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != MAGIC:
            raise VersionMismatchError(f"{path}: not a tensor archive (magic {magic!r})")
        (version,) = struct.unpack("<I", fh.read(4))
        if version != FORMAT_VERSION:
            raise VersionMismatchError(f"{path}: format version {version} != {FORMAT_VERSION}")
        (header_len,) = struct.unpack("<Q", fh.read(8))
        header = json.loads(fh.read(header_len).decode("utf-8"))
        payload = fh.read()
    out = {}
    for name, meta in header["tensors"].items():
        dtype = _DTYPES[meta["dtype"]]
        raw = payload[meta["offset"]: meta["offset"] + meta["nbytes"]]
        arr = np.frombuffer(raw, dtype=dtype).reshape(meta["shape"]).copy()
        out[name] = torch.from_numpy(arr)
    return out


def _optimizer_tensors(prefix: str, optimizer) -> dict:
    out = {}
    state = optimizer.state_dict()["state"]
    for idx, entry in state.items():
        for key, value in entry.items():
            if isinstance(value, torch.Tensor):
                out[f"{prefix}/{idx}/{key}"] = value
            else:
                out[f"{prefix}/{idx}/{key}"] = torch.tensor(float(value), dtype=torch.float64)
    return out


def _restore_optimizer(prefix: str, optimizer, tensors: dict) -> None:
    sd = optimizer.state_dict()
    state = {}
    lead = prefix + "/"
    for name, tensor in tensors.items():
        if not name.startswith(lead):
            continue
        _, idx, key = name.rsplit("/", 2)
        state.setdefault(int(idx), {})[key] = tensor
    sd["state"] = state
    optimizer.load_state_dict(sd)


def save_checkpoint(stem, *, kind: str, modules: dict, optimizers: dict,
                    fingerprints: dict, config: dict, epoch: int,
                    best_val_metric: float, epochs_since_improvement: int,
                    seed: int, buffers: dict | None = None, metrics: dict | None = None):
    """Write `<stem>.tensors` and `<stem>.json`; returns the stem path."""
    stem = Path(stem)
    tensors = {}
    for name, module in modules.items():
        for pname, p in module.state_dict().items():
            tensors[f"params/{name}/{pname}"] = p
    for name, opt in optimizers.items():
        tensors.update(_optimizer_tensors(f"opt/{name}", opt))
    for name, images in (buffers or {}).items():
        if len(images):
            tensors[f"buffer/{name}"] = torch.stack(list(images))
    save_tensors(stem.with_suffix(".tensors"), tensors)
    sidecar = {
        "format_version": FORMAT_VERSION,
        "kind": kind,
        "fingerprints": fingerprints,
        "config": config,
        "epoch": epoch,
        "best_val_metric": best_val_metric,
        "epochs_since_improvement": epochs_since_improvement,
        "seed": seed,
        "metrics": metrics or {},
    }
    stem.with_suffix(".json").write_text(
        json.dumps(sidecar, sort_keys=True, indent=2) + "\n", encoding="utf-8"
    )
    return stem


def load_checkpoint(stem, *, modules: dict, optimizers: dict | None = None,
                    fingerprints: dict | None = None) -> dict:
    """Restore modules/optimizers in place; returns the sidecar dict.

    `fingerprints` maps module name -> expected fingerprint of the receiving
    architecture; a mismatch means the checkpoint belongs to another config.
    """
    stem = Path(stem)
    sidecar_path = stem.with_suffix(".json")
    if not sidecar_path.exists():
        raise VersionMismatchError(f"missing sidecar {sidecar_path}")
    sidecar = json.loads(sidecar_path.read_text(encoding="utf-8"))
    if sidecar.get("format_version") != FORMAT_VERSION:
        raise VersionMismatchError(
            f"{sidecar_path}: format version {sidecar.get('format_version')}"
        )
    for name, expected in (fingerprints or {}).items():
        stored = sidecar["fingerprints"].get(name)
        if stored != expected:
            raise FingerprintMismatchError(
                f"{name}: checkpoint fingerprint {stored} != architecture {expected}"
            )
    tensors = load_tensors(stem.with_suffix(".tensors"))
    for name, module in modules.items():
        prefix = f"params/{name}/"
        state = {k[len(prefix):]: v for k, v in tensors.items() if k.startswith(prefix)}
        module.load_state_dict(state)
    for name, opt in (optimizers or {}).items():
        _restore_optimizer(f"opt/{name}", opt, tensors)
    sidecar["_buffers"] = {
        name.split("/", 1)[1]: [t for t in tensor]
        for name, tensor in tensors.items()
        if name.startswith("buffer/")
    }
    return sidecar
