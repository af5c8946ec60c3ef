"""Keyed-hash seed derivation.

Every piece of randomness in the pipeline is derived from a run seed plus a
string/int key path, so results never depend on call order or list order.
"""

import hashlib


def _encode(parts) -> bytes:
    buf = bytearray()
    for p in parts:
        if isinstance(p, str):
            raw = p.encode("utf-8")
            buf += b"s" + len(raw).to_bytes(4, "little") + raw
        elif isinstance(p, bool):
            buf += b"b" + bytes([p])
        elif isinstance(p, int):
            buf += b"i" + p.to_bytes(16, "little", signed=True)
        elif isinstance(p, bytes):
            buf += b"r" + len(p).to_bytes(4, "little") + p
        else:
            raise TypeError(f"unsupported seed part type: {type(p)!r}")
    return bytes(buf)


def derive_seed(*parts) -> int:
    """Collapse a key path into a 64-bit unsigned seed."""
    digest = hashlib.blake2b(_encode(parts), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def torch_seed(*parts) -> int:
    """Seed suitable for torch.Generator.manual_seed (non-negative int64)."""
    return derive_seed(*parts) & 0x7FFF_FFFF_FFFF_FFFF


def unit_interval(*parts) -> float:
    """Map a key path to a deterministic float in [0, 1)."""
    return derive_seed(*parts) / 2.0**64
