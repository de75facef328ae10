"""Deterministic per-document randomness.

Sampling decisions are keyed on (document id, seed) instead of a sequential
RNG, so they do not depend on processing order or worker count.
"""

import hashlib
import struct

__all__ = ["stable_hash64", "unit_uniform"]

_TWO64 = float(2**64)


def stable_hash64(key: str, seed: int) -> int:
    """64-bit hash of a string key mixed with a 64-bit seed."""
    salt = struct.pack("<Q", seed & 0xFFFFFFFFFFFFFFFF)
    digest = hashlib.blake2b(key.encode("utf-8"), digest_size=8, salt=salt).digest()
    return int.from_bytes(digest, "big")


def unit_uniform(key: str, seed: int) -> float:
    """Uniform in [0, 1) derived from stable_hash64."""
    return stable_hash64(key, seed) / _TWO64
