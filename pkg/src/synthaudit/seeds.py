"""Deterministic seed derivation.

A single 64-bit master seed drives every run. Components draw sub-streams
derived by hashing a label path, so adding a new consumer never shifts the
randomness of an existing one and independent components never share a
stream by accident.
"""
from hashlib import blake2b

import numpy as np


def derive(master: int, *path) -> int:
    """Derive a 64-bit sub-seed from ``master`` and a label path."""
    h = blake2b(digest_size=8)
    h.update(str(int(master)).encode())
    for part in path:
        h.update(b"\x00")
        h.update(str(part).encode())
    return int.from_bytes(h.digest(), "big")


def rng(master: int, *path) -> np.random.Generator:
    """A numpy Generator seeded from the derived sub-seed."""
    return np.random.default_rng(derive(master, *path))
