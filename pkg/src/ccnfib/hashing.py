"""Hash primitives: seeded 64-bit FNV-1a, incremental prefix hashing, and
double-hashed index families for filters.

All randomized behaviour in the package derives from the two fixed seeds
below, so every table and measurement is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .names import Name

__all__ = [
    "FNV_OFFSET",
    "FNV_PRIME",
    "INDEX_SEED_BASE",
    "INDEX_SEED_STEP",
    "fnv1a64",
    "fnv1a64_batch",
    "fold32",
    "HashState",
    "hash_prefix",
    "serialize_prefix",
    "IndexFamily",
    "index_family",
]

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1

# Seeds for the two independent index-hash instances (double hashing).
INDEX_SEED_BASE = 0x9E3779B97F4A7C15
INDEX_SEED_STEP = 0xC2B2AE3D27D4EB4F


def fnv1a64(data: bytes, seed: int = 0) -> int:
    """64-bit FNV-1a over ``data``; ``seed`` perturbs the offset basis."""
    h = FNV_OFFSET ^ (seed & _MASK64)
    for b in data:
        h = ((h ^ b) * FNV_PRIME) & _MASK64
    return h


def fnv1a64_batch(data: np.ndarray, lengths: np.ndarray, seed: int = 0) -> np.ndarray:
    """Row-wise FNV-1a over a padded byte matrix.

    ``data`` is a (rows, width) uint8 array; row ``i`` hashes its first
    ``lengths[i]`` bytes. Agrees exactly with :func:`fnv1a64` on each row.
    """
    data = np.ascontiguousarray(data, dtype=np.uint8)
    lengths = np.asarray(lengths)
    rows, width = data.shape
    h = np.full(rows, FNV_OFFSET ^ (seed & _MASK64), dtype=np.uint64)
    prime = np.uint64(FNV_PRIME)
    for col in range(width):
        active = lengths > col
        if not active.any():
            break
        mixed = (h ^ data[:, col]) * prime
        h = np.where(active, mixed, h)
    return h


def fold32(h):
    """Fold a 64-bit hash (int or uint64 array) to 32 bits by xor-folding."""
    if isinstance(h, np.ndarray):
        return (h ^ (h >> np.uint64(32))) & np.uint64(0xFFFFFFFF)
    return (h ^ (h >> 32)) & 0xFFFFFFFF


class HashState:
    """Accumulated hash over a component sequence, snapshot-able per component.

    Feeding components one at a time yields the same digest as hashing the
    whole serialized prefix at once, which lets a lookup hash each component
    of an interest exactly once and reuse the intermediate states.
    """

    __slots__ = ("_h",)

    def __init__(self, _h: int = FNV_OFFSET) -> None:
        self._h = _h

    def feed(self, component: bytes) -> "HashState":
        """Return a new state with ``component`` (length-tagged) folded in."""
        h = ((self._h ^ (len(component) & 0xFF)) * FNV_PRIME) & _MASK64
        for b in component:
            h = ((h ^ b) * FNV_PRIME) & _MASK64
        return HashState(h)

    def digest64(self) -> int:
        return self._h

    def digest32(self) -> int:
        return fold32(self._h)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HashState):
            return NotImplemented
        return self._h == other._h

    def __hash__(self) -> int:
        return hash(self._h)


def serialize_prefix(name: Name) -> bytes:
    """Length-tagged concatenation of a name's components (hash input form).

    The tag byte makes component boundaries significant, so "/a/b" and "/ab"
    hash differently. Rejects the root name, which is never a FIB key.
    """
    if len(name) == 0:
        raise ValueError("root name has no hashable prefix form")
    return b"".join(bytes((len(c) & 0xFF,)) + c for c in name.components)


def hash_prefix(prefix: Name) -> int:
    """32-bit hash of a non-root name, boundary-aware across components."""
    if len(prefix) == 0:
        raise ValueError("root name has no hashable prefix form")
    state = HashState()
    for component in prefix.components:
        state = state.feed(component)
    return state.digest32()


@dataclass(frozen=True)
class IndexFamily:
    """k slot indices in [0, m) derived from two 64-bit hashes.

    index_i = (h1 + i * h2) mod m, with the sum taken in the 64-bit ring and
    h2 forced odd so every residue stays reachable.
    """

    k: int
    m: int
    h1: int
    h2: int

    def indices(self) -> np.ndarray:
        i = np.arange(self.k, dtype=np.uint64)
        idx = (np.uint64(self.h1) + i * np.uint64(self.h2)) % np.uint64(self.m)
        return idx.astype(np.intp)


def index_family(element: bytes, k: int, m: int) -> IndexFamily:
    """Derive the k-index double-hashing family for one element."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if m < 1:
        raise ValueError("m must be >= 1")
    h1 = fnv1a64(element, INDEX_SEED_BASE)
    h2 = fnv1a64(element, INDEX_SEED_STEP) | 1
    return IndexFamily(k=k, m=m, h1=h1, h2=h2)
