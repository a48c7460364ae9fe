"""The four FIB variants behind one insert/remove/lookup interface.

ReferenceFib keeps full prefixes in shortlex order and is the ground truth
for longest prefix match. HashFib replaces prefixes with 32-bit hashes.
BloomFib and CountingBloomFib keep one filter per face and store each
prefix in the filter of every face it is assigned to.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Iterator, NamedTuple

from . import hashing
from .filters import BloomFilter, CountingBloomFilter, FilterParams
from .names import Name

__all__ = [
    "FaceSet",
    "LookupResult",
    "HashCollisionError",
    "ReferenceFib",
    "HashFib",
    "BloomFib",
    "CountingBloomFib",
]


@dataclass(frozen=True)
class FaceSet:
    """Fixed-width bit vector over faces 1..face_count."""

    face_count: int
    mask: int = 0

    def __post_init__(self) -> None:
        if self.face_count < 1:
            raise ValueError("face_count must be >= 1")
        if not 0 <= self.mask < (1 << self.face_count):
            raise ValueError("mask exceeds face_count width")

    @classmethod
    def of(cls, face_count: int, faces=()) -> "FaceSet":
        out = cls(face_count)
        for face in faces:
            out = out.with_face(face)
        return out

    def _check(self, face: int) -> None:
        if not 1 <= face <= self.face_count:
            raise ValueError(f"face {face} outside 1..{self.face_count}")

    def with_face(self, face: int) -> "FaceSet":
        self._check(face)
        return FaceSet(self.face_count, self.mask | (1 << (face - 1)))

    def without_face(self, face: int) -> "FaceSet":
        self._check(face)
        return FaceSet(self.face_count, self.mask & ~(1 << (face - 1)))

    def __contains__(self, face: int) -> bool:
        return 1 <= face <= self.face_count and bool(self.mask >> (face - 1) & 1)

    def __iter__(self) -> Iterator[int]:
        for face in range(1, self.face_count + 1):
            if self.mask >> (face - 1) & 1:
                yield face

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __bool__(self) -> bool:
        return self.mask != 0

    def __or__(self, other: "FaceSet") -> "FaceSet":
        if other.face_count != self.face_count:
            raise ValueError("face_count mismatch")
        return FaceSet(self.face_count, self.mask | other.mask)

    def issuperset(self, other: "FaceSet") -> bool:
        return self.mask & other.mask == other.mask


class LookupResult(NamedTuple):
    """Outcome of a longest-prefix-match lookup.

    matched_depth is the component count of the matched prefix; 0 with an
    empty face set means no match.
    """

    matched_depth: int
    faces: FaceSet


class HashCollisionError(Exception):
    """Two distinct prefixes mapped to the same 32-bit hash value.

    Surfaced instead of silently merging, because a merge would union the
    face sets of unrelated prefixes.
    """

    def __init__(self, existing: Name, candidate: Name, value: int) -> None:
        super().__init__(
            f"hash 0x{value:08x} already bound to {existing} (offered {candidate})"
        )
        self.existing = existing
        self.candidate = candidate
        self.value = value


def _check_prefix(prefix: Name) -> None:
    if len(prefix) == 0:
        raise ValueError("root name is not a legal FIB prefix")


class ReferenceFib:
    """Sorted list of (prefix, face bit vector) entries; the ground truth."""

    def __init__(self, face_count: int) -> None:
        if face_count < 1:
            raise ValueError("face_count must be >= 1")
        self.face_count = face_count
        self._names: list[Name] = []
        self._faces: list[FaceSet] = []

    def __len__(self) -> int:
        return len(self._names)

    def entries(self) -> Iterator[tuple[Name, FaceSet]]:
        return iter(zip(self._names, self._faces))

    def _locate(self, prefix: Name) -> tuple[int, bool]:
        i = bisect.bisect_left(self._names, prefix)
        return i, i < len(self._names) and self._names[i] == prefix

    def insert(self, prefix: Name, face: int) -> None:
        _check_prefix(prefix)
        i, found = self._locate(prefix)
        if found:
            self._faces[i] = self._faces[i].with_face(face)
        else:
            self._names.insert(i, prefix)
            self._faces.insert(i, FaceSet(self.face_count).with_face(face))

    def remove(self, prefix: Name, face: int) -> None:
        _check_prefix(prefix)
        i, found = self._locate(prefix)
        if not found or face not in self._faces[i]:
            raise KeyError(f"no association ({prefix}, face {face})")
        remaining = self._faces[i].without_face(face)
        if remaining:
            self._faces[i] = remaining
        else:
            del self._names[i]
            del self._faces[i]

    def lookup(self, interest: Name) -> LookupResult:
        """Longest prefix match: deepest stored prefix of the interest."""
        for prefix in interest.prefixes():
            i, found = self._locate(prefix)
            if found:
                return LookupResult(len(prefix), self._faces[i])
        return LookupResult(0, FaceSet(self.face_count))

    def size_bits(self) -> int:
        """Payload bits: 8 per encoded prefix byte plus one face bit vector."""
        return sum(8 * name.encoded_size() for name in self._names) + len(
            self._names
        ) * self.face_count


class HashFib:
    """Entries keyed by 32-bit prefix hashes, sorted by hash value.

    A dict from hash to prefix is kept purely to detect insert/remove
    collisions; it is bookkeeping for the error contract, not part of the
    modeled memory (size_bits counts 32 + face_count bits per entry).
    """

    def __init__(self, face_count: int) -> None:
        if face_count < 1:
            raise ValueError("face_count must be >= 1")
        self.face_count = face_count
        self._hashes: list[int] = []
        self._faces: list[FaceSet] = []
        self._prefix_of: dict[int, Name] = {}

    def __len__(self) -> int:
        return len(self._hashes)

    def entries(self) -> Iterator[tuple[int, FaceSet]]:
        return iter(zip(self._hashes, self._faces))

    def insert(self, prefix: Name, face: int) -> None:
        _check_prefix(prefix)
        value = hashing.hash_prefix(prefix)
        existing = self._prefix_of.get(value)
        if existing is None:
            i = bisect.bisect_left(self._hashes, value)
            self._hashes.insert(i, value)
            self._faces.insert(i, FaceSet(self.face_count).with_face(face))
            self._prefix_of[value] = prefix
        elif existing == prefix:
            i = bisect.bisect_left(self._hashes, value)
            self._faces[i] = self._faces[i].with_face(face)
        else:
            raise HashCollisionError(existing, prefix, value)

    def remove(self, prefix: Name, face: int) -> None:
        _check_prefix(prefix)
        value = hashing.hash_prefix(prefix)
        existing = self._prefix_of.get(value)
        if existing is None:
            raise KeyError(f"no association ({prefix}, face {face})")
        if existing != prefix:
            raise HashCollisionError(existing, prefix, value)
        i = bisect.bisect_left(self._hashes, value)
        if face not in self._faces[i]:
            raise KeyError(f"no association ({prefix}, face {face})")
        remaining = self._faces[i].without_face(face)
        if remaining:
            self._faces[i] = remaining
        else:
            del self._hashes[i]
            del self._faces[i]
            del self._prefix_of[value]

    def lookup(self, interest: Name) -> LookupResult:
        """Compare prefix hashes longest-first; first hit is the match.

        Components are hashed once each: the lookup snapshots the incremental
        hash state after every component and reuses the snapshots from the
        deepest prefix downwards.
        """
        states = []
        state = hashing.HashState()
        for component in interest.components:
            state = state.feed(component)
            states.append(state)
        for depth in range(len(states), 0, -1):
            value = states[depth - 1].digest32()
            i = bisect.bisect_left(self._hashes, value)
            if i < len(self._hashes) and self._hashes[i] == value:
                return LookupResult(depth, self._faces[i])
        return LookupResult(0, FaceSet(self.face_count))

    def size_bits(self) -> int:
        return len(self._hashes) * (32 + self.face_count)


class _PerFaceFilterFib:
    """Common structure of the filter-backed variants: one filter per face."""

    _filter_cls: type

    def __init__(self, face_count: int, params: FilterParams) -> None:
        if face_count < 1:
            raise ValueError("face_count must be >= 1")
        self.face_count = face_count
        self.params = params
        self._filters = [self._filter_cls(params) for _ in range(face_count)]

    @classmethod
    def for_target(cls, face_count: int, capacity: int, target_fpp: float):
        return cls(face_count, FilterParams.for_target(capacity, target_fpp))

    def filter_for(self, face: int):
        if not 1 <= face <= self.face_count:
            raise ValueError(f"face {face} outside 1..{self.face_count}")
        return self._filters[face - 1]

    def insert(self, prefix: Name, face: int) -> None:
        _check_prefix(prefix)
        self.filter_for(face).insert(hashing.serialize_prefix(prefix))

    def lookup(self, interest: Name) -> LookupResult:
        """Probe all faces per depth, longest prefix first.

        Stops at the first depth where any filter answers positive and
        returns the union of all positive faces at that depth; unlike
        HashFib the scan does not stop at the first positive face, because
        several faces may hold the same prefix.
        """
        for prefix in interest.prefixes():
            element = hashing.serialize_prefix(prefix)
            indices = hashing.index_family(
                element, self.params.index_count, self.params.slot_count
            ).indices()
            mask = 0
            for face_bit, filt in enumerate(self._filters):
                if filt.contains_indices(indices):
                    mask |= 1 << face_bit
            if mask:
                return LookupResult(len(prefix), FaceSet(self.face_count, mask))
        return LookupResult(0, FaceSet(self.face_count))


class BloomFib(_PerFaceFilterFib):
    """Per-face plain Bloom filters; no removal support by construction."""

    _filter_cls = BloomFilter

    def size_bits(self) -> int:
        return self.params.slot_count * self.face_count


class CountingBloomFib(_PerFaceFilterFib):
    """Per-face counting Bloom filters; supports association removal."""

    _filter_cls = CountingBloomFilter

    def remove(self, prefix: Name, face: int) -> None:
        _check_prefix(prefix)
        element = hashing.serialize_prefix(prefix)
        try:
            self.filter_for(face).remove(element)
        except KeyError:
            raise KeyError(f"no association ({prefix}, face {face})") from None

    def size_bits(self) -> int:
        return 4 * self.params.slot_count * self.face_count
