"""Bloom and counting Bloom filters sized from capacity and a target
false-positive probability.

Slot count and index count follow the standard optimum for a target rate p
and capacity n: m = ceil(-n * ln(p) / ln(2)^2), k = round(m/n * ln 2).
Counting filters use 4-bit saturating counters; a counter that reaches 15
is sticky and is never incremented or decremented again, which preserves
the no-false-negative guarantee after removals.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import hashing

__all__ = [
    "FilterParams",
    "filter_size_bits",
    "BloomFilter",
    "CountingBloomFilter",
    "COUNTER_BITS",
    "COUNTER_MAX",
]

COUNTER_BITS = 4
COUNTER_MAX = (1 << COUNTER_BITS) - 1


@dataclass(frozen=True)
class FilterParams:
    """Derived filter geometry for a (capacity, target rate) pair."""

    capacity: int
    target_fpp: float
    slot_count: int
    index_count: int

    @classmethod
    def for_target(cls, capacity: int, target_fpp: float) -> "FilterParams":
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        if not 0.0 < target_fpp < 1.0:
            raise ValueError("target_fpp must be in (0, 1)")
        slots = math.ceil(-capacity * math.log(target_fpp) / math.log(2) ** 2)
        indices = max(1, round(slots / capacity * math.log(2)))
        return cls(capacity, target_fpp, slots, indices)


def filter_size_bits(capacity: int, target_fpp: float) -> int:
    """Bit size of a plain Bloom filter for the given capacity and rate."""
    return FilterParams.for_target(capacity, target_fpp).slot_count


class _DoubleHashedFilter:
    """Shared index derivation and membership logic for both filter kinds."""

    def __init__(self, params: FilterParams) -> None:
        self.params = params
        self.inserted = 0

    @classmethod
    def for_target(cls, capacity: int, target_fpp: float):
        return cls(FilterParams.for_target(capacity, target_fpp))

    def _indices(self, element: bytes) -> np.ndarray:
        family = hashing.index_family(
            element, self.params.index_count, self.params.slot_count
        )
        return family.indices()

    def _occupied(self) -> np.ndarray:
        raise NotImplementedError

    def contains(self, element: bytes) -> bool:
        return self.contains_indices(self._indices(element))

    def contains_indices(self, indices: np.ndarray) -> bool:
        """Membership test with precomputed slot indices.

        Fast path for callers that query many same-geometry filters with one
        element: the indices are identical across those filters.
        """
        return bool(self._occupied()[indices].all())

    def contains_batch(self, data: np.ndarray, lengths: np.ndarray) -> np.ndarray:
        """Vectorized membership test over rows of a padded byte matrix."""
        h1 = hashing.fnv1a64_batch(data, lengths, hashing.INDEX_SEED_BASE)
        h2 = hashing.fnv1a64_batch(data, lengths, hashing.INDEX_SEED_STEP)
        h2 = h2 | np.uint64(1)
        m = np.uint64(self.params.slot_count)
        occupied = self._occupied() != 0
        present = np.ones(len(h1), dtype=bool)
        for i in range(self.params.index_count):
            idx = ((h1 + np.uint64(i) * h2) % m).astype(np.intp)
            present &= occupied[idx]
        return present

    def __contains__(self, element: bytes) -> bool:
        return self.contains(element)


class BloomFilter(_DoubleHashedFilter):
    """m-slot bit filter; an element occupies k slots via double hashing.

    Inserting beyond ``params.capacity`` is legal but voids the configured
    false-positive target; callers can compare ``inserted`` with the
    capacity to detect that.
    """

    def __init__(self, params: FilterParams) -> None:
        super().__init__(params)
        self._bits = np.zeros(params.slot_count, dtype=np.uint8)

    def insert(self, element: bytes) -> None:
        self._bits[self._indices(element)] = 1
        self.inserted += 1

    def _occupied(self) -> np.ndarray:
        return self._bits

    @property
    def bits(self) -> np.ndarray:
        view = self._bits.view()
        view.flags.writeable = False
        return view

    @property
    def popcount(self) -> int:
        return int(self._bits.sum())

    @property
    def size_bits(self) -> int:
        return self.params.slot_count


class CountingBloomFilter(_DoubleHashedFilter):
    """Bloom filter with 4-bit saturating counters, supporting removal."""

    def __init__(self, params: FilterParams) -> None:
        super().__init__(params)
        self._counters = np.zeros(params.slot_count, dtype=np.uint8)

    def insert(self, element: bytes) -> None:
        for i in self._indices(element):
            value = int(self._counters[i])
            if value < COUNTER_MAX:
                self._counters[i] = value + 1
        self.inserted += 1

    def remove(self, element: bytes) -> None:
        """Decrement the element's counters; reject unknown elements.

        If any indexed counter is zero (or too small for this element's index
        multiplicity) the element cannot have been inserted: the filter is
        left unchanged and KeyError is raised. Saturated counters are skipped.
        """
        multiplicity = Counter(int(i) for i in self._indices(element))
        for i, count in multiplicity.items():
            value = int(self._counters[i])
            if value != COUNTER_MAX and value < count:
                raise KeyError(f"element was not inserted: {element!r}")
        for i, count in multiplicity.items():
            value = int(self._counters[i])
            if value != COUNTER_MAX:
                self._counters[i] = value - count
        self.inserted -= 1

    def _occupied(self) -> np.ndarray:
        return self._counters

    @property
    def counters(self) -> np.ndarray:
        view = self._counters.view()
        view.flags.writeable = False
        return view

    @property
    def size_bits(self) -> int:
        return COUNTER_BITS * self.params.slot_count
