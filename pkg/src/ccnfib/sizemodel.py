"""Closed-form bit-size model for the four FIB variants.

All sizes count payload bits only. With N prefixes, F faces, and a uniform
encoded prefix length of L bytes (component bytes plus one separator byte
per component):

    reference FIB    N * (8*L + F)
    hash FIB         N * (32 + F)
    Bloom FIB        filter_size_bits(N_BF, P_FP) * F
    counting FIB     4 * Bloom FIB

N_BF defaults to ceil(N / F), the even-spread per-face load.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .filters import filter_size_bits

__all__ = [
    "ModelConfig",
    "SizeReport",
    "VARIANTS",
    "model_sizes",
    "size_difference",
    "breakeven_prefix_len",
    "size_ratio",
    "reference_fib_exact_size",
]

VARIANTS = ("fib", "fib_hash", "fib_bf", "fib_cbf")


@dataclass(frozen=True)
class ModelConfig:
    """Evaluation point: N prefixes, F faces, L-byte prefixes, filter target.

    ``filter_capacity`` may pin N_BF explicitly; when None it is derived as
    ceil(N / F).
    """

    prefix_count: int
    face_count: int
    prefix_bytes: int
    target_fpp: float = 1e-6
    filter_capacity: int | None = None

    def __post_init__(self) -> None:
        if self.prefix_count < 1:
            raise ValueError("prefix_count must be >= 1")
        if self.face_count < 1:
            raise ValueError("face_count must be >= 1")
        if self.prefix_bytes < 1:
            raise ValueError("prefix_bytes must be >= 1")
        if not 0.0 < self.target_fpp < 1.0:
            raise ValueError("target_fpp must be in (0, 1)")
        if self.filter_capacity is not None and self.filter_capacity < 1:
            raise ValueError("filter_capacity must be >= 1")

    @property
    def capacity(self) -> int:
        if self.filter_capacity is not None:
            return self.filter_capacity
        return -(-self.prefix_count // self.face_count)


@dataclass(frozen=True)
class SizeReport:
    fib_bits: int
    fib_hash_bits: int
    fib_bf_bits: int
    fib_cbf_bits: int

    def bits(self, variant: str) -> int:
        if variant not in VARIANTS:
            raise ValueError(f"unknown variant {variant!r}")
        return getattr(self, f"{variant}_bits")


def model_sizes(cfg: ModelConfig) -> SizeReport:
    """Evaluate all four variant sizes, in bits, at one configuration."""
    per_filter = filter_size_bits(cfg.capacity, cfg.target_fpp)
    bf = per_filter * cfg.face_count
    return SizeReport(
        fib_bits=cfg.prefix_count * (8 * cfg.prefix_bytes + cfg.face_count),
        fib_hash_bits=cfg.prefix_count * (32 + cfg.face_count),
        fib_bf_bits=bf,
        fib_cbf_bits=4 * bf,
    )


def size_difference(cfg_a: ModelConfig, cfg_b: ModelConfig, variant: str) -> int:
    """Absolute size gap between two configurations differing only in N."""
    same = (
        cfg_a.face_count == cfg_b.face_count
        and cfg_a.prefix_bytes == cfg_b.prefix_bytes
        and cfg_a.target_fpp == cfg_b.target_fpp
        and cfg_a.filter_capacity == cfg_b.filter_capacity
    )
    if not same:
        raise ValueError("configurations must differ only in prefix_count")
    return abs(model_sizes(cfg_a).bits(variant) - model_sizes(cfg_b).bits(variant))


def breakeven_prefix_len(
    prefix_count: int,
    face_count: int,
    filter_capacity: int,
    target_fpp: float,
    counting: bool = False,
) -> int:
    """Minimum prefix byte length at which the filter FIB beats the reference.

    Solves N * (8L + F) = c * filter_size_bits * F for real L (c = 4 for the
    counting variant) and rounds to the nearest integer byte length; rounding
    to nearest is the convention that reproduces the published break-even
    points.
    """
    per_filter = filter_size_bits(filter_capacity, target_fpp)
    scale = 4 if counting else 1
    exact = (scale * per_filter * face_count / prefix_count - face_count) / 8.0
    return int(math.floor(exact + 0.5))


def size_ratio(cfg: ModelConfig, variant: str) -> float:
    """Variant size divided by reference FIB size at the same configuration."""
    report = model_sizes(cfg)
    return report.bits(variant) / report.fib_bits


def reference_fib_exact_size(
    entries: Iterable[Iterable[int]], face_count: int
) -> int:
    """Reference FIB bits from per-entry component byte lengths.

    Each component contributes 8 bits per byte plus an 8-bit separator;
    each entry adds one face bit vector. Zero entries cost zero bits.
    """
    if face_count < 1:
        raise ValueError("face_count must be >= 1")
    total = 0
    for component_lengths in entries:
        lengths = list(component_lengths)
        if not lengths:
            raise ValueError("every entry needs at least one component")
        if any(size < 1 for size in lengths):
            raise ValueError("component byte lengths must be >= 1")
        total += sum(8 * size + 8 for size in lengths) + face_count
    return total
