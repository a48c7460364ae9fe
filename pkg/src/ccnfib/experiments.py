"""Randomized measurement harnesses: false-positive calibration, oracle
equivalence between FIB variants, hash-collision rate, and lookup throughput.

Every experiment is a pure function of its seed. Random names draw from a
small component alphabet so independent names share prefixes often enough
to exercise the longest-prefix-match paths.
"""

from __future__ import annotations

import hashlib
import math
import random
import time
from dataclasses import dataclass

import numpy as np

from . import hashing
from .fib import BloomFib, CountingBloomFib, HashCollisionError, HashFib, ReferenceFib
from .filters import BloomFilter, CountingBloomFilter, FilterParams
from .names import Name, format_name

__all__ = [
    "DEFAULT_ALPHABET",
    "make_alphabet",
    "random_name",
    "random_instance",
    "random_interest",
    "FprReport",
    "measure_fpr",
    "OracleReport",
    "run_hash_oracle",
    "run_bloom_oracle",
    "CbfRoundTripReport",
    "run_cbf_roundtrip",
    "CollisionReport",
    "run_collision_rate",
    "BenchReport",
    "run_bench",
]

_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def make_alphabet(size: int = 16) -> tuple[bytes, ...]:
    """Deterministic component alphabet: ``size`` symbols of 1..4 bytes."""
    if size < 1:
        raise ValueError("size must be >= 1")
    symbols = []
    length = 1
    while len(symbols) < size:
        start = len(symbols)
        for i in range(min(size - start, len(_LETTERS))):
            symbols.append((_LETTERS[i] * length).encode())
        length += 1
    return tuple(symbols[:size])


DEFAULT_ALPHABET = (
    b"a", b"b", b"c", b"d",
    b"ab", b"cd", b"ef", b"gh",
    b"abc", b"def", b"ghi", b"jkl",
    b"abcd", b"efgh", b"ijkl", b"mnop",
)


def random_name(
    rng: random.Random,
    alphabet: tuple[bytes, ...] = DEFAULT_ALPHABET,
    max_components: int = 6,
) -> Name:
    count = rng.randint(1, max_components)
    return Name(rng.choice(alphabet) for _ in range(count))


def random_instance(
    rng: random.Random,
    prefix_count: int,
    face_count: int,
    alphabet: tuple[bytes, ...] = DEFAULT_ALPHABET,
    max_components: int = 6,
    even_spread: bool = False,
) -> list[tuple[Name, int]]:
    """Distinct random prefixes, each paired with one face.

    With ``even_spread`` the faces are dealt round-robin (then shuffled) so
    no face receives more than ceil(prefix_count / face_count) prefixes.
    """
    prefixes: set[Name] = set()
    while len(prefixes) < prefix_count:
        prefixes.add(random_name(rng, alphabet, max_components))
    ordered = sorted(prefixes)
    rng.shuffle(ordered)
    if even_spread:
        faces = [1 + i % face_count for i in range(prefix_count)]
        rng.shuffle(faces)
    else:
        faces = [rng.randint(1, face_count) for _ in range(prefix_count)]
    return list(zip(ordered, faces))


def random_interest(
    rng: random.Random,
    stored: list[Name],
    alphabet: tuple[bytes, ...] = DEFAULT_ALPHABET,
    extend_probability: float = 0.8,
) -> Name:
    """An interest that usually extends a stored prefix by 0..2 components."""
    if stored and rng.random() < extend_probability:
        base = rng.choice(stored)
        extra = rng.randint(0, 2)
        return Name(
            base.components + tuple(rng.choice(alphabet) for _ in range(extra))
        )
    return random_name(rng, alphabet)


# ---------------------------------------------------------------------------
# False-positive calibration


@dataclass(frozen=True)
class FprReport:
    kind: str
    capacity: int
    target_fpp: float
    slot_count: int
    index_count: int
    fill: int
    probes: int
    hits: int
    rate: float
    expected_rate: float
    ci_low: float
    ci_high: float


def _probe_matrix(rng: np.random.Generator, probes: int, element_bytes: int):
    data = rng.integers(0, 256, size=(probes, element_bytes), dtype=np.uint8)
    lengths = np.full(probes, element_bytes, dtype=np.int64)
    return data, lengths


def measure_fpr(
    kind: str,
    capacity: int,
    target_fpp: float,
    fill: int,
    probes: int,
    seed: int,
    element_bytes: int = 16,
) -> FprReport:
    """Fill one filter with random elements and probe with fresh ones.

    Inserted elements are ``element_bytes`` long, probes one byte longer, so
    a probe can never be a true member: every positive is a false positive.
    """
    if probes < 1:
        raise ValueError("probes must be >= 1")
    params = FilterParams.for_target(capacity, target_fpp)
    filt = CountingBloomFilter(params) if kind == "cbf" else BloomFilter(params)
    rng = np.random.default_rng(seed)
    fill_data, fill_lengths = _probe_matrix(rng, fill, element_bytes) if fill else (None, None)
    for row in range(fill):
        filt.insert(fill_data[row].tobytes())
    hits = 0
    remaining = probes
    while remaining > 0:
        chunk = min(remaining, 1_000_000)
        data, lengths = _probe_matrix(rng, chunk, element_bytes + 1)
        hits += int(filt.contains_batch(data, lengths).sum())
        remaining -= chunk
    rate = hits / probes
    m, k = params.slot_count, params.index_count
    expected = (1.0 - (1.0 - 1.0 / m) ** (k * fill)) ** k if fill else 0.0
    half_width = 1.96 * math.sqrt(max(rate * (1.0 - rate), 0.0) / probes)
    return FprReport(
        kind=kind,
        capacity=capacity,
        target_fpp=target_fpp,
        slot_count=m,
        index_count=k,
        fill=fill,
        probes=probes,
        hits=hits,
        rate=rate,
        expected_rate=expected,
        ci_low=max(rate - half_width, 0.0),
        ci_high=min(rate + half_width, 1.0),
    )


# ---------------------------------------------------------------------------
# Oracle equivalence


@dataclass(frozen=True)
class OracleReport:
    variant: str
    trials: int
    exact_matches: int
    depth_inflations: int
    superset_events: int
    violations: int
    instances: int
    skipped_instances: int

    @property
    def lawful(self) -> bool:
        return self.violations == 0


def _instance_trials(trials: int, interests_per_instance: int) -> list[int]:
    full, rest = divmod(trials, interests_per_instance)
    counts = [interests_per_instance] * full
    if rest:
        counts.append(rest)
    return counts


def run_hash_oracle(
    trials: int,
    prefix_count: int = 50,
    face_count: int = 10,
    seed: int = 0,
    interests_per_instance: int = 100,
) -> OracleReport:
    """Compare hash-FIB lookups against the reference FIB.

    Law: the hash FIB never matches shallower than the reference, and at
    equal depth returns the identical face set. Strictly deeper matches are
    32-bit collision artifacts and are counted separately.
    """
    rng = random.Random(seed)
    exact = inflation = violations = 0
    instances = skipped = 0
    for batch in _instance_trials(trials, interests_per_instance):
        while True:
            assoc = random_instance(rng, prefix_count, face_count)
            reference = ReferenceFib(face_count)
            hashed = HashFib(face_count)
            try:
                for prefix, face in assoc:
                    reference.insert(prefix, face)
                    hashed.insert(prefix, face)
            except HashCollisionError:
                skipped += 1
                continue
            break
        instances += 1
        stored = [prefix for prefix, _ in assoc]
        for _ in range(batch):
            interest = random_interest(rng, stored)
            want = reference.lookup(interest)
            got = hashed.lookup(interest)
            if got.matched_depth < want.matched_depth:
                violations += 1
            elif got.matched_depth == want.matched_depth:
                if got.faces == want.faces:
                    exact += 1
                else:
                    violations += 1
            else:
                inflation += 1
    return OracleReport(
        variant="hash",
        trials=trials,
        exact_matches=exact,
        depth_inflations=inflation,
        superset_events=0,
        violations=violations,
        instances=instances,
        skipped_instances=skipped,
    )


def run_bloom_oracle(
    trials: int,
    prefix_count: int = 50,
    face_count: int = 10,
    target_fpp: float = 1e-6,
    seed: int = 0,
    counting: bool = False,
    interests_per_instance: int = 100,
) -> OracleReport:
    """Compare filter-FIB lookups against the reference FIB.

    Instances stay within filter capacity (even face spread, N_BF =
    ceil(N/F)). Law: never shallower than the reference and, at equal
    depth, a face superset. Strict supersets and deeper matches are
    false-positive events, counted separately.
    """
    fib_cls = CountingBloomFib if counting else BloomFib
    capacity = -(-prefix_count // face_count)
    rng = random.Random(seed)
    exact = inflation = supersets = violations = 0
    instances = 0
    for batch in _instance_trials(trials, interests_per_instance):
        assoc = random_instance(
            rng, prefix_count, face_count, even_spread=True
        )
        reference = ReferenceFib(face_count)
        bloom = fib_cls.for_target(face_count, capacity, target_fpp)
        for prefix, face in assoc:
            reference.insert(prefix, face)
            bloom.insert(prefix, face)
        instances += 1
        stored = [prefix for prefix, _ in assoc]
        for _ in range(batch):
            interest = random_interest(rng, stored)
            want = reference.lookup(interest)
            got = bloom.lookup(interest)
            if got.matched_depth < want.matched_depth:
                violations += 1
            elif got.matched_depth == want.matched_depth:
                if got.matched_depth == 0 or got.faces == want.faces:
                    exact += 1
                elif got.faces.issuperset(want.faces):
                    supersets += 1
                else:
                    violations += 1
            else:
                inflation += 1
    return OracleReport(
        variant="cbf" if counting else "bf",
        trials=trials,
        exact_matches=exact,
        depth_inflations=inflation,
        superset_events=supersets,
        violations=violations,
        instances=instances,
        skipped_instances=0,
    )


@dataclass(frozen=True)
class CbfRoundTripReport:
    instances: int
    clean_roundtrips: int
    saturated_skips: int
    residue_failures: int


def run_cbf_roundtrip(
    instances: int,
    prefix_count: int = 20,
    face_count: int = 10,
    target_fpp: float = 1e-6,
    seed: int = 0,
) -> CbfRoundTripReport:
    """Insert every association, remove every association, expect zero counters.

    Instances where any counter saturated are skipped (stickiness makes the
    all-zero end state unreachable by design there).
    """
    rng = random.Random(seed)
    capacity = -(-prefix_count // face_count)
    clean = saturated = failures = 0
    for _ in range(instances):
        assoc = random_instance(
            rng, prefix_count, face_count, even_spread=True
        )
        fib = CountingBloomFib.for_target(face_count, capacity, target_fpp)
        for prefix, face in assoc:
            fib.insert(prefix, face)
        if any(
            int(fib.filter_for(f).counters.max()) >= 15
            for f in range(1, face_count + 1)
        ):
            saturated += 1
            continue
        for prefix, face in assoc:
            fib.remove(prefix, face)
        if all(
            not fib.filter_for(f).counters.any()
            for f in range(1, face_count + 1)
        ):
            clean += 1
        else:
            failures += 1
    return CbfRoundTripReport(
        instances=instances,
        clean_roundtrips=clean,
        saturated_skips=saturated,
        residue_failures=failures,
    )


# ---------------------------------------------------------------------------
# Hash collision rate


@dataclass(frozen=True)
class CollisionReport:
    stored: int
    distinct_hashes: int
    probes: int
    hits: int
    rate: float
    expected_rate: float


def run_collision_rate(
    stored_count: int = 1 << 16,
    probes: int = 10_000_000,
    seed: int = 0,
    component_bytes: int = 16,
) -> CollisionReport:
    """Probability that a fresh prefix's 32-bit hash hits a stored table.

    Stores the hashes of ``stored_count`` random single-component prefixes,
    then hashes fresh prefixes one byte longer (so no probe is a true
    member) and counts 32-bit matches. The expected rate for a uniform hash
    is distinct_stored / 2^32.
    """
    rng = np.random.default_rng(seed)
    stored_hashes = _batch_prefix_hashes(rng, stored_count, component_bytes)
    table = np.unique(stored_hashes)
    hits = 0
    remaining = probes
    while remaining > 0:
        chunk = min(remaining, 1_000_000)
        probe_hashes = _batch_prefix_hashes(rng, chunk, component_bytes + 1)
        pos = np.searchsorted(table, probe_hashes)
        pos[pos == len(table)] = 0
        hits += int((table[pos] == probe_hashes).sum())
        remaining -= chunk
    return CollisionReport(
        stored=stored_count,
        distinct_hashes=len(table),
        probes=probes,
        hits=hits,
        rate=hits / probes,
        expected_rate=len(table) / 2.0**32,
    )


def _batch_prefix_hashes(
    rng: np.random.Generator, count: int, component_bytes: int
) -> np.ndarray:
    # Serialized single-component prefix: length tag byte, then the bytes.
    data = np.empty((count, component_bytes + 1), dtype=np.uint8)
    data[:, 0] = component_bytes & 0xFF
    data[:, 1:] = rng.integers(0, 256, size=(count, component_bytes), dtype=np.uint8)
    lengths = np.full(count, component_bytes + 1, dtype=np.int64)
    return hashing.fold32(hashing.fnv1a64_batch(data, lengths))


# ---------------------------------------------------------------------------
# Throughput


@dataclass(frozen=True)
class BenchReport:
    variant: str
    prefix_count: int
    face_count: int
    interests: int
    workload_checksum: str
    elapsed_seconds: float
    lookups_per_second: float


def run_bench(
    variant: str,
    prefix_count: int = 50,
    face_count: int = 10,
    interests: int = 100_000,
    seed: int = 0,
    target_fpp: float = 1e-6,
) -> BenchReport:
    """Wall-clock lookup throughput over a seed-deterministic workload."""
    rng = random.Random(seed)
    assoc = random_instance(rng, prefix_count, face_count, even_spread=True)
    capacity = -(-prefix_count // face_count)
    if variant == "reference":
        fib = ReferenceFib(face_count)
    elif variant == "hash":
        fib = HashFib(face_count)
    elif variant == "bf":
        fib = BloomFib.for_target(face_count, capacity, target_fpp)
    elif variant == "cbf":
        fib = CountingBloomFib.for_target(face_count, capacity, target_fpp)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    for prefix, face in assoc:
        fib.insert(prefix, face)
    stored = [prefix for prefix, _ in assoc]
    workload = [random_interest(rng, stored) for _ in range(interests)]
    digest = hashlib.sha256()
    for interest in workload:
        digest.update(format_name(interest).encode())
        digest.update(b"\n")
    start = time.perf_counter()
    for interest in workload:
        fib.lookup(interest)
    elapsed = time.perf_counter() - start
    return BenchReport(
        variant=variant,
        prefix_count=prefix_count,
        face_count=face_count,
        interests=interests,
        workload_checksum=digest.hexdigest(),
        elapsed_seconds=elapsed,
        lookups_per_second=interests / elapsed if elapsed > 0 else float("inf"),
    )
