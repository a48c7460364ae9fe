"""FIB dump parsing and prefix-to-face mapping characterization.

Dump file format (line oriented text):

    # comment until end of line
    faces <F>              optional header declaring the face count
    <name> <face>[,<face>...]   one association per line

Names use the percent-encoded syntax of :mod:`ccnfib.names`; face ids are
decimal and >= 1. Blank lines are ignored. A prefix may appear on one line
only.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from . import sizemodel
from .names import Name, NameSyntaxError, parse_name

__all__ = [
    "DumpFormatError",
    "FibDump",
    "MappingProfile",
    "Recommendation",
    "parse_dump",
    "profile",
    "prefix_length_histogram",
    "recommend",
    "MOSTLY_ONE_THRESHOLD",
    "BALANCED_COUNT_BAND",
    "EVEN_SPREAD_FACTOR",
]

# Classification knobs: "mostly one" for the mean faces-per-prefix and
# prefixes-per-face, and the N/F band treated as "N is about F".
MOSTLY_ONE_THRESHOLD = 1.5
BALANCED_COUNT_BAND = (0.5, 2.0)
# A spread is near-even when no face carries more than this factor times
# the even per-face load ceil(N/F).
EVEN_SPREAD_FACTOR = 2


class DumpFormatError(ValueError):
    """A dump file line violates the format; carries the 1-based line number."""

    def __init__(self, line_number: int, message: str) -> None:
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


@dataclass(frozen=True)
class FibDump:
    """Parsed dump: label, duplicate-free associations, and the face count."""

    node_label: str
    associations: tuple[tuple[Name, frozenset[int]], ...]
    declared_face_count: int | None

    @property
    def face_count(self) -> int:
        if self.declared_face_count is not None:
            return self.declared_face_count
        return max((max(faces) for _, faces in self.associations), default=0)

    @property
    def prefix_count(self) -> int:
        return len(self.associations)


@dataclass(frozen=True, eq=True)
class MappingProfile:
    """Histograms and classification of a dump's prefix-face relation."""

    prefix_count: int
    face_count: int
    faces_per_prefix: dict[int, int]
    prefixes_per_face: dict[int, int]
    prefix_lengths: dict[int, int]
    classification: str


@dataclass(frozen=True)
class Recommendation:
    variant: str
    rationale: str


def parse_dump(text: str, label: str = "") -> FibDump:
    """Parse dump text into a :class:`FibDump`.

    Raises :class:`DumpFormatError` (with the offending line number) on bad
    syntax, a face id of 0 or above the declared count, or a duplicated
    prefix line.
    """
    declared: int | None = None
    associations: list[tuple[Name, frozenset[int]]] = []
    seen: set[Name] = set()
    header_allowed = True
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if header_allowed and fields[0] == "faces":
            if len(fields) != 2 or not fields[1].isdigit() or int(fields[1]) < 1:
                raise DumpFormatError(line_number, f"bad faces header: {raw!r}")
            declared = int(fields[1])
            header_allowed = False
            continue
        header_allowed = False
        if len(fields) != 2:
            raise DumpFormatError(
                line_number, f"expected '<name> <face>[,<face>...]': {raw!r}"
            )
        try:
            prefix = parse_name(fields[0])
        except NameSyntaxError as exc:
            raise DumpFormatError(line_number, str(exc)) from None
        if len(prefix) == 0:
            raise DumpFormatError(line_number, "root name is not a legal prefix")
        if prefix in seen:
            raise DumpFormatError(line_number, f"duplicate prefix {fields[0]}")
        faces = set()
        for item in fields[1].split(","):
            try:
                face = int(item)
            except ValueError:
                raise DumpFormatError(
                    line_number, f"bad face id {item!r}"
                ) from None
            if face < 1:
                raise DumpFormatError(line_number, f"face id {face} must be >= 1")
            if declared is not None and face > declared:
                raise DumpFormatError(
                    line_number, f"face id {face} exceeds declared count {declared}"
                )
            faces.add(face)
        seen.add(prefix)
        associations.append((prefix, frozenset(faces)))
    return FibDump(
        node_label=label,
        associations=tuple(associations),
        declared_face_count=declared,
    )


def profile(
    dump: FibDump,
    mostly_one: float = MOSTLY_ONE_THRESHOLD,
    balanced_band: tuple[float, float] = BALANCED_COUNT_BAND,
) -> MappingProfile:
    """Compute mapping histograms and classify the dump's relation shape.

    The relation is 1-1 when N is within ``balanced_band`` of F and both the
    mean faces per prefix and the mean prefixes per non-empty face stay at
    "mostly one" (<= ``mostly_one``); 1-n when prefixes fan out to many
    faces; n-1 when faces collect many prefixes; otherwise mixed.
    """
    n = dump.prefix_count
    f = dump.face_count
    faces_per_prefix = Counter(len(faces) for _, faces in dump.associations)
    load: Counter[int] = Counter()
    for _, faces in dump.associations:
        for face in faces:
            load[face] += 1
    per_face_counts = [load.get(face, 0) for face in range(1, f + 1)]
    prefixes_per_face = Counter(per_face_counts)
    prefix_lengths = Counter(prefix.encoded_size() for prefix, _ in dump.associations)

    total_face_refs = sum(len(faces) for _, faces in dump.associations)
    mean_faces_per_prefix = total_face_refs / n if n else 0.0
    nonempty = [c for c in per_face_counts if c > 0]
    mean_prefixes_per_face = sum(nonempty) / len(nonempty) if nonempty else 0.0

    low, high = balanced_band
    if (
        n
        and f
        and low <= n / f <= high
        and mean_faces_per_prefix <= mostly_one
        and mean_prefixes_per_face <= mostly_one
    ):
        classification = "one_to_one"
    elif mean_faces_per_prefix > mostly_one and mean_prefixes_per_face <= mostly_one:
        classification = "one_to_n"
    elif mean_prefixes_per_face > mostly_one and mean_faces_per_prefix <= mostly_one:
        classification = "n_to_one"
    else:
        classification = "mixed"

    return MappingProfile(
        prefix_count=n,
        face_count=f,
        faces_per_prefix=dict(faces_per_prefix),
        prefixes_per_face=dict(prefixes_per_face),
        prefix_lengths=dict(prefix_lengths),
        classification=classification,
    )


def prefix_length_histogram(dump: FibDump, bin_width_bytes: int = 1) -> dict[int, int]:
    """Histogram of encoded prefix sizes, binned as [b, b + width)."""
    if bin_width_bytes < 1:
        raise ValueError("bin_width_bytes must be >= 1")
    bins: Counter[int] = Counter()
    for prefix, _ in dump.associations:
        size = prefix.encoded_size()
        bins[size - size % bin_width_bytes] += 1
    return dict(bins)


def _median_prefix_bytes(prefix_lengths: dict[int, int]) -> int:
    total = sum(prefix_lengths.values())
    if total == 0:
        return 0
    target = (total - 1) // 2  # 0-based index of the lower median
    seen = 0
    for length in sorted(prefix_lengths):
        seen += prefix_lengths[length]
        if seen > target:
            return length
    return 0


def recommend(
    mapping: MappingProfile,
    removal_required: bool = False,
    target_fpp: float = 1e-6,
) -> Recommendation:
    """Pick a FIB variant for the profiled mapping.

    Per-face filters only pay off for an n-1 relation with prefixes spread
    nearly evenly over the faces; a counting filter additionally needs the
    profile's median prefix length to clear the break-even point. Every
    other shape is served best by the hash FIB, which compresses regardless
    of the mapping and supports removal.
    """
    n, f = mapping.prefix_count, mapping.face_count
    if mapping.classification != "n_to_one" or n == 0 or f == 0:
        return Recommendation(
            "FIB-Hash",
            f"mapping is {mapping.classification}: per-face filters would hold "
            "too few elements, hashing compresses regardless of the mapping",
        )
    even_load = -(-n // f)
    max_load = max(mapping.prefixes_per_face, default=0)
    even_spread = max_load <= EVEN_SPREAD_FACTOR * even_load
    if not removal_required:
        if even_spread:
            return Recommendation(
                "FIB-BF",
                f"n-1 mapping with near-even spread (max {max_load} per face, "
                f"even load {even_load}) and a static prefix set",
            )
        return Recommendation(
            "FIB-Hash",
            f"n-1 mapping but uneven spread (max {max_load} per face vs even "
            f"load {even_load}): filters sized for the largest face waste "
            "memory, hashing does not",
        )
    median = _median_prefix_bytes(mapping.prefix_lengths)
    breakeven = sizemodel.breakeven_prefix_len(
        n, f, even_load, target_fpp, counting=True
    )
    if median >= breakeven:
        return Recommendation(
            "FIB-CBF",
            f"n-1 mapping with removals; median prefix {median} B clears the "
            f"counting-filter break-even of {breakeven} B",
        )
    return Recommendation(
        "FIB-Hash",
        f"n-1 mapping with removals, but median prefix {median} B is under "
        f"the counting-filter break-even of {breakeven} B",
    )
