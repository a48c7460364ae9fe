"""Memory-efficient forwarding information base structures for
content-centric networking: a reference sorted-prefix FIB, a hash-compressed
FIB, and per-face Bloom / counting-Bloom FIBs, with an analytic size model
and measurement harnesses.
"""

from .names import (
    Name,
    NameSyntaxError,
    parse_name,
    format_name,
    shortlex_cmp,
    prefixes,
    encoded_size,
)
from .hashing import HashState, hash_prefix, serialize_prefix, index_family
from .filters import (
    FilterParams,
    filter_size_bits,
    BloomFilter,
    CountingBloomFilter,
)
from .fib import (
    FaceSet,
    LookupResult,
    HashCollisionError,
    ReferenceFib,
    HashFib,
    BloomFib,
    CountingBloomFib,
)
from .sizemodel import (
    ModelConfig,
    SizeReport,
    model_sizes,
    size_difference,
    breakeven_prefix_len,
    size_ratio,
    reference_fib_exact_size,
)
from .dumps import (
    DumpFormatError,
    FibDump,
    MappingProfile,
    Recommendation,
    parse_dump,
    profile,
    prefix_length_histogram,
    recommend,
)

__version__ = "0.1.0"

__all__ = [
    "Name",
    "NameSyntaxError",
    "parse_name",
    "format_name",
    "shortlex_cmp",
    "prefixes",
    "encoded_size",
    "HashState",
    "hash_prefix",
    "serialize_prefix",
    "index_family",
    "FilterParams",
    "filter_size_bits",
    "BloomFilter",
    "CountingBloomFilter",
    "FaceSet",
    "LookupResult",
    "HashCollisionError",
    "ReferenceFib",
    "HashFib",
    "BloomFib",
    "CountingBloomFib",
    "ModelConfig",
    "SizeReport",
    "model_sizes",
    "size_difference",
    "breakeven_prefix_len",
    "size_ratio",
    "reference_fib_exact_size",
    "DumpFormatError",
    "FibDump",
    "MappingProfile",
    "Recommendation",
    "parse_dump",
    "profile",
    "prefix_length_histogram",
    "recommend",
]
