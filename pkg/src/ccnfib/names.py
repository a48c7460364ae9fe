"""Hierarchical names: percent-encoded text form, shortlex order, prefix enumeration.

A name is an immutable sequence of non-empty byte-string components. The
textual form separates components with '/' and escapes bytes outside the
printable ASCII range (plus '/' and '%' themselves) as %HH.
"""

from __future__ import annotations

from typing import Iterable, Iterator

__all__ = [
    "Name",
    "NameSyntaxError",
    "parse_name",
    "format_name",
    "shortlex_cmp",
    "prefixes",
    "encoded_size",
]

_SLASH = 0x2F
_PERCENT = 0x25
_HEX_DIGITS = frozenset("0123456789abcdefABCDEF")


class NameSyntaxError(ValueError):
    """A textual name violates the percent-encoded component syntax."""


class Name:
    """An ordered sequence of non-empty byte components.

    Names are immutable, hashable, and totally ordered by component-wise
    shortlex comparison: shorter components order before longer ones, equal
    lengths compare bytewise, and a proper prefix orders before any of its
    extensions. The empty name is the root "/".
    """

    __slots__ = ("_components", "_key")

    def __init__(self, components: Iterable[bytes] = ()) -> None:
        comps = tuple(bytes(c) for c in components)
        for c in comps:
            if not c:
                raise ValueError("name component must be non-empty")
        self._components = comps
        self._key = tuple((len(c), c) for c in comps)

    @classmethod
    def _wrap(cls, comps: tuple[bytes, ...], key: tuple) -> "Name":
        # Internal constructor for already-validated component slices.
        name = object.__new__(cls)
        name._components = comps
        name._key = key
        return name

    @property
    def components(self) -> tuple[bytes, ...]:
        return self._components

    def __len__(self) -> int:
        return len(self._components)

    def __getitem__(self, index: int) -> bytes:
        return self._components[index]

    def __iter__(self) -> Iterator[bytes]:
        return iter(self._components)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Name):
            return NotImplemented
        return self._components == other._components

    def __hash__(self) -> int:
        return hash(self._components)

    def __lt__(self, other: "Name") -> bool:
        return self._key < other._key

    def __le__(self, other: "Name") -> bool:
        return self._key <= other._key

    def __gt__(self, other: "Name") -> bool:
        return self._key > other._key

    def __ge__(self, other: "Name") -> bool:
        return self._key >= other._key

    def __str__(self) -> str:
        return format_name(self)

    def __repr__(self) -> str:
        return f"Name({format_name(self)!r})"

    def prefixes(self) -> Iterator["Name"]:
        """Yield every non-root prefix of this name, longest first.

        The name itself comes first, then the name minus its last component,
        down to the single-component prefix. The root name is never yielded,
        so the count equals ``len(self)``.
        """
        full = len(self._components)
        for depth in range(full, 0, -1):
            if depth == full:
                yield self
            else:
                yield Name._wrap(self._components[:depth], self._key[:depth])

    def is_prefix_of(self, other: "Name") -> bool:
        return self._components == other._components[: len(self._components)]

    def encoded_size(self) -> int:
        """Serialized size in bytes: each component plus one separator byte."""
        return sum(len(c) + 1 for c in self._components)


def parse_name(text: str) -> Name:
    """Parse a percent-encoded '/'-separated name.

    "/" alone denotes the root name. Raises :class:`NameSyntaxError` on a
    missing leading '/', an empty component, or a malformed %HH escape.
    """
    if not text.startswith("/"):
        raise NameSyntaxError(f"name must begin with '/': {text!r}")
    if text == "/":
        return Name()
    components = []
    for part in text[1:].split("/"):
        if part == "":
            raise NameSyntaxError(f"empty name component in {text!r}")
        components.append(_unescape_component(part))
    return Name(components)


def format_name(name: Name) -> str:
    """Render a name in canonical percent-encoded text form.

    Every byte outside printable ASCII (0x21..0x7E), plus '/' and '%', is
    escaped as %HH with uppercase hex digits.
    """
    if len(name) == 0:
        return "/"
    return "".join("/" + _escape_component(c) for c in name.components)


def shortlex_cmp(a: Name, b: Name) -> int:
    """Return -1, 0, or 1 ordering two names by component-wise shortlex."""
    if a._key < b._key:
        return -1
    if a._key > b._key:
        return 1
    return 0


def prefixes(name: Name) -> Iterator[Name]:
    return name.prefixes()


def encoded_size(name: Name) -> int:
    return name.encoded_size()


def _escape_component(data: bytes) -> str:
    out = []
    for b in data:
        if 0x21 <= b <= 0x7E and b != _SLASH and b != _PERCENT:
            out.append(chr(b))
        else:
            out.append("%%%02X" % b)
    return "".join(out)


def _unescape_component(text: str) -> bytes:
    out = bytearray()
    i = 0
    end = len(text)
    while i < end:
        ch = text[i]
        if ch == "%":
            digits = text[i + 1 : i + 3]
            if len(digits) != 2 or not set(digits) <= _HEX_DIGITS:
                raise NameSyntaxError(f"malformed escape sequence in {text!r}")
            out.append(int(digits, 16))
            i += 3
        else:
            code = ord(ch)
            if code > 0x7F:
                raise NameSyntaxError(
                    f"non-ASCII character {ch!r} must be percent-encoded"
                )
            out.append(code)
            i += 1
    return bytes(out)
