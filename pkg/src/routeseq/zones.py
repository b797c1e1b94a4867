"""Zone label grammar: ``<major>.<inner>`` such as ``A-2.2A``."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Tuple

STATION_LABEL = "INIT"

# No leading zeros, so that parse/render round-trips.
_INNER_RE = re.compile(r"^(0|[1-9][0-9]*)([A-Za-z])$")
_MAJOR_RE = re.compile(r"^([A-Za-z]+)-(0|[1-9][0-9]*)$")
_NATURAL_RE = re.compile(r"(\d+)")


@dataclass(frozen=True, order=False)
class ZoneId:
    raw: str
    major: str
    suffix: Optional[str] = None
    inner: Optional[Tuple[int, str]] = None

    def render(self) -> str:
        if self.suffix is None:
            return self.major
        if self.inner is not None:
            return f"{self.major}.{self.inner[0]}{self.inner[1]}"
        return f"{self.major}.{self.suffix}"

    def __str__(self) -> str:
        return self.raw


def parse_zone_id(raw: str) -> ZoneId:
    """Split a zone label at its first dot.

    Suffixes that are not ``<integer><letter>`` keep ``inner=None``; the label
    still round-trips through ``render``.
    """
    if not raw:
        raise ValueError("zone label must be non-empty")
    major, dot, suffix = raw.partition(".")
    if not dot:
        return ZoneId(raw=raw, major=raw)
    m = _INNER_RE.match(suffix)
    inner = (int(m.group(1)), m.group(2)) if m else None
    return ZoneId(raw=raw, major=major, suffix=suffix, inner=inner)


def inner_zone_difference(a: ZoneId, b: ZoneId) -> Optional[int]:
    """``|X - A| + |ord(Y) - ord(B)|`` for inner parts ``XY`` and ``AB``; None if either is absent."""
    if a.inner is None or b.inner is None:
        return None
    return abs(a.inner[0] - b.inner[0]) + abs(ord(a.inner[1]) - ord(b.inner[1]))


def _split_major(major: str):
    m = _MAJOR_RE.match(major)
    if m is None:
        return None
    return m.group(1), int(m.group(2))


def major_zone_difference(a: ZoneId, b: ZoneId) -> Optional[int]:
    """Numeric gap between majors like ``A-2`` and ``A-1``.

    None when either major does not look like ``<letters>-<integer>`` or the
    letter prefixes differ.
    """
    pa = _split_major(a.major)
    pb = _split_major(b.major)
    if pa is None or pb is None or pa[0] != pb[0]:
        return None
    return abs(pa[1] - pb[1])


def natural_key(label: str):
    """Sort key comparing digit runs numerically, so ``P-2`` sorts before ``P-13``."""
    key = []
    for part in _NATURAL_RE.split(label):
        if not part:
            continue
        if part.isdigit():
            key.append((0, int(part), ""))
        else:
            key.append((1, 0, part))
    return tuple(key)


def zone_sort_key(zone: ZoneId):
    return natural_key(zone.raw), zone.raw
