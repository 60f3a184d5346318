"""Exact rational points, labeled configurations and signed tetrahedron volumes.

Scalars are :class:`fractions.Fraction` (always reduced, positive
denominator).  Labels are integers ``0..n-1`` displayed as ``A..F`` and then
``P6, P7, ...``.

Random configurations come from SplitMix64 (Steele, Lea & Flood 2014)::

    state += 0x9E3779B97F4A7C15
    z = (state ^ (state >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    out = z ^ (z >> 31)                      # all arithmetic mod 2**64

An integer in ``[-B, B]`` is drawn by rejection: with ``m = 2B + 1`` outputs
``>= 2**64 - 2**64 % m`` are discarded and the result is ``out % m - B``.
Coordinates are drawn label-major, ``x, y, z`` per label.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import InvalidTetra, UnsupportedArity

ExactRational = Fraction
Point3Q = tuple  # (Fraction, Fraction, Fraction)

MASK64 = (1 << 64) - 1
LETTERS = "ABCDEF"
_NAME_RE = re.compile(r"^(?:([A-F])|P(\d+))$")


def label_name(index: int) -> str:
    if index < 0:
        raise ValueError(f"negative label {index}")
    return LETTERS[index] if index < len(LETTERS) else f"P{index}"


def parse_label(name) -> int:
    """Accept an int index or a display name such as ``"C"`` or ``"P7"``."""
    if isinstance(name, int):
        if name < 0:
            raise ValueError(f"negative label {name}")
        return name
    m = _NAME_RE.match(str(name).strip())
    if not m:
        raise ValueError(f"bad label name {name!r}")
    if m.group(1):
        return LETTERS.index(m.group(1))
    idx = int(m.group(2))
    if idx < len(LETTERS):
        raise ValueError(f"label {name!r} must be written as {LETTERS[idx]!r}")
    return idx


def parse_labels(text: str) -> list[int]:
    """Parse ``"ABDE"``, ``"A,B,P6,P7"`` or ``"A B P6 P7"`` into indices."""
    text = text.strip()
    if "," in text or " " in text:
        parts = [p for p in re.split(r"[,\s]+", text) if p]
    else:
        parts = re.findall(r"P\d+|[A-Z]", text)
        if "".join(parts) != text:
            raise ValueError(f"bad label string {text!r}")
    return [parse_label(p) for p in parts]


def to_rational(value) -> Fraction:
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass an int, Fraction or 'p/q' string")
    return Fraction(value)


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class Configuration:
    """n labeled points with exact rational coordinates; ``points[i]`` is label i."""

    points: tuple

    def __post_init__(self):
        pts = tuple(tuple(to_rational(c) for c in p) for p in self.points)
        if any(len(p) != 3 for p in pts):
            raise ValueError("points must have exactly three coordinates")
        if len(pts) < 4:
            raise UnsupportedArity(f"need at least 4 points, got {len(pts)}")
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return len(self.points)

    def __getitem__(self, label) -> tuple:
        return self.points[parse_label(label)]

    def labels(self) -> range:
        return range(self.n)

    def translated(self, vector: Sequence) -> "Configuration":
        v = [to_rational(c) for c in vector]
        return Configuration(tuple(tuple(a + b for a, b in zip(p, v)) for p in self.points))

    def scaled(self, factor) -> "Configuration":
        f = to_rational(factor)
        return Configuration(tuple(tuple(f * c for c in p) for p in self.points))

    def relabeled(self, perm: Sequence[int]) -> "Configuration":
        """Point at label ``perm[i]`` of the result is point ``i`` of self."""
        pts = [None] * self.n
        for i, j in enumerate(perm):
            pts[j] = self.points[i]
        return Configuration(tuple(pts))

    def as_floats(self) -> dict:
        return {label_name(i): tuple(float(c) for c in p) for i, p in enumerate(self.points)}

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "n": self.n,
            "points": {label_name(i): [format_rational(c) for c in p]
                       for i, p in enumerate(self.points)},
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Configuration":
        raw = doc["points"]
        n = int(doc.get("n", len(raw)))
        by_index = {parse_label(k): v for k, v in raw.items()}
        if sorted(by_index) != list(range(n)):
            raise ValueError(f"labels must be exactly 0..{n - 1}, got {sorted(by_index)}")
        return cls(tuple(tuple(Fraction(str(c)) for c in by_index[i]) for i in range(n)))


def _det3(a, b, c):
    return (a[0] * (b[1] * c[2] - b[2] * c[1])
            - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]))


def six_volume(config: Configuration, p, q, r, s) -> Fraction:
    """det[q-p; r-p; s-p], i.e. six times the signed volume."""
    labels = [parse_label(x) for x in (p, q, r, s)]
    if len(set(labels)) != 4:
        raise InvalidTetra(f"tetrahedron labels must be distinct: {labels}")
    if max(labels) >= config.n:
        raise InvalidTetra(f"label {label_name(max(labels))} not in a {config.n}-point configuration")
    P, Q, R, S = (config.points[i] for i in labels)
    return _det3([Q[k] - P[k] for k in range(3)],
                 [R[k] - P[k] for k in range(3)],
                 [S[k] - P[k] for k in range(3)])


def signed_volume(config: Configuration, p, q, r, s) -> Fraction:
    """Signed volume (1/6)·det[q-p; r-p; s-p] of the tetrahedron pqrs."""
    return six_volume(config, p, q, r, s) / 6


class SplitMix64:
    """SplitMix64 generator; see the module docstring for the constants."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def uniform_int(self, bound: int) -> int:
        """Uniform integer in [-bound, bound]."""
        m = 2 * bound + 1
        limit = (1 << 64) - (1 << 64) % m
        while True:
            v = self.next_u64()
            if v < limit:
                return v % m - bound

    def __iter__(self) -> Iterator[int]:
        while True:
            yield self.next_u64()


def random_configuration(n: int, coord_bound: int, seed: int) -> Configuration:
    """n points with independent uniform integer coordinates in [-coord_bound, coord_bound]."""
    if n < 4:
        raise UnsupportedArity(f"need n >= 4, got {n}")
    if coord_bound < 0:
        raise ValueError("coord_bound must be non-negative")
    rng = SplitMix64(seed)
    return Configuration(tuple(
        tuple(Fraction(rng.uniform_int(coord_bound)) for _ in range(3)) for _ in range(n)))
