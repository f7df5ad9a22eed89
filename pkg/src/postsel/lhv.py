"""Exhaustive search for local hidden-variable assignments of GHZ parity constraints.

An assignment gives every particle predetermined values ``sx, sy`` in ``{-1, +1}``.
Assignments are enumerated as integers: bit ``n`` holds ``sx(n)`` and bit
``N + n`` holds ``sy(n)``, with bit value 0 meaning +1. Integer order is the
lexicographic witness order (particle 0 ``sx`` least significant).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from . import qcore
from .errors import BadTriplet, IndexOutOfRange, TooLarge

Axis = Literal["x", "y"]
MAX_PARTICLES = 12
CHUNK = 1 << 20


@dataclass(frozen=True)
class LHVAssignment:
    sx: tuple[int, ...]
    sy: tuple[int, ...]

    def __post_init__(self):
        if len(self.sx) != len(self.sy):
            raise ValueError("sx and sy must cover the same particles")
        if any(v not in (-1, 1) for v in self.sx + self.sy):
            raise ValueError("assigned values must be +1 or -1")

    @property
    def n(self) -> int:
        return len(self.sx)

    def value(self, particle: int, axis: Axis) -> int:
        return (self.sx if axis == "x" else self.sy)[particle]

    @classmethod
    def from_index(cls, index: int, n: int) -> "LHVAssignment":
        sx = tuple(-1 if (index >> k) & 1 else 1 for k in range(n))
        sy = tuple(-1 if (index >> (n + k)) & 1 else 1 for k in range(n))
        return cls(sx, sy)

    def to_index(self) -> int:
        bits = [v == -1 for v in self.sx + self.sy]
        return sum(1 << k for k, b in enumerate(bits) if b)


@dataclass(frozen=True)
class ParityConstraint:
    """``prod_(particle, axis) s_axis(particle) == rhs``."""

    factors: tuple[tuple[int, Axis], ...]
    rhs: int

    def __post_init__(self):
        particles = [p for p, _ in self.factors]
        if len(set(particles)) != len(particles):
            raise ValueError("particle indices must be distinct within one constraint")
        if any(a not in ("x", "y") for _, a in self.factors):
            raise ValueError("axis must be 'x' or 'y'")
        if self.rhs not in (-1, 1):
            raise ValueError("rhs must be +1 or -1")

    def mask(self, n: int) -> int:
        m = 0
        for p, a in self.factors:
            if not 0 <= p < n:
                raise IndexOutOfRange(f"particle {p} outside 0..{n - 1}")
            m |= 1 << (p if a == "x" else n + p)
        return m

    def __str__(self) -> str:
        body = " ".join(f"s{a}({p})" for p, a in self.factors)
        return f"{body} = {self.rhs:+d}"


@dataclass(frozen=True)
class SearchResult:
    satisfiable: bool
    witness: LHVAssignment | None
    assignments_checked: int


@dataclass(frozen=True)
class ParityCertificate:
    """Every variable occurs an even number of times but the right-hand sides multiply to -1."""

    counts: tuple[tuple[tuple[int, Axis], int], ...]
    rhs_product: int


def ghz_constraints(n: int, triplet: tuple[int, int, int] = (0, 1, 2)) -> list[ParityConstraint]:
    """All-``x`` parity (+1) and the three two-``y`` parities (-1) over a triplet."""
    if n < 3:
        raise BadTriplet(f"need at least 3 particles, got {n}")
    s, t, r = triplet
    if len({s, t, r}) != 3 or not all(0 <= k < n for k in triplet):
        raise BadTriplet(f"triplet {triplet} must be distinct indices below {n}")
    out = [ParityConstraint(tuple((k, "x") for k in range(n)), 1)]
    for pair in ((s, t), (s, r), (t, r)):
        out.append(
            ParityConstraint(tuple((k, "y" if k in pair else "x") for k in range(n)), -1)
        )
    return out


def check(assignment: LHVAssignment, constraints: Sequence[ParityConstraint]) -> bool:
    for c in constraints:
        prod = 1
        for p, a in c.factors:
            if not 0 <= p < assignment.n:
                raise IndexOutOfRange(f"particle {p} outside 0..{assignment.n - 1}")
            prod *= assignment.value(p, a)
        if prod != c.rhs:
            return False
    return True


def exhaustive_search(n: int, constraints: Sequence[ParityConstraint]) -> SearchResult:
    """Enumerate all ``4**n`` assignments in order; stop at the first witness."""
    if n > MAX_PARTICLES:
        raise TooLarge(f"enumeration capped at {MAX_PARTICLES} particles")
    if n < 1:
        raise ValueError("need at least one particle")
    masks = [(c.mask(n), 1 if c.rhs == -1 else 0) for c in constraints]
    total = 1 << (2 * n)
    for start in range(0, total, CHUNK):
        idx = np.arange(start, min(start + CHUNK, total), dtype=np.uint64)
        ok = np.ones(idx.shape, dtype=bool)
        for mask, parity in masks:
            ok &= (np.bitwise_count(idx & np.uint64(mask)) & 1) == parity
        hits = np.flatnonzero(ok)
        if hits.size:
            first = start + int(hits[0])
            return SearchResult(True, LHVAssignment.from_index(first, n), first + 1)
    return SearchResult(False, None, total)


def parity_obstruction(constraints: Sequence[ParityConstraint]) -> ParityCertificate | None:
    counts = Counter(f for c in constraints for f in c.factors)
    rhs = 1
    for c in constraints:
        rhs *= c.rhs
    if rhs == -1 and all(v % 2 == 0 for v in counts.values()):
        return ParityCertificate(tuple(sorted(counts.items())), rhs)
    return None


def constraint_operator(c: ParityConstraint) -> qcore.OperatorSum:
    """The spin product observable whose eigenvalue the constraint fixes."""
    return qcore.product(qcore.sx(p) if a == "x" else qcore.sy(p) for p, a in c.factors)
