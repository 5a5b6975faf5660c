"""Grading groups, degrees and sign bicharacters.

A grading group is ``Z^r x Z_m1 x ... x Z_mt``.  Degrees are plain integer
tuples with the torsion coordinates reduced.  A bicharacter is stored as an
integer exponent matrix ``M`` and evaluates to ``(-1) ** (a^T M b)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator, Sequence

Degree = tuple[int, ...]


class StructureError(ValueError):
    """Raised on malformed or inconsistent structural input."""


@dataclass(frozen=True)
class GradingGroup:
    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(m) for m in self.torsion))
        if self.free_rank < 0:
            raise StructureError("free_rank must be nonnegative")
        for m in self.torsion:
            if m < 2:
                raise StructureError(f"torsion order {m} must be >= 2")

    @property
    def rank(self) -> int:
        """Number of coordinates of a degree."""
        return self.free_rank + len(self.torsion)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def zero(self) -> Degree:
        return (0,) * self.rank

    def degree(self, coords: Sequence[int] | int) -> Degree:
        if isinstance(coords, int):
            coords = (coords,)
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.rank:
            raise StructureError(
                f"degree {coords} has {len(coords)} coordinates, group needs {self.rank}"
            )
        free = coords[: self.free_rank]
        tors = tuple(c % m for c, m in zip(coords[self.free_rank:], self.torsion))
        return free + tors

    def add(self, *degrees: Degree) -> Degree:
        total = [0] * self.rank
        for d in degrees:
            for k, c in enumerate(d):
                total[k] += c
        return self.degree(total)

    def elements(self) -> Iterator[Degree]:
        """All elements of a finite group, in lexicographic order."""
        if not self.is_finite:
            raise StructureError("cannot enumerate an infinite grading group")
        return itertools.product(*(range(m) for m in self.torsion))

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    witness: tuple[Degree, Degree] | None = None
    reason: str = ""


@dataclass(frozen=True)
class Bicharacter:
    exponent_matrix: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.exponent_matrix)
        if any(len(row) != len(rows) for row in rows):
            raise StructureError("bicharacter exponent matrix must be square")
        object.__setattr__(self, "exponent_matrix", rows)

    @classmethod
    def trivial(cls, rank: int) -> "Bicharacter":
        return cls(tuple((0,) * rank for _ in range(rank)))

    @property
    def size(self) -> int:
        return len(self.exponent_matrix)

    def __call__(self, a: Degree, b: Degree) -> int:
        if len(a) != self.size or len(b) != self.size:
            raise StructureError(
                f"degrees of length {len(a)}, {len(b)} do not match a "
                f"{self.size}x{self.size} bicharacter"
            )
        e = 0
        for i, ai in enumerate(a):
            if ai:
                row = self.exponent_matrix[i]
                for j, bj in enumerate(b):
                    e += ai * row[j] * bj
        return -1 if e % 2 else 1

    def to_json(self) -> dict:
        return {"exponent_matrix": [list(row) for row in self.exponent_matrix]}


def bicharacter_eval(eps: Bicharacter, a: Degree, b: Degree) -> int:
    return eps(a, b)


def _unit(rank: int, k: int) -> Degree:
    return tuple(1 if i == k else 0 for i in range(rank))


def validate_bicharacter(eps: Bicharacter, group: GradingGroup) -> ValidationReport:
    """Check skew-symmetry, well-definedness mod torsion, and (finite G) all axioms.

    The first violation found is returned as a pair of degrees.
    """
    n = group.rank
    if eps.size != n:
        raise StructureError(
            f"bicharacter has size {eps.size}, grading group has rank {n}"
        )
    m = eps.exponent_matrix
    for i in range(n):
        for j in range(i + 1, n):
            if (m[i][j] + m[j][i]) % 2:
                return ValidationReport(
                    False, (_unit(n, i), _unit(n, j)), "eps(a,b)eps(b,a) != 1"
                )
    for t, order in enumerate(group.torsion):
        k = group.free_rank + t
        for j in range(n):
            if (order * m[k][j]) % 2 or (order * m[j][k]) % 2:
                a, b = (_unit(n, k), _unit(n, j)) if (order * m[k][j]) % 2 else (
                    _unit(n, j), _unit(n, k))
                return ValidationReport(
                    False, (a, b), f"not well defined modulo torsion order {order}"
                )
    if group.is_finite:
        elems = list(group.elements())
        for a in elems:
            for b in elems:
                if eps(a, b) * eps(b, a) != 1:
                    return ValidationReport(False, (a, b), "eps(a,b)eps(b,a) != 1")
                for c in elems:
                    if eps(a, group.add(b, c)) != eps(a, b) * eps(a, c):
                        return ValidationReport(False, (a, b), "eps(a,b+c) not multiplicative")
                    if eps(group.add(a, b), c) != eps(a, c) * eps(b, c):
                        return ValidationReport(False, (a, b), "eps(a+b,c) not multiplicative")
    return ValidationReport(True)
