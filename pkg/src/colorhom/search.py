"""Grid search for even linear maps satisfying an operator identity."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .algebra import HomAlgebra, LinearMap, Vector, to_scalar
from .operators import OperatorKind, check_operator


class SearchOverflow(RuntimeError):
    def __init__(self, count: int, limit: int):
        self.count = count
        self.limit = limit
        super().__init__(f"search space has {count} candidates, limit is {limit}")


@dataclass(frozen=True)
class SearchSpec:
    kind: OperatorKind
    entry_set: tuple[Fraction, ...]
    limit: int = 1_000_000
    products: tuple[str, ...] | None = None

    def __post_init__(self):
        entries = tuple(sorted({to_scalar(e) for e in self.entry_set}))
        if not entries:
            raise ValueError("entry_set must be nonempty")
        if self.limit <= 0:
            raise ValueError("limit must be positive")
        object.__setattr__(self, "entry_set", entries)


def even_positions(alg: HomAlgebra) -> list[tuple[int, int]]:
    """Matrix positions (row, col) allowed for an even map, row-major."""
    deg = alg.space.degree
    return [(i, j) for i in range(alg.dim) for j in range(alg.dim) if deg(i) == deg(j)]


def candidate_count(alg: HomAlgebra, spec: SearchSpec) -> int:
    return len(spec.entry_set) ** len(even_positions(alg))


def search_operators(alg: HomAlgebra, spec: SearchSpec) -> list[LinearMap]:
    """Every even map with entries from the grid that passes the operator check.

    Candidates are visited in lexicographic order of their row-major entry
    lists (entries ascending), so the result order is deterministic.
    """
    positions = even_positions(alg)
    count = candidate_count(alg, spec)
    if count > spec.limit:
        raise SearchOverflow(count, spec.limit)
    found = []
    dim = alg.dim
    for values in itertools.product(spec.entry_set, repeat=len(positions)):
        cols: list[dict[int, Fraction]] = [{} for _ in range(dim)]
        for (i, j), v in zip(positions, values):
            if v:
                cols[j][i] = v
        m = LinearMap(tuple(Vector(c) for c in cols))
        if check_operator(alg, spec.kind, m, spec.products).passed:
            found.append(m)
    return found
