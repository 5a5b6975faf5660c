"""Graded spaces, sparse rational vectors, even maps and products."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .grading import Bicharacter, Degree, GradingGroup, StructureError, validate_bicharacter

Scalar = Fraction


def to_scalar(value) -> Fraction:
    """Exact rational from an int, Fraction or string such as ``"-3/2"``.

    Floats are refused so that no binary rounding can leak into a table.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise StructureError(f"refusing inexact coefficient {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip().replace("−", "-")
        if not text or any(ch in text for ch in ".eE"):
            raise StructureError(f"not an exact rational: {value!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise StructureError(f"not an exact rational: {value!r}") from exc
    raise StructureError(f"unsupported coefficient type {type(value).__name__}")


def format_scalar(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class Vector:
    """Sparse vector: basis index -> nonzero Fraction."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, object] | Iterable[tuple[int, object]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c: dict[int, Fraction] = {}
        for i, v in items:
            v = to_scalar(v)
            if v:
                c[i] = c.get(i, Fraction(0)) + v
                if not c[i]:
                    del c[i]
        self._c = c

    @classmethod
    def _raw(cls, c: dict[int, Fraction]) -> "Vector":
        v = cls.__new__(cls)
        v._c = c
        return v

    @classmethod
    def basis(cls, i: int) -> "Vector":
        return cls._raw({i: Fraction(1)})

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._c)

    def items(self):
        return self._c.items()

    def support(self) -> list[int]:
        return sorted(self._c)

    def __getitem__(self, i: int) -> Fraction:
        return self._c.get(i, Fraction(0))

    def __bool__(self) -> bool:
        return bool(self._c)

    def __len__(self) -> int:
        return len(self._c)

    def __eq__(self, other) -> bool:
        if isinstance(other, Vector):
            return self._c == other._c
        if other == 0:
            return not self._c
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._c.items()))

    def __add__(self, other: "Vector") -> "Vector":
        c = dict(self._c)
        for i, v in other._c.items():
            s = c.get(i, 0) + v
            if s:
                c[i] = s
            else:
                c.pop(i, None)
        return Vector._raw(c)

    def __neg__(self) -> "Vector":
        return Vector._raw({i: -v for i, v in self._c.items()})

    def __sub__(self, other: "Vector") -> "Vector":
        return self + (-other)

    def scale(self, k) -> "Vector":
        k = Fraction(k)
        if not k:
            return Vector()
        return Vector._raw({i: k * v for i, v in self._c.items()})

    def __mul__(self, k) -> "Vector":
        return self.scale(k)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        if not self._c:
            return "Vector(0)"
        return "Vector(" + ", ".join(
            f"{i}: {format_scalar(v)}" for i, v in sorted(self._c.items())) + ")"


ZERO = Vector()


def vsum(vectors: Iterable[Vector]) -> Vector:
    acc: dict[int, Fraction] = {}
    for vec in vectors:
        for i, v in vec.items():
            s = acc.get(i, 0) + v
            if s:
                acc[i] = s
            else:
                acc.pop(i, None)
    return Vector._raw(acc)


@dataclass(frozen=True)
class GradedSpace:
    group: GradingGroup
    basis: tuple[tuple[str, Degree], ...]

    def __post_init__(self):
        basis = tuple((str(n), self.group.degree(d)) for n, d in self.basis)
        object.__setattr__(self, "basis", basis)
        names = [n for n, _ in basis]
        if len(set(names)) != len(names):
            raise StructureError("basis names must be unique")
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.basis]

    def name(self, i: int) -> str:
        return self.basis[i][0]

    def degree(self, i: int) -> Degree:
        return self.basis[i][1]

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise StructureError(f"unknown basis element {name!r}") from None

    def blocks(self) -> dict[Degree, list[int]]:
        """Basis indices grouped by degree, in order of first appearance."""
        out: dict[Degree, list[int]] = {}
        for i, (_, d) in enumerate(self.basis):
            out.setdefault(d, []).append(i)
        return out

    def degree_of(self, v: Vector) -> Degree | None:
        """Degree of a nonzero homogeneous vector, else None."""
        degs = {self.degree(i) for i in v.support()}
        return degs.pop() if len(degs) == 1 else None

    def render(self, v: Vector) -> dict[str, str]:
        return {self.name(i): format_scalar(c) for i, c in sorted(v.items())}


@dataclass(frozen=True, eq=False)
class LinearMap:
    """Linear endomorphism given by the images of the basis vectors."""

    images: tuple[Vector, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))

    @property
    def dim(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, dim: int) -> "LinearMap":
        return cls(tuple(Vector.basis(i) for i in range(dim)))

    @classmethod
    def scalar(cls, c, dim: int) -> "LinearMap":
        return cls(tuple(Vector.basis(i).scale(c) for i in range(dim)))

    @classmethod
    def zero(cls, dim: int) -> "LinearMap":
        return cls((ZERO,) * dim)

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence[object]]) -> "LinearMap":
        """Matrix convention: entry ``[i][j]`` is the coefficient of e_i in m(e_j)."""
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise StructureError("linear map matrix must be square")
        return cls(tuple(Vector((i, rows[i][j]) for i in range(n)) for j in range(n)))

    def matrix(self) -> list[list[Fraction]]:
        n = self.dim
        return [[self.images[j][i] for j in range(n)] for i in range(n)]

    def __call__(self, v: Vector) -> Vector:
        if v and max(v.support()) >= self.dim:
            raise StructureError("vector does not fit the map's dimension")
        acc: dict[int, Fraction] = {}
        for j, c in v.items():
            for i, m in self.images[j].items():
                s = acc.get(i, 0) + c * m
                if s:
                    acc[i] = s
                else:
                    acc.pop(i, None)
        return Vector._raw(acc)

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        """Composition ``self o other``."""
        if other.dim != self.dim:
            raise StructureError("dimension mismatch in composition")
        return LinearMap(tuple(self(v) for v in other.images))

    def __add__(self, other: "LinearMap") -> "LinearMap":
        if other.dim != self.dim:
            raise StructureError("dimension mismatch in sum")
        return LinearMap(tuple(a + b for a, b in zip(self.images, other.images)))

    def scale(self, c) -> "LinearMap":
        return LinearMap(tuple(v.scale(c) for v in self.images))

    def power(self, n: int) -> "LinearMap":
        if n < 0:
            raise ValueError("negative power")
        result = LinearMap.identity(self.dim)
        base = self
        while n:
            if n & 1:
                result = base @ result
            base = base @ base
            n >>= 1
        return result

    def is_even(self, space: GradedSpace) -> bool:
        return self.odd_entry(space) is None

    def odd_entry(self, space: GradedSpace) -> tuple[int, int] | None:
        """First (source, target) pair breaking degree preservation."""
        for j, img in enumerate(self.images):
            for i in img.support():
                if space.degree(i) != space.degree(j):
                    return j, i
        return None

    def __eq__(self, other) -> bool:
        return isinstance(other, LinearMap) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        rows = [[format_scalar(c) for c in row] for row in self.matrix()]
        return f"LinearMap({rows})"


@dataclass(frozen=True, eq=False)
class Product:
    """Even bilinear product stored as sparse structure constants."""

    name: str
    table: Mapping[tuple[int, int], Vector]

    def __post_init__(self):
        object.__setattr__(
            self, "table", {k: v for k, v in dict(self.table).items() if v})

    @classmethod
    def from_function(cls, name: str, dim: int,
                      f: Callable[[int, int], Vector]) -> "Product":
        return cls(name, {(i, j): f(i, j) for i in range(dim) for j in range(dim)})

    def basis_product(self, i: int, j: int) -> Vector:
        return self.table.get((i, j), ZERO)

    def __call__(self, v: Vector, w: Vector) -> Vector:
        acc: dict[int, Fraction] = {}
        table = self.table
        for i, a in v.items():
            for j, b in w.items():
                entry = table.get((i, j))
                if entry is None:
                    continue
                ab = a * b
                for k, c in entry.items():
                    s = acc.get(k, 0) + ab * c
                    if s:
                        acc[k] = s
                    else:
                        acc.pop(k, None)
        return Vector._raw(acc)

    def renamed(self, name: str) -> "Product":
        return Product(name, self.table)

    def odd_entry(self, space: GradedSpace) -> tuple[int, int, int] | None:
        for (i, j), v in sorted(self.table.items()):
            target = space.group.add(space.degree(i), space.degree(j))
            for k in v.support():
                if space.degree(k) != target:
                    return i, j, k
        return None

    def __eq__(self, other) -> bool:
        return (isinstance(other, Product) and self.name == other.name
                and self.table == other.table)

    def __hash__(self) -> int:
        return hash((self.name, frozenset(self.table.items())))


@dataclass(frozen=True, eq=False)
class HomAlgebra:
    """A color Hom-algebra ``(A, mu_1, ..., mu_n, eps, alpha)``.

    ``maps`` holds auxiliary named operators (e.g. a Rota-Baxter map ``R``);
    ``meta`` holds document annotations that take no part in equality.
    """

    space: GradedSpace
    products: tuple[Product, ...]
    alpha: LinearMap
    eps: Bicharacter
    maps: Mapping[str, LinearMap] = field(default_factory=dict)
    meta: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "products", tuple(self.products))
        object.__setattr__(self, "maps", dict(self.maps))
        object.__setattr__(self, "meta", dict(self.meta))
        sp = self.space
        if sp.dim == 0:
            raise StructureError("algebra must have positive dimension")
        report = validate_bicharacter(self.eps, sp.group)
        if not report.passed:
            a, b = report.witness
            raise StructureError(f"invalid bicharacter: {report.reason} at {a}, {b}")
        names = [p.name for p in self.products]
        if len(set(names)) != len(names):
            raise StructureError("product names must be unique")
        for p in self.products:
            bad = p.odd_entry(sp)
            if bad is not None:
                i, j, k = bad
                raise StructureError(
                    f"product {p.name!r} is not even: {sp.name(i)}*{sp.name(j)} "
                    f"has a component along {sp.name(k)}")
            if any(max(i, j) >= sp.dim for i, j in p.table):
                raise StructureError(f"product {p.name!r} has entries outside the basis")
        if self.alpha.dim != sp.dim:
            raise StructureError("twisting map has the wrong dimension")
        bad = self.alpha.odd_entry(sp)
        if bad is not None:
            j, i = bad
            raise StructureError(
                f"twisting map is not even: alpha({sp.name(j)}) has a component "
                f"along {sp.name(i)}")
        for name, m in self.maps.items():
            if m.dim != sp.dim:
                raise StructureError(f"map {name!r} has the wrong dimension")

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def group(self) -> GradingGroup:
        return self.space.group

    @property
    def product_names(self) -> list[str]:
        return [p.name for p in self.products]

    def product(self, name: str) -> Product:
        for p in self.products:
            if p.name == name:
                return p
        raise KeyError(f"no product named {name!r}; have {self.product_names}")

    def mul(self, name: str, v: Vector, w: Vector) -> Vector:
        return self.product(name)(v, w)

    def e(self, name: str) -> Vector:
        return Vector.basis(self.space.index(name))

    def eps_basis(self, i: int, j: int) -> int:
        return self.eps(self.space.degree(i), self.space.degree(j))

    def vector(self, coeffs: Mapping[str, object]) -> Vector:
        return Vector((self.space.index(n), c) for n, c in coeffs.items())

    def with_(self, **changes) -> "HomAlgebra":
        return replace(self, **changes)

    def same_structure(self, other: "HomAlgebra") -> bool:
        return (self.space == other.space and self.products == other.products
                and self.alpha == other.alpha and self.eps == other.eps)

    def __eq__(self, other) -> bool:
        return (isinstance(other, HomAlgebra) and self.same_structure(other)
                and self.maps == other.maps)

    __hash__ = None


def product_eval(alg: HomAlgebra, p: str, v: Vector, w: Vector) -> Vector:
    return alg.mul(p, v, w)


def map_apply(m: LinearMap, v: Vector) -> Vector:
    return m(v)


def basis_vectors(dim: int) -> Iterator[Vector]:
    return (Vector.basis(i) for i in range(dim))
