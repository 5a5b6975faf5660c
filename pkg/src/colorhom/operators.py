"""Operator identities: Rota-Baxter, Nijenhuis, averaging, centroid, morphisms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .algebra import HomAlgebra, LinearMap, Vector, to_scalar
from .dsl import CheckReport, Witness
from .grading import StructureError

KINDS = ("rota_baxter", "nijenhuis", "averaging", "centroid")


@dataclass(frozen=True)
class OperatorKind:
    tag: str
    weight: Fraction | None = None

    def __post_init__(self):
        if self.tag not in KINDS:
            raise ValueError(f"unknown operator kind {self.tag!r}; expected one of {KINDS}")
        if (self.weight is not None) != (self.tag == "rota_baxter"):
            raise ValueError("a weight is required for rota_baxter and only for it")
        if self.weight is not None:
            object.__setattr__(self, "weight", to_scalar(self.weight))

    @classmethod
    def rota_baxter(cls, weight) -> "OperatorKind":
        return cls("rota_baxter", to_scalar(weight))

    @classmethod
    def parse(cls, tag: str, weight=None) -> "OperatorKind":
        if tag == "rota_baxter":
            return cls.rota_baxter(0 if weight is None else weight)
        return cls(tag)

    def __str__(self) -> str:
        return f"rota_baxter({self.weight})" if self.tag == "rota_baxter" else self.tag


def _require_even(alg: HomAlgebra, m: LinearMap, what: str = "map") -> None:
    if m.dim != alg.dim:
        raise StructureError(f"{what} has dimension {m.dim}, algebra has {alg.dim}")
    bad = m.odd_entry(alg.space)
    if bad is not None:
        j, i = bad
        raise StructureError(
            f"{what} is not even: image of {alg.space.name(j)} has a component "
            f"along {alg.space.name(i)}")


def _commutes(alg: HomAlgebra, f: LinearMap, g: LinearMap, label: str,
              count: int) -> tuple[CheckReport | None, int]:
    for i in range(alg.dim):
        count += 1
        r = f(g.images[i]) - g(f.images[i])
        if r:
            return CheckReport(False, Witness(label, (i,), r), count, label), count
    return None, count


def check_operator(alg: HomAlgebra, kind: OperatorKind, m: LinearMap,
                   products: Iterable[str] | None = None) -> CheckReport:
    """Check an operator identity on all basis pairs of the chosen products.

    Commutation with alpha is checked first for the kinds whose definition
    demands it (everything except centroid).
    """
    _require_even(alg, m)
    names = list(products) if products is not None else alg.product_names
    prods = [alg.product(n) for n in names]
    label = str(kind)
    count = 0
    if kind.tag != "centroid":
        fail, count = _commutes(alg, m, alg.alpha, f"{kind.tag}:commutes-with-alpha", count)
        if fail is not None:
            return CheckReport(False, fail.witness, count, label)
    basis = [Vector.basis(i) for i in range(alg.dim)]
    img = m.images
    lam = kind.weight
    for p in prods:
        for i in range(alg.dim):
            for j in range(alg.dim):
                count += 1
                x, y = basis[i], basis[j]
                mx, my = img[i], img[j]
                if kind.tag == "rota_baxter":
                    residuals = [p(mx, my) - m(p(mx, y) + p(x, my) + p(x, y).scale(lam))]
                elif kind.tag == "nijenhuis":
                    xy = p(x, y)
                    residuals = [p(mx, my) - m(p(mx, y) + p(x, my) - m(xy))]
                elif kind.tag == "averaging":
                    mid = p(mx, my)
                    residuals = [m(p(mx, y)) - mid, mid - m(p(x, my))]
                else:
                    mxy = m(p(x, y))
                    residuals = [mxy - p(mx, y), mxy - p(x, my)]
                for r in residuals:
                    if r:
                        return CheckReport(False, Witness(f"{kind.tag}[{p.name}]", (i, j), r),
                                           count, label)
    return CheckReport(True, None, count, label)


def check_morphism(src: HomAlgebra, dst: HomAlgebra, f: LinearMap) -> CheckReport:
    """f o alpha == alpha' o f and f(mu_i(x, y)) == mu_i'(f(x), f(y)) for all i.

    Products are matched by position.
    """
    if src.group != dst.group or src.eps != dst.eps:
        raise StructureError("source and target must share grading group and bicharacter")
    if len(src.products) != len(dst.products):
        raise StructureError(
            f"product count mismatch: {len(src.products)} vs {len(dst.products)}")
    if f.dim != src.dim or any(v and max(v.support()) >= dst.dim for v in f.images):
        raise StructureError("map does not fit source and target dimensions")
    for j, img in enumerate(f.images):
        for i in img.support():
            if dst.space.degree(i) != src.space.degree(j):
                raise StructureError(f"map is not even at {src.space.name(j)}")
    count = 0
    for i in range(src.dim):
        count += 1
        r = f(src.alpha.images[i]) - dst.alpha(f.images[i])
        if r:
            return CheckReport(False, Witness("morphism:alpha", (i,), r), count, "morphism")
    for p, q in zip(src.products, dst.products):
        for i in range(src.dim):
            for j in range(src.dim):
                count += 1
                r = f(p.basis_product(i, j)) - q(f.images[i], f.images[j])
                if r:
                    return CheckReport(False, Witness(f"morphism[{p.name}]", (i, j), r),
                                       count, "morphism")
    return CheckReport(True, None, count, "morphism")


def maps_commute(f: LinearMap, g: LinearMap) -> bool:
    return f @ g == g @ f
