"""Constructions producing new color Hom-algebras from old ones.

Every construction checks its hypotheses before building (raising
``HypothesisError``) and, unless ``verify=False``, runs the resulting algebra
through the suite its conclusion names.  A failing conclusion is reported in
``ConstructionResult.reports`` rather than raised: it is a finding about the
inputs, not a usage error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .algebra import GradedSpace, HomAlgebra, LinearMap, Product, Vector, to_scalar
from .document import algebra_from_dict, algebra_to_dict, matrix_to_json
from .dsl import CheckReport, evaluate_identity, parse_identity
from .expectations import check_expectations, rota_baxter_maps
from .operators import OperatorKind, check_morphism, check_operator, maps_commute
from .suites import SuiteReport, check_multiplicative, check_suite, get_suite, resolve_binding

TRI_SLOTS = ("ladj", "radj", "dot")
DI_SLOTS = ("ladj", "radj")
PL_SLOTS = ("br", "mu")


class ConstructionError(Exception):
    """A construction could not be applied to its inputs."""


class HypothesisError(ConstructionError):
    """One or more hypotheses failed; ``failures`` lists (label, report) pairs."""

    def __init__(self, construction: str, failures: list[tuple[str, object]]):
        self.construction = construction
        self.failures = failures
        labels = ", ".join(label for label, _ in failures)
        super().__init__(f"{construction}: hypotheses failed: {labels}")


@dataclass(frozen=True)
class ConstructionResult:
    algebra: HomAlgebra
    provenance: Mapping
    expected_suite: str | None
    binding: Mapping[str, str] = field(default_factory=dict)
    reports: tuple[SuiteReport | CheckReport, ...] = ()
    verify: bool = True

    @property
    def verified(self) -> bool:
        """True when verification ran and every conclusion check passed."""
        return self.verify and all(r.passed for r in self.reports)


# -- helpers -------------------------------------------------------------------------

def _sole_product(alg: HomAlgebra, product: str | None, construction: str) -> Product:
    if product is not None:
        return alg.product(product)
    if len(alg.products) != 1:
        raise ConstructionError(
            f"{construction} needs a single product, got {alg.product_names}; pass product=")
    return alg.products[0]


def _build(dim: int, name: str, f: Callable[[int, int], Vector]) -> Product:
    return Product.from_function(name, dim, f)


def _eps_sign(alg: HomAlgebra) -> Callable[[int, int], int]:
    return alg.eps_basis


def _param(value):
    if isinstance(value, LinearMap):
        return {"matrix": matrix_to_json(value)}
    if isinstance(value, Fraction):
        return str(value)
    return value


def _provenance(name: str, inputs: Sequence[HomAlgebra], **params) -> dict:
    return {"construction": name,
            "inputs": [algebra_to_dict(a) for a in inputs],
            "parameters": {k: _param(v) for k, v in params.items()}}


def _precheck(construction: str, checks: list[tuple[str, object]]) -> None:
    failures = [(label, r) for label, r in checks if not r.passed]
    if failures:
        raise HypothesisError(construction, failures)


def _finish(construction: str, alg: HomAlgebra, provenance: dict,
            expect: list[dict], verify: bool) -> ConstructionResult:
    meta = {"provenance": provenance}
    if expect:
        meta["expect"] = expect
    out = alg.with_(meta=meta)
    reports = tuple(check_expectations(out, expect)) if verify else ()
    primary = next((e for e in expect if "suite" in e), None)
    return ConstructionResult(
        out, provenance,
        primary["suite"] if primary else None,
        dict(primary.get("bind", {})) if primary else {},
        reports, verify)


def _suite_expect(suite: str, binding: Mapping[str, str]) -> dict:
    return {"suite": suite, "bind": dict(binding)}


# -- products and dialgebras ---------------------------------------------------------

def tensor_product(a1: HomAlgebra, a2: HomAlgebra, verify: bool = True) -> ConstructionResult:
    """(a1 x a2)(b1 x b2) = eps(a2, b1) (a1 b1) x (a2 b2), twist alpha1 x alpha2."""
    name = "tensor_product"
    if a1.group != a2.group or a1.eps != a2.eps:
        raise ConstructionError(f"{name}: factors must share grading group and bicharacter")
    if len(a1.products) != 1 or len(a2.products) != 1:
        raise ConstructionError(f"{name}: each factor must carry exactly one product")
    p1, p2 = a1.products[0], a2.products[0]
    expected = "hom-associative-color"
    if verify:
        h1 = check_suite(a1, "hom-associative-color", {"mu": p1.name})
        h2 = check_suite(a2, "hom-associative-color", {"mu": p2.name})
        if not (h1.passed and h2.passed):
            ls = check_suite(a1, "hom-left-symmetric-color", {"mu": p1.name})
            comm = check_suite(a2, "eps-commutative", {"mu": p2.name})
            _precheck(name, [("second factor hom-associative", h2),
                             ("first factor hom-left-symmetric", ls),
                             ("second factor eps-commutative", comm)])
            expected = "hom-left-symmetric-color"
    g = a1.group
    n2 = a2.dim
    basis = tuple((f"{a}⊗{b}", g.add(da, db))
                  for a, da in a1.space.basis for b, db in a2.space.basis)
    space = GradedSpace(g, basis)

    def tensor(v: Vector, w: Vector) -> Vector:
        return Vector((i * n2 + j, c * d) for i, c in v.items() for j, d in w.items())

    def mul(s: int, t: int) -> Vector:
        i1, i2 = divmod(s, n2)
        j1, j2 = divmod(t, n2)
        sign = a1.eps(a2.space.degree(i2), a1.space.degree(j1))
        return tensor(p1.basis_product(i1, j1), p2.basis_product(i2, j2)).scale(sign)

    alpha = LinearMap(tuple(tensor(a1.alpha.images[i], a2.alpha.images[j])
                            for i in range(a1.dim) for j in range(n2)))
    prod = _build(space.dim, "mu", mul)
    alg = HomAlgebra(space, (prod,), alpha, a1.eps)
    return _finish(name, alg, _provenance(name, [a1, a2]),
                   [_suite_expect(expected, {"mu": "mu"})], verify)


def nijenhuis_deform(alg: HomAlgebra, n: LinearMap, compose_alpha: bool = False,
                     product: str | None = None, verify: bool = True) -> ConstructionResult:
    """mu^N(x,y) = mu(Nx, y) + mu(x, Ny) - N mu(x, y); optionally alpha o mu^N.

    With ``compose_alpha`` the input is read as an associative color algebra
    (identity twist) with ``alg.alpha`` an even endomorphism commuting with N.
    """
    name = "nijenhuis_deform"
    p = _sole_product(alg, product, name)
    dim = alg.dim
    base = alg.with_(alpha=LinearMap.identity(dim)) if compose_alpha else alg
    if verify:
        checks = [("hom-associative", check_suite(base, "hom-associative-color", {"mu": p.name})),
                  ("nijenhuis", check_operator(base, OperatorKind("nijenhuis"), n, [p.name]))]
        if compose_alpha:
            checks.append(("alpha multiplicative",
                           check_multiplicative(alg.with_(products=(p,)))))
            checks.append(("N commutes with alpha",
                           check_operator(alg, OperatorKind("nijenhuis"), n, [])))
        _precheck(name, checks)

    def mul(i: int, j: int) -> Vector:
        x, y = Vector.basis(i), Vector.basis(j)
        v = p(n.images[i], y) + p(x, n.images[j]) - n(p.basis_product(i, j))
        return alg.alpha(v) if compose_alpha else v

    out = alg.with_(products=(_build(dim, "mu", mul),), maps={})
    return _finish(name, out,
                   _provenance(name, [alg], N=n, compose_alpha=compose_alpha, product=p.name),
                   [_suite_expect("hom-associative-color", {"mu": "mu"})], verify)


def averaging_dialgebra(alg: HomAlgebra, beta: LinearMap, product: str | None = None,
                        verify: bool = True) -> ConstructionResult:
    """x -| y = x . beta(y), x |- y = beta(x) . y, twisted by beta itself."""
    name = "averaging_dialgebra"
    p = _sole_product(alg, product, name)
    twisted = alg.with_(products=(p,), alpha=beta)
    if verify:
        _precheck(name, [
            ("hom-associative with twist beta",
             check_suite(twisted, "hom-associative-color", {"mu": p.name})),
            ("averaging", check_operator(twisted, OperatorKind("averaging"), beta)),
        ])
    dim = alg.dim
    ladj = _build(dim, "ladj", lambda i, j: p(Vector.basis(i), beta.images[j]))
    radj = _build(dim, "radj", lambda i, j: p(beta.images[i], Vector.basis(j)))
    out = alg.with_(products=(ladj, radj), alpha=beta, maps={})
    return _finish(name, out, _provenance(name, [alg], beta=beta, product=p.name),
                   [_suite_expect("hom-associative-color-dialgebra",
                                  {"ladj": "ladj", "radj": "radj"})], verify)


def ideal_dialgebra(s: HomAlgebra, ideal_basis: Sequence[str], product: str | None = None,
                    verify: bool = True) -> ConstructionResult:
    """Dialgebra on I + S for a coordinate ideal I spanned by ``ideal_basis``.

    (i1 + a1) -| (i2 + a2) = i1 a2 + a1 a2 and (i1 + a1) |- (i2 + a2) = a1 i2 + a1 a2,
    with i1 a2 and a1 i2 landing in the ideal copy.
    """
    name = "ideal_dialgebra"
    p = _sole_product(s, product, name)
    sp = s.space
    ideal = [sp.index(n) for n in ideal_basis]
    if len(set(ideal)) != len(ideal):
        raise ConstructionError(f"{name}: repeated ideal basis element")
    in_ideal = set(ideal)
    if verify:
        checks: list[tuple[str, object]] = [
            ("hom-left-symmetric", check_suite(s, "hom-left-symmetric-color", {"mu": p.name}))]
        checks.append(("alpha(I) in I", _subspace_check(
            "alpha(I) in I", [(k,) for k in ideal], lambda k: s.alpha.images[k], in_ideal)))
        pairs = [(k, j) for k in ideal for j in range(s.dim)]
        checks.append(("I.S in I", _subspace_check(
            "I.S in I", pairs, lambda k, j: p.basis_product(k, j), in_ideal)))
        checks.append(("S.I in I", _subspace_check(
            "S.I in I", [(j, k) for k, j in pairs], lambda j, k: p.basis_product(j, k),
            in_ideal)))
        one = s.with_(products=(p.renamed("mu"),))
        # both displayed hypotheses have this shape; they differ in which slot is in I
        text = ("mu(a(x),mu(y,z)) - mu(mu(x,y),a(z))"
                " - eps(x,y)*mu(a(y),mu(x,z)) + eps(x,y)*mu(mu(y,x),a(z))")
        h1 = parse_identity(text, name="ideal-left")
        h2 = parse_identity(text, name="ideal-right")
        full = range(s.dim)
        checks.append(("ideal identity (i, a, b)", evaluate_identity(one, h1, [ideal, full, full])))
        checks.append(("ideal identity (c, d, j)", evaluate_identity(one, h2, [full, full, ideal])))
        _precheck(name, checks)
    m = len(ideal)
    pos = {k: t for t, k in enumerate(ideal)}
    basis = tuple((f"I.{sp.name(k)}", sp.degree(k)) for k in ideal) + sp.basis
    space = GradedSpace(s.group, basis)

    def to_ideal(v: Vector) -> Vector:
        outside = [k for k in v.support() if k not in in_ideal]
        if outside:
            raise ConstructionError(
                f"{name}: product leaves the ideal along {sp.name(outside[0])}")
        return Vector((pos[k], c) for k, c in v.items())

    def to_s(v: Vector) -> Vector:
        return Vector((m + k, c) for k, c in v.items())

    def ladj(u: int, w: int) -> Vector:
        if u < m and w >= m:
            return to_ideal(p.basis_product(ideal[u], w - m))
        if u >= m and w >= m:
            return to_s(p.basis_product(u - m, w - m))
        return Vector()

    def radj(u: int, w: int) -> Vector:
        if u >= m and w < m:
            return to_ideal(p.basis_product(u - m, ideal[w]))
        if u >= m and w >= m:
            return to_s(p.basis_product(u - m, w - m))
        return Vector()

    alpha_imgs = [to_ideal(s.alpha.images[k]) for k in ideal]
    alpha_imgs += [to_s(v) for v in s.alpha.images]
    out = HomAlgebra(space, (_build(space.dim, "ladj", ladj), _build(space.dim, "radj", radj)),
                     LinearMap(tuple(alpha_imgs)), s.eps)
    return _finish(name, out, _provenance(name, [s], ideal_basis=list(ideal_basis),
                                          product=p.name),
                   [_suite_expect("hom-left-symmetric-color-dialgebra",
                                  {"ladj": "ladj", "radj": "radj"})], verify)


def _subspace_check(label: str, tuples, f, allowed: set[int]) -> CheckReport:
    from .dsl import Witness
    count = 0
    for t in tuples:
        count += 1
        v = f(*t)
        stray = Vector((k, c) for k, c in v.items() if k not in allowed)
        if stray:
            return CheckReport(False, Witness(label, tuple(t), stray), count, label)
    return CheckReport(True, None, count, label)


def bracket_from(alg: HomAlgebra, kind: str = "commutator",
                 binding: Mapping[str, str] | None = None,
                 verify: bool = True) -> ConstructionResult:
    """Append a bracket: mu - eps mu^op (commutator) or x -| y - eps(x,y) y |- x (dialgebra)."""
    name = "bracket_from"
    sign = _eps_sign(alg)
    dim = alg.dim
    if kind == "commutator":
        b = resolve_binding(alg, ("mu",), binding)
        mu = alg.product(b["mu"])
        if verify:
            _precheck(name, [("hom-associative",
                              check_suite(alg, "hom-associative-color", b))])
        br = _build(dim, "br", lambda i, j: mu.basis_product(i, j)
                    - mu.basis_product(j, i).scale(sign(i, j)))
        products = (mu.renamed("mu"), br)
        expect = _suite_expect("hom-poisson-color", {"mu": "mu", "br": "br"})
    elif kind == "dialgebra":
        b = resolve_binding(alg, DI_SLOTS, binding)
        la, ra = alg.product(b["ladj"]), alg.product(b["radj"])
        if verify:
            _precheck(name, [("hom-associative dialgebra",
                              check_suite(alg, "hom-associative-color-dialgebra", b))])
        br = _build(dim, "br", lambda i, j: la.basis_product(i, j)
                    - ra.basis_product(j, i).scale(sign(i, j)))
        products = (la.renamed("ladj"), ra.renamed("radj"), br)
        expect = _suite_expect("hom-poisson-color-dialgebra",
                               {"ladj": "ladj", "radj": "radj", "br": "br"})
    else:
        raise ConstructionError(f"{name}: kind must be 'commutator' or 'dialgebra', not {kind!r}")
    out = alg.with_(products=products, maps={})
    return _finish(name, out, _provenance(name, [alg], kind=kind, binding=dict(b)),
                   [expect], verify)


# -- splittings and derived structures -----------------------------------------------

def rb_split(alg: HomAlgebra, r: LinearMap, weight, mode: str = "tridendriform",
             product: str | None = None, verify: bool = True) -> ConstructionResult:
    """Split a product along a Rota-Baxter operator of the given weight.

    tridendriform: x -| y = x R(y), x |- y = eps(x,y) R(x) y, x * y = lambda eps(x,y) x y
    dendriform:    x -| y = x R(y) + lambda x y, x |- y = eps(x,y) R(x) y
    """
    name = "rb_split"
    lam = to_scalar(weight)
    p = _sole_product(alg, product, name)
    if mode not in ("tridendriform", "dendriform"):
        raise ConstructionError(f"{name}: mode must be tridendriform or dendriform")
    if verify:
        _precheck(name, [
            ("hom-associative", check_suite(alg, "hom-associative-color", {"mu": p.name})),
            (f"rota-baxter weight {lam}",
             check_operator(alg, OperatorKind.rota_baxter(lam), r, [p.name])),
        ])
    dim = alg.dim
    sign = _eps_sign(alg)
    if mode == "tridendriform":
        ladj = _build(dim, "ladj", lambda i, j: p(Vector.basis(i), r.images[j]))
    else:
        ladj = _build(dim, "ladj", lambda i, j: p(Vector.basis(i), r.images[j])
                      + p.basis_product(i, j).scale(lam))
    radj = _build(dim, "radj", lambda i, j: p(r.images[i], Vector.basis(j)).scale(sign(i, j)))
    if mode == "tridendriform":
        dot = _build(dim, "dot", lambda i, j: p.basis_product(i, j).scale(lam * sign(i, j)))
        products = (ladj, radj, dot)
        expect = _suite_expect("hom-tridendriform-color",
                               {"ladj": "ladj", "radj": "radj", "dot": "dot"})
    else:
        products = (ladj, radj)
        expect = _suite_expect("hom-dendriform-color", {"ladj": "ladj", "radj": "radj"})
    out = alg.with_(products=products, maps={})
    return _finish(name, out, _provenance(name, [alg], R=r, weight=lam, mode=mode,
                                          product=p.name), [expect], verify)


def _tri_products(construction: str, tri: HomAlgebra, binding, verify: bool):
    b = resolve_binding(tri, TRI_SLOTS, binding)
    if verify:
        _precheck(construction, [("hom-tridendriform",
                                  check_suite(tri, "hom-tridendriform-color", b))])
    return b, tri.product(b["ladj"]), tri.product(b["radj"]), tri.product(b["dot"])


def sum_product(tri: HomAlgebra, binding: Mapping[str, str] | None = None,
                verify: bool = True) -> ConstructionResult:
    """x * y = x |- y + eps(x,y) x -| y + x . y"""
    name = "sum_product"
    b, la, ra, dot = _tri_products(name, tri, binding, verify)
    sign = _eps_sign(tri)
    star = _build(tri.dim, "mu", lambda i, j: ra.basis_product(i, j)
                  + la.basis_product(i, j).scale(sign(i, j)) + dot.basis_product(i, j))
    out = tri.with_(products=(star,), maps={})
    return _finish(name, out, _provenance(name, [tri], binding=dict(b)),
                   [_suite_expect("hom-associative-color", {"mu": "mu"})], verify)


def tridendriform_to_postlie(tri: HomAlgebra, binding: Mapping[str, str] | None = None,
                             verify: bool = True) -> ConstructionResult:
    """x o y = x |- y - y -| x and [x, y] = x . y - eps(x,y) y . x"""
    name = "tridendriform_to_postlie"
    b, la, ra, dot = _tri_products(name, tri, binding, verify)
    sign = _eps_sign(tri)
    circ = _build(tri.dim, "mu", lambda i, j: ra.basis_product(i, j) - la.basis_product(j, i))
    br = _build(tri.dim, "br", lambda i, j: dot.basis_product(i, j)
                - dot.basis_product(j, i).scale(sign(i, j)))
    out = tri.with_(products=(br, circ), maps={})
    return _finish(name, out, _provenance(name, [tri], binding=dict(b)),
                   [_suite_expect("hom-post-lie-color", {"br": "br", "mu": "mu"})], verify)


def postlie_star(pl: HomAlgebra, binding: Mapping[str, str] | None = None,
                 verify: bool = True) -> ConstructionResult:
    """x * y = x . y + 1/2 [x, y]; its commutator should be a Hom-Lie bracket."""
    name = "postlie_star"
    b = resolve_binding(pl, PL_SLOTS, binding)
    if verify:
        _precheck(name, [("hom-post-lie", check_suite(pl, "hom-post-lie-color", b))])
    mu, br = pl.product(b["mu"]), pl.product(b["br"])
    half = Fraction(1, 2)
    star = _build(pl.dim, "mu", lambda i, j: mu.basis_product(i, j)
                  + br.basis_product(i, j).scale(half))
    out = pl.with_(products=(star,), maps={})
    return _finish(name, out, _provenance(name, [pl], binding=dict(b)),
                   [_suite_expect("hom-lie-admissible-color", {"mu": "mu"})], verify)


def opposite(tri: HomAlgebra, binding: Mapping[str, str] | None = None,
             verify: bool = True) -> ConstructionResult:
    """x -|op y = y |- x, x |-op y = y -| x, x .op y = y . x (no sign inserted)."""
    name = "opposite"
    b, la, ra, dot = _tri_products(name, tri, binding, verify)
    swap = lambda p, new: _build(tri.dim, new, lambda i, j: p.basis_product(j, i))  # noqa: E731
    out = tri.with_(products=(swap(ra, "ladj"), swap(la, "radj"), swap(dot, "dot")), maps={})
    return _finish(name, out, _provenance(name, [tri], binding=dict(b)),
                   [_suite_expect("hom-tridendriform-color",
                                  {"ladj": "ladj", "radj": "radj", "dot": "dot"})], verify)


def dendriform_from_tri(tri: HomAlgebra, binding: Mapping[str, str] | None = None,
                        verify: bool = True) -> ConstructionResult:
    """Keep -| and merge x |-' y = x |- y + x . y"""
    name = "dendriform_from_tri"
    b, la, ra, dot = _tri_products(name, tri, binding, verify)
    merged = _build(tri.dim, "radj", lambda i, j: ra.basis_product(i, j) + dot.basis_product(i, j))
    out = tri.with_(products=(la.renamed("ladj"), merged), maps={})
    return _finish(name, out, _provenance(name, [tri], binding=dict(b)),
                   [_suite_expect("hom-dendriform-color", {"ladj": "ladj", "radj": "radj"})],
                   verify)


# -- twisting ------------------------------------------------------------------------

def _carried_expect(alg: HomAlgebra, suite: str | None,
                    binding: Mapping[str, str] | None) -> list[dict]:
    if suite is not None:
        b = resolve_binding(alg, get_suite(suite).slots, binding)
        rest = [e for e in alg.meta.get("expect", []) if "operator" in e]
        return [_suite_expect(suite, b)] + rest
    return [dict(e) for e in alg.meta.get("expect", [])]


def yau_twist(alg: HomAlgebra, beta: LinearMap, n: int, suite: str | None = None,
              binding: Mapping[str, str] | None = None,
              verify: bool = True) -> ConstructionResult:
    """Compose every product and the twist with beta^n; carry auxiliary maps over.

    The expected suite is ``suite`` or, by default, the input's annotations.
    """
    name = "yau_twist"
    if n < 0:
        raise ConstructionError(f"{name}: n must be nonnegative")
    expect = _carried_expect(alg, suite, binding)
    if verify:
        _precheck(name, [("beta endomorphism", check_morphism(alg, alg, beta))])
    bn = beta.power(n)
    products = tuple(_build(alg.dim, p.name, lambda i, j, p=p: bn(p.basis_product(i, j)))
                     for p in alg.products)
    out = alg.with_(products=products, alpha=bn @ alg.alpha)
    return _finish(name, out, _provenance(name, [alg], beta=beta, n=n), expect, verify)


def derived_algebra(alg: HomAlgebra, dtype: int, k: int, suite: str | None = None,
                    binding: Mapping[str, str] | None = None,
                    verify: bool = True) -> ConstructionResult:
    """kth derived algebra: type 1 is (alpha^k o mu, alpha^(k+1)),
    type 2 is (alpha^(2^k - 1) o mu, alpha^(2^k))."""
    name = "derived_algebra"
    if dtype not in (1, 2):
        raise ConstructionError(f"{name}: type must be 1 or 2")
    if k < 0:
        raise ConstructionError(f"{name}: k must be nonnegative")
    if verify:
        _precheck(name, [("multiplicative", check_multiplicative(alg))])
    n = k if dtype == 1 else 2 ** k - 1
    res = yau_twist(alg, alg.alpha, n, suite, binding, verify)
    prov = _provenance(name, [alg], dtype=dtype, k=k)
    out = res.algebra.with_(meta={**res.algebra.meta, "provenance": prov})
    return ConstructionResult(out, prov, res.expected_suite, res.binding, res.reports, verify)


def centroid_twist(alg: HomAlgebra, b1: LinearMap, b2: LinearMap, variant: int,
                   suite: str | None = None, binding: Mapping[str, str] | None = None,
                   verify: bool = True) -> ConstructionResult:
    """variant 1: mu(b2 b1 x, y); variant 2: mu(b1 x, b2 y); twist b2 b1 alpha."""
    name = "centroid_twist"
    if variant not in (1, 2):
        raise ConstructionError(f"{name}: variant must be 1 or 2")
    expect = _carried_expect(alg, suite, binding)
    if verify:
        centroid = OperatorKind("centroid")
        checks = [("b1 in centroid", check_operator(alg, centroid, b1)),
                  ("b2 in centroid", check_operator(alg, centroid, b2))]
        _precheck(name, checks)
        problems = []
        if not maps_commute(b1, b2):
            problems.append("b1 and b2 do not commute")
        for mname in rota_baxter_maps(alg):
            r = alg.maps.get(mname)
            if r is not None and not (maps_commute(b1, r) and maps_commute(b2, r)):
                problems.append(f"centroid maps do not commute with {mname}")
        if problems:
            raise HypothesisError(name, [(msg, None) for msg in problems])
    b21 = b2 @ b1
    if variant == 1:
        f = lambda p: (lambda i, j: p(b21.images[i], Vector.basis(j)))  # noqa: E731
    else:
        f = lambda p: (lambda i, j: p(b1.images[i], b2.images[j]))  # noqa: E731
    products = tuple(_build(alg.dim, p.name, f(p)) for p in alg.products)
    out = alg.with_(products=products, alpha=b21 @ alg.alpha)
    return _finish(name, out, _provenance(name, [alg], b1=b1, b2=b2, variant=variant),
                   expect, verify)


# -- replay --------------------------------------------------------------------------

def _map_param(obj) -> LinearMap:
    return LinearMap.from_matrix([[to_scalar(c) for c in row] for row in obj["matrix"]])


def replay(provenance: Mapping, verify: bool = True) -> ConstructionResult:
    """Re-run a construction from its provenance record."""
    name = provenance["construction"]
    inputs = [algebra_from_dict(d) for d in provenance["inputs"]]
    prm = dict(provenance.get("parameters", {}))
    for k, v in list(prm.items()):
        if isinstance(v, dict) and "matrix" in v:
            prm[k] = _map_param(v)
    a = inputs[0]
    if name == "tensor_product":
        return tensor_product(a, inputs[1], verify=verify)
    if name == "nijenhuis_deform":
        return nijenhuis_deform(a, prm["N"], prm["compose_alpha"], prm["product"], verify)
    if name == "averaging_dialgebra":
        return averaging_dialgebra(a, prm["beta"], prm["product"], verify)
    if name == "ideal_dialgebra":
        return ideal_dialgebra(a, prm["ideal_basis"], prm["product"], verify)
    if name == "bracket_from":
        return bracket_from(a, prm["kind"], prm["binding"], verify)
    if name == "rb_split":
        return rb_split(a, prm["R"], prm["weight"], prm["mode"], prm["product"], verify)
    if name in ("sum_product", "tridendriform_to_postlie", "postlie_star", "opposite",
                "dendriform_from_tri"):
        return globals()[name](a, prm["binding"], verify)
    if name == "yau_twist":
        return yau_twist(a, prm["beta"], prm["n"], verify=verify)
    if name == "derived_algebra":
        return derived_algebra(a, prm["dtype"], prm["k"], verify=verify)
    if name == "centroid_twist":
        return centroid_twist(a, prm["b1"], prm["b2"], prm["variant"], verify=verify)
    raise ConstructionError(f"unknown construction {name!r}")


CONSTRUCTIONS = ("tensor_product", "nijenhuis_deform", "averaging_dialgebra", "ideal_dialgebra",
                 "bracket_from", "rb_split", "sum_product", "tridendriform_to_postlie",
                 "postlie_star", "opposite", "dendriform_from_tri", "yau_twist",
                 "derived_algebra", "centroid_twist")
