"""Multilinear identity schemas: parser, renderer and basis-tuple evaluator.

Grammar (ASCII, whitespace ignored)::

    identity  := expr
    expr      := ["+"|"-"] term (("+"|"-") term)*
    term      := [rational "*"] (epsfac "*")* app
    epsfac    := "eps(" vsum "," vsum ")"
    vsum      := var ("+" var)*
    app       := pname "(" node "," node ")"
    node      := var | "a(" var ")" | pname "(" var "," var ")"
    var       := "x" | "y" | "z"

An identity asserts ``expr = 0`` for all homogeneous arguments.  Every term
must use each variable of the schema exactly once, so the schema is
multilinear and checking it on basis tuples is complete.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, Union

from .algebra import HomAlgebra, Vector, format_scalar, vsum

VARIABLES = ("x", "y", "z")
RESERVED = {"a", "eps", *VARIABLES}


class IdentitySyntaxError(ValueError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


@dataclass(frozen=True)
class Leaf:
    var: str
    twisted: bool = False

    def render(self) -> str:
        return f"a({self.var})" if self.twisted else self.var


@dataclass(frozen=True)
class App:
    pname: str
    left: Union["App", Leaf]
    right: Union["App", Leaf]

    def render(self) -> str:
        return f"{self.pname}({self.left.render()},{self.right.render()})"

    def variables(self) -> list[str]:
        out = []
        for node in (self.left, self.right):
            out.extend(node.variables() if isinstance(node, App) else [node.var])
        return out

    def products(self) -> set[str]:
        names = {self.pname}
        for node in (self.left, self.right):
            if isinstance(node, App):
                names |= node.products()
        return names


@dataclass(frozen=True)
class Term:
    coeff: Fraction
    eps_factors: tuple[tuple[tuple[str, ...], tuple[str, ...]], ...]
    pattern: App

    def render_body(self) -> str:
        parts = [f"eps({'+'.join(s)},{'+'.join(t)})" for s, t in self.eps_factors]
        parts.append(self.pattern.render())
        body = "*".join(parts)
        mag = abs(self.coeff)
        return body if mag == 1 else f"{format_scalar(mag)}*{body}"


@dataclass(frozen=True)
class IdentitySchema:
    arity: int
    terms: tuple[Term, ...]
    name: str = ""

    @property
    def variables(self) -> tuple[str, ...]:
        return VARIABLES[: self.arity]

    def products(self) -> set[str]:
        out: set[str] = set()
        for t in self.terms:
            out |= t.pattern.products()
        return out

    def render(self) -> str:
        pieces = []
        for k, t in enumerate(self.terms):
            sign = "-" if t.coeff < 0 else "+"
            body = t.render_body()
            if k == 0:
                pieces.append(f"-{body}" if sign == "-" else body)
            else:
                pieces.append(f" {sign} {body}")
        return "".join(pieces)

    def rename(self, binding: Mapping[str, str]) -> "IdentitySchema":
        """Substitute product names (slot -> product)."""
        def sub(node):
            if isinstance(node, Leaf):
                return node
            return App(binding.get(node.pname, node.pname), sub(node.left), sub(node.right))
        return IdentitySchema(self.arity, tuple(
            Term(t.coeff, t.eps_factors, sub(t.pattern)) for t in self.terms), self.name)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<id>[A-Za-z_][A-Za-z_0-9]*)|(?P<sym>[-+*(),]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise IdentitySyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.k = 0

    def peek(self, offset: int = 0):
        return self.tokens[min(self.k + offset, len(self.tokens) - 1)]

    def error(self, message: str, tok=None):
        tok = tok or self.peek()
        raise IdentitySyntaxError(message, tok[2], self.text)

    def take(self, value: str | None = None, kind: str | None = None):
        tok = self.peek()
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = repr(value) if value is not None else kind
            got = repr(tok[1]) if tok[0] != "end" else "end of input"
            self.error(f"expected {want}, got {got}")
        self.k += 1
        return tok

    def parse(self) -> list[Term]:
        terms = []
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "sym":
            sign = -1 if self.take()[1] == "-" else 1
        terms.append(self.term(sign))
        while self.peek()[0] != "end":
            tok = self.peek()
            if tok[1] not in ("+", "-"):
                self.error(f"expected '+' or '-' between terms, got {tok[1]!r}")
            self.k += 1
            terms.append(self.term(-1 if tok[1] == "-" else 1))
        return terms

    def term(self, sign: int) -> Term:
        coeff = Fraction(sign)
        if self.peek()[0] == "num":
            coeff *= Fraction(self.take()[1])
            self.take("*")
        elif self.peek()[1] == "-" and self.peek(1)[0] == "num":
            self.k += 1
            coeff *= -Fraction(self.take()[1])
            self.take("*")
        factors = []
        while self.peek()[1] == "eps":
            factors.append(self.epsfac())
            self.take("*")
        return Term(coeff, tuple(factors), self.app(top=True))

    def var(self) -> str:
        tok = self.peek()
        if tok[0] != "id":
            self.error("expected a variable")
        if tok[1] not in VARIABLES:
            self.error(f"unknown variable {tok[1]!r}")
        self.k += 1
        return tok[1]

    def epsfac(self):
        self.take("eps")
        self.take("(")
        left = self.vsum()
        self.take(",")
        right = self.vsum()
        self.take(")")
        return left, right

    def vsum(self) -> tuple[str, ...]:
        out = [self.var()]
        while self.peek()[1] == "+":
            self.k += 1
            out.append(self.var())
        return tuple(out)

    def pname(self) -> str:
        tok = self.peek()
        if tok[0] != "id":
            self.error("expected a product name")
        if tok[1] == "a":
            self.error("'a' is the twisting map, not a binary product")
        if tok[1] in RESERVED:
            self.error(f"{tok[1]!r} cannot name a product")
        self.k += 1
        return tok[1]

    def app(self, top: bool) -> App:
        name = self.pname()
        self.take("(")
        left = self.node(top)
        self.take(",")
        right = self.node(top)
        self.take(")")
        return App(name, left, right)

    def node(self, top: bool):
        tok = self.peek()
        if tok[0] != "id":
            self.error("expected a variable, a(...) or a product")
        if tok[1] in VARIABLES:
            return Leaf(self.var())
        if tok[1] == "a":
            self.k += 1
            self.take("(")
            inner = self.peek()
            if inner[1] == "a":
                self.error("twisting map nested under twisting map")
            if inner[0] == "id" and inner[1] not in VARIABLES and self.peek(1)[1] == "(":
                self.error("the twisting map applies to variables only")
            v = self.var()
            if self.peek()[1] == ",":
                self.error("'a' is the twisting map, not a binary product")
            self.take(")")
            return Leaf(v, twisted=True)
        if self.peek(1)[1] != "(":
            self.error(f"unknown variable {tok[1]!r}")
        if not top:
            self.error("pattern deeper than two product applications")
        return self.app(top=False)


def _check_term(term: Term, text: str) -> tuple[str, ...]:
    pat = term.pattern
    nested = [n for n in (pat.left, pat.right) if isinstance(n, App)]
    if len(nested) == 2:
        raise IdentitySyntaxError("both arguments are products; at most one may be", 0, text)
    vars_ = pat.variables()
    if len(set(vars_)) != len(vars_):
        raise IdentitySyntaxError(f"variable repeated in {pat.render()}", 0, text)
    if nested:
        if any(leaf.twisted for leaf in (nested[0].left, nested[0].right)):
            raise IdentitySyntaxError("twisting map inside the inner product", 0, text)
    elif pat.left.twisted or pat.right.twisted:
        raise IdentitySyntaxError("twisting map only allowed in arity-3 patterns", 0, text)
    for s, t in term.eps_factors:
        for side in (s, t):
            if len(set(side)) != len(side):
                raise IdentitySyntaxError("variable repeated inside eps", 0, text)
            if not set(side) <= set(vars_):
                raise IdentitySyntaxError(
                    f"eps mentions a variable missing from {pat.render()}", 0, text)
    return tuple(sorted(vars_))


def parse_identity(text: str, name: str = "") -> IdentitySchema:
    """Parse one identity; raises IdentitySyntaxError with a position."""
    terms = _Parser(text).parse()
    varsets = {_check_term(t, text) for t in terms}
    if len(varsets) != 1:
        raise IdentitySyntaxError("terms use different variable sets; identity is not multilinear",
                                  0, text)
    vs = varsets.pop()
    arity = len(vs)
    if vs != VARIABLES[:arity] or arity not in (2, 3):
        raise IdentitySyntaxError(
            f"variables {vs} must be x,y (arity 2) or x,y,z (arity 3)", 0, text)
    for t in terms:
        shape_nested = any(isinstance(n, App) for n in (t.pattern.left, t.pattern.right))
        if shape_nested != (arity == 3):
            raise IdentitySyntaxError("term shape does not match the identity arity", 0, text)
    return IdentitySchema(arity, tuple(terms), name)


@dataclass(frozen=True)
class Witness:
    identity: str
    tuple: tuple[int, ...]
    residual: Vector

    def to_json(self, alg: HomAlgebra) -> dict:
        return {"identity": self.identity,
                "tuple": [alg.space.name(i) for i in self.tuple],
                "residual": alg.space.render(self.residual)}


@dataclass(frozen=True)
class CheckReport:
    passed: bool
    witness: Witness | None = None
    tuples_checked: int = 0
    name: str = ""

    def __post_init__(self):
        if self.passed != (self.witness is None):
            raise ValueError("passed must be true exactly when there is no witness")
        if self.witness is not None and not self.witness.residual:
            raise ValueError("a witness residual must be nonzero")

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self, alg: HomAlgebra) -> dict:
        out = {"name": self.name, "passed": self.passed, "tuples_checked": self.tuples_checked}
        if self.witness is not None:
            out["witness"] = self.witness.to_json(alg)
        return out


class _Evaluator:
    """Evaluates patterns on basis tuples with memoised basis products."""

    def __init__(self, alg: HomAlgebra):
        self.alg = alg
        self.alpha_images = alg.alpha.images
        self.degrees = [alg.space.degree(i) for i in range(alg.dim)]
        self.tables = {p.name: p for p in alg.products}

    def node(self, node, env: Mapping[str, int]) -> Vector:
        if isinstance(node, Leaf):
            i = env[node.var]
            return self.alpha_images[i] if node.twisted else Vector.basis(i)
        return self.tables[node.pname](self.node(node.left, env), self.node(node.right, env))

    def sign(self, factors, env: Mapping[str, int]) -> int:
        group = self.alg.group
        s = 1
        for left, right in factors:
            a = group.add(*(self.degrees[env[v]] for v in left))
            b = group.add(*(self.degrees[env[v]] for v in right))
            s *= self.alg.eps(a, b)
        return s

    def residual(self, schema: IdentitySchema, env: Mapping[str, int]) -> Vector:
        parts = []
        for t in schema.terms:
            v = self.node(t.pattern, env)
            if v:
                parts.append(v.scale(t.coeff * self.sign(t.eps_factors, env)))
        return vsum(parts)


def evaluate_identity(alg: HomAlgebra, schema: IdentitySchema,
                      domains: Sequence[Sequence[int]] | None = None) -> CheckReport:
    """Evaluate on every basis tuple in lexicographic order; stop at the first failure.

    ``domains`` optionally restricts the basis indices each variable ranges over.
    """
    missing = schema.products() - set(alg.product_names)
    if missing:
        raise KeyError(f"identity {schema.name!r} uses unknown products {sorted(missing)}")
    ev = _Evaluator(alg)
    if domains is None:
        domains = [range(alg.dim)] * schema.arity
    count = 0
    for tup in itertools.product(*domains):
        count += 1
        env = dict(zip(schema.variables, tup))
        r = ev.residual(schema, env)
        if r:
            return CheckReport(False, Witness(schema.name, tuple(tup), r), count, schema.name)
    return CheckReport(True, None, count, schema.name)


def evaluate_on_vectors(alg: HomAlgebra, schema: IdentitySchema,
                        vectors: Sequence[Vector]) -> Vector:
    """Residual of the schema on homogeneous vectors, by multilinear expansion."""
    ev = _Evaluator(alg)
    total = []
    supports = [list(v.items()) for v in vectors]
    for combo in itertools.product(*supports):
        env = {var: i for var, (i, _) in zip(schema.variables, combo)}
        c = Fraction(1)
        for _, coeff in combo:
            c *= coeff
        total.append(ev.residual(schema, env).scale(c))
    return vsum(total)
