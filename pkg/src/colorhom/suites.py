"""Registry of named axiom suites, shipped as DSL text files."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Mapping

from .algebra import HomAlgebra
from .dsl import CheckReport, IdentitySchema, Witness, evaluate_identity, parse_identity

ORDER = (
    "hom-associative-color",
    "eps-commutative",
    "hom-left-symmetric-color",
    "hom-left-symmetric-color-dialgebra",
    "hom-associative-color-dialgebra",
    "hom-poisson-color-dialgebra",
    "hom-tridendriform-color",
    "hom-dendriform-color",
    "hom-lie-color",
    "hom-poisson-color",
    "hom-post-lie-color",
    "hom-lie-admissible-color",
    "hom-leibniz-color",
    "hom-leibniz-poisson-color",
)


class SuiteError(KeyError):
    """Unknown suite or unusable slot binding."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


@dataclass(frozen=True)
class Suite:
    name: str
    slots: tuple[str, ...]
    schemas: tuple[IdentitySchema, ...]
    source: str = field(default="", compare=False)

    def __post_init__(self):
        for s in self.schemas:
            extra = s.products() - set(self.slots)
            if extra:
                raise ValueError(f"suite {self.name!r}: {s.name} uses undeclared slots {extra}")

    def render(self) -> str:
        lines = [f"slots: {' '.join(self.slots)}"]
        lines += [f"{s.name}: {s.render()}" for s in self.schemas]
        return "\n".join(lines) + "\n"


def parse_suite(name: str, text: str) -> Suite:
    """Parse ``slots: ...`` plus ``label: identity`` lines; indented lines continue."""
    logical: list[str] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if raw[:1].isspace() and logical:
            logical[-1] += " " + line.strip()
        else:
            logical.append(line.strip())
    slots: tuple[str, ...] | None = None
    schemas = []
    for line in logical:
        label, sep, body = line.partition(":")
        if not sep:
            raise ValueError(f"suite {name!r}: line without a label: {line!r}")
        label = label.strip()
        if label == "slots":
            slots = tuple(body.split())
        else:
            schemas.append(parse_identity(body.strip(), name=label))
    if slots is None:
        raise ValueError(f"suite {name!r} declares no slots")
    return Suite(name, slots, tuple(schemas), text)


@lru_cache(maxsize=None)
def _registry() -> dict[str, Suite]:
    files = {p.name[:-4]: p for p in resources.files("colorhom").joinpath("suites").iterdir()
             if p.name.endswith(".txt")}
    names = [n for n in ORDER if n in files] + sorted(set(files) - set(ORDER))
    return {n: parse_suite(n, files[n].read_text(encoding="utf-8")) for n in names}


def get_suite(name: str) -> Suite:
    try:
        return _registry()[name]
    except KeyError:
        raise SuiteError(f"unknown suite {name!r}") from None


def all_suites() -> list[Suite]:
    return list(_registry().values())


def list_suites() -> list[tuple[str, tuple[str, ...], int]]:
    return [(s.name, s.slots, len(s.schemas)) for s in all_suites()]


def resolve_binding(alg: HomAlgebra, slots: tuple[str, ...],
                    binding: Mapping[str, str] | None = None) -> dict[str, str]:
    """Explicit entries win; then same-named products; then positional order.

    Positional fallback only applies when the algebra has exactly as many
    products as there are slots and no slot was bound otherwise.
    """
    binding = dict(binding or {})
    unknown = set(binding) - set(slots)
    if unknown:
        raise SuiteError(f"binding names unknown slots {sorted(unknown)}")
    names = alg.product_names
    for slot, pname in binding.items():
        if pname not in names:
            raise SuiteError(f"slot {slot!r} bound to missing product {pname!r}")
    out = dict(binding)
    for slot in slots:
        if slot not in out and slot in names:
            out[slot] = slot
    if len(out) < len(slots):
        if not binding and not out and len(names) == len(slots):
            out = dict(zip(slots, names))
        else:
            missing = [s for s in slots if s not in out]
            raise SuiteError(f"incomplete binding: no product for slots {missing}")
    return out


@dataclass(frozen=True)
class SuiteReport:
    suite: str
    binding: Mapping[str, str]
    reports: tuple[CheckReport, ...]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def __bool__(self) -> bool:
        return self.passed

    @property
    def first_failure(self) -> CheckReport | None:
        return next((r for r in self.reports if not r.passed), None)

    def to_json(self, alg: HomAlgebra) -> dict:
        return {"suite": self.suite, "binding": dict(self.binding), "passed": self.passed,
                "schemas": [r.to_json(alg) for r in self.reports]}


def check_suite(alg: HomAlgebra, suite: str | Suite,
                binding: Mapping[str, str] | None = None) -> SuiteReport:
    s = suite if isinstance(suite, Suite) else get_suite(suite)
    bound = resolve_binding(alg, s.slots, binding)
    reports = tuple(evaluate_identity(alg, schema.rename(bound)) for schema in s.schemas)
    return SuiteReport(s.name, bound, reports)


def check_multiplicative(alg: HomAlgebra) -> CheckReport:
    """alpha(mu(e_i, e_j)) == mu(alpha(e_i), alpha(e_j)) for every product."""
    alpha = alg.alpha
    count = 0
    for p in alg.products:
        for i in range(alg.dim):
            for j in range(alg.dim):
                count += 1
                r = alpha(p.basis_product(i, j)) - p(alpha.images[i], alpha.images[j])
                if r:
                    return CheckReport(False, Witness(f"multiplicative[{p.name}]", (i, j), r),
                                       count, "multiplicative")
    return CheckReport(True, None, count, "multiplicative")
