"""Run the ``expect`` annotations carried by an algebra document."""

from __future__ import annotations

from typing import Mapping, Sequence

from .algebra import HomAlgebra
from .dsl import CheckReport
from .grading import StructureError
from .operators import OperatorKind, check_operator
from .suites import SuiteReport, check_suite


def check_expectation(alg: HomAlgebra, exp: Mapping) -> SuiteReport | CheckReport:
    if "suite" in exp:
        return check_suite(alg, exp["suite"], exp.get("bind"))
    if "operator" in exp:
        name = exp.get("map", "R")
        if name not in alg.maps:
            raise StructureError(f"expectation refers to missing map {name!r}")
        kind = OperatorKind.parse(exp["operator"], exp.get("weight"))
        return check_operator(alg, kind, alg.maps[name], exp.get("products"))
    raise StructureError(f"expectation needs 'suite' or 'operator': {dict(exp)}")


def check_expectations(alg: HomAlgebra,
                       expect: Sequence[Mapping] | None = None) -> list[SuiteReport | CheckReport]:
    if expect is None:
        expect = alg.meta.get("expect", [])
    return [check_expectation(alg, e) for e in expect]


def rota_baxter_maps(alg: HomAlgebra) -> dict[str, OperatorKind]:
    """Maps declared as Rota-Baxter operators by the annotations."""
    out = {}
    for e in alg.meta.get("expect", []):
        if e.get("operator") == "rota_baxter":
            out[e.get("map", "R")] = OperatorKind.parse("rota_baxter", e.get("weight"))
    return out
