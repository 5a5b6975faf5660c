import sys
from pathlib import Path

import pytest

from colorhom import constructions as C
from colorhom.document import load_algebra

TESTS = Path(__file__).parent
FIXTURES = TESTS.parent / "src" / "colorhom" / "fixtures"
sys.path.insert(0, str(TESTS))

LS = ["ls_example_a1.json", "ls_example_a2.json"]
TRI = [f"tridendriform_a{a}_b{b}.json" for a in (1, 2) for b in (1, 2)]
RB = ["rb_example.json", "rb_example_lambda3_2.json"]
POSTLIE = "postlie_example.json"
ALL = LS + TRI + RB + [POSTLIE]


def fixture_path(name: str) -> Path:
    return FIXTURES / name


def load(name: str):
    return load_algebra(fixture_path(name))


def rb_weight(alg):
    return next(e["weight"] for e in alg.meta["expect"] if e.get("operator") == "rota_baxter")


def rb_tridendriform(name: str = "rb_example.json"):
    """The tridendriform algebra obtained by splitting an RB fixture."""
    a = load(name)
    return C.rb_split(a, a.maps["R"], rb_weight(a)).algebra


@pytest.fixture
def rb():
    return load("rb_example.json")


@pytest.fixture
def tri():
    return load("tridendriform_a1_b1.json")


@pytest.fixture
def postlie():
    return load(POSTLIE)


def dialgebra_corpus():
    """(label, algebra) pairs with products named ladj and radj."""
    from colorhom.algebra import LinearMap

    def doubled(alg):
        p = alg.products[0]
        return alg.with_(products=(p.renamed("ladj"), p.renamed("radj")), maps={}, meta={})

    out = [(f"doubled {n}", doubled(load(n))) for n in RB + LS]
    rb = load("rb_example.json")
    out.append(("averaging zero map", C.averaging_dialgebra(rb, LinearMap.zero(2)).algebra))
    for c in (1, -1):
        out.append((f"averaging {c}*id, unchecked",
                    C.averaging_dialgebra(rb, LinearMap.scalar(c, 2), verify=False).algebra))
    for n in LS:
        for ideal in ([], ["e2"], ["e2", "e3"], ["e1", "e2", "e3"]):
            out.append((f"ideal {ideal} of {n}", C.ideal_dialgebra(load(n), ideal).algebra))
    t = rb_tridendriform()
    out.append(("left/right of split RB", t.with_(products=t.products[:2])))
    out.append(("dendriform of split RB", C.dendriform_from_tri(t).algebra))
    return out
