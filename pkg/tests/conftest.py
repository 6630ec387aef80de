"""Shared fixtures: small algebroids, the BP pairs, and the flagship
localized pair at p=3."""
import pytest
from hypothesis import HealthCheck, settings

from hopfalg.hopf import HopfAlgebroid
from hopfalg.presentation import BaseMode, GradedPresentation, RingMorphism

settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    max_examples=60,
)
settings.load_profile("suite")


def primitive_line(p, xdeg, power, truncation=16, name=""):
    """(F_p, F_p[x]/(x^power)) with x primitive: Delta(x) = x(x)1 + 1(x)x,
    eps(x) = 0, c(x) = -x."""
    mode = BaseMode("fp", p)
    A = GradedPresentation(mode, [], truncation=truncation, name=f"F_{p}")
    Gamma = GradedPresentation(
        mode,
        [("x", xdeg)],
        relations={"x": (power, [])},
        truncation=truncation,
        name=name or f"F_{p}[x]/(x^{power})",
    )
    etaL = RingMorphism(A, Gamma, [], name="etaL")
    etaR = RingMorphism(A, Gamma, [], name="etaR")
    eps = RingMorphism(Gamma, A, [A.zero()], name="eps")
    c = RingMorphism(Gamma, Gamma, [-Gamma.gen(0)], name="c")
    return HopfAlgebroid(
        A, Gamma, [0], etaL, etaR, eps, c,
        {"x": [(1, (1, 0)), (1, (0, 1))]},
        name=name or f"line(p={p},|x|={xdeg},x^{power})",
    )


def mu2_algebroid(truncation=8):
    """(F_3, F_3[g]/(g^2 - 1)): the order-2 group scheme mu_2 at p=3.
    Delta(g) = g (x) g, eps(g) = 1, c(g) = g."""
    mode = BaseMode("fp", 3)
    A = GradedPresentation(mode, [], truncation=truncation, name="F_3")
    Gamma = GradedPresentation(
        mode,
        [("g", 0)],
        relations={"g": (2, [(1, (0,))])},
        truncation=truncation,
        name="F_3[g]/(g^2-1)",
    )
    etaL = RingMorphism(A, Gamma, [], name="etaL")
    etaR = RingMorphism(A, Gamma, [], name="etaR")
    eps = RingMorphism(Gamma, A, [A.one()], name="eps")
    c = RingMorphism(Gamma, Gamma, [Gamma.gen(0)], name="c")
    return HopfAlgebroid(
        A, Gamma, [0], etaL, etaR, eps, c,
        {"g": [(1, (1, 1))]},
        name="mu2@F_3",
    )


@pytest.fixture(scope="session")
def bp2():
    from hopfalg.fgl import assemble_bp

    return assemble_bp(2, 16)


@pytest.fixture(scope="session")
def bp3():
    from hopfalg.fgl import assemble_bp

    return assemble_bp(3, 40)


@pytest.fixture(scope="session")
def flagship():
    """The p=3 localized pair at weight cap 48 with the two-generator
    truncation, plus the canonical map to its induced algebroid."""
    from hopfalg.fgl import assemble_bp, johnson_wilson, quotient_localize

    bp = assemble_bp(3, 48, max_gens=2)
    H1 = quotient_localize(bp, 1)
    H2, f = johnson_wilson(bp, 1, 1)
    return bp, H1, H2, f


@pytest.fixture(scope="session")
def mu2():
    return mu2_algebroid()


@pytest.fixture(scope="session")
def jw_files(flagship, tmp_path_factory):
    """The flagship pair and map serialized to INI documents."""
    from hopfalg import files

    _, H1, H2, f = flagship
    d = tmp_path_factory.mktemp("jw")
    files.write_algebroid(H1, str(d), stem="source", base_stem="source_base")
    files.write_algebroid(H2, str(d), stem="target", base_stem="target_base")
    (d / "map.ini").write_text(files.emit_map(f, "source.ini", "target.ini"))
    (d / "witness.ini").write_text("[witness]\nkind = identity\n")
    return d
