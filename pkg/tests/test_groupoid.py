"""Finite-ring groupoid oracles and faithfully-flat descent."""
import random

import pytest

from hopfalg.errors import AxiomFailure, NotACover, SearchBudgetExceeded
from hopfalg.groupoid import (
    GF,
    AlgebraOver,
    FiniteRing,
    Zmod,
    analyze_map,
    catalog_rings,
    check_descent,
    dual_numbers,
    enumerate_points,
    evaluate_groupoid,
    field_extension_cover,
    free_module,
    product_ring,
    projection_noncover,
    random_module,
)


def test_ring_table_validation():
    n = 3
    add = [[(a + b) % n for b in range(n)] for a in range(n)]
    mul = [[(a * b) % n for b in range(n)] for a in range(n)]
    FiniteRing(add, mul, 1)  # F_3 passes
    bad_mul = [row[:] for row in mul]
    bad_mul[2][2] = 2  # breaks 2*2 = 1, and with it distributivity
    with pytest.raises(ValueError):
        FiniteRing(add, bad_mul, 1)


def test_catalog_shapes():
    cat = catalog_rings()
    assert [R.name for R in cat] == [
        "F_2", "F_3", "F_4", "Z/4", "F_2[e]/(e^2)", "Z/6"
    ]
    assert [R.n for R in cat] == [2, 3, 4, 4, 4, 6]
    assert [R.char for R in cat] == [2, 3, 2, 4, 2, 6]
    assert len(GF(4).units) == 3  # a field
    assert len(Zmod(4).units) == 2  # not a field
    assert len(dual_numbers(2).units) == 2  # local, non-reduced


def test_mu2_groupoid_is_the_order_two_group(mu2):
    G = evaluate_groupoid(mu2, GF(3))
    assert len(G.objects) == 1
    assert len(G.morphisms) == 2
    e = G.identity[0]
    other = 1 - e
    assert G.comp[(other, other)] == e
    assert G.inverse[other] == other


def test_wrong_characteristic_is_vacuous(mu2):
    for R in (GF(2), Zmod(4), Zmod(6)):
        G = evaluate_groupoid(mu2, R)
        assert G.objects == [] and G.morphisms == []


def test_budget_guard(mu2):
    with pytest.raises(SearchBudgetExceeded):
        enumerate_points(mu2.Gamma, GF(3), budget=2)


def test_equivalence_is_fully_faithful_at_every_ring(flagship):
    """Cross-oracle check: the induced map is an isomorphism of algebroids,
    so the groupoid functor must be full and faithful over every test ring."""
    _, _, _, f = flagship
    for R in catalog_rings():
        rep = analyze_map(f, R)
        assert rep.faithful, (R.name, rep.witnesses)
        assert rep.full, (R.name, rep.witnesses)
        assert rep.fully_faithful


def test_essential_image_over_F3(flagship):
    """Over F_3 the functor is not essentially surjective: the target kills
    v2, so objects with v2 != 0 are missed.  The report names one."""
    _, _, _, f = flagship
    rep = analyze_map(f, GF(3))
    assert rep.object_counts == (2, 6)
    assert rep.morphism_counts == (18, 54)
    assert not rep.essentially_surjective
    assert rep.essential_image_count == 2
    assert "v2" in rep.witnesses["essentially_surjective"]
    d = rep.to_dict()
    assert d["ring"] == "F_3" and d["full"] and d["faithful"]


@pytest.mark.parametrize("p,q", [(2, 4), (3, 9)])
def test_descent_on_random_modules(p, q):
    R, cover = field_extension_cover(p, q)
    rng = random.Random(20260823 + p)
    for k in range(20):
        M = random_module(R, rng, max_dim=3, name=f"M{k}")
        assert check_descent(cover, M).ok


def test_descent_with_purity_probe():
    R, cover = field_extension_cover(2, 4)
    M = free_module(R, 2)
    assert check_descent(cover, M, purity_probe=cover[0]).ok


def test_planted_noncover_is_refuted():
    R, cover = projection_noncover()
    M = free_module(R, 1, name="F_2xF_2^1")
    with pytest.raises(NotACover) as exc:
        check_descent(cover, M)
    msg = str(exc.value)
    assert "kills" in msg and "(1, 0)" in msg


def test_two_element_cover_of_a_product():
    """Both projections together do cover F_2 x F_2."""
    R = product_ring(GF(2), GF(2))
    S = GF(2)
    pr1 = tuple(r // S.n for r in range(R.n))
    pr2 = tuple(r % S.n for r in range(R.n))
    cover = [
        AlgebraOver(R, S, pr1, name="pr_1"),
        AlgebraOver(R, S, pr2, name="pr_2"),
    ]
    M = free_module(R, 1)
    assert check_descent(cover, M).ok
