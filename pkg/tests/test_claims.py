import pytest

from hindman_lab.claims import (EXHAUSTED, SUITES, VERIFIED, VIOLATED, ClaimConfig, audit, claims_for,
                                default_catalog_for, run_claim, sigma2_recipe)
from hindman_lab.cesim import load_catalog
from hindman_lab.colorings import make_coloring
from hindman_lab.finset import max_elem, min_elem

SMALL = ClaimConfig(bound=1 << 9, horizon=32, unique31_max=10, unique32_max=9, unique33_max=9,
                    stabilization_indices=4, polarity_indices=3, polarity_span=4, grid_p=8, grid_q=8,
                    transport_bits=8)


@pytest.mark.parametrize("cid, catalog", [
    ("c31", "builtin:default"), ("c31", "builtin:mixed"), ("c32:k=1", "builtin:sized"),
    ("c33", "builtin:singletons"), ("c34", "builtin:default"),
])
def test_suites_verify_at_small_scale(cid, catalog):
    for claim in claims_for(cid):
        rec = run_claim(cid, catalog, claim, SMALL)
        assert rec["status"] in (VERIFIED, EXHAUSTED), rec
        assert rec["status"] == VERIFIED or claim.endswith(("defeat", "separation", "stabilization"))


def test_simple_colorings_have_basic_claims():
    assert claims_for("parity") == ["definition", "transport", "determinism"]
    rec = run_claim("parity", "builtin:default", "definition", SMALL)
    assert rec["status"] == VERIFIED and rec["bound"] == 1 << 9


def test_registry():
    assert set(SUITES) == {"c31", "c32", "c33", "c34"}
    assert default_catalog_for("c32:k=1") == "builtin:sized"
    assert default_catalog_for("c31") == "builtin:default"
    with pytest.raises(KeyError):
        run_claim("c31", "builtin:default", "s34-defeat", SMALL)


def test_bounds_default():
    cfg = ClaimConfig()
    assert cfg.bound_for("c31") == 1 << 14
    assert cfg.bound_for("c32:k=2") == 1 << 14
    assert cfg.bound_for("c34") == 1 << 10


def test_vacuous_defeat_on_finite_catalog():
    rec = run_claim("c32:k=1", "builtin:finite", "s32-defeat", SMALL)
    assert rec["status"] == VERIFIED


@pytest.mark.parametrize("cid, claim", [
    ("c31:flip=5", "s31-definition"), ("c32:k=1:flip=9", "s32-definition"),
    ("c33:flip=6", "s33-definition"), ("c34:flip=18", "s34-definition"), ("parity:flip=3", "definition"),
])
def test_flip_is_caught_and_replays(cid, claim):
    catalog = default_catalog_for(cid)
    first = run_claim(cid, catalog, claim, SMALL)
    assert first["status"] == VIOLATED and first["counterexample"]
    again = run_claim(first["coloring"], catalog, claim, SMALL)
    assert again["counterexample"] == first["counterexample"]


def test_audit_catches_flip_outside_scan():
    # a flipped code above the scan bound, touched only through recursion
    col = make_coloring("c33", "builtin:default")
    big = next(b for b in range(1 << 12, 1 << 13) if col.primary(b) is not None and col.primary(b).Z)
    inner = col.primary(big).Z
    bad = make_coloring(f"c33:flip={inner}", "builtin:default")
    bad(big)
    assert inner in bad.memo
    found = audit(bad)
    assert found is not None and found["code"] == inner


def test_sigma2_recipe_shape():
    cat = load_catalog("builtin:default")
    recipe = sigma2_recipe(cat.relations, 0, 24)
    ts, a, b = recipe["T"], recipe["A"], recipe["B"]
    assert len(ts) == 1
    assert max_elem(ts[-1]) < min_elem(a) and max_elem(a) < min_elem(b)
    assert max_elem(b) >= recipe["q"] and min_elem(a) >= recipe["p"]


def test_polarity_gap_on_late_witnesses():
    # dyadic {1} is enumerated at stage 2, so A u {1} has no decomposition at its own stage
    rec = run_claim("c33", "builtin:default", "s33-polarity", ClaimConfig())
    assert rec["status"] == VIOLATED
    cx = rec["counterexample"]
    assert cx["kind"] == "no-v_B" and cx["B"] == "{4}" and cx["A"] == "{0}"
    assert len(set(cx["colors"].values())) == 1
    assert run_claim("c33", "builtin:default", "s33-defeat", ClaimConfig())["status"] == VERIFIED
    assert run_claim("c33", "builtin:singletons", "s33-polarity", ClaimConfig())["status"] == VERIFIED
