import json

import pytest
from hypothesis import given, settings, strategies as st

from hindman_lab.cesim import (BoundCertificationError, CatalogError, Sigma2Relation, builtin_catalogs,
                               cantor_pair, load_catalog, make_family, make_relation, sigma2_eval_bounded,
                               sigma2_truth, stage)
from hindman_lab.finset import encode
from hindman_lab.ipalg import family, generates_ip_at_scale


def F(*sets):
    return family(encode(s) for s in sets)


def test_stage_examples():
    sing = make_family({"kind": "singletons", "delay": 0})
    assert stage(sing, 3) == F({0}, {1}, {2}, {3})
    delayed = make_family({"kind": "delayed_singletons", "delay": 2})
    assert stage(delayed, 1) == ()
    dyadic = make_family({"kind": "dyadic_blocks"})
    assert stage(dyadic, 8) == F({1}, {2, 3}, {4, 5, 6, 7})


@pytest.mark.parametrize("name", ["default", "sized", "mixed", "singletons", "finite"])
def test_builtin_families_monotone(name):
    cat = load_catalog(f"builtin:{name}")
    for w in cat.catalog.entries:
        prev = set()
        for s in range(24):
            now = set(w.stage(s))
            assert prev <= now
            prev = now


def test_builtin_ip_examples():
    finite = make_family({"kind": "finite", "m": 2})
    assert not generates_ip_at_scale(stage(finite, 40), 3)
    sing = make_family({"kind": "singletons", "delay": 0})
    for m in range(1, 8):
        assert generates_ip_at_scale(stage(sing, m), m + 1)


def test_sigma2_examples():
    rel = make_relation({"kind": "true"})
    assert sigma2_eval_bounded(rel, 0, 0, encode({5}))
    assert sigma2_truth(rel, encode({1, 2}))
    member = Sigma2Relation("member", lambda x, y, z: (z >> x) & 1 == 1, 10, lambda x, z: 0,
                            lambda z: z != 0, 10)
    assert not sigma2_eval_bounded(member, 0, 0, encode({1}))
    assert sigma2_eval_bounded(member, 1, 9, encode({1}))
    evens = make_relation({"kind": "subset_evens"})
    assert sigma2_truth(evens, encode({2, 4}))
    assert not sigma2_truth(evens, encode({1}))


def test_uncertified_truth_raises():
    rel = Sigma2Relation("raw", lambda x, y, z: True, 0, lambda x, z: 0, lambda z: True, 8)
    with pytest.raises(BoundCertificationError):
        sigma2_truth(rel, 1)


def test_bad_certificate_rejected():
    rel = Sigma2Relation("liar", lambda x, y, z: True, 0, lambda x, z: 0, lambda z: z & 1 == 1, 8)
    with pytest.raises(BoundCertificationError):
        rel.certify(6)


@pytest.mark.parametrize("name", ["default", "mixed"])
def test_least_matches_brute(name):
    for rel in load_catalog(f"builtin:{name}").relations:
        for mu in range(0, 6):
            for p in (None, 0, 1, 3, 6):
                for q in (None, 0, 2, 5):
                    assert rel.least(mu, p, q, 7) == rel.least_with_min_brute(mu, p, q, 7), (rel.name, mu, p, q)


def test_sized_catalog_surjective():
    _, sized, _ = builtin_catalogs(k=2)
    for a in range(len(sized.a_families)):
        for w in range(len(sized.w_families)):
            i = sized.index_for(a, w, 5)
            assert i >= 5
            fams, staged = sized.pair_fn(i)
            assert fams == sized.a_families[a] and staged is sized.w_families[w]
            assert len(fams) == 2


@given(st.integers(0, 200), st.integers(0, 200))
def test_cantor_pair_injective(a, b):
    z = cantor_pair(a, b)
    for a2 in range(max(0, a - 2), a + 3):
        for b2 in range(max(0, b - 2), b + 3):
            if (a2, b2) != (a, b):
                assert cantor_pair(a2, b2) != z


def test_catalog_file_roundtrip(tmp_path):
    path = tmp_path / "cat.json"
    path.write_text(json.dumps({"families": [{"kind": "pairs"}], "sigma2": [{"kind": "contains_zero"}], "k": 1}))
    cat = load_catalog(str(path))
    assert len(cat.catalog.entries) == 1 and cat.sized.k == 1


@pytest.mark.parametrize("data", [
    {"families": [{"kind": "bogus"}]},
    {"families": [{"kind": "pairs", "nope": 3}]},
    {"families": [{"kind": "pairs"}], "sigma2": [{"kind": "nonsense"}]},
])
def test_bad_catalogs(tmp_path, data):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    with pytest.raises(CatalogError):
        load_catalog(str(path))


def test_missing_catalog():
    with pytest.raises(CatalogError):
        load_catalog("builtin:nope")
    with pytest.raises(CatalogError):
        load_catalog("/nonexistent/cat.json")


@settings(max_examples=30)
@given(st.integers(0, 40))
def test_index_fn_cycles(i):
    cat = load_catalog("builtin:default").catalog
    assert cat.index_fn(i) is cat.entries[i % len(cat.entries)]
