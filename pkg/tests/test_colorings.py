import io
import json

import pytest
from hypothesis import given, settings, strategies as st

from hindman_lab.cesim import load_catalog, make_relation
from hindman_lab.colorings import (ColoringIdError, Coloring31, Coloring32, Coloring33, Coloring34,
                                   MultipleWitnessViolation, canonical_id, color_31, color_33, color_34,
                                   induced_integer_coloring, json_tracer, make_coloring, parse_id,
                                   witness_34, witnesses_31, witnesses_32)
from hindman_lab.colorings.c32 import raw_decompositions
from hindman_lab.colorings.c34 import Witness34, row_index, row_pair, witness_34_brute
from hindman_lab.finset import contains_segment, encode, is_initial_segment, max_elem, min_elem
from hindman_lab.ipalg import parity

DEFAULT = load_catalog("builtin:default")
SINGLE = load_catalog("builtin:singletons")
SIZED1 = load_catalog("builtin:sized").with_k(1)
SIZED2 = load_catalog("builtin:sized")


# ---------------------------------------------------------------------------
# first coloring


def naive_witnesses_31(cat, s):
    """Scan every code instead of the stage list."""
    out, last = [], -1
    for i in range(s + 1):
        members = set(cat.index_fn(i // 2).stage(s))
        pick = next((w for w in range(1, 1 << (s + 1)) if w in members and min_elem(w) > last), None)
        out.append(pick)
        if pick is not None:
            last = max_elem(pick)
    return out


@pytest.mark.parametrize("ref", ["builtin:default", "builtin:mixed", "builtin:sized"])
def test_witnesses_31_match_naive(ref):
    cat = load_catalog(ref).catalog
    for s in range(10):
        assert witnesses_31(cat, s) == naive_witnesses_31(cat, s)


def test_witnesses_31_examples():
    cat = load_catalog("builtin:sized").catalog  # entry 0 is immediate singletons
    table = witnesses_31(cat, 2)
    assert table[0] == encode({0}) and table[1] == encode({1})
    second = naive_witnesses_31(cat, 2)[2]
    assert table[2] == second and (second is None or min_elem(second) > 1)
    empty = load_catalog("builtin:default").catalog  # dyadic blocks emit nothing at stage 0
    assert witnesses_31(empty, 0)[0] is None


def test_witnesses_31_stabilize_on_singletons():
    cat = SINGLE.catalog
    first = witnesses_31(cat, 0)[0]
    assert all(witnesses_31(cat, t)[0] == first for t in range(64))


def test_color_31_examples():
    assert color_31(SINGLE.catalog, encode({1, 5})) == 1
    assert color_31(SINGLE.catalog, encode({0, 5})) == 0
    col = Coloring31(DEFAULT.catalog)  # with singletons every set starts with a witness
    no_prefix = [b for b in range(1, 1 << 8) if not col.initial_witnesses(b)]
    assert no_prefix and all(col(b) == 0 for b in no_prefix)


def test_c31_at_most_one_witness_prefix():
    col = Coloring31(DEFAULT.catalog)
    for b in range(1, 1 << 12):
        assert len(col.initial_witnesses(b)) <= 1


# ---------------------------------------------------------------------------
# second coloring


@pytest.mark.parametrize("cat", [SIZED1, SIZED2])
def test_witnesses_32_increasing(cat):
    for s in range(14):
        table = witnesses_32(cat.sized, s)
        chain = [(i, u, w) for i in sorted(table) for u, w in sorted(table[i].items())]
        for (i, _, w) in chain:
            assert min_elem(w) > i
        for (_, _, a), (_, _, b) in zip(chain, chain[1:]):
            assert max_elem(a) < min_elem(b)


def test_decompositions_32_examples():
    col = Coloring32(SIZED1.sized)
    table = col.witnesses(3)
    assert col.decompositions(encode({0})) == []  # {0} never starts a witness (i < min W)
    for b in range(1, 1 << 10):
        decs = col.decompositions(b)
        assert len(col.good(b)) <= 1
        for dc in decs:
            assert dc.Z | dc.W | dc.D == b
            assert contains_segment(b, dc.W)
    assert table


@pytest.mark.parametrize("cat", [SIZED1, SIZED2])
def test_blocked_decomposition_exists_and_replays(cat):
    col = Coloring32(cat.sized)
    found = 0
    for b in range(1, 1 << 9):
        for dc in col.decompositions(b):
            if not dc.blocked:
                continue
            o = dc.blocker
            rebuilt = dc.z1 | (o.Z & ~dc.Z) | o.W | o.D
            table = col.witnesses(max_elem(rebuilt))
            prefixes = {int(a) for a in cat.sized.pair_fn(o.i)[0]}
            assert any((x.i, x.u) == (o.i, o.u) and x.Z in prefixes for x in raw_decompositions(table, rebuilt))
            found += 1
    assert found


def test_color_32_recolors_against_tail():
    col = Coloring32(SIZED1.sized)
    for b in range(1, 1 << 10):
        good = col.good(b)
        if good:
            dc = good[0]
            assert col(b) == 1 - col(dc.W | dc.D)
        elif not col.decompositions(b):
            assert col(b) == 0
        assert col(b) == col(b)


# ---------------------------------------------------------------------------
# third coloring


def test_primary_decomposition_33_examples():
    col = Coloring33(SINGLE.catalog)
    pd = col.primary(encode({1}))
    assert (pd.i, pd.u, pd.Z, pd.D) == (0, 0, 0, 0)
    assert col(encode({1})) == 0  # u = 0 and Z empty
    assert col.primary(encode({0})) is None and col(encode({0})) == 0


def test_c33_primary_unique_and_consistent():
    col = Coloring33(DEFAULT.catalog)
    for b in range(1, 1 << 12):
        cands = col.candidates(b)
        assert len(cands) <= 1
        for i in range(max_elem(b) + 1):
            v = col.polarity(b, i)
            if v is None:
                continue
            # some witness of index i sits inside b at a stage up to max b
            assert any(contains_segment(b, w) for t in range(max_elem(b) + 1)
                       for w in col.witnesses(t).get(i, {}).values())


def test_polarity_base_and_nested():
    col = Coloring33(DEFAULT.catalog)
    for b in range(1, 1 << 11):
        pd = col.primary(b)
        if pd is None:
            continue
        assert col.polarity(b, pd.i) == pd.u
        if pd.Z:
            inner = col.polarity(pd.Z, 0)
            if pd.i != 0 and inner is not None:
                assert col.polarity(b, 0) == inner ^ pd.u
        expect = col(pd.Z) if pd.u == 0 else 1 - col(pd.Z)
        assert col(b) == expect
    assert color_33(DEFAULT.catalog, encode({0})) == 0


# ---------------------------------------------------------------------------
# fourth coloring


def test_witness_34_examples():
    true = make_relation({"kind": "true"})
    false = make_relation({"kind": "false"})
    assert witness_34([true], 0, 0, 0, 0, cap=16) == 1
    assert witness_34([false], 3, 3, 1, 0, cap=16) is None


def test_row_index_roundtrip():
    for r in range(200):
        i, n = row_pair(r)
        assert 0 <= n <= i and row_index(i, n) == r
    with pytest.raises(ValueError):
        row_index(1, 2)


@pytest.mark.parametrize("ref", ["builtin:default", "builtin:mixed"])
def test_witness_34_grid_matches_brute(ref):
    rels = load_catalog(ref).relations
    wit = Witness34(rels)
    for q in range(5):
        for p in range(7):
            for r in range(8):
                i, n = row_pair(r)
                assert wit.witness(p, q, i, n) == witness_34_brute(rels, p, q, i, n), (p, q, i, n)


def test_witness_34_rows_increase():
    wit = Witness34(DEFAULT.relations)
    for q in range(8):
        for p in range(10):
            defined = [t for t in wit.table(p, q, 15) if t is not None]
            for a, b in zip(defined, defined[1:]):
                assert max_elem(a) < min_elem(b)


def test_color_34_splits_longest_first():
    col = Coloring34(DEFAULT.relations)
    for b in range(1, 1 << 10):
        for i in range(max_elem(b) + 1):
            splits = col.splits(b, i)
            lengths = [d.bit_count() for _, d, _ in splits]
            assert lengths == sorted(lengths, reverse=True)
            for a, d, _ in splits:
                assert a | d == b and max_elem(a) < min_elem(d)
    assert color_34(DEFAULT.relations, encode({1, 4})) in (0, 1)


def test_color_34_default_clause():
    col = Coloring34(DEFAULT.relations)
    for b in range(1, 1 << 9):
        if not any(col.splits(b, i) for i in range(max_elem(b) + 1)):
            assert col(b) == 0


# ---------------------------------------------------------------------------
# registry, induced coloring, tracing


def test_induced_examples():
    col = make_coloring("c31", DEFAULT)
    induced = induced_integer_coloring(col)
    assert induced(5) == col(encode({0, 2}))
    assert induced(1) == col(encode({0}))
    with pytest.raises(ValueError):
        induced(0)


@settings(max_examples=60)
@given(st.integers(1, (1 << 10) - 1), st.integers(1, (1 << 10) - 1))
def test_transport(a, b):
    b &= ~a
    if not b:
        return
    col = make_coloring("c33", DEFAULT)
    assert induced_integer_coloring(col)(a + b) == col(a | b)


def test_parse_and_canonical_ids():
    assert parse_id("c32:k=2") == ("c32", {"k": "2"})
    assert canonical_id("random", {"seed": 3, "bound": 8}, frozenset({5, 2})) == "random:bound=8:seed=3:flip=2+5"
    assert make_coloring("c32:k=1", "builtin:sized").cid == "c32:k=1"
    assert make_coloring("c32", "builtin:sized").cid == "c32:k=2"
    assert make_coloring("const:v=1").cid == "const:v=1"
    for bad in ("c99", "c31:x", "c31:k=1", "const:v=3", "c31:flip=a", "c32:k=0", "random:seed=x"):
        with pytest.raises(ColoringIdError):
            make_coloring(bad, DEFAULT)


def test_flip_inverts_single_code():
    plain = make_coloring("parity")
    flipped = make_coloring("parity:flip=6")
    assert flipped.cid == "parity:flip=6"
    for b in range(1, 64):
        assert flipped(b) == (1 - plain(b) if b == 6 else plain(b))
    assert plain(3) == parity()(3)


def test_trace_records_decisions():
    buf = io.StringIO()
    col = make_coloring("c31", SINGLE, trace=json_tracer(buf))
    col(encode({1, 5}))
    lines = [json.loads(x) for x in buf.getvalue().splitlines()]
    assert lines[-1]["set"] == "{1,5}" and lines[-1]["color"] == 1 and lines[-1]["index"] == 1


def test_multiple_witness_violation_is_assertion():
    assert issubclass(MultipleWitnessViolation, AssertionError)


def test_initial_segment_prefix_color_rule():
    col = Coloring31(SINGLE.catalog)
    for b in range(1, 1 << 10):
        hits = col.initial_witnesses(b)
        if hits:
            w = col.witnesses(max_elem(b))[hits[0]]
            assert is_initial_segment(w, b) and col(b) == hits[0] % 2
