"""Verification suites for the colorings.

Each claim is a function ``(coloring, catalog, config) -> Outcome`` run on a
fresh coloring instance.  Statuses: ``verified`` (the property held on every
instance examined), ``exhausted`` (the bounded universe or horizon held no
instance to examine), ``violated`` (a concrete counterexample was found).

After a claim finishes, every color the instance memoized is re-derived from
its local rule.  A disagreement is reported as a violation, so a single
corrupted color anywhere a claim looked is always caught.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

from .cesim import LoadedCatalog, load_catalog
from .colorings import (Coloring31, Coloring32, Coloring33, Coloring34, RecursiveColoring,
                        induced_integer_coloring, make_coloring, parse_id)
from .colorings.c34 import TrueWitness34, Witness34, row_index, row_pair
from .finset import FinSet, contains_segment, format_set, max_elem, min_elem
from .ipalg import full_matches, generates_ip_at_scale, max_disjoint

VERIFIED, EXHAUSTED, VIOLATED = "verified", "exhausted", "violated"
_RANK = {VERIFIED: 0, EXHAUSTED: 1, VIOLATED: 2}


@dataclass(frozen=True)
class ClaimConfig:
    """Bounds for a verification campaign.

    ``bound`` caps codes in exhaustive scans; ``None`` picks 2**14 for the
    first three colorings and 2**10 for the Sigma-2 one.
    """

    bound: Optional[int] = None
    horizon: int = 64
    ip_scale: int = 6
    ip_scale_sigma2: int = 5
    unique31_max: int = 16
    unique32_max: int = 14
    unique33_max: int = 14
    stabilization_indices: int = 8
    polarity_indices: int = 8
    polarity_span: int = 7
    grid_p: int = 32
    grid_q: int = 32
    sigma2_width: int = 24
    transport_bits: int = 12

    def bound_for(self, cid: str) -> int:
        if self.bound is not None:
            return self.bound
        name, _ = parse_id(cid)
        if name == "c34":
            return 1 << 10
        if name in ("c31", "c32", "c33"):
            return 1 << 14
        return 1 << 12

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Outcome:
    status: str
    data: dict = field(default_factory=dict)
    counterexample: Optional[dict] = None


def _combine(statuses) -> str:
    worst = VERIFIED
    for s in statuses:
        if _RANK[s] > _RANK[worst]:
            worst = s
    return worst


def _fs(code: Optional[int]) -> Optional[str]:
    return None if code is None else format_set(code)


# ---------------------------------------------------------------------------
# claims shared by every coloring


def claim_definition(col: RecursiveColoring, cat, cfg: ClaimConfig) -> Outcome:
    """Every color below the bound agrees with the coloring's local rule."""
    bound = cfg.bound_for(col.cid)
    for b in range(1, bound):
        value, reported = col.check_rule(b)
        if value != reported:
            return Outcome(VIOLATED, {"checked": b}, _mismatch(b, value, reported))
    return Outcome(VERIFIED, {"checked": bound - 1})


def claim_determinism(col: RecursiveColoring, cat, cfg: ClaimConfig) -> Outcome:
    """Two independent instances evaluated in opposite orders agree."""
    bound = cfg.bound_for(col.cid)
    other = make_coloring(col.cid, cat)
    down = {b: other(b) for b in range(bound - 1, 0, -1)}
    for b in range(1, bound):
        v = col(b)
        if v not in (0, 1):
            return Outcome(VIOLATED, {}, {"kind": "not-a-color", "code": b, "set": format_set(b), "color": v})
        if v != down[b]:
            return Outcome(VIOLATED, {}, {"kind": "order-dependence", "code": b, "set": format_set(b),
                                          "ascending": v, "descending": down[b]})
    return Outcome(VERIFIED, {"checked": bound - 1})


def claim_transport(col: RecursiveColoring, cat, cfg: ClaimConfig) -> Outcome:
    """Carry-free sums color like the union of binary supports."""
    induced = induced_integer_coloring(col)
    top = 1 << cfg.transport_bits
    pairs = 0
    for a in range(1, top):
        free = (top - 1) & ~a
        b = free
        while b:
            if induced(a + b) != col(FinSet(a) | FinSet(b)):
                return Outcome(VIOLATED, {}, {"kind": "transport", "a": a, "b": b})
            pairs += 1
            b = (b - 1) & free
    return Outcome(VERIFIED, {"pairs": pairs, "bits": cfg.transport_bits})


def _mismatch(b: int, value: int, reported: int) -> dict:
    return {"kind": "rule-mismatch", "code": b, "set": format_set(b), "rule": value, "reported": reported}


# ---------------------------------------------------------------------------
# no enumerable monochromatic IP family


def claim_31_uniqueness(col: Coloring31, cat, cfg: ClaimConfig) -> Outcome:
    top = 1 << (cfg.unique31_max + 1)
    hits = 0
    for b in range(1, top):
        found = col.initial_witnesses(b)
        if len(found) > 1:
            return Outcome(VIOLATED, {}, {"kind": "two-initial-witnesses", "code": b, "set": format_set(b),
                                          "indices": found})
        hits += len(found)
    return Outcome(VERIFIED, {"max_B": cfg.unique31_max, "sets_with_witness": hits})


def _stabilized_at(seq: list) -> int:
    s = len(seq) - 1
    while s > 0 and seq[s - 1] == seq[-1]:
        s -= 1
    return s


def claim_31_stabilization(col: Coloring31, cat, cfg: ClaimConfig) -> Outcome:
    """``s -> W^s_i`` reaches its final value by half the horizon."""
    h = cfg.horizon
    tables = [col.witnesses(s) for s in range(h + 1)]
    top = max(cfg.stabilization_indices, 2 * len(col.cat) - 1)
    rows, statuses = {}, []
    for i in range(top + 1):
        fam = col.cat.index_fn(i // 2)
        if len(max_disjoint(fam.stage(h), target=i + 1)) < i + 1:
            rows[i] = {"status": "vacuous"}
            continue
        seq = [tables[s][i] if i < len(tables[s]) else None for s in range(h + 1)]
        s0 = _stabilized_at(seq)
        status = VERIFIED if s0 <= h // 2 and seq[-1] is not None else EXHAUSTED
        statuses.append(status)
        rows[i] = {"status": status, "stage": s0, "witness": _fs(seq[-1])}
    return Outcome(_combine(statuses), {"horizon": h, "indices": rows})


def claim_31_injury(col: Coloring31, cat, cfg: ClaimConfig) -> Outcome:
    """If no earlier witness moved, a witness can only move down in code order."""
    h = cfg.horizon
    tables = [col.witnesses(s) for s in range(h + 1)]
    moves = 0
    for s in range(h):
        now, nxt = tables[s], tables[s + 1]
        for i in range(s + 1):
            if now[i] != nxt[i]:
                moves += 1
            if now[i] is None or any(now[j] != nxt[j] for j in range(i)):
                continue
            if nxt[i] is None or nxt[i] > now[i]:
                return Outcome(VIOLATED, {}, {"kind": "injury", "stage": s, "index": i,
                                              "before": _fs(now[i]), "after": _fs(nxt[i])})
    return Outcome(VERIFIED, {"horizon": h, "witness_moves": moves})


def claim_31_separation(col: Coloring31, cat, cfg: ClaimConfig) -> Outcome:
    """Each IP-generating entry has unions ``W0 u B`` and ``W1 u B`` of both colors."""
    bound, h = cfg.bound_for(col.cid), cfg.horizon
    entries, statuses = {}, []
    for e, fam in enumerate(col.cat.entries):
        members = fam.stage(h)
        if not generates_ip_at_scale(members, cfg.ip_scale):
            entries[e] = {"status": "vacuous", "family": fam.description}
            continue
        found = None
        for b in members:
            s = max_elem(b)
            table = col.witnesses(s)
            if 2 * e + 1 > s:
                continue
            w0, w1 = table[2 * e], table[2 * e + 1]
            if w0 is None or w1 is None or min_elem(b) <= max_elem(w1):
                continue
            u0, u1 = w0 | b, w1 | b
            if max(u0, u1) >= bound:
                break
            c0, c1 = col(u0), col(u1)
            found = {"B": format_set(b), "W0": format_set(w0), "W1": format_set(w1),
                     "U0": format_set(u0), "U1": format_set(u1), "colors": [c0, c1]}
            if (c0, c1) != (0, 1):
                return Outcome(VIOLATED, {"entries": entries}, {"kind": "separation", "entry": e, **found})
            break
        status = VERIFIED if found else EXHAUSTED
        statuses.append(status)
        entries[e] = {"status": status, "family": fam.description, **(found or {})}
    return Outcome(_combine(statuses), {"bound": bound, "entries": entries})


# ---------------------------------------------------------------------------
# no enumerable family half-matched by k sets


def claim_32_uniqueness(col: Coloring32, cat, cfg: ClaimConfig) -> Outcome:
    top = 1 << (cfg.unique32_max + 1)
    colored = 0
    for b in range(1, top):
        good = col.good(b)
        if len(good) > 1:
            return Outcome(VIOLATED, {}, {"kind": "two-correct-unblocked", "code": b, "set": format_set(b),
                                          "decompositions": [d.describe() for d in good]})
        colored += len(good)
    blocked = sum(1 for b in range(1, top) for d in col.decompositions(b) if d.blocked)
    return Outcome(VERIFIED, {"max_B": cfg.unique32_max, "recolored": colored, "blocked": blocked})


def _stable_rows(tables: list, rows: range) -> int:
    """Least stage from which the given rows of every table agree with the last."""
    last = tables[-1]
    s = len(tables) - 1
    while s > 0 and all(tables[s - 1].get(i) == last.get(i) for i in rows):
        s -= 1
    return s


def claim_32_defeat(col: Coloring32, cat, cfg: ClaimConfig) -> Outcome:
    """For every pair with an IP-generating family, some ``v`` defeats every ``A``."""
    scat, h, k = col.scat, cfg.horizon, col.scat.k
    tables = [col.witnesses(s) for s in range(h + 1)]
    pairs, statuses = {}, []
    for a_idx, w_idx in sorted(scat.pairs):
        a_fam, w_fam = scat.a_families[a_idx], scat.w_families[w_idx]
        key = f"{a_idx},{w_idx}"
        members = w_fam.stage(h)
        if not generates_ip_at_scale(members, cfg.ip_scale):
            pairs[key] = {"status": "vacuous"}
            continue
        n = scat.index_for(a_idx, w_idx, max(max_elem(a) for a in a_fam) + 1)
        row = tables[-1].get(n, {})
        if len(row) < k + 1:
            statuses.append(EXHAUSTED)
            pairs[key] = {"status": EXHAUSTED, "index": n, "reason": "witness row incomplete at horizon"}
            continue
        s = _stable_rows(tables, range(n + 1))
        lo = max(s, max_elem(row[k]) + 1)
        b = next((m for m in members if min_elem(m) >= lo), None)
        if b is None:
            statuses.append(EXHAUSTED)
            pairs[key] = {"status": EXHAUSTED, "index": n, "reason": "no member past stabilization"}
            continue
        good = [v for v in range(k + 1)
                if all(col(int(a) | row[v] | b) == 1 - col(row[v] | b) for a in a_fam)]
        rec = {"index": n, "stage": s, "B": format_set(b), "W": [format_set(row[u]) for u in range(k + 1)]}
        if not good:
            return Outcome(VIOLATED, {"pairs": pairs},
                           {"kind": "no-defeating-witness", "pair": key, **rec,
                            "A": [format_set(a) for a in a_fam]})
        statuses.append(VERIFIED)
        pairs[key] = {"status": VERIFIED, "v": good[0], **rec}
    return Outcome(_combine(statuses), {"horizon": h, "k": k, "pairs": pairs})


# ---------------------------------------------------------------------------
# no enumerable full-matched family


def claim_33_uniqueness(col: Coloring33, cat, cfg: ClaimConfig) -> Outcome:
    top = 1 << (cfg.unique33_max + 1)
    found = 0
    for b in range(1, top):
        cands = col.candidates(b)
        if len(cands) > 1:
            return Outcome(VIOLATED, {}, {"kind": "two-primary", "code": b, "set": format_set(b),
                                          "decompositions": [d.describe() for d in cands]})
        found += len(cands)
    return Outcome(VERIFIED, {"max_B": cfg.unique33_max, "with_primary": found})


def claim_33_polarity_consistency(col: Coloring33, cat, cfg: ClaimConfig) -> Outcome:
    """A set containing ``i`` has some stage-``t`` witness of ``i`` as a segment."""
    bound = cfg.bound_for(col.cid)
    tables: dict[int, dict] = {}
    traced = 0
    for b in range(1, bound):
        s = max_elem(b)
        for i in range(s + 1):
            if col.polarity(b, i) is None:
                continue
            traced += 1
            ok = False
            for t in range(s + 1):
                if t not in tables:
                    tables[t] = col.witnesses(t)
                if any(contains_segment(b, w) for w in tables[t].get(i, {}).values()):
                    ok = True
                    break
            if not ok:
                return Outcome(VIOLATED, {}, {"kind": "polarity-without-witness", "code": b,
                                              "set": format_set(b), "index": i})
    return Outcome(VERIFIED, {"bound": bound, "traced": traced})


def _polarity_instances(col: Coloring33, cfg: ClaimConfig):
    """``(i, row, lo)`` for indices whose family generates an IP set at scale."""
    h = cfg.horizon
    tables = [col.witnesses(s) for s in range(h + 1)]
    for i in range(cfg.polarity_indices):
        fam = col.cat.index_fn(i)
        if not generates_ip_at_scale(fam.stage(h), cfg.ip_scale):
            yield i, None, None, "vacuous"
            continue
        row = tables[-1].get(i, {})
        if len(row) < 2:
            yield i, None, None, "witness row incomplete at horizon"
            continue
        s = _stable_rows(tables, range(i + 1))
        yield i, row, max(s, max_elem(row[1]) + 1), None


def claim_33_polarity(col: Coloring33, cat, cfg: ClaimConfig) -> Outcome:
    """``c(A u W^v u B) = c(A)`` and ``c(A u W^(1-v) u B) != c(A)`` for some ``v = v_B``.

    Every ``B`` above the stabilization stage must have such a ``v``.  When the
    polarity of ``A u W^0 u B`` can be traced, ``v`` is read off it; otherwise
    both values are tried.  A ``B`` for which neither works is a counterexample.
    """
    out, statuses = {}, []
    first_bad = None
    for i, row, lo, why in _polarity_instances(col, cfg):
        if row is None:
            out[i] = {"status": "vacuous" if why == "vacuous" else EXHAUSTED, "reason": why}
            if why != "vacuous":
                statuses.append(EXHAUSTED)
            continue
        a_sets = range(1, 1 << (i + 1))

        def holds(v: int, b: int) -> Optional[int]:
            """First ``A`` refuting ``v``, or None."""
            for a in a_sets:
                ca = col(a)
                if col(a | row[v] | b) != ca or col(a | row[1 - v] | b) == ca:
                    return a
            return None

        traced = untraced_ok = failed = 0
        bad = None
        for bits in range(1, 1 << cfg.polarity_span):
            b = bits << lo
            pols = {(col.polarity(a | row[0] | b, i), col.polarity(a | row[1] | b, i)) for a in a_sets}
            p = next(iter(pols))
            if len(pols) == 1 and None not in p and p[0] != p[1]:
                candidates, traced_here = [p[0]], True
            else:
                candidates, traced_here = [0, 1], False
            refuted = {v: holds(v, b) for v in candidates}
            if any(x is None for x in refuted.values()):
                if traced_here:
                    traced += 1
                else:
                    untraced_ok += 1
                continue
            failed += 1
            if bad is None:
                a = refuted[candidates[0]]
                bad = {"kind": "no-v_B" if not traced_here else "polarity", "index": i, "B": format_set(b),
                       "A": format_set(a), "W": [format_set(row[0]), format_set(row[1])],
                       "traced": traced_here,
                       "colors": {"A": col(a), "A+W0+B": col(a | row[0] | b), "A+W1+B": col(a | row[1] | b)}}
        status = VIOLATED if failed else (VERIFIED if traced + untraced_ok else EXHAUSTED)
        statuses.append(status)
        if bad is not None and first_bad is None:
            first_bad = bad
        out[i] = {"status": status, "min_B": lo, "W": [format_set(row[0]), format_set(row[1])],
                  "traced_B": traced, "untraced_ok_B": untraced_ok, "failed_B": failed}
    data = {"span": cfg.polarity_span, "instances": out}
    if first_bad is not None:
        return Outcome(VIOLATED, data, first_bad)
    return Outcome(_combine(statuses), data)


def claim_33_defeat(col: Coloring33, cat, cfg: ClaimConfig) -> Outcome:
    """The family of all sets with max at most ``i`` fails to full-match ``NU(W_i)``."""
    out, statuses = {}, []
    for i, row, lo, why in _polarity_instances(col, cfg):
        if row is None:
            out[i] = {"status": "vacuous" if why == "vacuous" else EXHAUSTED, "reason": why}
            if why != "vacuous":
                statuses.append(EXHAUSTED)
            continue
        a_sets = list(range(1, 1 << (i + 1)))
        hit = None
        tried = 0
        for b in col.cat.index_fn(i).stage(cfg.horizon):
            if min_elem(b) < lo:
                continue
            tried += 1
            for u in (0, 1):
                target = row[u] | b
                if full_matches(a_sets, target, col) is None:
                    hit = {"B": format_set(b), "u": u, "S": format_set(target)}
                    break
            if hit:
                break
        if hit is None:
            status = EXHAUSTED if tried == 0 else VIOLATED
            if status == VIOLATED:
                return Outcome(VIOLATED, {"instances": out},
                               {"kind": "full-matched", "index": i, "tried_B": tried})
        else:
            status = VERIFIED
        statuses.append(status)
        out[i] = {"status": status, **(hit or {})}
    return Outcome(_combine(statuses), {"horizon": cfg.horizon, "instances": out})


# ---------------------------------------------------------------------------
# no Sigma-2 monochromatic IP family


def _rows_for(rels) -> int:
    return row_index(len(rels) - 1, len(rels) - 1) + 1


def _prefix(t1: list, t2: list) -> int:
    n = 0
    while n < len(t1) and t1[n] == t2[n]:
        n += 1
    return n


def _le(x: Optional[int], y: Optional[int]) -> bool:
    """Code order with undefined as the top element."""
    if y is None:
        return True
    return x is not None and x <= y


def claim_34_shrink(col: Coloring34, cat, cfg: ClaimConfig) -> Outcome:
    """``p <= p'`` and equal earlier rows give ``T^(p',q) <= T^(p,q)``."""
    rows = _rows_for(col.rels)
    wit = Witness34(col.rels)
    checked = 0
    for q in range(cfg.grid_q + 1):
        tabs = [wit.table(p, q, rows) for p in range(cfg.grid_p + 1)]
        for p in range(cfg.grid_p + 1):
            for p2 in range(p, cfg.grid_p + 1):
                upto = min(_prefix(tabs[p], tabs[p2]) + 1, rows)
                for r in range(upto):
                    checked += 1
                    if not _le(tabs[p2][r], tabs[p][r]):
                        i, n = row_pair(r)
                        return Outcome(VIOLATED, {}, {"kind": "shrink", "p": p, "p2": p2, "q": q, "i": i, "n": n,
                                                      "T_p": _fs(tabs[p][r]), "T_p2": _fs(tabs[p2][r])})
    return Outcome(VERIFIED, {"rows": rows, "p_max": cfg.grid_p, "q_max": cfg.grid_q, "checked": checked})


def claim_34_stability(col: Coloring34, cat, cfg: ClaimConfig) -> Outcome:
    """If ``p`` and ``p''`` agree on rows before ``r`` then so does every ``p'`` between.

    The stronger form that also fixes row ``r`` itself is tallied separately.
    """
    rows = _rows_for(col.rels)
    wit = Witness34(col.rels)
    checked = literal_fail = 0
    literal_example = None
    for q in range(cfg.grid_q + 1):
        tabs = [wit.table(p, q, rows) for p in range(cfg.grid_p + 1)]
        pre = [[_prefix(tabs[a], tabs[b]) for b in range(len(tabs))] for a in range(len(tabs))]
        for p in range(len(tabs)):
            for p3 in range(p, len(tabs)):
                agree = pre[p][p3]
                for p2 in range(p, p3 + 1):
                    checked += 1
                    if pre[p][p2] < agree:
                        r = pre[p][p2]
                        i, n = row_pair(r)
                        return Outcome(VIOLATED, {}, {"kind": "stability", "p": p, "p2": p2, "p3": p3, "q": q,
                                                      "i": i, "n": n})
                    if agree < rows and pre[p][p2] == agree:
                        literal_fail += 1
                        if literal_example is None:
                            i, n = row_pair(agree)
                            literal_example = {"p": p, "p2": p2, "p3": p3, "q": q, "i": i, "n": n,
                                               "T_p": _fs(tabs[p][agree]), "T_p2": _fs(tabs[p2][agree])}
    return Outcome(VERIFIED, {"rows": rows, "p_max": cfg.grid_p, "q_max": cfg.grid_q, "checked": checked,
                              "row_itself_differs": literal_fail, "row_itself_example": literal_example})


def _least_x(rel, t: int) -> Optional[int]:
    for x in range(rel.x_bound + 1):
        if all(rel.R(x, y, t) for y in range(rel.y_bound_fn(x, t) + 1)):
            return x
    return None


def _least_failing_y(rel, x: int, t: int) -> int:
    for y in range(rel.y_bound_fn(x, t) + 1):
        if not rel.R(x, y, t):
            return y
    raise AssertionError(f"{rel.name}: no failing y below the certified bound")


def _least_member(rel, lo: int, hi_at_least: int, width: int) -> Optional[int]:
    """Least code satisfying ``rel`` with min >= lo and max >= hi_at_least."""
    for top in range(max(lo, hi_at_least), width):
        for low in range(1 << (top - lo)):
            t = (1 << top) | (low << lo)
            if rel.holds(t):
                return t
    return None


def sigma2_recipe(rels, i: int, width: int) -> dict:
    """The sets ``T_(i,n)``, ``A``, ``B`` and bounds ``p``, ``q`` of the defeat argument."""
    rel = rels[i % len(rels)]
    tw = TrueWitness34(rels, width)
    ts = [tw.get(i, n) for n in range(i + 1)]
    if any(t is None for t in ts):
        return {"reason": "undefined witness"}
    t_top = ts[-1]
    p = 0
    for t in range(1, t_top + 1):
        x = _least_x(rel, t)
        if x is not None:
            p = max(p, x)
    a = _least_member(rel, max(p, max_elem(t_top) + 1), 0, width)
    if a is None:
        return {"reason": "no A in universe", "p": p}
    q = 0
    for j in range(i + 1):
        rj = rels[j % len(rels)]
        for t in range(1, t_top + 1):
            if rj.holds(t):
                continue
            for x in range(min_elem(a) + 1):
                q = max(q, _least_failing_y(rj, x, t))
    b = _least_member(rel, max_elem(a) + 1, q, width)
    if b is None:
        return {"reason": "no B in universe", "p": p, "q": q}
    return {"T": ts, "p": p, "A": a, "q": q, "B": b}


def claim_34_defeat(col: Coloring34, cat, cfg: ClaimConfig) -> Outcome:
    """For each relation whose sets generate an IP family, ``NU`` is not monochromatic."""
    rels, width = col.rels, cfg.sigma2_width
    small = 1 << 10
    out, statuses = {}, []
    for i, rel in enumerate(rels):
        members = [t for t in range(1, small) if rel.holds(t)]
        if not generates_ip_at_scale(members, cfg.ip_scale_sigma2):
            out[i] = {"status": "vacuous", "relation": rel.name}
            continue
        rec = sigma2_recipe(rels, i, width)
        if "T" not in rec:
            statuses.append(EXHAUSTED)
            out[i] = {"status": EXHAUSTED, "relation": rel.name, **rec}
            continue
        a, b = rec["A"], rec["B"]
        approx = [Witness34(rels).witness(min_elem(a), max_elem(b), *row_pair(r))
                  for r in range(row_index(i, i) + 1)]
        tw = TrueWitness34(rels, width)
        truth = [tw.get(*row_pair(r)) for r in range(row_index(i, i) + 1)]
        info = {"relation": rel.name, "T": [_fs(t) for t in rec["T"]], "p": rec["p"], "q": rec["q"],
                "A": _fs(a), "B": _fs(b), "approximation_exact": approx == truth}
        base = col(a | b)
        hit = None
        for n, t in enumerate(rec["T"]):
            if col(t | a | b) != base:
                hit = n
                break
        if hit is None:
            return Outcome(VIOLATED, {"relations": out},
                           {"kind": "monochromatic", "index": i, **info, "color": base})
        statuses.append(VERIFIED)
        out[i] = {"status": VERIFIED, "n": hit, "colors": [col(rec["T"][hit] | a | b), base], **info}
    return Outcome(_combine(statuses), {"width": width, "relations": out})


# ---------------------------------------------------------------------------
# registry and runner


Claim = Callable[[RecursiveColoring, LoadedCatalog, ClaimConfig], Outcome]

COMMON: dict[str, Claim] = {"transport": claim_transport, "determinism": claim_determinism}

SUITES: dict[str, dict[str, Claim]] = {
    "c31": {"s31-definition": claim_definition, "s31-uniqueness": claim_31_uniqueness,
            "s31-injury": claim_31_injury, "s31-stabilization": claim_31_stabilization,
            "s31-separation": claim_31_separation, **COMMON},
    "c32": {"s32-definition": claim_definition, "s32-uniqueness": claim_32_uniqueness,
            "s32-defeat": claim_32_defeat, **COMMON},
    "c33": {"s33-definition": claim_definition, "s33-uniqueness": claim_33_uniqueness,
            "s33-polarity-consistency": claim_33_polarity_consistency, "s33-polarity": claim_33_polarity,
            "s33-defeat": claim_33_defeat, **COMMON},
    "c34": {"s34-definition": claim_definition, "s34-shrink": claim_34_shrink,
            "s34-stability": claim_34_stability, "s34-defeat": claim_34_defeat, **COMMON},
}


def claims_for(cid: str) -> list[str]:
    name, _ = parse_id(cid)
    suite = SUITES.get(name, {"definition": claim_definition, **COMMON})
    return list(suite)


def default_catalog_for(cid: str) -> str:
    name, _ = parse_id(cid)
    return "builtin:sized" if name == "c32" else "builtin:default"


def audit(col: RecursiveColoring) -> Optional[dict]:
    """First memoized color (in code order) that its local rule disagrees with."""
    for b in sorted(col.memo):
        if b == 0:
            continue
        value, _ = col.rule(b)  # the rule, not the flip, is the reference
        if value != col.memo[b]:
            return _mismatch(b, value, col.memo[b])
    return None


def run_claim(cid: str, catalog_ref: str, claim: str, cfg: ClaimConfig) -> dict:
    """Run one claim on a fresh coloring and return its report record."""
    start = time.perf_counter()
    cat = load_catalog(catalog_ref)
    col = make_coloring(cid, cat)
    name, _ = parse_id(cid)
    suite = SUITES.get(name, {"definition": claim_definition, **COMMON})
    if claim not in suite:
        raise KeyError(f"no claim {claim!r} for {cid}")
    try:
        outcome = suite[claim](col, cat, cfg)
    except AssertionError as exc:  # includes MultipleWitnessViolation
        outcome = Outcome(VIOLATED, {}, {"kind": type(exc).__name__, "message": str(exc)})
    try:
        bad = audit(col)
    except AssertionError as exc:
        bad = {"kind": type(exc).__name__, "message": str(exc)}
    if bad is not None and outcome.status != VIOLATED:
        outcome = Outcome(VIOLATED, dict(outcome.data, own_status=outcome.status), bad)
    elif bad is not None:
        outcome.data["audit"] = bad
    return {
        "claim": claim,
        "coloring": col.cid,
        "catalog": catalog_ref,
        "bound": cfg.bound_for(cid),
        "status": outcome.status,
        "data": _jsonable(outcome.data),
        "counterexample": _jsonable(outcome.counterexample),
        "wall_time": round(time.perf_counter() - start, 6),
    }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, FinSet):
        return format_set(obj)
    return obj


__all__ = ["ClaimConfig", "EXHAUSTED", "Outcome", "SUITES", "VERIFIED", "VIOLATED", "audit", "claims_for",
           "default_catalog_for", "run_claim", "sigma2_recipe"]
