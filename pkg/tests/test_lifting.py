from __future__ import annotations

import pytest
from builders import build, clawfree_graphs, mask, p4, w5
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from clawfree.cliques import is_rigid_edge, rigid_partition
from clawfree.graph import WeightedGraph, find_claw, iter_bits, maximal_cliques, regular_cover
from clawfree.lifting import LiftError, LiftLedger, extend_cover, lift, unwind, update_candidates
from clawfree.oracle import brute_mwss, check_liftable, is_weakly_normal_direct
from clawfree.stable import s_cover


def lifted_p4():
    g = p4()
    s = mask(g, 2, 4)
    mate: dict[int, int] = {}
    ledger = LiftLedger()
    q = mask(g, 2, 3)
    stable, rec = lift(g, q, [mask(g, 2), mask(g, 3)], s, mate, phase="soft", w_m=2, ledger=ledger, certify=True)
    return g, stable, mate, ledger, rec


def random_partition(data, q: int) -> list[int]:
    nodes = list(iter_bits(q))
    labels = data.draw(st.lists(st.integers(0, len(nodes) - 1), min_size=len(nodes), max_size=len(nodes)))
    parts: dict[int, int] = {}
    for v, lab in zip(nodes, labels):
        parts[lab] = parts.get(lab, 0) | (1 << v)
    return list(parts.values())


class TestLiftP4:
    def test_becomes_p8(self):
        g, stable, mate, _, rec = lifted_p4()
        path = [g.index_of(t) for t in (1, 2, "soft0.q1", "soft0.qbar1", "soft0.qbar2", "soft0.q2", 3, 4)]
        assert sorted(g.edges()) == sorted(tuple(sorted(p)) for p in zip(path, path[1:]))
        assert [g.weight[v] for v in iter_bits(rec.new_nodes)] == [2, 2, 2, 2]
        assert rec.removed == ((g.index_of(2), g.index_of(3)),)
        assert find_claw(g) is None

    def test_extensions(self):
        g, stable, mate, _, rec = lifted_p4()
        assert g.tags_of(stable) == [2, 4, "soft0.qbar1", "soft0.q2"]
        assert mate == {rec.q[0]: rec.qbar[0], rec.qbar[0]: rec.q[0], rec.q[1]: rec.qbar[1], rec.qbar[1]: rec.q[1]}

    def test_unwind(self):
        g, _, _, ledger, _ = lifted_p4()
        s_star = mask(g, 1, "soft0.q1", "soft0.qbar2", 3)
        assert g.is_stable(s_star) and g.total_weight(s_star) == 6
        back = unwind(s_star, ledger)
        assert g.tags_of(back) == [1, 3]
        assert brute_mwss(p4())[0] == 2 == g.total_weight(back)

    def test_unwind_rejects_missing_pair(self):
        g, _, _, ledger, _ = lifted_p4()
        with pytest.raises(LiftError):
            unwind(mask(g, 1, 3), ledger)

    def test_unwind_rejects_removed_edge_selected(self):
        g, _, _, ledger, _ = lifted_p4()
        with pytest.raises(LiftError):
            unwind(mask(g, 2, 3, "soft0.qbar1", "soft0.qbar2"), ledger)

    def test_ledger_bonus_and_dump(self):
        g, _, _, ledger, _ = lifted_p4()
        assert ledger.pair_bonus() == 4 and ledger.count("soft") == 1
        assert ledger.dump(g) == "lift soft wM=2 clique=2,3 parts=2|3 q=soft0.q1,soft0.q2 qbar=soft0.qbar1,soft0.qbar2 removed=2-3"


class TestLiftGuards:
    def test_non_liftable_rejected(self):
        g = w5()
        with pytest.raises(LiftError):
            lift(g, mask(g, 0, 1, 2), [mask(g, 0), mask(g, 1), mask(g, 2)], mask(g, 0), {}, phase="soft", w_m=2)

    def test_weight_must_exceed_clique(self):
        g = p4([1, 5, 1, 1])
        with pytest.raises(LiftError):
            lift(g, mask(g, 2, 3), [mask(g, 2), mask(g, 3)], mask(g, 2, 4), {}, phase="soft", w_m=5)

    def test_unknown_phase(self):
        g = p4()
        with pytest.raises(ValueError):
            lift(g, mask(g, 2, 3), [mask(g, 2, 3)], mask(g, 2, 4), {}, phase="other", w_m=2)


def test_trivial_partition_adds_pendant_pair():
    g = build(5, [(1, 2), (2, 3), (1, 3), (3, 4), (4, 5)], [3, 1, 2, 4, 1])
    q = mask(g, 1, 2, 3)
    before = brute_mwss(g)[0]
    lift(g, q, [q], mask(g, 1, 4), {}, phase="soft", w_m=5, ledger=LiftLedger())
    qbar = g.index_of("soft0.qbar1")
    assert g.adj[qbar] == mask(g, "soft0.q1")
    assert g.adj[g.index_of("soft0.q1")] == q | (1 << qbar)
    assert brute_mwss(g)[0] == before + 5


@pytest.mark.parametrize("p", [2, 3, 4])
def test_node_and_edge_counts(p):
    # K_p with one pendant per node; every partition of the clique into singletons is liftable
    edges = [(i, j) for i in range(1, p + 1) for j in range(i + 1, p + 1)]
    edges += [(i, p + i) for i in range(1, p + 1)]
    g = build(2 * p, edges)
    q = mask(g, *range(1, p + 1))
    parts = [mask(g, i) for i in range(1, p + 1)]
    n0, m0 = len(g), g.edge_count()
    _, rec = lift(g, q, parts, mask(g, *range(p + 1, 2 * p + 1)), {}, phase="free", w_m=2, certify=True)
    assert len(g) - n0 == 2 * p
    assert g.edge_count() - (m0 - len(rec.removed)) == p * (p - 1) // 2 + p + p


class TestExtendCover:
    def test_p4_two_parts(self):
        g = p4()
        s = mask(g, 2, 4)
        cover = s_cover(g, s)
        before = set(cover.all_cliques())
        stable, rec = lift(g, mask(g, 2, 3), [mask(g, 2), mask(g, 3)], s, {}, phase="slift", w_m=2)
        after_cover = extend_cover(cover, rec, s)
        after = set(after_cover.all_cliques())
        assert before - after == {mask(g, 2, 3)}
        assert len(after - before) == 5
        for t in iter_bits(stable):
            c1, c2 = after_cover.cliques[t]
            assert g.is_maximal_clique(c1) and g.is_maximal_clique(c2)
            assert (c1 | c2) == g.adj[t] | (1 << t)
        # a cover rebuilt from scratch is also valid for the extended set
        for t, (c1, c2) in s_cover(g, stable).cliques.items():
            assert (c1 | c2) == g.adj[t] | (1 << t)

    def test_rejects_clique_without_single_stable_node(self):
        g = p4()
        _, rec = lift(g, mask(g, 2, 3), [mask(g, 2), mask(g, 3)], mask(g, 2, 4), {}, phase="slift", w_m=2)
        with pytest.raises(ValueError):
            extend_cover(s_cover(p4(), mask(p4(), 1, 3)), rec, 0)


class TestUpdateCandidates:
    def test_matched_part_is_not_added(self):
        g = p4()
        q = mask(g, 2, 3)
        s = mask(g, 2, 4)
        _, rec = lift(g, q, [mask(g, 2), mask(g, 3)], s, {}, phase="slift", w_m=2)
        out = update_candidates([q, mask(g, 3, 4)], rec, mask(g, 3), True, s)
        assert out == [mask(g, 3, 4), (mask(g, 2) | 1 << rec.q[0])]

    def test_all_parts_unmatched(self):
        g = p4()
        q = mask(g, 2, 3)
        s = mask(g, 2, 4)
        _, rec = lift(g, q, [mask(g, 2), mask(g, 3)], s, {}, phase="slift", w_m=2)
        out = update_candidates([q], rec, 0, True, s)
        assert out == [(mask(g, 2) | 1 << rec.q[0]), (mask(g, 3) | 1 << rec.q[1])]

    def test_stable_part_without_outside_neighbour(self):
        g = p4()
        q = mask(g, 2, 3)
        s = mask(g, 2, 4)
        _, rec = lift(g, q, [mask(g, 2), mask(g, 3)], s, {}, phase="slift", w_m=2)
        out = update_candidates([q], rec, 0, False, s)
        assert out == [(mask(g, 3) | 1 << rec.q[1])]


def _pick_clique(data, g: WeightedGraph) -> int:
    cliques = maximal_cliques(g)
    return data.draw(st.sampled_from(cliques))


@given(clawfree_graphs(max_n=10), st.data())
@settings(max_examples=150)
def test_lift_is_claw_free_iff_liftable(g, data):
    q = _pick_clique(data, g)
    parts = random_partition(data, q)
    ok = check_liftable(g, q, parts)
    h = g.copy()
    try:
        lift(h, q, parts, 0, {}, phase="soft", w_m=max(g.weight) + 1)
    except LiftError:
        assert not ok
    else:
        assert ok
    forced = g.copy()
    lift(forced, q, parts, 0, {}, phase="soft", w_m=max(g.weight) + 1, check=False)
    if is_weakly_normal_direct(g, q):
        assert (find_claw(forced) is None) == ok


@given(clawfree_graphs(max_n=10), st.data())
@settings(max_examples=150)
def test_weighted_lifting_preserves_optimum(g, data):
    q = _pick_clique(data, g)
    parts = random_partition(data, q)
    assume(check_liftable(g, q, parts))
    base, _ = brute_mwss(g)
    h = g.copy()
    ledger = LiftLedger()
    lift(h, q, parts, 0, {}, phase="soft", w_m=max(g.weight) + 1, ledger=ledger)
    lifted, chosen = brute_mwss(h)
    assert lifted - ledger.pair_bonus() == base
    back = unwind(chosen, ledger)
    assert g.is_stable(back) and g.total_weight(back) == base


def _rigid_edges(g: WeightedGraph, nodes: int) -> set[tuple[int, int]]:
    return {(u, v) for u, v in g.edges() if (nodes >> u) & 1 and (nodes >> v) & 1 and is_rigid_edge(g, u, v)}


def _soft_cliques(g: WeightedGraph, nodes: int) -> set[int]:
    return {q for q in maximal_cliques(g) if not q & ~nodes and len(rigid_partition(g, q)) > 1}


@given(clawfree_graphs(max_n=14), st.data())
@settings(max_examples=100)
def test_soft_lift_keeps_rigid_edges_and_other_soft_cliques(g, data):
    soft = sorted(_soft_cliques(g, g.alive))
    assume(soft)
    q = data.draw(st.sampled_from(soft))
    parts = rigid_partition(g, q)
    assume(check_liftable(g, q, parts))
    original = g.alive
    h = g.copy()
    lift(h, q, parts, 0, {}, phase="soft", w_m=max(g.weight) + 1)
    assert _rigid_edges(h, original) == _rigid_edges(g, original)
    assert _soft_cliques(h, original) == _soft_cliques(g, original) - {q}


def test_regular_cover_survives_lift():
    g, stable, _, _, _ = lifted_p4()
    assert all(regular_cover(g, v) is not None for v in g.nodes())
