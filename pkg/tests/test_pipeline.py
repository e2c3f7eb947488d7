from __future__ import annotations

from itertools import combinations

import pytest
from builders import build, c5, mask, models, net, p4, w5
from hypothesis import given, settings

from clawfree.cliques import is_normal, is_weakly_normal
from clawfree.graph import WeightedGraph, find_claw, irregular_nodes, iter_bits, maximal_cliques, remove_twins
from clawfree.oracle import GenModel, brute_mwss, check_canonical, gen_instance, is_m_clique
from clawfree.pipeline import (
    PipelineError,
    SPartitionPlan,
    _m_components,
    after_lifting_violation,
    evaluate,
    extract_quasiline,
    free_lift_all,
    free_lifted_violation,
    is_s_liftable,
    matching_violation,
    meets_normal_free_component,
    polar_wing,
    restore_detached,
    run,
    s_lift_loop,
    s_partition,
    soft_lift_all,
    start,
)
from clawfree.stable import s_cover, wings


def octahedron() -> WeightedGraph:
    """K_{2,2,2}: every edge is rigid, so no clique is soft."""
    return build(6, [(a, b) for a, b in combinations(range(1, 7), 2) if (a + 1) // 2 != (b + 1) // 2])


def w5_with_tail() -> WeightedGraph:
    """A 5-wheel (hub 0, rim 1..5) with a triangle on rim edge 1-2 leading into a path 6..10."""
    rim = [(i, i % 5 + 1) for i in range(1, 6)]
    tail = [(1, 6), (2, 6), (6, 7), (7, 8), (8, 9), (9, 10)]
    return build(11, [(0, i) for i in range(1, 6)] + rim + tail, base=0)


def prepared(g: WeightedGraph):
    """State after soft liftings, extraction and free-component liftings."""
    state = start(g, certify=True)
    soft_lift_all(state)
    extract_quasiline(state)
    free_lift_all(state)
    return state


def twin_free_components(model: GenModel):
    reduced, _ = remove_twins(gen_instance(model))
    for comp in reduced.components():
        h, _ = reduced.subgraph(comp)
        if len(h) > 1:
            yield h


class TestSoftPhase:
    def test_p4_lifts_every_edge(self):
        # with S = {2, 4} all three edges are soft cover cliques, so the
        # path grows to sixteen nodes
        g = p4()
        state = start(g)
        state.stable = mask(g, 2, 4)
        state.certify = True
        soft_lift_all(state)
        h = state.g
        assert [r.clique for r in state.ledger.records] == [mask(g, 1, 2), mask(g, 2, 3), mask(g, 3, 4)]
        assert len(h) == 16 and h.edge_count() == 15 and len(h.components()) == 1
        assert all(bin(h.adj[v]).count("1") <= 2 for v in h.nodes())
        assert after_lifting_violation(state) is None

    def test_no_soft_cliques_is_identity(self):
        g = octahedron()
        assert find_claw(g) is None
        state = start(g, certify=True)
        soft_lift_all(state)
        assert state.stats.soft_lifts == 0 and state.g.edges() == g.edges()

    def test_w5_hub_confined_to_one_component(self):
        state = start(w5_with_tail(), certify=True)
        soft_lift_all(state)
        hubs = irregular_nodes(state.g)
        comps = [c for c in _m_components(state.g, state.mate) if c & hubs]
        assert len(comps) == 1


class TestExtraction:
    def test_w5_alone_is_detached(self):
        state = start(w5(), certify=True)
        soft_lift_all(state)
        strips = extract_quasiline(state)
        assert len(strips) == 1 and strips[0].nodes == w5().alive
        assert len(state.g) == 0

    def test_line_graph_untouched(self):
        for h in twin_free_components(GenModel("line", 20, 3)):
            state = start(h, certify=True)
            soft_lift_all(state)
            assert extract_quasiline(state) == [] and state.stats.detached == 0

    def test_w5_with_tail(self):
        g = w5_with_tail()
        assert find_claw(g) is None
        state = start(g, certify=True)
        soft_lift_all(state)
        strips = extract_quasiline(state)
        assert len(strips) == 1
        assert (strips[0].nodes >> g.index_of(0)) & 1
        assert irregular_nodes(state.g) == 0 and len(state.g) > 0
        assert check_canonical(state.g, state.stable)
        assert matching_violation(state.g, state.stable, state.mate) is None


class TestFreePhase:
    def test_c5_free_component(self):
        g = c5()
        state = start(g)
        state.stable = mask(g, 1, 3)
        free_lift_all(state)
        assert state.stats.free_lifts == 1
        assert state.ledger.records[0].parts == (mask(g, 4), mask(g, 5))
        assert free_lifted_violation(state.g, state.stable, state.mate) is None

    def test_no_free_components_is_identity(self):
        g = octahedron()
        state = start(g)
        free_lift_all(state)
        assert state.stats.free_lifts == 0


class TestPolarWing:
    def test_p4_has_none(self):
        g = p4()
        state = start(g)
        state.stable = mask(g, 2, 4)
        assert polar_wing(state, mask(g, 2, 3), g.index_of(2)) is None

    def test_closed_neighbourhood_inside_clique(self):
        g = build(3, [(1, 2), (2, 3), (1, 3)])
        state = start(g)
        assert polar_wing(state, g.alive, g.index_of(1)) is None

    def test_constructed_polar_wing(self):
        # stable nodes s=1 and r=5; the outside neighbour 4 of s is bound to
        # both, and 2 in the clique {1,2,3} is bound to both and sees 4
        g = build(5, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (2, 5), (4, 5)])
        assert find_claw(g) is None
        state = start(g)
        state.stable = mask(g, 1, 5)
        assert check_canonical(g, state.stable)
        assert polar_wing(state, mask(g, 1, 2, 3), g.index_of(1)) == g.index_of(5)
        plan = s_partition(state, mask(g, 1, 2, 3))
        assert plan.case == "i" and plan.parts == (mask(g, 1, 2, 3),)


def definitional_parts(state, clique: int) -> tuple[int | None, tuple[int, ...]]:
    """S-partition computed from the wing map of the whole graph."""
    g, s = state.g, state.stable
    q = (clique & s).bit_length() - 1
    wm = wings(g, s)
    outside = g.adj[q] & ~clique
    partners = sorted({t for pair in wm.pairs() if q in pair for t in pair if t != q})
    polar = None
    for r in partners:
        w = wm.wing(q, r)
        if outside and not outside & ~w:
            if any(g.adj[x] & outside for x in iter_bits(clique & w)):
                polar = r
    inner = clique & wm.inner
    bound_r = clique & wm.bound.get(tuple(sorted((q, polar))), 0) if polar is not None else 0
    cls_free_outside = any(
        bin(g.adj[y] & s).count("1") == 1 for y in iter_bits(outside)
    )
    parts = [clique & wm.wing(q, t) for t in partners if t != polar and clique & wm.wing(q, t)]
    if polar is None:
        parts.append((1 << q) | inner)
    elif not cls_free_outside:
        parts.append((clique & wm.wing(q, polar)) | (1 << q) | inner)
    else:
        parts.append((clique & wm.wing(q, polar) & ~bound_r) | (1 << q) | inner)
        parts.append(bound_r)
    return polar, tuple(sorted((p for p in parts if p), key=lambda m: m & -m))


# seeds where the S-partition takes each shape at least once
SHAPE_SEEDS = [("line", 8, 2), ("line", 8, 24), ("line", 8, 5), ("line", 8, 4), ("line", 8, 70), ("line", 8, 209), ("line", 10, 17)]


@pytest.mark.parametrize("kind,n,seed", SHAPE_SEEDS)
def test_s_partition_matches_wing_definition(kind, n, seed):
    for h in twin_free_components(GenModel(kind, n, seed)):
        state = prepared(h)
        for _, c in s_cover(state.g, state.stable).members():
            g = state.g
            if bin(c & state.stable).count("1") != 1 or is_m_clique(g, c, state.mate):
                continue
            if not is_weakly_normal(g, c) or meets_normal_free_component(state, c):
                continue
            plan = s_partition(state, c)
            polar, parts = definitional_parts(state, c)
            assert plan.polar == polar
            assert plan.parts == parts
            union = 0
            for k in plan.parts:
                assert not k & union
                union |= k
            assert union == c
            assert sum(1 for k in plan.parts if k & state.stable) == 1


def test_s_partition_shapes_are_all_reached():
    shapes = set()
    for kind, n, seed in SHAPE_SEEDS + [("line", 8, 6), ("line", 8, 86), ("line", 8, 294), ("line", 8, 41)]:
        for h in twin_free_components(GenModel(kind, n, seed)):
            state = prepared(h)
            for _, c in s_cover(state.g, state.stable).members():
                g = state.g
                if bin(c & state.stable).count("1") != 1 or is_m_clique(g, c, state.mate):
                    continue
                if not is_weakly_normal(g, c) or meets_normal_free_component(state, c):
                    continue
                plan = s_partition(state, c)
                shapes.add((plan.polar is not None, plan.case, is_s_liftable(state, c, plan)))
    assert shapes >= {
        (False, "i", False),
        (False, "i", True),
        (False, "ii", False),
        (False, "ii", True),
        (True, "i", False),
        (True, "i", True),
        (True, "ii", True),
    }


class TestIsSLiftable:
    def _state(self, g, mate):
        state = start(g)
        state.mate = mate
        state.matching_changed()
        return state

    def test_single_part(self):
        g = p4()
        state = self._state(g, {})
        plan = SPartitionPlan(mask(g, 2, 3), g.index_of(2), None, (mask(g, 2, 3),), "i")
        assert not is_s_liftable(state, plan.clique, plan)

    def test_three_matched_parts(self):
        # net with an extra node 7 on 3 and 6 so the triangle is no M-clique
        g = build(7, [(1, 2), (2, 3), (1, 3), (1, 4), (2, 5), (3, 6), (3, 7), (6, 7)])
        i = g.index_of
        state = self._state(g, {i(1): i(4), i(4): i(1), i(2): i(5), i(5): i(2), i(3): i(6), i(6): i(3)})
        tri = mask(g, 1, 2, 3)
        assert not is_m_clique(g, tri, state.mate)
        plan = SPartitionPlan(tri, i(1), None, (mask(g, 1), mask(g, 2), mask(g, 3)), "i")
        assert is_s_liftable(state, tri, plan)
        two = SPartitionPlan(tri, i(1), None, (mask(g, 1), mask(g, 2, 3)), "i")
        assert not is_s_liftable(state, tri, two)

    def test_two_parts_one_matched(self):
        g = p4()
        i = g.index_of
        state = self._state(g, {})
        state.mate = {i(3): i(4), i(4): i(3)}
        state.matching_changed()
        plan = SPartitionPlan(mask(g, 2, 3), i(2), None, (mask(g, 2), mask(g, 3)), "i")
        assert not is_s_liftable(state, plan.clique, plan)
        state.mate = {}
        state.matching_changed()
        assert is_s_liftable(state, plan.clique, plan)


class TestRun:
    def test_octahedron_is_left_alone(self):
        state = run(octahedron(), certify=True)
        assert state.stats.s_lifts == 0 and state.stats.nodes_out == 6

    def test_net_weight_preserved(self):
        g = net([1, 1, 1, 5, 5, 5])
        state = run(g, certify=True)
        weight, _ = brute_mwss(state.g, limit=60)
        assert weight - state.ledger.pair_bonus() == 15

    def test_iteration_bound_is_enforced(self):
        h = next(twin_free_components(GenModel("line", 12, 0)))
        state = prepared(h)
        assert any(evaluate(state, c) for _, c in s_cover(state.g, state.stable).members())
        with pytest.raises(PipelineError):
            s_lift_loop(state, max_iterations=0)


def _wing_numbers(state) -> dict[int, int]:
    return wings(state.g, state.stable).number


@given(models(max_n=22))
@settings(max_examples=150)
def test_pipeline_invariants(model):
    for h in twin_free_components(model):
        state = prepared(h)
        before = _wing_numbers(state)
        crowded = [t for t, k in before.items() if k >= 3 and t not in state.mate]
        s_lift_loop(state)
        if crowded:
            assert state.stats.s_lifts >= 1
        g, mate = state.g, state.mate
        for t, k in _wing_numbers(state).items():
            if t not in mate:
                assert k <= 2
        matched = state.matched
        cliques = maximal_cliques(g)
        for comp in _m_components(g, mate):
            if is_m_clique(g, comp, mate):
                continue
            assert bin(comp & matched).count("1") <= 2
            for q in cliques:
                if not q & ~comp:
                    assert not is_normal(g, q)
        restore_detached(state)
        assert find_claw(state.g) is None


@given(models(max_n=12))
@settings(max_examples=80)
def test_pipeline_preserves_weight(model):
    for h in twin_free_components(model):
        state = run(h, certify=True)
        weight, _ = brute_mwss(state.g, limit=120)
        assert weight - state.ledger.pair_bonus() == brute_mwss(h)[0]
