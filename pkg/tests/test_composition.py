from __future__ import annotations

import pytest
from builders import build, mask, models, p4
from hypothesis import given, settings
from hypothesis import strategies as st

from clawfree.composition import (
    Component,
    ComponentSolver,
    CompositionError,
    build_root_instance,
    decode,
    decompose_basic,
    gadget_violation,
    max_weight_matching,
    solve_root,
    strip_values,
)
from clawfree.graph import WeightedGraph, remove_twins
from clawfree.lifting import LiftLedger, lift
from clawfree.oracle import brute_matching, brute_mwss, check_basic, gen_instance
from clawfree.pipeline import run


def p8():
    """P4 with its middle edge lifted: 1-2-q1-qbar1-qbar2-q2-3-4, new nodes of weight 2.

    The new nodes carry tags ``soft0.q1``, ``soft0.qbar1`` and so on.
    """
    g = p4()
    mate: dict[int, int] = {}
    lift(g, mask(g, 2, 3), [mask(g, 2), mask(g, 3)], mask(g, 2, 4), mate, phase="soft", w_m=2, ledger=LiftLedger())
    return g, mate


class TestDecompose:
    def test_p8(self):
        g, mate = p8()
        dec = decompose_basic(g, mate)
        kinds = {frozenset(g.tags_of(c.nodes)): c.kind for c in dec.components}
        assert kinds == {
            frozenset({1, 2, "soft0.q1"}): "strip",
            frozenset({"soft0.qbar1", "soft0.qbar2"}): "clique",
            frozenset({"soft0.q2", 3, 4}): "strip",
        }

    def test_empty_matching(self):
        g = p4()
        dec = decompose_basic(g, {})
        assert [c.kind for c in dec.components] == ["isolated"]

    def test_pendant_lift(self):
        g = build(4, [(1, 2), (2, 3), (1, 3), (3, 4)])
        mate: dict[int, int] = {}
        q = mask(g, 1, 2, 3)
        lift(g, q, [q], mask(g, 1, 4), mate, phase="soft", w_m=2, ledger=LiftLedger())
        dec = decompose_basic(g, mate)
        by_kind = {c.kind: c.nodes for c in dec.components}
        assert set(by_kind) == {"clique", "strip"}
        assert bin(by_kind["clique"]).count("1") == 1

    def test_three_matched_nodes_rejected(self):
        g = build(6, [(1, 2), (2, 3), (1, 4), (2, 5), (3, 6)])
        i = g.index_of
        mate = {i(1): i(4), i(4): i(1), i(2): i(5), i(5): i(2), i(3): i(6), i(6): i(3)}
        with pytest.raises(CompositionError):
            decompose_basic(g, mate)


class TestStripValues:
    def test_p8_strip(self):
        g, mate = p8()
        dec = decompose_basic(g, mate)
        idx = next(i for i, c in enumerate(dec.components) if (c.nodes >> g.index_of(1)) & 1)
        sv = strip_values(g, dec.components[idx], idx, ComponentSolver(g))
        assert sv.values == {"0": 1, "1": 3}

    def test_single_node(self):
        g = WeightedGraph([7])
        sv = strip_values(g, Component(1, "strip", (0,)), 0, ComponentSolver(g))
        assert sv.values == {"0": 0, "1": 7}

    def test_two_boundary_path(self):
        g = build(3, [(1, 2), (2, 3)], [2, 5, 3])
        comp = Component(g.alive, "strip", (0, 2))
        sv = strip_values(g, comp, 0, ComponentSolver(g))
        assert sv.values == {"00": 5, "10": 2, "01": 3, "11": 5}
        assert sv.witness["00"] == mask(g, 2)

    def test_adjacent_boundary_rejected(self):
        g = build(2, [(1, 2)])
        with pytest.raises(CompositionError):
            strip_values(g, Component(g.alive, "strip", (0, 1)), 0, ComponentSolver(g))


class TestRootInstance:
    def test_p8(self):
        g, mate = p8()
        dec = decompose_basic(g, mate)
        inst = build_root_instance(g, dec, ComponentSolver(g))
        assert sorted(label.rstrip("0123456789") for label in inst.labels) == ["l", "l", "r", "t", "t"]
        assert sorted(e.weight for e in inst.edges) == [2, 2, 2, 2]
        assert inst.offset == 2
        result = solve_root(inst)
        assert result.weight == 4
        weight, chosen = decode(g, inst, result)
        assert weight == 6 == brute_mwss(g)[0]
        assert g.is_stable(chosen)
        for strip in inst.strips:
            assert gadget_violation(g, inst, dec, strip) is None

    def test_render(self):
        g, mate = p8()
        inst = build_root_instance(g, decompose_basic(g, mate), ComponentSolver(g))
        text = inst.render()
        assert text.startswith("p root 5 4\nc offset 2\n")

    def test_negative_delta_gives_empty_matching(self):
        # clique node 1 (weight 0) matched to the end 2 of the strip path 2-3-4,
        # whose middle node outweighs both patterns with 2 selected
        g = build(4, [(1, 2), (2, 3), (3, 4)], [0, 1, 10, 1])
        i = g.index_of
        mate = {i(1): i(2), i(2): i(1)}
        dec = decompose_basic(g, mate)
        inst = build_root_instance(g, dec, ComponentSolver(g))
        result = solve_root(inst)
        assert result.edges == ()
        assert decode(g, inst, result) == (10, mask(g, 3))

    def test_isolated_component_is_fixed(self):
        g = build(3, [(1, 2)], [1, 4, 6])
        inst = build_root_instance(g, decompose_basic(g, {}), ComponentSolver(g))
        assert inst.edges == [] and inst.offset == 10
        assert decode(g, inst, solve_root(inst)) == (10, mask(g, 2, 3))


class TestMatching:
    def test_triangle(self):
        assert max_weight_matching([(0, 1, 1), (1, 2, 1), (0, 2, 1)]).weight == 1

    def test_star(self):
        result = max_weight_matching([(0, 1, 4), (0, 2, 7), (0, 3, 2)])
        assert result.weight == 7 and result.edges == (1,)

    def test_negative_never_chosen(self):
        result = max_weight_matching([(0, 1, -3), (1, 2, 0)])
        assert result.edges == () and result.weight == 0

    def test_parallel_edges_keep_heaviest(self):
        result = max_weight_matching([(0, 1, 2), (0, 1, 5), (1, 0, 5)])
        assert result.edges == (1,)

    def test_rejects_loop(self):
        with pytest.raises(ValueError):
            max_weight_matching([(0, 0, 1)])


@st.composite
def edge_lists(draw, max_nodes: int = 7, max_edges: int = 10):
    n = draw(st.integers(2, max_nodes))
    pair = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] != p[1])
    pairs = draw(st.lists(pair, max_size=max_edges))
    return [(u, v, draw(st.integers(-5, 20))) for u, v in pairs]


@given(edge_lists())
@settings(max_examples=300)
def test_matching_agrees_with_brute_force(edges):
    result = max_weight_matching(edges)
    assert result.weight == brute_matching(edges)[0]
    ends = [x for i in result.edges for x in edges[i][:2]]
    assert len(ends) == len(set(ends))
    assert all(edges[i][2] > 0 for i in result.edges)


@given(models(max_n=14))
@settings(max_examples=60)
def test_basic_graphs_compose_exactly(model):
    reduced, _ = remove_twins(gen_instance(model))
    for comp in reduced.components():
        h, _ = reduced.subgraph(comp)
        state = run(h)
        g, mate = state.g, state.mate
        assert check_basic(g, mate)
        dec = decompose_basic(g, mate)
        inst = build_root_instance(g, dec, ComponentSolver(g))
        for strip in inst.strips:
            assert gadget_violation(g, inst, dec, strip) is None
        weight, chosen = decode(g, inst, solve_root(inst))
        if len(g) <= 60:
            assert weight == brute_mwss(g, limit=60)[0]
