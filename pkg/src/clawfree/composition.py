"""From a basic graph to a weighted matching instance and back.

The components of ``G - M`` are M-cliques, strips with one or two matched
nodes, or isolated pieces.  Each strip is summarised by its best stable set
under every membership pattern of its matched nodes; a small gadget of hubs
and a shared leaf encodes those values as edges of a root multigraph whose
nodes are the M-cliques.  A maximum weight matching of that multigraph, plus
a constant offset, is the maximum stable set weight of the basic graph.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import networkx as nx

from .graph import WeightedGraph, alpha_at_most, iter_bits, popcount


class CompositionError(RuntimeError):
    """The basic graph or the gadget failed a structural check."""


# -- component solver ----------------------------------------------------------


class ComponentSolver:
    """Exact maximum weight stable set on induced subgraphs of one graph.

    Recursion over node masks with memoisation: disconnected masks split,
    simplicial nodes that outweigh their neighbours are taken outright, and
    otherwise the highest-degree node is branched on.  Masks with
    independence number at most 3 are enumerated directly.

    Parameters
    ----------
    g : WeightedGraph
    """

    def __init__(self, g: WeightedGraph) -> None:
        self.g = g
        self.memo: dict[int, tuple[int, int]] = {}

    def solve(self, mask: int, *, small_alpha: bool = False) -> tuple[int, int]:
        """Return ``(weight, nodes)`` of a best stable set inside `mask`.

        With `small_alpha` the caller asserts that `mask` has independence
        number at most 3, and triples are enumerated.
        """
        if small_alpha:
            return self.by_triples(mask)
        return self._solve(mask)

    def by_triples(self, mask: int) -> tuple[int, int]:
        """Best stable set of size at most 3 inside `mask`."""
        adj, w = self.g.adj, self.g.weight
        best = (0, 0)
        for a in iter_bits(mask):
            best = max(best, (w[a], 1 << a), key=lambda p: p[0])
            rest_a = mask & ~adj[a] & ~((2 << a) - 1)
            for b in iter_bits(rest_a):
                wab = w[a] + w[b]
                pair = (1 << a) | (1 << b)
                if wab > best[0]:
                    best = (wab, pair)
                for c in iter_bits(rest_a & ~adj[b] & ~((2 << b) - 1)):
                    if wab + w[c] > best[0]:
                        best = (wab + w[c], pair | (1 << c))
        return best

    def _solve(self, mask: int) -> tuple[int, int]:
        if not mask:
            return 0, 0
        hit = self.memo.get(mask)
        if hit is not None:
            return hit
        g = self.g
        comps = g.components(mask)
        if len(comps) > 1:
            total, chosen = 0, 0
            for c in comps:
                cw, cs = self._solve(c)
                total += cw
                chosen |= cs
            result = (total, chosen)
        else:
            result = self._solve_connected(mask)
        self.memo[mask] = result
        return result

    def _solve_connected(self, mask: int) -> tuple[int, int]:
        g = self.g
        adj, w = g.adj, g.weight
        branch, branch_deg = -1, -1
        for v in iter_bits(mask):
            nb = adj[v] & mask
            if all(nb & ~adj[x] & ~(1 << x) == 0 for x in iter_bits(nb)) and all(
                w[v] >= w[x] for x in iter_bits(nb)
            ):
                rw, rs = self._solve(mask & ~nb & ~(1 << v))
                return rw + w[v], rs | (1 << v)
            d = popcount(nb)
            if d > branch_deg:
                branch, branch_deg = v, d
        v = branch
        out_w, out_s = self._solve(mask & ~(1 << v))
        in_w, in_s = self._solve(mask & ~adj[v] & ~(1 << v))
        in_w += w[v]
        if in_w > out_w:
            return in_w, in_s | (1 << v)
        return out_w, out_s


# -- decomposition -----------------------------------------------------------


@dataclass(frozen=True)
class Component:
    """One component of ``G - M``.

    Attributes
    ----------
    nodes : int
    kind : {"clique", "strip", "isolated"}
    boundary : tuple of int
        Matched nodes of the component, ascending.
    """

    nodes: int
    kind: str
    boundary: tuple[int, ...]


@dataclass
class Decomposition:
    components: list[Component]
    component_of: dict[int, int]
    mate: dict[int, int]

    def of_kind(self, kind: str) -> list[int]:
        return [i for i, c in enumerate(self.components) if c.kind == kind]


def decompose_basic(g: WeightedGraph, mate: dict[int, int]) -> Decomposition:
    """Classify the components of ``g`` minus the matching edges.

    Raises
    ------
    CompositionError
        If a non-clique component meets more than two matched nodes or a
        matching edge joins two strips.
    """
    h = g.copy()
    matched = 0
    for u, v in mate.items():
        matched |= 1 << u
        if u < v:
            if not g.has_edge(u, v):
                raise CompositionError(f"matching pair {g.tag[u]}-{g.tag[v]} is not an edge")
            h.remove_edge(u, v)
    comps = []
    comp_of: dict[int, int] = {}
    for i, c in enumerate(h.components()):
        inside = c & matched
        if not inside:
            kind = "isolated"
        elif g.is_clique(c):
            kind = "clique"
        elif popcount(inside) <= 2:
            kind = "strip"
        else:
            raise CompositionError(f"component {g.tags_of(c)} meets {popcount(inside)} matched nodes")
        comps.append(Component(c, kind, tuple(iter_bits(inside))))
        for v in iter_bits(c):
            comp_of[v] = i
    for u, v in mate.items():
        if u < v and comps[comp_of[u]].kind != "clique" and comps[comp_of[v]].kind != "clique":
            raise CompositionError(f"matching edge {g.tag[u]}-{g.tag[v]} joins two strips")
    return Decomposition(comps, comp_of, dict(mate))


# -- strip values --------------------------------------------------------------


@dataclass(frozen=True)
class StripValues:
    """Best stable sets of a strip for each pattern of its matched nodes.

    ``values`` and ``witness`` are keyed by patterns such as ``"0"``,
    ``"1"`` for one matched node and ``"00"``, ``"10"``, ``"01"``, ``"11"``
    for two; digit ``i`` tells whether boundary node ``i`` is selected.
    An infeasible pattern is absent.
    """

    component: int
    boundary: tuple[int, ...]
    values: dict[str, int]
    witness: dict[str, int]

    @property
    def base(self) -> int:
        return self.values["0" * len(self.boundary)]


def strip_values(g: WeightedGraph, comp: Component, index: int, solver: ComponentSolver) -> StripValues:
    """Solve the strip once per boundary pattern."""
    k = len(comp.boundary)
    inner = comp.nodes & ~sum(1 << u for u in comp.boundary)
    small = alpha_at_most(g, inner, 3)
    values: dict[str, int] = {}
    witness: dict[str, int] = {}
    for bits_in in range(1 << k):
        pattern = "".join("1" if bits_in >> i & 1 else "0" for i in range(k))
        forced = sum(1 << u for i, u in enumerate(comp.boundary) if bits_in >> i & 1)
        if not g.is_stable(forced):
            continue
        rest = inner & ~g.neighborhood(forced)
        w, s = solver.solve(rest, small_alpha=small)
        values[pattern] = w + g.total_weight(forced)
        witness[pattern] = s | forced
    if k == 2 and "11" not in values:
        raise CompositionError(f"boundary nodes of strip {g.tags_of(comp.nodes)} are adjacent")
    return StripValues(index, comp.boundary, values, witness)


# -- root instance -------------------------------------------------------------


@dataclass(frozen=True)
class RootEdge:
    """An edge of the root multigraph.

    ``payload`` holds the graph nodes selected when the edge is chosen;
    ``strip`` and ``pattern`` name the strip pattern it stands for, if any.
    """

    u: int
    v: int
    weight: int
    payload: int
    strip: int | None = None
    pattern: str | None = None


@dataclass
class RootInstance:
    """Weighted multigraph whose maximum matching plus `offset` is the optimum.

    Attributes
    ----------
    labels : list of str
        One label per root node: ``r<k>`` for M-clique roots, ``t``, ``l``
        and ``leaf`` for gadget nodes.
    edges : list of RootEdge
    offset : int
        Sum of the all-out strip values and of the isolated optima.
    strips : dict
        Strip component index to its values.
    fixed : int
        Nodes selected regardless of the matching: isolated optima.
    """

    labels: list[str] = field(default_factory=list)
    edges: list[RootEdge] = field(default_factory=list)
    offset: int = 0
    strips: dict[int, StripValues] = field(default_factory=dict)
    gadgets: dict[int, list[int]] = field(default_factory=dict)
    fixed: int = 0

    def add_node(self, label: str) -> int:
        self.labels.append(label)
        return len(self.labels) - 1

    def add_edge(self, edge: RootEdge) -> int:
        self.edges.append(edge)
        return len(self.edges) - 1

    def render(self) -> str:
        """Weighted edge list in the instance file dialect."""
        lines = [f"p root {len(self.labels)} {len(self.edges)}", f"c offset {self.offset}"]
        lines += [f"c node {i + 1} {label}" for i, label in enumerate(self.labels)]
        lines += [f"e {e.u + 1} {e.v + 1} {e.weight}" for e in self.edges]
        return "\n".join(lines) + "\n"


def build_root_instance(g: WeightedGraph, dec: Decomposition, solver: ComponentSolver) -> RootInstance:
    """Build the root multigraph of a basic graph.

    Each M-clique gets a root; each unmatched clique node a leaf edge; each
    matching edge between two M-cliques a two-edge hub; each strip a hub per
    matched node joined to a shared leaf, plus a hub-to-hub edge for the
    both-in pattern.  Isolated components are solved outright.
    """
    inst = RootInstance()
    comps = dec.components
    root: dict[int, int] = {}
    for i in dec.of_kind("clique"):
        root[i] = inst.add_node(f"r{i}")
    for i in dec.of_kind("clique"):
        for x in iter_bits(comps[i].nodes):
            y = dec.mate.get(x)
            if y is None:
                leaf = inst.add_node("leaf")
                inst.add_edge(RootEdge(root[i], leaf, g.weight[x], 1 << x))
                continue
            j = dec.component_of[y]
            if comps[j].kind == "clique" and (j, y) > (i, x):
                hub = inst.add_node("t")
                inst.add_edge(RootEdge(root[i], hub, g.weight[x], 1 << x))
                inst.add_edge(RootEdge(root[j], hub, g.weight[y], 1 << y))
    for i in dec.of_kind("strip"):
        sv = strip_values(g, comps[i], i, solver)
        inst.strips[i] = sv
        inst.offset += sv.base
        base = sv.base
        hubs = []
        ids = []
        for u in sv.boundary:
            v = dec.mate[u]
            t = inst.add_node("t")
            hubs.append(t)
            ids.append(inst.add_edge(RootEdge(root[dec.component_of[v]], t, g.weight[v], 1 << v, i, None)))
        leaf = inst.add_node("l")
        if len(hubs) == 1:
            ids.append(inst.add_edge(RootEdge(hubs[0], leaf, sv.values["1"] - base, sv.witness["1"], i, "1")))
        else:
            t1, t2 = hubs
            ids.append(inst.add_edge(RootEdge(t1, leaf, sv.values["10"] - base, sv.witness["10"], i, "10")))
            ids.append(inst.add_edge(RootEdge(t2, leaf, sv.values["01"] - base, sv.witness["01"], i, "01")))
            ids.append(inst.add_edge(RootEdge(t1, t2, sv.values["11"] - base, sv.witness["11"], i, "11")))
        inst.gadgets[i] = ids
    for i in dec.of_kind("isolated"):
        w, s = solver.solve(comps[i].nodes)
        inst.offset += w
        inst.fixed |= s
    return inst


# -- matching ---------------------------------------------------------------------


@dataclass(frozen=True)
class MatchingResult:
    """Chosen edge indices, ascending, and their total weight."""

    edges: tuple[int, ...]
    weight: int
    saturated: frozenset[int]


def _prune_pendants(
    nbrs: dict[int, dict[int, list[int]]],
) -> list[tuple[int, int, int]]:
    """Fold away degree-one nodes, in place.

    A leaf ``l`` on ``t`` with edge weight ``a`` contributes ``a`` outright
    once every other edge at ``t`` is discounted by ``a``; edges that drop
    to zero or below can never help and go.  Returns ``(t, l, edge id)``
    in fold order.
    """
    folded = []
    queue = sorted(v for v, row in nbrs.items() if len(row) <= 1)
    while queue:
        leaf = queue.pop()
        row = nbrs.get(leaf)
        if row is None:
            continue
        if not row:
            del nbrs[leaf]
            continue
        if len(row) > 1:
            continue
        (t, (a, idx)), = row.items()
        folded.append((t, leaf, idx))
        del nbrs[leaf]
        del nbrs[t][leaf]
        for x in sorted(nbrs[t]):
            entry = nbrs[t][x]
            entry[0] -= a
            if entry[0] <= 0:
                del nbrs[t][x]
                del nbrs[x][t]
                if len(nbrs[x]) <= 1:
                    queue.append(x)
        if len(nbrs[t]) <= 1:
            queue.append(t)
    return folded


def max_weight_matching(edges: list[tuple[int, int, int]]) -> MatchingResult:
    """Maximum weight matching of a weighted edge list.

    Only positive edges can improve a matching, so the others are left out.
    Parallel edges keep the heaviest, ties going to the lowest index.
    Pendant nodes are folded away exactly before the blossom solver runs on
    what is left, and unfolded afterwards.
    """
    nbrs: dict[int, dict[int, list[int]]] = {}
    for idx, (u, v, w) in enumerate(edges):
        if u == v:
            raise ValueError("loops are not allowed")
        if w <= 0:
            continue
        cur = nbrs.get(u, {}).get(v)
        if cur is None or w > edges[cur[1]][2]:
            entry = [w, idx]
            nbrs.setdefault(u, {})[v] = entry
            nbrs.setdefault(v, {})[u] = entry
    folded = _prune_pendants(nbrs)
    h = nx.Graph()
    for u in sorted(nbrs):
        for v in sorted(nbrs[u]):
            if u < v:
                h.add_edge(u, v, weight=nbrs[u][v][0])
    mate: dict[int, int] = {}
    chosen = []
    for u, v in nx.max_weight_matching(h):
        mate[u], mate[v] = v, u
        chosen.append(nbrs[u][v][1])
    for t, leaf, idx in reversed(folded):
        if t not in mate:
            mate[t], mate[leaf] = leaf, t
            chosen.append(idx)
    chosen.sort()
    saturated = frozenset(x for idx in chosen for x in edges[idx][:2])
    return MatchingResult(tuple(chosen), sum(edges[i][2] for i in chosen), saturated)


def solve_root(inst: RootInstance) -> MatchingResult:
    return max_weight_matching([(e.u, e.v, e.weight) for e in inst.edges])


# -- decoding and gadget checks ------------------------------------------------------


def decode(g: WeightedGraph, inst: RootInstance, result: MatchingResult) -> tuple[int, int]:
    """Turn a matching of the root instance into a stable set of `g`.

    Raises
    ------
    CompositionError
        If the set is not stable or its weight differs from the matching
        weight plus the offset.
    """
    chosen = inst.fixed
    patterned: set[int] = set()
    for idx in result.edges:
        e = inst.edges[idx]
        chosen |= e.payload
        if e.pattern is not None:
            patterned.add(e.strip)  # type: ignore[arg-type]
    for i, sv in inst.strips.items():
        if i not in patterned:
            chosen |= sv.witness["0" * len(sv.boundary)]
    weight = result.weight + inst.offset
    if not g.is_stable(chosen):
        raise CompositionError("decoded set is not stable")
    if g.total_weight(chosen) != weight:
        raise CompositionError(f"decoded weight {g.total_weight(chosen)} != matching value {weight}")
    return weight, chosen


def gadget_violation(g: WeightedGraph, inst: RootInstance, dec: Decomposition, strip: int) -> str | None:
    """Check one strip gadget by enumerating every matching of its edges.

    Each matching must decode to a feasible pattern whose value minus the
    all-out value, plus the chosen partner weights, equals the matching
    weight; and for each feasible pattern the best matching realising it
    without partners must be worth exactly its value minus the all-out
    value.
    """
    sv = inst.strips[strip]
    ids = inst.gadgets[strip]
    base = sv.base
    best: dict[str, int] = {}
    for r in range(len(ids) + 1):
        for sub in combinations(ids, r):
            ends: list[int] = []
            for idx in sub:
                ends += [inst.edges[idx].u, inst.edges[idx].v]
            if len(ends) != len(set(ends)):
                continue
            pattern = "0" * len(sv.boundary)
            partners = 0
            total = 0
            for idx in sub:
                e = inst.edges[idx]
                total += e.weight
                if e.pattern is not None:
                    pattern = e.pattern
                else:
                    partners |= e.payload
            if pattern not in sv.values:
                return f"strip {strip}: matching decodes to infeasible pattern {pattern}"
            selected = sv.witness[pattern] | partners
            if not g.is_stable(selected):
                return f"strip {strip}: pattern {pattern} clashes with a chosen partner"
            if total != sv.values[pattern] - base + g.total_weight(partners):
                return f"strip {strip}: matching value {total} does not match pattern {pattern}"
            if not partners:
                best[pattern] = max(best.get(pattern, total), total)
    for pattern, value in sv.values.items():
        if best.get(pattern) != value - base:
            return f"strip {strip}: pattern {pattern} not realised exactly"
    return None
