"""The canonical stable set and the structure derived from it.

A stable set ``S`` partitions the other nodes by how many stable neighbours
they have: free nodes see one, bound nodes two, superfree nodes none.  On
top of that classification this module builds the wings linking pairs of
stable nodes, the free components, and the cover of each closed stable
neighbourhood by two maximal cliques.

All node sets are bitsets over the graph's indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import WeightedGraph, iter_bits, lowest, popcount, regular_cover

Pair = tuple[int, int]


def _pair(s: int, t: int) -> Pair:
    return (s, t) if s < t else (t, s)


# -- stable sets -----------------------------------------------------------


def greedy_order(g: WeightedGraph, nodes: int | None = None) -> list[int]:
    scope = g.alive if nodes is None else nodes & g.alive
    return sorted(iter_bits(scope), key=lambda v: (-g.weight[v], v))


def maximalize(g: WeightedGraph, s: int, order: list[int] | None = None) -> int:
    """Greedily extend the stable set `s` to a maximal one.

    Candidates are scanned by decreasing weight, lowest index first on ties.
    """
    blocked = s
    for v in iter_bits(s):
        blocked |= g.adj[v]
    for v in order if order is not None else greedy_order(g):
        if not (blocked >> v) & 1:
            s |= 1 << v
            blocked |= g.adj[v] | (1 << v)
    return s


def greedy_maximal_stable_set(g: WeightedGraph) -> int:
    """Maximal stable set built by descending weight, ties to the lowest index.

    Examples
    --------
    >>> g = WeightedGraph([1, 5, 2], [(0, 1), (0, 2), (1, 2)])
    >>> greedy_maximal_stable_set(g)
    2
    """
    return maximalize(g, 0)


def _free_mask(g: WeightedGraph, s: int) -> int:
    free = 0
    for u in iter_bits(g.alive & ~s):
        nb = g.adj[u] & s
        if nb and nb & (nb - 1) == 0:
            free |= 1 << u
    return free


def find_augmenting_p3(g: WeightedGraph, s: int) -> tuple[int, int, int] | None:
    """First ``(u, t, v)`` with ``u, v`` non-adjacent free neighbours of ``t``."""
    free = _free_mask(g, s)
    for t in iter_bits(s):
        ft = g.adj[t] & free
        for u in iter_bits(ft):
            other = ft & ~g.adj[u] & ~((2 << u) - 1)
            if other:
                return u, t, lowest(other)
    return None


def find_dominating_free(g: WeightedGraph, s: int) -> tuple[int, int] | None:
    """First free ``x`` with ``N(S(x)) - {x}`` inside ``N(x)``, as ``(x, S(x))``.

    Twins of their stable neighbour are skipped: swapping them would not
    change the structure and could cycle.
    """
    for x in iter_bits(_free_mask(g, s)):
        t = lowest(g.adj[x] & s)
        rest = g.adj[t] & ~(1 << x)
        if rest & ~g.adj[x] == 0 and g.adj[x] & ~(1 << t) != rest:
            return x, t
    return None


def canonicalize(g: WeightedGraph, s0: int, *, max_rounds: int | None = None) -> int:
    """Turn a maximal stable set into a canonical one by local exchanges.

    Repeats until neither move applies: replace the centre of an augmenting
    P3 by its two ends and re-maximalize, or swap a dominating free node in
    for its stable neighbour.  Both moves raise the potential
    ``(|S|, sum of stable degrees)`` on twin-free graphs, which bounds the
    number of rounds.

    Examples
    --------
    >>> p3 = WeightedGraph([1, 1, 1], [(0, 1), (1, 2)])
    >>> canonicalize(p3, 0b010)
    5
    """
    order = greedy_order(g)
    s = s0
    limit = max_rounds if max_rounds is not None else 4 * (len(g) + 1) * (g.edge_count() + 1)
    for _ in range(limit):
        p3 = find_augmenting_p3(g, s)
        if p3 is not None:
            u, t, v = p3
            s = maximalize(g, (s & ~(1 << t)) | (1 << u) | (1 << v), order)
            continue
        dom = find_dominating_free(g, s)
        if dom is not None:
            x, t = dom
            s = (s & ~(1 << t)) | (1 << x)
            continue
        return s
    raise RuntimeError("canonicalization did not converge")


# -- classification ----------------------------------------------------------


@dataclass
class NodeClass:
    """Classification of the nodes with respect to a stable set.

    Attributes
    ----------
    stable, free, bound, superfree : int
        Bitsets of the four classes.
    owner : dict
        Free node to its unique stable neighbour ``S(u)``.
    pair : dict
        Bound node to its two stable neighbours, smaller index first.
    """

    stable: int
    free: int = 0
    bound: int = 0
    superfree: int = 0
    owner: dict[int, int] = field(default_factory=dict)
    pair: dict[int, Pair] = field(default_factory=dict)
    free_of: dict[int, int] = field(default_factory=dict)

    def F(self, s: int) -> int:
        """Free nodes whose stable neighbour is `s`."""
        return self.free_of.get(s, 0)


def classify(g: WeightedGraph, s: int) -> NodeClass:
    """Classify every node by its number of stable neighbours.

    Raises
    ------
    ValueError
        If some node has three or more stable neighbours, which exhibits a
        claw.
    """
    cls = NodeClass(stable=s)
    for u in iter_bits(g.alive & ~s):
        nb = g.adj[u] & s
        k = popcount(nb)
        if k == 0:
            cls.superfree |= 1 << u
        elif k == 1:
            t = lowest(nb)
            cls.free |= 1 << u
            cls.owner[u] = t
            cls.free_of[t] = cls.free_of.get(t, 0) | (1 << u)
        elif k == 2:
            a = lowest(nb)
            cls.bound |= 1 << u
            cls.pair[u] = (a, lowest(nb & ~(1 << a)))
        else:
            raise ValueError(f"node {u} has {k} stable neighbours: the graph has a claw")
    return cls


# -- wings -------------------------------------------------------------------


@dataclass
class WingMap:
    """Wings between pairs of stable nodes.

    ``bound[(s, t)]`` holds the bound nodes seeing both ``s < t``;
    ``free[(s, t)]`` holds the free nodes of ``s`` adjacent to a free node of
    ``t`` (ordered pair).  ``rep`` gives one wing per non-stable node, or
    None for inner free nodes; ``number[s]`` counts the wings at ``s``.
    """

    bound: dict[Pair, int] = field(default_factory=dict)
    free: dict[Pair, int] = field(default_factory=dict)
    outer: int = 0
    inner: int = 0
    rep: dict[int, Pair | None] = field(default_factory=dict)
    number: dict[int, int] = field(default_factory=dict)

    def wing(self, s: int, t: int) -> int:
        """All nodes of the wing between `s` and `t`."""
        return self.bound.get(_pair(s, t), 0) | self.free.get((s, t), 0) | self.free.get((t, s), 0)

    def pairs(self) -> list[Pair]:
        keys = set(self.bound)
        keys.update(_pair(s, t) for s, t in self.free)
        return sorted(keys)


def free_partners(g: WeightedGraph, cls: NodeClass, u: int) -> set[int]:
    """Stable nodes ``t != S(u)`` owning a free neighbour of the free node `u`."""
    s = cls.owner[u]
    return {cls.owner[x] for x in iter_bits(g.adj[u] & cls.free & ~cls.F(s))}


def node_wings(g: WeightedGraph, cls: NodeClass, u: int) -> set[int]:
    """Partners ``t`` such that `u` lies in the wing of its stable neighbour(s) and ``t``.

    For a bound node this is its other stable neighbour seen from either
    side, returned as both members of the pair.  For a free node it is
    :func:`free_partners`; empty means inner.
    """
    if u in cls.pair:
        return set(cls.pair[u])
    if u in cls.owner:
        return free_partners(g, cls, u)
    return set()


def wings(g: WeightedGraph, s: int, cls: NodeClass | None = None) -> WingMap:
    """Compute every wing, the outer/inner split, and wing numbers."""
    cls = cls if cls is not None else classify(g, s)
    wm = WingMap()
    for u, p in cls.pair.items():
        wm.bound[p] = wm.bound.get(p, 0) | (1 << u)
        wm.rep[u] = p
    for u, t in cls.owner.items():
        partners = free_partners(g, cls, u)
        for r in partners:
            wm.free[(t, r)] = wm.free.get((t, r), 0) | (1 << u)
        if partners:
            wm.outer |= 1 << u
            wm.rep[u] = _pair(t, min(partners))
        else:
            wm.inner |= 1 << u
            wm.rep[u] = None
    counts: dict[int, int] = {v: 0 for v in iter_bits(s)}
    for a, b in wm.pairs():
        counts[a] += 1
        counts[b] += 1
    wm.number = counts
    return wm


# -- free components ---------------------------------------------------------


@dataclass
class FreeStructure:
    """Similarity classes, the free dissimilarity graph and free components.

    Attributes
    ----------
    classes : dict
        Stable-neighbour bitset to the class of non-stable nodes sharing it.
    gf_adj : dict
        Free node to its neighbours in the dissimilarity graph: adjacent free
        nodes with a different stable neighbour.
    components : list of int
        Connected components of the dissimilarity graph, isolated free nodes
        included.
    component_of : dict
        Free node to its index in `components`.
    family : list of int
        Components that induce a maximal clique of the graph.
    """

    classes: dict[int, int] = field(default_factory=dict)
    gf_adj: dict[int, int] = field(default_factory=dict)
    components: list[int] = field(default_factory=list)
    component_of: dict[int, int] = field(default_factory=dict)
    family: list[int] = field(default_factory=list)


def classes_met(cls: NodeClass, comp: int) -> int:
    """Number of similarity classes a set of free nodes meets."""
    return len({cls.owner[u] for u in iter_bits(comp)})


def free_components(g: WeightedGraph, s: int, cls: NodeClass | None = None) -> FreeStructure:
    """Build the free dissimilarity graph and collect free components.

    Raises
    ------
    ValueError
        If a component meeting three or more classes is not a maximal
        clique, which cannot happen for a canonical set in a claw-free graph.
    """
    cls = cls if cls is not None else classify(g, s)
    fs = FreeStructure()
    for u in iter_bits(g.alive & ~s):
        key = g.adj[u] & s
        fs.classes[key] = fs.classes.get(key, 0) | (1 << u)
    for u, t in cls.owner.items():
        fs.gf_adj[u] = g.adj[u] & cls.free & ~cls.F(t)
    seen = 0
    for u in iter_bits(cls.free):
        if (seen >> u) & 1:
            continue
        comp = frontier = 1 << u
        while frontier:
            reach = 0
            for v in iter_bits(frontier):
                reach |= fs.gf_adj[v]
            frontier = reach & ~comp
            comp |= frontier
        seen |= comp
        idx = len(fs.components)
        fs.components.append(comp)
        for v in iter_bits(comp):
            fs.component_of[v] = idx
        if popcount(comp) >= 2 and g.is_maximal_clique(comp):
            fs.family.append(comp)
        elif classes_met(cls, comp) >= 3:
            raise ValueError(f"dissimilarity component at {u} meets three classes but is not a maximal clique")
    return fs


# -- S-cover -------------------------------------------------------------------


def extend_to_maximal(g: WeightedGraph, clique: int) -> int:
    """Greedily add the lowest-index node adjacent to all of `clique`."""
    common = g.alive
    for v in iter_bits(clique):
        common &= g.adj[v]
    while common:
        v = lowest(common)
        clique |= 1 << v
        common &= g.adj[v]
    return clique


@dataclass
class SCover:
    """Two maximal cliques covering N[s] for every regular stable node ``s``."""

    cliques: dict[int, Pair] = field(default_factory=dict)

    def members(self) -> list[tuple[int, int]]:
        """Distinct ``(stable node, clique)`` entries in stable-node order."""
        out = []
        seen = set()
        for s in sorted(self.cliques):
            for c in self.cliques[s]:
                if c not in seen:
                    seen.add(c)
                    out.append((s, c))
        return out

    def all_cliques(self) -> list[int]:
        return [c for _, c in self.members()]


def s_cover(g: WeightedGraph, s: int) -> SCover:
    """Cover each regular stable node's closed neighbourhood by two maximal cliques.

    Irregular stable nodes are left out.
    """
    cover = SCover()
    for t in iter_bits(s):
        split = regular_cover(g, t)
        if split is None:
            continue
        k1, k2 = split
        c1 = extend_to_maximal(g, k1 | (1 << t))
        c2 = extend_to_maximal(g, k2 | (1 << t))
        cover.cliques[t] = (c1, c2)
    return cover


def partial_wings(g: WeightedGraph, cls: NodeClass, clique: int, s: int) -> dict[int, int]:
    """Split a cover clique of `s` by wing partner.

    Key ``t != s`` maps to the nodes of the clique in the wing ``W(s, t)``;
    key ``s`` maps to ``s`` plus the inner free nodes.  A node lying in two
    wings appears under both keys.
    """
    out: dict[int, int] = {s: 1 << s}
    for x in iter_bits(clique & ~(1 << s)):
        partners = node_wings(g, cls, x) - {s}
        if not partners:
            out[s] |= 1 << x
        for t in partners:
            out[t] = out.get(t, 0) | (1 << x)
    return out


@dataclass
class StableContext:
    """A canonical stable set with everything derived from it."""

    stable: int
    cls: NodeClass
    wing_map: WingMap
    free: FreeStructure
    cover: SCover


def build_context(g: WeightedGraph, s: int) -> StableContext:
    cls = classify(g, s)
    return StableContext(s, cls, wings(g, s, cls), free_components(g, s, cls), s_cover(g, s))
