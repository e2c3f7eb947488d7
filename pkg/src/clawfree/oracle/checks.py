"""Definition checkers evaluated by direct quantification.

Each predicate here is written straight from its definition, without the
shortcuts the solver uses, so the two can be compared.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from ..graph import (
    WeightedGraph,
    alpha_at_most,
    find_claw,
    find_net,
    iter_bits,
    lowest,
    popcount,
)

Matching = Mapping[int, int] | Iterable[tuple[int, int]]


def as_mate(m: Matching) -> dict[int, int]:
    """Normalise a matching given as pairs or as a mate map."""
    if isinstance(m, Mapping):
        return dict(m)
    mate: dict[int, int] = {}
    for u, v in m:
        if u in mate or v in mate:
            raise ValueError(f"edge {u}-{v} is not disjoint from the matching")
        mate[u] = v
        mate[v] = u
    return mate


def is_maximal_stable(g: WeightedGraph, s: int, nodes: int | None = None) -> bool:
    scope = g.alive if nodes is None else nodes & g.alive
    if s & ~scope or not g.is_stable(s):
        return False
    dominated = s
    for v in iter_bits(s):
        dominated |= g.adj[v]
    return scope & ~dominated == 0


def canonical_violation(g: WeightedGraph, s: int, nodes: int | None = None) -> tuple | None:
    """Return a witness that `s` is not canonical, or None.

    Witnesses are ``("augmenting", u, t, v)`` for an augmenting P3 through
    the stable node ``t`` and ``("dominating", x, t)`` for a free node ``x``
    whose neighbourhood contains every other neighbour of ``t = S(x)``.
    """
    scope = g.alive if nodes is None else nodes & g.alive
    if not is_maximal_stable(g, s, scope):
        raise ValueError("s is not a maximal stable set")
    free_of: dict[int, int] = {}
    for v in iter_bits(scope & ~s):
        nb = g.adj[v] & s
        if popcount(nb) == 1:
            free_of[v] = lowest(nb)
    for t in iter_bits(s):
        free = [v for v in iter_bits(g.adj[t] & scope) if free_of.get(v) == t]
        for i, u in enumerate(free):
            for v in free[i + 1 :]:
                if not g.has_edge(u, v):
                    return ("augmenting", u, t, v)
    for x, t in sorted(free_of.items()):
        if (g.adj[t] & scope) & ~(1 << x) & ~g.adj[x] == 0:
            return ("dominating", x, t)
    return None


def check_canonical(g: WeightedGraph, s: int, nodes: int | None = None) -> bool:
    """True iff the maximal stable set `s` has no augmenting P3 and no dominating free node."""
    return canonical_violation(g, s, nodes) is None


def is_weakly_normal_direct(g: WeightedGraph, q: int) -> bool:
    """Every two non-adjacent nodes of N(Q) have no common neighbour in Q."""
    nq = g.neighborhood(q)
    for x in iter_bits(nq):
        for y in iter_bits(nq & ~g.adj[x] & ~((2 << x) - 1)):
            if g.adj[x] & g.adj[y] & q:
                return False
    return True


def is_normal_direct(g: WeightedGraph, q: int) -> bool:
    """N(Q) holds three pairwise non-adjacent, pairwise Q-distant nodes."""
    nq = g.neighborhood(q)
    adj = g.adj

    def far(x: int) -> int:
        # nodes of N(Q) non-adjacent to x and Q-distant from it
        out = 0
        for y in iter_bits(nq & ~adj[x] & ~(1 << x)):
            if not (adj[x] & adj[y] & q):
                out |= 1 << y
        return out

    cache = {x: far(x) for x in iter_bits(nq)}
    for x in iter_bits(nq):
        for y in iter_bits(cache[x] & ~((2 << x) - 1)):
            if cache[x] & cache[y] & ~((2 << y) - 1):
                return True
    return False


def liftable_violation(g: WeightedGraph, q: int, parts: Sequence[int]) -> str | None:
    """Explain why `(q, parts)` is not liftable, or return None.

    Conditions, by exhaustive scan: (i) Q weakly normal; (ii) no two nodes
    from different parts form the base of a Q-paw; (iii) no three nodes from
    three different parts share a neighbour outside Q.
    """
    union = 0
    for k in parts:
        if not k or k & union:
            return "partition has empty or overlapping parts"
        union |= k
    if union != q:
        return "partition does not cover the clique"
    if not is_weakly_normal_direct(g, q):
        return "clique is not weakly normal"
    part_of = {v: i for i, k in enumerate(parts) for v in iter_bits(k)}
    nq = g.neighborhood(q)
    adj = g.adj
    members = sorted(part_of)
    for a, x in enumerate(members):
        for y in members[a + 1 :]:
            if part_of[x] == part_of[y]:
                continue
            for z in iter_bits(nq & adj[x] & adj[y]):
                paw_tail = adj[z] & ~adj[x] & ~adj[y] & ~(1 << x) & ~(1 << y)
                if paw_tail:
                    return f"Q-paw with base {x},{y} via {z}"
    for z in iter_bits(nq):
        touched = {part_of[v] for v in iter_bits(adj[z] & q)}
        if len(touched) >= 3:
            return f"node {z} sees three parts"
    return None


def check_liftable(g: WeightedGraph, q: int, parts: Sequence[int]) -> bool:
    """True iff the clique `q` is liftable with respect to `parts`."""
    return liftable_violation(g, q, parts) is None


def is_strongly_bisimplicial(g: WeightedGraph, q: int) -> bool:
    """Maximal clique whose neighbourhood splits into two mutually null cliques."""
    if not g.is_maximal_clique(q):
        return False
    nq = g.neighborhood(q)
    if not nq:
        return True
    # the split is forced: components of G[N(Q)] must be at most two cliques
    comps = g.components(nq)
    return len(comps) <= 2 and all(g.is_clique(c) for c in comps)


def is_m_clique(g: WeightedGraph, q: int, mate: Mapping[int, int]) -> bool:
    """Clique with a non-empty boundary made of matching edges only."""
    if not q or not g.is_clique(q):
        return False
    boundary = False
    for x in iter_bits(q):
        out = g.adj[x] & ~q
        if not out:
            continue
        boundary = True
        partner = mate.get(x)
        if partner is None or out != 1 << partner:
            return False
    return boundary


def basic_violation(g: WeightedGraph, m: Matching) -> str | None:
    """Explain why `g` is not basic with respect to `m`, or return None."""
    mate = as_mate(m)
    for u, v in mate.items():
        if not g.has_edge(u, v):
            raise ValueError(f"matching pair {u}-{v} is not an edge")
    matched = 0
    for u in mate:
        matched |= 1 << u
    h = g.copy()
    for u, v in mate.items():
        if u < v:
            h.remove_edge(u, v)
    for comp in h.components():
        if is_m_clique(g, comp, mate):
            continue
        k = popcount(comp & matched)
        if k > 2:
            return f"component at {lowest(comp)} has {k} matched nodes"
        if find_claw(g, comp) is None and find_net(g, comp) is None:
            continue
        if not alpha_at_most(g, comp & ~matched, 3):
            return f"component at {lowest(comp)} has a claw or net and alpha > 3"
    return None


def check_basic(g: WeightedGraph, m: Matching) -> bool:
    """True iff every non-M-clique component of g - m is a strip.

    A strip meets at most two matched nodes and is {claw, net}-free or has
    independence number at most 3 once its matched nodes are removed.
    """
    return basic_violation(g, m) is None
