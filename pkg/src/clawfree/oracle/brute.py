"""Brute-force engines used as ground truth.

These are written for clarity and independence from the solver, not for
speed.  The stable set search is a plain branch-and-bound over a bitset
candidate pool; the matching search is exhaustive.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from ..graph import WeightedGraph, bits, iter_bits, lowest, popcount, to_mask

MWSS_LIMIT = 30
MATCHING_LIMIT = 16
EXHAUSTIVE_LIMIT = 20


def _as_mask(nodes: int | Iterable[int]) -> int:
    return nodes if isinstance(nodes, int) else to_mask(nodes)


def _clique_cover_bound(adj: list[int], value: dict[int, int], cand: int) -> int:
    """Sum over a greedy clique cover of the heaviest node per clique."""
    total = 0
    while cand:
        v = lowest(cand)
        clique = 1 << v
        best = value[v]
        rest = adj[v] & cand
        while rest:
            u = lowest(rest)
            clique |= 1 << u
            if value[u] > best:
                best = value[u]
            rest &= adj[u]
        cand &= ~clique
        total += best
    return total


def brute_mwss(
    g: WeightedGraph,
    forced_in: int | Iterable[int] = 0,
    forced_out: int | Iterable[int] = 0,
    *,
    nodes: int | None = None,
    limit: int = MWSS_LIMIT,
) -> tuple[int, int]:
    """Maximum weight stable set by branch-and-bound.

    Parameters
    ----------
    g : WeightedGraph
    forced_in, forced_out : bitset or iterable of node indices
        Nodes that must be in, respectively out of, the solution.
    nodes : int, optional
        Bitset restricting the instance to an induced subgraph.
    limit : int
        Refuse instances with more free nodes than this.

    Returns
    -------
    weight : int
    stable : int
        Bitset of the chosen nodes.  Among optimal sets the one whose sorted
        index list is lexicographically smallest wins.

    Notes
    -----
    Forcing is graph surgery: ``forced_out`` and ``N[forced_in]`` are deleted
    and ``w(forced_in)`` is added as a constant.  Ties are broken by giving
    node of rank ``r`` among ``k`` free nodes a bonus ``2**(k-1-r)`` on top of
    its weight scaled by ``2**k``, so the optimum is unique.
    """
    scope = g.alive if nodes is None else nodes & g.alive
    fin = _as_mask(forced_in)
    fout = _as_mask(forced_out)
    if fin & fout:
        raise ValueError("forced_in and forced_out overlap")
    if fin & ~scope:
        raise ValueError("forced_in lies outside the instance")
    if not g.is_stable(fin):
        raise ValueError("forced_in is not stable")
    cand = scope & ~fout & ~fin
    for v in iter_bits(fin):
        cand &= ~g.adj[v]
    k = popcount(cand)
    if k > limit:
        raise ValueError(f"oracle size guard: {k} free nodes > {limit}")

    order = bits(cand)
    value = {v: (g.weight[v] << k) + (1 << (k - 1 - r)) for r, v in enumerate(order)}
    adj = g.adj
    best_val = -1
    best_set = 0

    def search(pool: int, acc: int, chosen: int) -> None:
        nonlocal best_val, best_set
        if not pool:
            if acc > best_val:
                best_val, best_set = acc, chosen
            return
        if acc + _clique_cover_bound(adj, value, pool) <= best_val:
            return
        v = lowest(pool)
        search(pool & ~adj[v] & ~(1 << v), acc + value[v], chosen | (1 << v))
        search(pool & ~(1 << v), acc, chosen)

    search(cand, 0, 0)
    result = best_set | fin
    return g.total_weight(result), result


def exhaustive_mwss(g: WeightedGraph, nodes: int | None = None) -> tuple[int, int]:
    """Maximum weight stable set by plain subset enumeration.

    Deliberately shares no code with :func:`brute_mwss`.  Ties go to the
    lexicographically smallest sorted index list.
    """
    scope = g.alive if nodes is None else nodes & g.alive
    order = bits(scope)
    if len(order) > EXHAUSTIVE_LIMIT:
        raise ValueError("exhaustive enumeration limited to 20 nodes")
    best: tuple[int, list[int]] = (0, [])
    for subset in range(1 << len(order)):
        chosen = [order[i] for i in range(len(order)) if (subset >> i) & 1]
        if any(g.has_edge(a, b) for i, a in enumerate(chosen) for b in chosen[i + 1 :]):
            continue
        w = sum(g.weight[v] for v in chosen)
        if w > best[0] or (w == best[0] and chosen < best[1]):
            best = (w, chosen)
    return best[0], to_mask(best[1])


def brute_matching(edges: Sequence[tuple[int, int, int]], limit: int = MATCHING_LIMIT) -> tuple[int, list[int]]:
    """Maximum weight matching by exhaustive search.

    Parameters
    ----------
    edges : sequence of (u, v, weight)

    Returns
    -------
    weight : int
    chosen : list of int
        Indices into `edges` of one optimal matching.
    """
    if len(edges) > limit:
        raise ValueError(f"matching oracle limited to {limit} edges")
    best_w = 0
    best: list[int] = []

    def search(i: int, used: frozenset, acc: int, chosen: list[int]) -> None:
        nonlocal best_w, best
        if i == len(edges):
            if acc > best_w:
                best_w, best = acc, list(chosen)
            return
        u, v, w = edges[i]
        if u != v and u not in used and v not in used:
            chosen.append(i)
            search(i + 1, used | {u, v}, acc + w, chosen)
            chosen.pop()
        search(i + 1, used, acc, chosen)

    search(0, frozenset(), 0, [])
    return best_w, best
