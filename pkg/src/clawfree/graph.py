"""Weighted simple graphs on adjacency bitsets, plus the basic detectors.

Nodes are dense integer indices.  Each node's neighbourhood is a Python
``int`` used as a bitset, so intersections and subset tests cost one
big-integer operation.  Removed nodes are tombstoned: their index is never
reused, which keeps every index-keyed ledger valid for the whole pipeline.

Every node also carries a ``tag``, the external identifier that survives
copies and subgraph extraction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence, Union

Tag = Union[int, str]

WEIGHT_BUDGET = 1 << 62


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of `mask` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits(mask: int) -> list[int]:
    """Return the set bit indices of `mask` as a sorted list."""
    return list(iter_bits(mask))


def to_mask(nodes: Iterable[int]) -> int:
    """Build a bitset from node indices."""
    mask = 0
    for v in nodes:
        mask |= 1 << v
    return mask


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def lowest(mask: int) -> int:
    """Index of the lowest set bit; `mask` must be non-zero."""
    return (mask & -mask).bit_length() - 1


class WeightedGraph:
    """Undirected simple graph with non-negative integer node weights.

    Parameters
    ----------
    weights : sequence of int, optional
        Initial node weights; node ``i`` gets tag ``tags[i]`` or ``i``.
    edges : iterable of (int, int), optional
        Edges between initial node indices.
    tags : sequence of Tag, optional
        External identifiers, unique.

    Notes
    -----
    ``adj[v]`` is the open neighbourhood bitset of ``v``.  ``alive`` is the
    bitset of live nodes; dead indices keep their tag and weight so that
    ledgers can still describe them.
    """

    __slots__ = ("adj", "weight", "tag", "alive", "_index")

    def __init__(
        self,
        weights: Sequence[int] = (),
        edges: Iterable[tuple[int, int]] = (),
        tags: Sequence[Tag] | None = None,
    ) -> None:
        self.adj: list[int] = []
        self.weight: list[int] = []
        self.tag: list[Tag] = []
        self.alive = 0
        self._index: dict[Tag, int] = {}
        for i, w in enumerate(weights):
            self.add_node(w, i if tags is None else tags[i])
        for u, v in edges:
            self.add_edge(u, v)

    # -- construction -----------------------------------------------------

    def add_node(self, weight: int = 1, tag: Tag | None = None) -> int:
        """Append a node and return its index."""
        if weight < 0:
            raise ValueError(f"negative weight {weight}")
        v = len(self.adj)
        if tag is None:
            tag = v
        if tag in self._index:
            raise ValueError(f"duplicate node tag {tag!r}")
        self.adj.append(0)
        self.weight.append(int(weight))
        self.tag.append(tag)
        self.alive |= 1 << v
        self._index[tag] = v
        return v

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError(f"loop at node {u}")
        if not (self.alive >> u) & 1 or not (self.alive >> v) & 1:
            raise ValueError(f"edge {u}-{v} touches a removed node")
        self.adj[u] |= 1 << v
        self.adj[v] |= 1 << u

    def remove_edge(self, u: int, v: int) -> None:
        self.adj[u] &= ~(1 << v)
        self.adj[v] &= ~(1 << u)

    def remove_node(self, v: int) -> None:
        """Tombstone `v`: drop its edges and mark it dead."""
        for u in iter_bits(self.adj[v]):
            self.adj[u] &= ~(1 << v)
        self.adj[v] = 0
        self.alive &= ~(1 << v)

    def remove_nodes(self, mask: int) -> None:
        for v in iter_bits(mask & self.alive):
            self.remove_node(v)

    def copy(self) -> WeightedGraph:
        g = WeightedGraph.__new__(WeightedGraph)
        g.adj = list(self.adj)
        g.weight = list(self.weight)
        g.tag = list(self.tag)
        g.alive = self.alive
        g._index = dict(self._index)
        return g

    def subgraph(self, mask: int) -> tuple[WeightedGraph, list[int]]:
        """Compact induced subgraph on the live nodes of `mask`.

        Returns the new graph and the list mapping new indices to old ones.
        Index order, and therefore tag order, is preserved.
        """
        old = bits(mask & self.alive)
        pos = {v: i for i, v in enumerate(old)}
        g = WeightedGraph([self.weight[v] for v in old], tags=[self.tag[v] for v in old])
        for i, v in enumerate(old):
            row = 0
            for u in iter_bits(self.adj[v] & mask):
                row |= 1 << pos[u]
            g.adj[i] = row
        return g, old

    # -- queries ----------------------------------------------------------

    def __len__(self) -> int:
        return popcount(self.alive)

    @property
    def capacity(self) -> int:
        """Number of indices ever allocated, dead ones included."""
        return len(self.adj)

    def nodes(self) -> list[int]:
        return bits(self.alive)

    def is_alive(self, v: int) -> bool:
        return bool((self.alive >> v) & 1)

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def degree(self, v: int) -> int:
        return popcount(self.adj[v])

    def closed(self, v: int) -> int:
        """Closed neighbourhood bitset N[v]."""
        return self.adj[v] | (1 << v)

    def neighborhood(self, mask: int) -> int:
        """Open neighbourhood N(X) of a node set: neighbours outside X."""
        out = 0
        for v in iter_bits(mask):
            out |= self.adj[v]
        return out & ~mask

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for u in iter_bits(self.alive):
            for v in iter_bits(self.adj[u] >> (u + 1) << (u + 1)):
                out.append((u, v))
        return out

    def edge_count(self) -> int:
        return sum(popcount(self.adj[v]) for v in iter_bits(self.alive)) // 2

    def index_of(self, tag: Tag) -> int:
        return self._index[tag]

    def tags_of(self, mask: int) -> list[Tag]:
        return [self.tag[v] for v in iter_bits(mask)]

    def mask_of_tags(self, tags: Iterable[Tag]) -> int:
        return to_mask(self._index[t] for t in tags)

    def total_weight(self, mask: int) -> int:
        return sum(self.weight[v] for v in iter_bits(mask))

    def max_weight(self) -> int:
        return max((self.weight[v] for v in iter_bits(self.alive)), default=0)

    def is_stable(self, mask: int) -> bool:
        return all(not (self.adj[v] & mask) for v in iter_bits(mask))

    def is_clique(self, mask: int) -> bool:
        return all((mask & ~(self.adj[v] | (1 << v))) == 0 for v in iter_bits(mask))

    def is_maximal_clique(self, mask: int, within: int | None = None) -> bool:
        """True iff `mask` is a clique and no live node extends it."""
        if not mask or not self.is_clique(mask):
            return False
        common = self.alive if within is None else within & self.alive
        for v in iter_bits(mask):
            common &= self.adj[v]
        return common == 0

    def components(self, mask: int | None = None) -> list[int]:
        """Connected components of the subgraph induced by `mask`.

        Components are returned as bitsets ordered by their lowest index.
        """
        rest = self.alive if mask is None else mask & self.alive
        out = []
        while rest:
            comp = frontier = rest & -rest
            while frontier:
                reach = 0
                for v in iter_bits(frontier):
                    reach |= self.adj[v]
                frontier = reach & rest & ~comp
                comp |= frontier
            rest &= ~comp
            out.append(comp)
        return out

    def check_weight_budget(self) -> None:
        """Reject inputs whose lifted weights could exceed 62 bits."""
        n = len(self)
        if n * (self.max_weight() + 4 * n) >= WEIGHT_BUDGET:
            raise ValueError("weights too large: n*(w_max+4n) must stay below 2**62")

    def __repr__(self) -> str:
        return f"WeightedGraph(n={len(self)}, m={self.edge_count()})"


# -- detectors ---------------------------------------------------------------


def _stable_triple(g: WeightedGraph, pool: int) -> tuple[int, int, int] | None:
    """Lexicographically first pairwise non-adjacent triple inside `pool`."""
    for x in iter_bits(pool):
        rest_x = pool & ~g.adj[x] & ~((2 << x) - 1)
        for y in iter_bits(rest_x):
            rest_y = rest_x & ~g.adj[y] & ~((2 << y) - 1)
            if rest_y:
                return x, y, lowest(rest_y)
    return None


def find_claw(g: WeightedGraph, mask: int | None = None, centers: int | None = None) -> tuple[int, int, int, int] | None:
    """Find an induced claw.

    Parameters
    ----------
    g : WeightedGraph
    mask : int, optional
        Restrict the search to the subgraph induced by these nodes.
    centers : int, optional
        Only try these nodes as the claw centre.

    Returns
    -------
    tuple or None
        ``(center, x, y, z)`` with ``x < y < z`` pairwise non-adjacent
        neighbours of ``center``; the first such claw in index order.
    """
    scope = g.alive if mask is None else mask & g.alive
    cands = scope if centers is None else centers & scope
    for w in iter_bits(cands):
        triple = _stable_triple(g, g.adj[w] & scope)
        if triple is not None:
            return (w, *triple)
    return None


def regular_cover(g: WeightedGraph, v: int, mask: int | None = None) -> tuple[int, int] | None:
    """Split N(v) into two cliques, or return None if `v` is irregular.

    The split is a 2-colouring of the complement of G[N(v)], found by
    breadth-first search from the lowest uncoloured index with colour 0.
    Either side may be empty.
    """
    nbrs = g.adj[v] if mask is None else g.adj[v] & mask
    side = [0, 0]
    colour: dict[int, int] = {}
    for start in iter_bits(nbrs):
        if start in colour:
            continue
        colour[start] = 0
        side[0] |= 1 << start
        queue = [start]
        while queue:
            u = queue.pop()
            c = colour[u]
            for x in iter_bits(nbrs & ~g.adj[u] & ~(1 << u)):
                if x not in colour:
                    colour[x] = 1 - c
                    side[1 - c] |= 1 << x
                    queue.append(x)
                elif colour[x] == c:
                    return None
    return side[0], side[1]


def is_regular(g: WeightedGraph, v: int, mask: int | None = None) -> bool:
    return regular_cover(g, v, mask) is not None


def irregular_nodes(g: WeightedGraph, mask: int | None = None) -> int:
    scope = g.alive if mask is None else mask & g.alive
    return to_mask(v for v in iter_bits(scope) if regular_cover(g, v, scope) is None)


def find_net(g: WeightedGraph, mask: int | None = None) -> tuple[int, int, int, int, int, int] | None:
    """Find an induced net ``(x, y, z, x', y', z')``.

    ``x, y, z`` form a triangle and each primed node is adjacent to its
    unprimed partner only, the primed nodes being pairwise non-adjacent.
    """
    scope = g.alive if mask is None else mask & g.alive
    adj = g.adj
    for x in iter_bits(scope):
        for y in iter_bits(adj[x] & scope & ~((2 << x) - 1)):
            for z in iter_bits(adj[x] & adj[y] & scope & ~((2 << y) - 1)):
                px = scope & adj[x] & ~adj[y] & ~adj[z]
                py = scope & adj[y] & ~adj[x] & ~adj[z]
                pz = scope & adj[z] & ~adj[x] & ~adj[y]
                if not (px and py and pz):
                    continue
                for a in iter_bits(px):
                    for b in iter_bits(py & ~adj[a]):
                        c = pz & ~adj[a] & ~adj[b]
                        if c:
                            return x, y, z, a, b, lowest(c)
    return None


def find_5wheel(g: WeightedGraph, mask: int | None = None, hubs: int | None = None) -> tuple[int, ...] | None:
    """Find a 5-wheel ``(hub, r1, ..., r5)`` whose rim is an induced C5."""
    scope = g.alive if mask is None else mask & g.alive
    adj = g.adj
    cands = scope if hubs is None else hubs & scope
    for h in iter_bits(cands):
        nb = adj[h] & scope
        for a in iter_bits(nb):
            above = nb & ~((2 << a) - 1)  # a is the smallest rim index
            for b in iter_bits(adj[a] & above):
                for c in iter_bits(adj[b] & above & ~adj[a] & ~(1 << a)):
                    for d in iter_bits(adj[c] & above & ~adj[a] & ~adj[b]):
                        e = adj[d] & adj[a] & above & ~adj[b] & ~adj[c]
                        if e:
                            return h, a, b, c, d, lowest(e)
    return None


def alpha_at_most(g: WeightedGraph, nodes: int, k: int) -> bool:
    """True iff the subgraph induced by `nodes` has no stable set of size k+1."""
    if k > 4:
        raise ValueError("alpha_at_most supports k <= 4")
    adj = g.adj

    def has_stable(cand: int, need: int) -> bool:
        if need == 0:
            return True
        if popcount(cand) < need:
            return False
        for v in iter_bits(cand):
            if has_stable(cand & ~adj[v] & ~((2 << v) - 1), need - 1):
                return True
        return False

    return not has_stable(nodes & g.alive, k + 1)


def maximal_cliques(g: WeightedGraph, mask: int | None = None) -> list[int]:
    """All maximal cliques of the induced subgraph (Bron-Kerbosch with pivot).

    Intended for certification at small sizes.
    """
    scope = g.alive if mask is None else mask & g.alive
    adj = g.adj
    out: list[int] = []

    def expand(r: int, p: int, x: int) -> None:
        if not p and not x:
            out.append(r)
            return
        pivot_pool = p | x
        pivot = max(iter_bits(pivot_pool), key=lambda u: popcount(p & adj[u]))
        for v in iter_bits(p & ~adj[pivot]):
            expand(r | (1 << v), p & adj[v], x & adj[v])
            p &= ~(1 << v)
            x |= 1 << v

    if scope:
        expand(0, scope, 0)
    return sorted(out, key=lambda c: bits(c))


# -- twins -------------------------------------------------------------------


@dataclass(frozen=True)
class TwinRecord:
    kept: Tag
    removed: Tag
    adjacent: bool
    removed_weight: int


@dataclass
class TwinLedger:
    """Ordered twin eliminations; replayed backwards by :func:`reinsert_twins`."""

    records: list[TwinRecord] = field(default_factory=list)
    reduced: WeightedGraph | None = None


def remove_twins(g: WeightedGraph) -> tuple[WeightedGraph, TwinLedger]:
    """Eliminate twins until none remain.

    Adjacent twins (equal closed neighbourhoods) keep the heavier node, ties
    going to the lower index.  Non-adjacent twins (equal open neighbourhoods)
    merge into the lower index, which absorbs the other's weight.  Both
    moves preserve the maximum stable set weight.
    """
    h = g.copy()
    ledger = TwinLedger()
    changed = True
    while changed:
        changed = False
        closed: dict[int, int] = {}
        opened: dict[int, int] = {}
        for v in h.nodes():
            if not h.is_alive(v):
                continue
            key = h.adj[v] | (1 << v)
            u = closed.get(key)
            if u is not None and h.is_alive(u) and h.adj[u] | (1 << u) == key:
                keep, drop = (u, v) if h.weight[u] >= h.weight[v] else (v, u)
                ledger.records.append(TwinRecord(h.tag[keep], h.tag[drop], True, h.weight[drop]))
                h.remove_node(drop)
                closed[key & ~(1 << drop)] = keep
                changed = True
                continue
            closed[key] = v
            u = opened.get(h.adj[v])
            if u is not None and h.is_alive(u) and h.adj[u] == h.adj[v]:
                ledger.records.append(TwinRecord(h.tag[u], h.tag[v], False, h.weight[v]))
                h.weight[u] += h.weight[v]
                h.remove_node(v)
                changed = True
                continue
            opened[h.adj[v]] = v
    reduced, _ = h.subgraph(h.alive)
    ledger.reduced = reduced
    return reduced, ledger


def reinsert_twins(s: Iterable[Tag], ledger: TwinLedger) -> set[Tag]:
    """Map a stable set of the reduced graph back to the original graph."""
    chosen = set(s)
    if ledger.reduced is not None:
        red = ledger.reduced
        mask = red.mask_of_tags(chosen)
        if not red.is_stable(mask):
            raise ValueError("set is not stable in the reduced graph")
    for rec in reversed(ledger.records):
        if not rec.adjacent and rec.kept in chosen:
            chosen.add(rec.removed)
    return chosen
