"""Distance tests on maximal cliques, candidate lists, rigid edges, soft cliques.

Two non-adjacent neighbours of a maximal clique ``Q`` are Q-distant when
they have no common neighbour inside ``Q``.  A clique is weakly normal when
all such pairs are distant, and normal when three pairwise non-adjacent,
pairwise distant neighbours exist.  An edge is rigid when its ends share two
non-adjacent neighbours; a maximal clique whose rigid edges do not connect
it is soft, and the components form its rigid partition.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import WeightedGraph, iter_bits, popcount
from .stable import StableContext, classes_met


def q_distant(g: WeightedGraph, q: int, u: int, v: int) -> bool:
    """True iff the non-adjacent nodes `u`, `v` have no common neighbour in `q`."""
    if g.has_edge(u, v):
        raise ValueError(f"nodes {u} and {v} are adjacent")
    return not (g.adj[u] & g.adj[v] & q)


def nsize(g: WeightedGraph, q: int, u: int) -> int:
    """Number of neighbours of `u` inside `q`."""
    return popcount(g.adj[u] & q)


def close_pair(g: WeightedGraph, q: int, shortcut: bool = False) -> tuple[int, int] | None:
    """A pair of non-adjacent Q-close nodes of N(Q), or None.

    With ``shortcut`` the common-neighbour test is replaced by the counting
    rule ``|N(u) & Q| + |N(v) & Q| > |Q|``, exact on claw-free graphs.
    """
    nq = g.neighborhood(q)
    size = popcount(q)
    counts = {u: popcount(g.adj[u] & q) for u in iter_bits(nq)} if shortcut else None
    for u in iter_bits(nq):
        for v in iter_bits(nq & ~g.adj[u] & ~((2 << u) - 1)):
            if counts is not None:
                if counts[u] + counts[v] > size:
                    return u, v
            elif g.adj[u] & g.adj[v] & q:
                return u, v
    return None


def is_weakly_normal(g: WeightedGraph, q: int, shortcut: bool = False) -> bool:
    """Every two non-adjacent neighbours of `q` are Q-distant."""
    return close_pair(g, q, shortcut) is None


def _distant_triple(g: WeightedGraph, q: int, pool: int) -> bool:
    adj = g.adj
    far: dict[int, int] = {}
    for x in iter_bits(pool):
        mask = 0
        for y in iter_bits(pool & ~adj[x] & ~(1 << x)):
            if not (adj[x] & adj[y] & q):
                mask |= 1 << y
        far[x] = mask
    for x in iter_bits(pool):
        for y in iter_bits(far[x] & ~((2 << x) - 1)):
            if far[x] & far[y] & ~((2 << y) - 1):
                return True
    return False


def is_normal(g: WeightedGraph, q: int, witness: tuple[int, int] | None = None) -> bool:
    """True iff `q` has three independent, mutually Q-distant neighbours.

    Parameters
    ----------
    witness : (u, qbar), optional
        A regular node ``u`` of ``q`` whose closed neighbourhood is covered
        by ``q`` and the maximal clique ``qbar``.  The test then looks for
        two Q-distant nodes of ``N(Q) - N(u)`` and a node of ``qbar - q``
        adjacent to neither.  When ``qbar`` adds nothing to ``q`` (``u`` is
        simplicial) the full search runs instead.
    """
    nq = g.neighborhood(q)
    if witness is None or not witness[1] & ~q:
        return _distant_triple(g, q, nq)
    u, qbar = witness
    far_side = nq & ~g.adj[u]
    adj = g.adj
    for x in iter_bits(far_side):
        for y in iter_bits(far_side & ~adj[x] & ~((2 << x) - 1)):
            if adj[x] & adj[y] & q:
                continue
            if qbar & ~q & ~adj[x] & ~adj[y]:
                return True
    return False


def is_rigid_edge(g: WeightedGraph, u: int, v: int) -> bool:
    """True iff `u` and `v` share two non-adjacent neighbours."""
    if not g.has_edge(u, v):
        raise ValueError(f"{u}-{v} is not an edge")
    common = g.adj[u] & g.adj[v]
    for x in iter_bits(common):
        if common & ~g.adj[x] & ~(1 << x):
            return True
    return False


def _union_parts(q: int, links: list[tuple[int, int]]) -> list[int]:
    parent = {v: v for v in iter_bits(q)}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in links:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, int] = {}
    for v in iter_bits(q):
        r = find(v)
        groups[r] = groups.get(r, 0) | (1 << v)
    return sorted(groups.values(), key=lambda m: m & -m)


def rigid_partition(g: WeightedGraph, q: int) -> list[int]:
    """Components of the rigid edges inside `q`, from the definition."""
    links = []
    for u in iter_bits(q):
        for v in iter_bits(q & ~((2 << u) - 1)):
            if is_rigid_edge(g, u, v):
                links.append((u, v))
    return _union_parts(q, links)


def root_partition(g: WeightedGraph, q: int) -> list[int]:
    """Components of the auxiliary graph built from outside neighbours.

    For each ``u`` in N(Q) let ``root`` be its neighbour in ``q`` written
    last by a scan of the edges in increasing order, which is the
    highest-index one; link every other neighbour of ``u`` in ``q`` to
    ``root``.  On claw-free graphs and cover or free-component cliques the
    result equals :func:`rigid_partition`.
    """
    links = []
    for u in iter_bits(g.neighborhood(q)):
        inside = g.adj[u] & q
        root = inside.bit_length() - 1
        for v in iter_bits(inside & ~(1 << root)):
            links.append((v, root))
    return _union_parts(q, links)


@dataclass
class SoftCliqueReport:
    """Soft cliques in scan order with their rigid partitions."""

    cliques: list[int] = field(default_factory=list)
    partitions: list[list[int]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.cliques)

    def items(self) -> list[tuple[int, list[int]]]:
        return list(zip(self.cliques, self.partitions))


def cover_and_free(ctx: StableContext) -> list[int]:
    """Distinct cliques of the S-cover followed by the free components."""
    out: list[int] = []
    seen: set[int] = set()
    for c in ctx.cover.all_cliques() + ctx.free.family:
        if c not in seen:
            seen.add(c)
            out.append(c)
    return out


def soft_cliques(g: WeightedGraph, ctx: StableContext, *, certify: bool = False) -> SoftCliqueReport:
    """Find the soft cliques among the cover cliques and free components.

    Raises
    ------
    AssertionError
        In certify mode, when the auxiliary-graph partition disagrees with
        the definition.
    """
    report = SoftCliqueReport()
    for q in cover_and_free(ctx):
        parts = root_partition(g, q)
        if certify:
            direct = rigid_partition(g, q)
            assert parts == direct, f"rigid partition mismatch on clique {q:#x}"
        if len(parts) > 1:
            report.cliques.append(q)
            report.partitions.append(parts)
    return report


@dataclass
class CandidateList:
    """Weakly normal cliques drawn from the S-cover and the free components.

    Attributes
    ----------
    cliques : list of int
    origin : list of str
        ``"cover"`` or ``"free"`` per clique.
    by_node : dict
        Node to the indices of the cliques containing it.
    """

    cliques: list[int] = field(default_factory=list)
    origin: list[str] = field(default_factory=list)
    by_node: dict[int, list[int]] = field(default_factory=dict)

    def add(self, q: int, origin: str) -> None:
        idx = len(self.cliques)
        self.cliques.append(q)
        self.origin.append(origin)
        for v in iter_bits(q):
            self.by_node.setdefault(v, []).append(idx)


def _two_class_drop(g: WeightedGraph, ctx: StableContext, q: int, crowded: bool) -> bool:
    """Decide non-weak-normality of a free component meeting two classes.

    ``crowded`` marks a pair of stable nodes with two or more such
    components, where a bound node of the wing seeing both halves settles
    it; otherwise that bound node must also have a non-neighbour seeing the
    same node of the component from the stable side.
    """
    cls = ctx.cls
    owners = sorted({cls.owner[v] for v in iter_bits(q)})
    s, t = owners
    qs, qt = q & cls.F(s), q & cls.F(t)
    near = g.adj[s] | g.adj[t]
    for x in iter_bits(ctx.wing_map.bound.get((s, t), 0)):
        zs, vs = g.adj[x] & qs, g.adj[x] & qt
        if not (zs and vs):
            continue
        if crowded:
            return True
        for z in iter_bits(zs | vs):
            if g.adj[z] & near & ~q & ~g.adj[x] & ~(1 << x):
                return True
    return False


def build_candidates(
    g: WeightedGraph,
    ctx: StableContext,
    *,
    quasi_line: bool = True,
    certify: bool = False,
) -> CandidateList:
    """Keep the weakly normal cliques of the cover and free components.

    On quasi-line graphs free components meeting two classes are tested
    through the bound nodes of their wing and all other cliques by the
    counting rule; otherwise every clique is tested directly.  Every normal
    clique of the graph is a cover clique or free component, so it
    survives.
    """
    cls = ctx.cls
    two_class: dict[tuple[int, int], list[int]] = {}
    if quasi_line:
        for q in ctx.free.family:
            if classes_met(cls, q) == 2:
                key = tuple(sorted({cls.owner[v] for v in iter_bits(q)}))
                two_class.setdefault(key, []).append(q)
    crowded = {q for group in two_class.values() if len(group) >= 2 for q in group}
    in_two = {q for group in two_class.values() for q in group}
    free_set = set(ctx.free.family)
    out = CandidateList()
    for q in cover_and_free(ctx):
        if not quasi_line:
            keep = is_weakly_normal(g, q)
        elif q in in_two:
            keep = not _two_class_drop(g, ctx, q, q in crowded)
        else:
            keep = is_weakly_normal(g, q, shortcut=True)
        if certify:
            assert keep == is_weakly_normal(g, q), f"weak normality shortcut disagrees on {q:#x}"
        if keep:
            out.add(q, "free" if q in free_set else "cover")
    return out
