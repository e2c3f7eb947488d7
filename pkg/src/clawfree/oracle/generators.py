"""Seeded generators of claw-free instances.

All randomness flows through :class:`SplitMix64`, so an instance is fully
determined by its :class:`GenModel`.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..graph import WeightedGraph, find_claw

MASK64 = (1 << 64) - 1
KINDS = ("line", "circular", "mixed")


class SplitMix64:
    """The splitmix64 generator: 64-bit state, golden-ratio increment.

    Examples
    --------
    >>> rng = SplitMix64(0)
    >>> hex(rng.next())
    '0xe220a8397b1dcdaf'
    """

    GAMMA = 0x9E3779B97F4A7C15
    MUL1 = 0xBF58476D1CE4E5B9
    MUL2 = 0x94D049BB133111EB

    def __init__(self, seed: int) -> None:
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.state + self.GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * self.MUL1) & MASK64
        z = ((z ^ (z >> 27)) * self.MUL2) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` by rejection sampling."""
        if n <= 0:
            raise ValueError("bound must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next()
            if x < limit:
                return x % n

    def between(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``."""
        return lo + self.below(hi - lo + 1)


@dataclass(frozen=True)
class GenModel:
    """Parameters of one generated instance.

    Attributes
    ----------
    kind : {"line", "circular", "mixed"}
    n : int
        Target node count.  Line and circular instances hit it exactly;
        mixed instances may end smaller after claw repair.
    seed : int
    wmin, wmax : int
        Inclusive weight range.
    """

    kind: str
    n: int
    seed: int
    wmin: int = 1
    wmax: int = 100

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown model {self.kind!r}; expected one of {KINDS}")
        if self.n < 1:
            raise ValueError("n must be positive")
        if not 0 <= self.wmin <= self.wmax:
            raise ValueError("weight range must satisfy 0 <= wmin <= wmax")


def line_graph(root_edges: list[tuple[int, int]], weights: list[int] | None = None) -> WeightedGraph:
    """Line graph of a multigraph given by its edge list.

    Node ``i`` stands for ``root_edges[i]``; two nodes are adjacent when
    their root edges share an endpoint.
    """
    n = len(root_edges)
    g = WeightedGraph(weights if weights is not None else [1] * n, tags=list(range(1, n + 1)))
    at: dict[int, list[int]] = {}
    for i, (a, b) in enumerate(root_edges):
        if a == b:
            raise ValueError("root loops are not supported")
        at.setdefault(a, []).append(i)
        at.setdefault(b, []).append(i)
    for incident in at.values():
        for x in range(len(incident)):
            for y in range(x + 1, len(incident)):
                u, v = incident[x], incident[y]
                if not g.has_edge(u, v):
                    g.add_edge(u, v)
    return g


def _weights(rng: SplitMix64, model: GenModel, n: int) -> list[int]:
    return [rng.between(model.wmin, model.wmax) for _ in range(n)]


def _gen_line(model: GenModel, rng: SplitMix64) -> WeightedGraph:
    n = model.n
    hi = max(3, n)
    roots = rng.between(max(2, n // 3), hi)
    edges = []
    for _ in range(n):
        a = rng.below(roots)
        b = rng.below(roots - 1)
        if b >= a:
            b += 1
        edges.append((a, b))
    return line_graph(edges, _weights(rng, model, n))


def circular_interval_graph(
    n: int, arcs: list[tuple[int, int]], weights: list[int] | None = None
) -> WeightedGraph:
    """Graph on ``n`` points of a circle; points covered by a common arc are adjacent.

    Each arc is ``(start, length)`` and covers ``start, start+1, ...`` modulo
    ``n``, ``length`` points in all.

    Examples
    --------
    >>> circular_interval_graph(4, [(0, 4)]).edge_count()
    6
    """
    g = WeightedGraph(weights if weights is not None else [1] * n, tags=list(range(1, n + 1)))
    for start, length in arcs:
        if not 1 <= length <= n:
            raise ValueError(f"arc length {length} outside 1..{n}")
        covered = [(start + i) % n for i in range(length)]
        for i, u in enumerate(covered):
            for v in covered[i + 1 :]:
                if not g.has_edge(u, v):
                    g.add_edge(u, v)
    return g


def _gen_circular(model: GenModel, rng: SplitMix64) -> WeightedGraph:
    n = model.n
    weights = _weights(rng, model, n)
    count = rng.between(max(1, n // 3), max(1, n))
    longest = min(n, max(2, n // 3))
    arcs = []
    for _ in range(count):
        start = rng.below(n)
        arcs.append((start, rng.between(min(2, n), longest)))
    return circular_interval_graph(n, arcs, weights)


def _block(rng: SplitMix64) -> tuple[int, list[tuple[int, int]]]:
    """A random building block: 5-wheel, net or small clique."""
    kind = rng.below(3)
    if kind == 0:
        rim = [(i, i % 5 + 1) for i in range(1, 6)]
        return 6, rim + [(0, i) for i in range(1, 6)]
    if kind == 1:
        return 6, [(0, 1), (1, 2), (0, 2), (0, 3), (1, 4), (2, 5)]
    size = rng.between(2, 4)
    return size, [(i, j) for i in range(size) for j in range(i + 1, size)]


def _gen_mixed(model: GenModel, rng: SplitMix64) -> WeightedGraph:
    # grow the block budget until claw repair leaves at least n nodes
    budget = model.n
    while True:
        g = _mixed_attempt(budget, rng)
        if len(g) >= model.n or budget > 8 * model.n:
            break
        budget += max(1, model.n // 2)
    keep, _ = g.subgraph(g.alive)
    prefix = (1 << min(model.n, len(keep))) - 1
    compact, _ = keep.subgraph(prefix)
    weights = _weights(rng, model, len(compact))
    return WeightedGraph(weights, compact.edges(), tags=list(range(1, len(compact) + 1)))


def _mixed_attempt(budget: int, rng: SplitMix64) -> WeightedGraph:
    edges: list[tuple[int, int]] = []
    glue: list[tuple[list[int], list[int]]] = []
    sites: list[list[int]] = []  # identification sites: single nodes and edges
    total = 0
    while total < budget:
        size, block = _block(rng)
        own_sites = [[total + i] for i in range(size)] + [[total + a, total + b] for a, b in block]
        edges.extend((total + a, total + b) for a, b in block)
        if sites:
            # glue the new block to an earlier one along a node or an edge
            own = own_sites[rng.below(len(own_sites))]
            other = [c for c in sites if len(c) == len(own)]
            glue.append((own, other[rng.below(len(other))]))
        sites.extend(own_sites)
        total += size

    parent = list(range(total))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for own, target in glue:
        for a, b in zip(own, target):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    reps = sorted({find(x) for x in range(total)})
    index = {r: i for i, r in enumerate(reps)}
    g = WeightedGraph([1] * len(reps))
    for a, b in edges:
        u, v = index[find(a)], index[find(b)]
        if u != v and not g.has_edge(u, v):
            g.add_edge(u, v)
    while True:
        claw = find_claw(g)
        if claw is None:
            break
        g.remove_node(min(claw[1:]))
    return g


def gen_instance(model: GenModel) -> WeightedGraph:
    """Generate the claw-free instance described by `model`.

    Examples
    --------
    >>> g = gen_instance(GenModel("line", 12, seed=7))
    >>> len(g), find_claw(g) is None
    (12, True)
    """
    rng = SplitMix64(model.seed)
    if model.kind == "line":
        g = _gen_line(model, rng)
    elif model.kind == "circular":
        g = _gen_circular(model, rng)
    else:
        g = _gen_mixed(model, rng)
    return g
