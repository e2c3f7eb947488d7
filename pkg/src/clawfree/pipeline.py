"""Phase drivers turning a claw-free graph into a basic graph by liftings.

The phases run on one connected, twin-free graph:

1. soft cliques are lifted along their rigid partitions;
2. the components of ``G - M`` that still hold irregular nodes are set
   aside as strips, leaving a quasi-line graph ``H``;
3. weakly normal free components of ``H`` are lifted;
4. cover cliques are lifted along their S-partitions until none is
   S-liftable;
5. the set-aside strips are put back.

Every step keeps the maximum stable set weight up to the known bonus of the
lifting pairs.  Certify mode checks the structural guarantees of each phase
as it goes.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .cliques import is_normal, is_weakly_normal, rigid_partition, soft_cliques
from .graph import (
    WeightedGraph,
    alpha_at_most,
    find_5wheel,
    irregular_nodes,
    iter_bits,
    lowest,
    maximal_cliques,
    popcount,
)
from .lifting import LiftError, LiftLedger, extend_cover, lift, update_candidates
from .oracle.checks import canonical_violation, is_m_clique, is_strongly_bisimplicial
from .stable import (
    SCover,
    build_context,
    canonicalize,
    classify,
    free_components,
    greedy_maximal_stable_set,
    maximalize,
    s_cover,
)

CERTIFY_CLIQUE_SCAN = 60


class PipelineError(RuntimeError):
    """A structural guarantee failed; the message names the phase."""

    def __init__(self, phase: str, message: str) -> None:
        super().__init__(f"[{phase}] {message}")
        self.phase = phase


@dataclass
class PipelineStats:
    nodes_in: int = 0
    nodes_out: int = 0
    soft_lifts: int = 0
    free_lifts: int = 0
    s_lifts: int = 0
    s_iterations: int = 0
    rescans: int = 0
    detached: int = 0


@dataclass
class DetachedStrip:
    """Nodes set aside at extraction, with their adjacency at that time."""

    nodes: int
    adjacency: dict[int, int]
    pairs: list[tuple[int, int]]


@dataclass
class PipelineState:
    """Single-writer state shared by the phases.

    Attributes
    ----------
    g : WeightedGraph
        Working graph, mutated by every lifting.
    stable : int
        Canonical stable set, extended by every lifting.
    mate : dict
        Matching made of the lifting edges, as a mate map.
    ledger : LiftLedger
    wmax : int
        Largest weight so far; the next lifting uses ``wmax + 1``.
    detached : list of DetachedStrip
    """

    g: WeightedGraph
    stable: int
    mate: dict[int, int]
    ledger: LiftLedger
    wmax: int
    certify: bool = False
    w5_free: bool = False
    original: int = 0
    detached: list[DetachedStrip] = field(default_factory=list)
    cover: SCover | None = None
    candidates: list[int] = field(default_factory=list)
    stats: PipelineStats = field(default_factory=PipelineStats)
    _matched: int | None = field(default=None, repr=False)

    @property
    def matched(self) -> int:
        """Bitset of matched nodes, cached until the matching changes."""
        if self._matched is None:
            self._matched = state_matched(self.mate)
        return self._matched

    def matching_changed(self) -> None:
        self._matched = None

    def next_weight(self) -> int:
        self.wmax += 1
        return self.wmax

    def do_lift(self, clique: int, parts: list[int] | tuple[int, ...], phase: str):
        try:
            self.stable, rec = lift(
                self.g,
                clique,
                parts,
                self.stable,
                self.mate,
                phase=phase,
                w_m=self.next_weight(),
                ledger=self.ledger,
                certify=self.certify,
                w5_free=self.w5_free,
            )
            self.matching_changed()
        except LiftError as exc:
            raise PipelineError(phase, str(exc)) from exc
        return rec


def start(g: WeightedGraph, *, certify: bool = False) -> PipelineState:
    """Copy `g` and pick a canonical stable set to begin with."""
    work = g.copy()
    s = canonicalize(work, greedy_maximal_stable_set(work))
    state = PipelineState(work, s, {}, LiftLedger(), work.max_weight(), certify=certify, original=work.alive)
    state.stats.nodes_in = len(work)
    if certify:
        why = canonical_violation(work, s)
        if why is not None:
            raise PipelineError("start", f"initial stable set not canonical: {why}")
        state.w5_free = find_5wheel(work) is None
    return state


# -- phase 1: soft cliques -----------------------------------------------------


def soft_lift_all(state: PipelineState) -> None:
    """Lift every soft cover clique or free component along its rigid partition."""
    g = state.g
    ctx = build_context(g, state.stable)
    report = soft_cliques(g, ctx, certify=state.certify)
    for q, parts in report.items():
        if not g.is_maximal_clique(q):
            raise PipelineError("soft", f"soft clique {q:#x} no longer maximal")
        state.do_lift(q, parts, "soft")
        state.stats.soft_lifts += 1
    if state.certify:
        why = after_lifting_violation(state)
        if why is not None:
            raise PipelineError("soft", why)


def _m_components(g: WeightedGraph, mate: dict[int, int]) -> list[int]:
    h = g.copy()
    for u, v in mate.items():
        if u < v and h.is_alive(u) and h.is_alive(v):
            h.remove_edge(u, v)
    return h.components()


def after_lifting_violation(state: PipelineState) -> str | None:
    """Check the structure left by the soft phase.

    Every maximal clique avoiding the matched nodes must be rigid (checked on
    small graphs only), and two adjacent matched nodes must be mates or share
    an M-clique.
    """
    g, mate = state.g, state.mate
    matched = state.matched
    if len(g) <= CERTIFY_CLIQUE_SCAN:
        for c in maximal_cliques(g, g.alive & ~matched):
            if len(rigid_partition(g, c)) > 1:
                return f"maximal clique {g.tags_of(c)} outside V(M) is soft"
    comp_of: dict[int, int] = {}
    comps = _m_components(g, mate)
    for i, c in enumerate(comps):
        for v in iter_bits(c):
            comp_of[v] = i
    for u in iter_bits(matched):
        for v in iter_bits(g.adj[u] & matched):
            if mate.get(u) == v:
                continue
            c = comps[comp_of[u]]
            if comp_of[v] != comp_of[u] or not is_m_clique(g, c, mate):
                return f"matched nodes {g.tag[u]}, {g.tag[v]} adjacent outside an M-clique"
    return None


# -- phase 2: extraction ---------------------------------------------------------


def extract_quasiline(state: PipelineState) -> list[DetachedStrip]:
    """Set aside the components of ``G - M`` that contain irregular nodes.

    Each such component must meet at most two matched nodes and have
    independence number at most 3 once those are removed.  The lifting
    partners of its matched nodes stay behind; they become simplicial nodes
    of their lifting cliques.  The stable set is then repaired on what
    remains.
    """
    g = state.g
    irregular = irregular_nodes(g)
    if not irregular:
        return []
    matched = state.matched
    out = []
    for comp in _m_components(g, state.mate):
        if not comp & irregular:
            continue
        if is_m_clique(g, comp, state.mate):
            raise PipelineError("extract", f"irregular node inside M-clique {g.tags_of(comp)}")
        inside = comp & matched
        if popcount(inside) > 2:
            raise PipelineError("extract", f"component {g.tags_of(comp)} meets {popcount(inside)} matched nodes")
        if not alpha_at_most(g, comp & ~matched, 3):
            raise PipelineError("extract", f"component {g.tags_of(comp)} has independence number above 3")
        pairs = [(z, state.mate[z]) for z in iter_bits(inside)]
        adjacency = {v: g.adj[v] for v in iter_bits(comp)}
        out.append(DetachedStrip(comp, adjacency, pairs))
    for part in out:
        for z, zbar in part.pairs:
            del state.mate[z]
            del state.mate[zbar]
        g.remove_nodes(part.nodes)
    state.matching_changed()
    state.detached.extend(out)
    state.stats.detached += len(out)

    leftover = irregular_nodes(g)
    if leftover:
        raise PipelineError("extract", f"irregular nodes remain: {g.tags_of(leftover)}")
    s = maximalize(g, state.stable & g.alive)
    state.stable = canonicalize(g, s)
    why = matching_violation(g, state.stable, state.mate)
    if why is not None:
        raise PipelineError("extract", why)
    return out


def matching_violation(g: WeightedGraph, s: int, mate: dict[int, int]) -> str | None:
    """Each matching edge must have exactly one stable end."""
    for u, v in mate.items():
        if u < v and ((s >> u) & 1) == ((s >> v) & 1):
            return f"matching edge {g.tag[u]}-{g.tag[v]} has {2 * ((s >> u) & 1)} stable ends"
    return None


# -- phase 3: free components ------------------------------------------------------


def free_lift_all(state: PipelineState) -> None:
    """Lift each weakly normal free component that is not an M-clique.

    The partition groups the component's nodes by stable neighbour.
    """
    g = state.g
    before = len(g)
    fs = free_components(g, state.stable)
    for q in fs.family:
        if is_m_clique(g, q, state.mate) or not is_weakly_normal(g, q):
            continue
        if not g.is_maximal_clique(q):
            raise PipelineError("free", f"free component {g.tags_of(q)} no longer maximal")
        groups: dict[int, int] = {}
        for v in iter_bits(q):
            nb = g.adj[v] & state.stable
            if popcount(nb) != 1:
                raise PipelineError("free", f"node {g.tag[v]} of a free component is no longer free")
            groups[lowest(nb)] = groups.get(lowest(nb), 0) | (1 << v)
        state.do_lift(q, list(groups.values()), "free")
        state.stats.free_lifts += 1
    if len(g) - before > 2 * before:
        raise PipelineError("free", "free-component liftings more than tripled the graph")
    if state.certify:
        why = free_lifted_violation(g, state.stable, state.mate)
        if why is not None:
            raise PipelineError("free", why)


def free_lifted_violation(g: WeightedGraph, s: int, mate: dict[int, int]) -> str | None:
    """Check the free-lifted property.

    Every matching edge is a strongly bisimplicial clique with one stable
    end, every matched free node lies in an M-clique, and every weakly
    normal free component is an M-clique.
    """
    why = matching_violation(g, s, mate)
    if why is not None:
        return why
    for u, v in mate.items():
        if u < v and not is_strongly_bisimplicial(g, (1 << u) | (1 << v)):
            return f"matching edge {g.tag[u]}-{g.tag[v]} is not strongly bisimplicial"
    comps = _m_components(g, mate)
    cls = classify(g, s)
    for c in comps:
        if c & cls.free & state_matched(mate) and not is_m_clique(g, c, mate):
            return f"matched free node in {g.tags_of(c)} outside an M-clique"
    for q in free_components(g, s, cls).family:
        if is_weakly_normal(g, q) and not is_m_clique(g, q, mate):
            return f"weakly normal free component {g.tags_of(q)} is not an M-clique"
    return None


def state_matched(mate: dict[int, int]) -> int:
    out = 0
    for v in mate:
        out |= 1 << v
    return out


# -- phase 4: S-liftings -------------------------------------------------------------


@dataclass(frozen=True)
class SPartitionPlan:
    """The S-partition of a cover clique.

    ``case`` is ``"i"`` when the stable node has no free neighbour outside
    the clique and ``"ii"`` otherwise.
    """

    clique: int
    stable: int
    polar: int | None
    parts: tuple[int, ...]
    case: str


def _is_free(g: WeightedGraph, s: int, u: int) -> bool:
    nb = g.adj[u] & s
    return bool(nb) and nb & (nb - 1) == 0


def wing_partners(g: WeightedGraph, s: int, u: int, q: int) -> tuple[bool, set[int]]:
    """Wing partners of a neighbour `u` of the stable node `q`.

    Returns ``(bound, partners)``: a bound node's partner is its other
    stable neighbour; a free node's partners own its free neighbours of
    other classes.  An empty set marks an inner free node.
    """
    nb = g.adj[u] & s
    if nb & (nb - 1):
        return True, set(iter_bits(nb & ~(1 << q)))
    partners = set()
    for x in iter_bits(g.adj[u] & ~s):
        xb = g.adj[x] & s
        if xb and xb & (xb - 1) == 0 and xb != 1 << q:
            partners.add(lowest(xb))
    return False, partners


def polar_wing(state: PipelineState, clique: int, q: int) -> int | None:
    """The polar node of `clique` at its stable node `q`, if any.

    The wing ``W(q, r)`` must hold every neighbour of ``q`` outside the
    clique, and one of them must be adjacent to a clique node of the same
    wing.
    """
    g, s = state.g, state.stable
    outside = g.adj[q] & ~clique
    if not outside:
        return None
    common: set[int] | None = None
    for y in iter_bits(outside):
        _, partners = wing_partners(g, s, y, q)
        common = partners if common is None else common & partners
        if not common:
            return None
    found = []
    for r in sorted(common or ()):
        for x in iter_bits(clique & ~(1 << q)):
            if g.adj[x] & outside and r in wing_partners(g, s, x, q)[1]:
                found.append(r)
                break
    if len(found) > 1:
        raise PipelineError("slift", f"clique {g.tags_of(clique)} has {len(found)} polar wings")
    return found[0] if found else None


def s_partition(state: PipelineState, clique: int) -> SPartitionPlan:
    """Build the S-partition of a weakly normal cover clique."""
    g, s = state.g, state.stable
    q_mask = clique & s
    if popcount(q_mask) != 1:
        raise PipelineError("slift", f"cover clique {g.tags_of(clique)} holds {popcount(q_mask)} stable nodes")
    q = lowest(q_mask)
    groups: dict[int, int] = {}
    bound = 0
    inner = 0
    for x in iter_bits(clique & ~q_mask):
        is_bound, partners = wing_partners(g, s, x, q)
        if len(partners) > 1:
            raise PipelineError("slift", f"node {g.tag[x]} lies in {len(partners)} wings")
        if is_bound:
            bound |= 1 << x
        if not partners:
            inner |= 1 << x
            continue
        t = partners.pop()
        groups[t] = groups.get(t, 0) | (1 << x)
    r = polar_wing(state, clique, q)
    free_outside = any(_is_free(g, s, y) for y in iter_bits(g.adj[q] & ~clique))
    case = "ii" if free_outside else "i"
    parts = [groups[t] for t in sorted(groups) if t != r]
    if r is None:
        parts.append(q_mask | inner)
    elif case == "i":
        parts.append(groups.get(r, 0) | q_mask | inner)
    else:
        r_part = groups.get(r, 0)
        parts.append((r_part & ~bound) | q_mask | inner)
        parts.append(r_part & bound)
    parts = sorted((p for p in parts if p), key=lambda m: m & -m)
    return SPartitionPlan(clique, q, r, tuple(parts), case)


def is_s_liftable(state: PipelineState, clique: int, plan: SPartitionPlan) -> bool:
    """At least two parts reach outside V(M), or three parts; never an M-clique."""
    if is_m_clique(state.g, clique, state.mate):
        return False
    matched = state.matched
    loose = sum(1 for k in plan.parts if k & ~matched)
    return loose >= 2 or len(plan.parts) >= 3


def meets_normal_free_component(state: PipelineState, clique: int) -> bool:
    """True iff some free node of `clique` lies in a normal free component."""
    g, s = state.g, state.stable
    seen = 0
    for u in iter_bits(clique & ~s):
        if (seen >> u) & 1 or not _is_free(g, s, u):
            continue
        # grow the dissimilarity component of u; it is a clique only inside N[u]
        limit = g.adj[u] | (1 << u)
        comp = frontier = 1 << u
        ok = True
        while frontier and ok:
            reach = 0
            for v in iter_bits(frontier):
                own = g.adj[v] & s
                for x in iter_bits(g.adj[v] & ~s):
                    xb = g.adj[x] & s
                    if xb and xb & (xb - 1) == 0 and xb != own:
                        reach |= 1 << x
            frontier = reach & ~comp
            if frontier & ~limit:
                ok = False
            comp |= frontier
        seen |= comp
        if ok and popcount(comp) >= 2 and g.is_maximal_clique(comp) and is_normal(g, comp):
            return True
    return False


def evaluate(state: PipelineState, clique: int) -> SPartitionPlan | None:
    """Return the S-partition of `clique` if it is S-liftable now, else None."""
    g = state.g
    if clique & ~g.alive or not g.is_maximal_clique(clique):
        return None
    if popcount(clique & state.stable) != 1:
        return None
    if is_m_clique(g, clique, state.mate):
        return None
    if not is_weakly_normal(g, clique, shortcut=True):
        return None
    if meets_normal_free_component(state, clique):
        return None
    plan = s_partition(state, clique)
    return plan if is_s_liftable(state, clique, plan) else None


def _cover_candidates(state: PipelineState, cover: SCover) -> list[int]:
    g = state.g
    out = []
    for _, c in cover.members():
        if not is_m_clique(g, c, state.mate) and is_weakly_normal(g, c, shortcut=True):
            out.append(c)
    return out


def _ball(g: WeightedGraph, mask: int, radius: int) -> int:
    for _ in range(radius):
        mask |= g.neighborhood(mask)
    return mask


def cover_violation(g: WeightedGraph, s: int, cover: SCover) -> str | None:
    """Each listed stable node's closed neighbourhood is covered by two maximal cliques."""
    for t, (c1, c2) in cover.cliques.items():
        if not g.is_alive(t) or not (s >> t) & 1:
            continue
        for c in (c1, c2):
            if not (c >> t) & 1 or not g.is_maximal_clique(c):
                return f"cover clique {g.tags_of(c)} of {g.tag[t]} is not a maximal clique through it"
        if g.closed(t) & ~(c1 | c2):
            return f"cover of {g.tag[t]} misses part of its neighbourhood"
    return None


def s_lift_loop(state: PipelineState, *, max_iterations: int | None = None) -> None:
    """Lift S-liftable cover cliques until none is left.

    Candidates sit in a heap keyed by (stable node, clique).  After each
    lifting only the candidates within distance 3 of the lifted clique are
    re-examined; when the heap empties, a full scan over a fresh cover
    confirms that nothing liftable remains.  More than `max_iterations`
    liftings (default ``4|V| + 16``) is an error.
    """
    g = state.g
    state.cover = s_cover(g, state.stable)
    state.candidates = _cover_candidates(state, state.cover)
    limit = max_iterations if max_iterations is not None else 4 * len(g) + 16
    heap: list[tuple[int, int]] = []

    def push(c: int) -> None:
        heapq.heappush(heap, (lowest(c & state.stable) if c & state.stable else -1, c))

    for c in state.candidates:
        push(c)
    while True:
        while heap:
            _, c = heapq.heappop(heap)
            if c not in state.candidates:
                continue
            plan = evaluate(state, c)
            if plan is None:
                continue
            state.stats.s_iterations += 1
            if state.stats.s_iterations > limit:
                raise PipelineError("slift", f"more than {limit} S-liftings")
            s_before = state.stable
            matched_before = state.matched
            outside = bool(g.adj[plan.stable] & ~c)
            rec = state.do_lift(c, plan.parts, "slift")
            state.stats.s_lifts += 1
            state.cover = extend_cover(state.cover, rec, s_before)
            state.candidates = update_candidates(state.candidates, rec, matched_before, outside, s_before)
            if state.certify:
                why = cover_violation(g, state.stable, state.cover)
                if why is not None:
                    raise PipelineError("slift", why)
            near = _ball(g, c | rec.new_nodes, 3)
            for d in state.candidates:
                if d & near:
                    push(d)
        fresh = s_cover(g, state.stable)
        pending = [c for c in dict.fromkeys(state.candidates + _cover_candidates(state, fresh)) if evaluate(state, c)]
        if not pending:
            break
        state.stats.rescans += 1
        known = set(state.candidates)
        state.candidates.extend(c for c in pending if c not in known)
        for c in pending:
            push(c)


# -- phase 5: reassembly ---------------------------------------------------------------


def restore_detached(state: PipelineState) -> None:
    """Put the set-aside strips back, with their matching edges."""
    g = state.g
    for part in state.detached:
        for v in iter_bits(part.nodes):
            g.alive |= 1 << v
        for v, row in part.adjacency.items():
            g.adj[v] = row
            for u in iter_bits(row):
                if not g.is_alive(u):
                    raise PipelineError("restore", f"strip node {g.tag[v]} lost neighbour {g.tag[u]}")
                g.adj[u] |= 1 << v
        for z, zbar in part.pairs:
            state.mate[z] = zbar
            state.mate[zbar] = z
    state.matching_changed()
    state.detached = []


def run(g: WeightedGraph, *, certify: bool = False) -> PipelineState:
    """Run every phase on a connected, twin-free, claw-free graph."""
    state = start(g, certify=certify)
    soft_lift_all(state)
    extract_quasiline(state)
    if state.certify:
        why = canonical_violation(state.g, state.stable)
        if why is not None:
            raise PipelineError("extract", f"stable set not canonical after extraction: {why}")
    free_lift_all(state)
    s_lift_loop(state)
    restore_detached(state)
    state.stats.nodes_out = len(state.g)
    return state
