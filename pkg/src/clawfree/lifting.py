"""Clique lifting and the ledger that undoes it.

Lifting a maximal clique ``Q`` along a partition ``K_1..K_p`` deletes the
edges between different parts, adds a stable-side node ``q_i`` adjacent to
all of ``K_i``, and adds a clique of partners ``qbar_1..qbar_p`` with
``q_i qbar_i`` an edge.  All ``2p`` new nodes weigh ``w_M``, one more than
any existing weight, so every optimum uses exactly one node of each pair
``{q_i, qbar_i}`` and dropping the new nodes recovers an optimum of the
graph before lifting.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .graph import TwinLedger, WeightedGraph, find_5wheel, find_claw, iter_bits, popcount, to_mask
from .oracle.checks import canonical_violation, liftable_violation
from .stable import SCover

PHASES = ("soft", "free", "slift")


class LiftError(RuntimeError):
    """A lifting precondition or postcondition failed."""


@dataclass(frozen=True)
class LiftRecord:
    """One lifting, in the index space of the working graph."""

    phase: str
    clique: int
    parts: tuple[int, ...]
    q: tuple[int, ...]
    qbar: tuple[int, ...]
    removed: tuple[tuple[int, int], ...]
    w_m: int

    @property
    def new_nodes(self) -> int:
        return to_mask(self.q) | to_mask(self.qbar)

    @property
    def lifting_clique(self) -> int:
        return to_mask(self.qbar)

    def describe(self, g: WeightedGraph) -> str:
        """One ledger line: phase, weight, clique, parts, new nodes, removed edges."""

        def names(mask: int) -> str:
            return ",".join(str(t) for t in g.tags_of(mask))

        parts = "|".join(names(k) for k in self.parts)
        removed = " ".join(f"{g.tag[a]}-{g.tag[b]}" for a, b in self.removed)
        return (
            f"lift {self.phase} wM={self.w_m} clique={names(self.clique)} parts={parts} "
            f"q={','.join(str(g.tag[v]) for v in self.q)} "
            f"qbar={','.join(str(g.tag[v]) for v in self.qbar)} removed={removed or '-'}"
        )


@dataclass
class LiftLedger:
    """Append-only list of liftings plus the twin eliminations before them."""

    records: list[LiftRecord] = field(default_factory=list)
    twins: TwinLedger | None = None

    def __len__(self) -> int:
        return len(self.records)

    def count(self, phase: str) -> int:
        return sum(1 for r in self.records if r.phase == phase)

    def pair_bonus(self) -> int:
        """Weight every optimum gains from the lifting pairs."""
        return sum(r.w_m * len(r.parts) for r in self.records)

    def dump(self, g: WeightedGraph) -> str:
        return "\n".join(r.describe(g) for r in self.records)


def lift(
    g: WeightedGraph,
    clique: int,
    parts: Sequence[int],
    stable: int,
    mate: dict[int, int],
    *,
    phase: str,
    w_m: int,
    ledger: LiftLedger | None = None,
    check: bool = True,
    certify: bool = False,
    w5_free: bool = False,
) -> tuple[int, LiftRecord]:
    """Lift `clique` along `parts`, mutating `g` and `mate` in place.

    Parameters
    ----------
    g : WeightedGraph
        Working graph, modified in place.
    clique : int
        A maximal clique of `g`.
    parts : sequence of int
        Partition of `clique`.
    stable : int
        Current stable set; the extended set is returned.
    mate : dict
        Current matching as a mate map; the lifting edges are added.
    phase : {"soft", "free", "slift"}
    w_m : int
        Weight of the new nodes; must exceed every weight in `clique`.
    ledger : LiftLedger, optional
        Receives the record.
    check : bool
        Verify liftability first.
    certify : bool
        Verify claw-freeness and canonicity of the result.
    w5_free : bool
        The graph is known to have no 5-wheel; verify that it still has none.

    Returns
    -------
    stable : int
        The extension: ``q_i`` joins for parts without a stable node and
        ``qbar_i`` for the part holding one.
    record : LiftRecord
    """
    if phase not in PHASES:
        raise ValueError(f"unknown phase {phase!r}")
    parts = tuple(sorted((k for k in parts if k), key=lambda m: m & -m))
    if check:
        why = liftable_violation(g, clique, parts)
        if why is not None:
            raise LiftError(f"{phase} lift of non-liftable clique: {why}")
    if certify and not g.is_maximal_clique(clique):
        raise LiftError("lifted set is not a maximal clique")
    if any(g.weight[v] >= w_m for v in iter_bits(clique)):
        raise LiftError("w_M must exceed every weight in the clique")

    removed = []
    for i, ki in enumerate(parts):
        others = 0
        for kj in parts[i + 1 :]:
            others |= kj
        for x in iter_bits(ki):
            for y in iter_bits(g.adj[x] & others):
                removed.append((min(x, y), max(x, y)))
                g.remove_edge(x, y)

    serial = len(ledger.records) if ledger is not None else g.capacity
    qs: list[int] = []
    qbars: list[int] = []
    for i, ki in enumerate(parts, start=1):
        q = g.add_node(w_m, f"{phase}{serial}.q{i}")
        qb = g.add_node(w_m, f"{phase}{serial}.qbar{i}")
        for x in iter_bits(ki):
            g.add_edge(q, x)
        g.add_edge(q, qb)
        for other in qbars:
            g.add_edge(qb, other)
        qs.append(q)
        qbars.append(qb)
        mate[q] = qb
        mate[qb] = q
        if ki & stable:
            stable |= 1 << qb
        else:
            stable |= 1 << q

    record = LiftRecord(phase, clique, parts, tuple(qs), tuple(qbars), tuple(sorted(removed)), w_m)
    if ledger is not None:
        ledger.records.append(record)

    if certify:
        touched = clique | record.new_nodes | g.neighborhood(clique)
        claw = find_claw(g, centers=touched)
        if claw is not None:
            raise LiftError(f"lift created claw {claw}")
        if w5_free and find_5wheel(g, hubs=touched) is not None:
            raise LiftError("lift created a 5-wheel")
        why = canonical_violation(g, stable)
        if why is not None:
            raise LiftError(f"extended stable set not canonical: {why}")
    return stable, record


def unwind(s_star: int, ledger: LiftLedger) -> int:
    """Drop the lifting nodes record by record, newest first.

    Raises
    ------
    LiftError
        If a lifting pair has no representative in `s_star` or a removed
        edge has both ends selected.
    """
    for idx in range(len(ledger.records) - 1, -1, -1):
        rec = ledger.records[idx]
        for q, qb in zip(rec.q, rec.qbar):
            if not (s_star >> q) & 1 and not (s_star >> qb) & 1:
                raise LiftError(f"record {idx} ({rec.phase}): lifting pair {q},{qb} unrepresented")
        s_star &= ~rec.new_nodes
        for a, b in rec.removed:
            if (s_star >> a) & 1 and (s_star >> b) & 1:
                raise LiftError(f"record {idx} ({rec.phase}): removed edge {a}-{b} has both ends selected")
    return s_star


def extend_cover(cover: SCover, record: LiftRecord, stable_before: int) -> SCover:
    """Update an S-cover after lifting one of its cliques.

    The lifted clique ``C_s`` disappears.  ``s`` keeps its other clique and
    gains ``K_h + q_h`` where ``K_h`` is its part; each other part's
    ``q_i`` is covered by ``K_i + q_i`` and the edge ``q_i qbar_i``; and
    ``qbar_h`` by the lifting clique and the edge ``q_h qbar_h``.
    """
    s_mask = record.clique & stable_before
    if popcount(s_mask) != 1:
        raise ValueError("the lifted clique must hold exactly one stable node")
    s = s_mask.bit_length() - 1
    out = SCover(dict(cover.cliques))
    qbar_clique = record.lifting_clique
    for i, part in enumerate(record.parts):
        q, qb = record.q[i], record.qbar[i]
        side = part | (1 << q)
        edge = (1 << q) | (1 << qb)
        if part & s_mask:
            old = out.cliques.get(s, (record.clique, record.clique))
            out.cliques[s] = tuple(side if c == record.clique else c for c in old)  # type: ignore[assignment]
            out.cliques[qb] = (qbar_clique, edge)
        else:
            out.cliques[q] = (side, edge)
    return out


def update_candidates(
    candidates: list[int],
    record: LiftRecord,
    matched_before: int,
    g_before_outside: bool,
    stable_before: int,
) -> list[int]:
    """Update the candidate list after an S-lifting.

    The lifted clique leaves.  Each ``K_i + q_i`` with ``K_i`` free of
    previously matched nodes joins, except ``{s, q_i}`` when ``s`` had no
    neighbour outside the lifted clique (``g_before_outside`` false), since
    that edge is then an M-clique.
    """
    out = [c for c in candidates if c != record.clique]
    s_mask = record.clique & stable_before
    for part, q in zip(record.parts, record.q):
        if part & matched_before:
            continue
        if part == s_mask and not g_before_outside:
            continue
        out.append(part | (1 << q))
    return out
