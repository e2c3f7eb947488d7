"""End-to-end solve: twins, components, liftings, matching, unwinding."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

from .composition import (
    ComponentSolver,
    Decomposition,
    RootInstance,
    build_root_instance,
    decode,
    decompose_basic,
    gadget_violation,
    solve_root,
)
from .graph import (
    Tag,
    TwinLedger,
    WeightedGraph,
    alpha_at_most,
    find_claw,
    irregular_nodes,
    reinsert_twins,
    remove_twins,
)
from .lifting import LiftError, LiftLedger, unwind
from .oracle.brute import MWSS_LIMIT, brute_mwss
from .oracle.checks import basic_violation
from .pipeline import PipelineError, PipelineStats, run


class NotClawFree(ValueError):
    """The input contains a claw; ``witness`` holds its tags, centre first."""

    def __init__(self, witness: tuple[Tag, ...]) -> None:
        centre, *leaves = witness
        super().__init__(f"claw centred at {centre} with leaves {', '.join(map(str, leaves))}")
        self.witness = witness


@dataclass
class ComponentRun:
    """What the solver did with one connected component of the twin-free graph.

    ``direct`` components were solved without lifting; the other fields are
    then empty.
    """

    graph: WeightedGraph
    chosen: int
    weight: int
    direct: bool
    stats: PipelineStats = field(default_factory=PipelineStats)
    ledger: LiftLedger = field(default_factory=LiftLedger)
    mate: dict[int, int] = field(default_factory=dict)
    decomposition: Decomposition | None = None
    instance: RootInstance | None = None


@dataclass
class SolveStats:
    nodes_in: int = 0
    nodes_out: int = 0
    twins_removed: int = 0
    components: int = 0
    direct_components: int = 0
    soft_lifts: int = 0
    free_lifts: int = 0
    s_lifts: int = 0
    s_iterations: int = 0
    rescans: int = 0
    detached: int = 0
    m_cliques: int = 0
    strips: int = 0
    isolated: int = 0

    @property
    def node_growth(self) -> float:
        return self.nodes_out / self.nodes_in if self.nodes_in else 1.0

    def as_dict(self) -> dict[str, float]:
        out: dict[str, float] = dict(asdict(self))
        out["node_growth"] = round(self.node_growth, 4)
        return out


@dataclass
class SolveResult:
    """Optimum weight, the chosen tags in input order, and run details."""

    weight: int
    nodes: list[Tag]
    stats: SolveStats
    runs: list[ComponentRun]
    twins: TwinLedger
    oracle: int | None = None


def solve_component(g: WeightedGraph, *, certify: bool = False) -> ComponentRun:
    """Solve one connected, twin-free, claw-free graph.

    Components with an irregular node and independence number at most 3
    are solved directly; all others go through the lifting phases and the
    matching instance.
    """
    if len(g) <= 1 or (irregular_nodes(g) and alpha_at_most(g, g.alive, 3)):
        w, s = ComponentSolver(g).solve(g.alive, small_alpha=True)
        return ComponentRun(g, s, w, True)
    state = run(g, certify=certify)
    lifted = state.g
    if certify:
        why = basic_violation(lifted, state.mate)
        if why is not None:
            raise PipelineError("basic", why)
    dec = decompose_basic(lifted, state.mate)
    inst = build_root_instance(lifted, dec, ComponentSolver(lifted))
    result = solve_root(inst)
    weight, chosen = decode(lifted, inst, result)
    if certify:
        for i in inst.strips:
            why = gadget_violation(lifted, inst, dec, i)
            if why is not None:
                raise PipelineError("gadget", why)
    bonus = state.ledger.pair_bonus()
    try:
        original = unwind(chosen, state.ledger)
    except LiftError as exc:
        raise PipelineError("unwind", str(exc)) from exc
    if g.total_weight(original) != weight - bonus or not g.is_stable(original):
        raise PipelineError("unwind", "unwound set lost weight or stability")
    return ComponentRun(
        lifted,
        original,
        weight - bonus,
        False,
        state.stats,
        state.ledger,
        dict(state.mate),
        dec,
        inst,
    )


def solve(g: WeightedGraph, *, certify: bool = False) -> SolveResult:
    """Maximum weight stable set of a claw-free graph.

    Parameters
    ----------
    g : WeightedGraph
        Input graph; left unchanged.
    certify : bool
        Run every structural check, and compare with the brute-force oracle
        when the graph is small enough.

    Raises
    ------
    NotClawFree
        With a claw witness.
    PipelineError
        When an internal guarantee fails.

    Examples
    --------
    >>> c5 = WeightedGraph([1] * 5, [(i, (i + 1) % 5) for i in range(5)])
    >>> solve(c5).weight
    2
    """
    claw = find_claw(g)
    if claw is not None:
        raise NotClawFree(tuple(g.tag[v] for v in claw))
    g.check_weight_budget()
    reduced, twins = remove_twins(g)
    stats = SolveStats(nodes_in=len(g), twins_removed=len(twins.records))
    runs = []
    chosen_tags: list[Tag] = []
    for comp in reduced.components():
        sub, _ = reduced.subgraph(comp)
        part = solve_component(sub, certify=certify)
        runs.append(part)
        chosen_tags.extend(sub.tags_of(part.chosen))
        stats.components += 1
        stats.nodes_out += len(part.graph)
        if part.direct:
            stats.direct_components += 1
            continue
        for name in ("soft_lifts", "free_lifts", "s_lifts", "s_iterations", "rescans", "detached"):
            setattr(stats, name, getattr(stats, name) + getattr(part.stats, name))
        assert part.decomposition is not None
        kinds = [c.kind for c in part.decomposition.components]
        stats.m_cliques += kinds.count("clique")
        stats.strips += kinds.count("strip")
        stats.isolated += kinds.count("isolated")
    stats.nodes_out += len(g) - len(reduced)

    tags = reinsert_twins(chosen_tags, twins)
    mask = g.mask_of_tags(tags)
    weight = sum(r.weight for r in runs)
    if not g.is_stable(mask) or g.total_weight(mask) != weight:
        raise PipelineError("twins", "reinserted set lost weight or stability")
    oracle = None
    if certify and len(g) <= MWSS_LIMIT:
        oracle, _ = brute_mwss(g)
        if oracle != weight:
            raise PipelineError("oracle", f"solver weight {weight} differs from oracle {oracle}")
    return SolveResult(weight, g.tags_of(mask), stats, runs, twins, oracle)
