"""Rigid edges, soft cliques and the lifting operation."""

# %%
# An edge is rigid when both ends see a common pair of non-adjacent nodes.
# A maximal clique whose rigid edges leave it disconnected is soft: it can be
# split along the rigid parts without creating a claw.

from clawfree import LiftLedger, WeightedGraph, lift, solve, unwind
from clawfree.cliques import is_rigid_edge, rigid_partition
from clawfree.graph import find_claw
from clawfree.oracle import brute_mwss, check_liftable

p4 = WeightedGraph([1, 1, 1, 1], [(0, 1), (1, 2), (2, 3)], tags=[1, 2, 3, 4])
print("edge 2-3 rigid:", is_rigid_edge(p4, 1, 2))
middle = p4.mask_of_tags([2, 3])
parts = rigid_partition(p4, middle)
print("rigid parts of {2,3}:", [p4.tags_of(p) for p in parts], "liftable:", check_liftable(p4, middle, parts))

# %%
# Lifting the middle edge removes it and threads a short path in its place.
# The new nodes carry a weight larger than anything in the graph, and the
# ledger remembers how much that adds to the optimum.

g = p4.copy()
ledger = LiftLedger()
mate: dict[int, int] = {}
stable = g.mask_of_tags([2, 4])
stable, record = lift(g, middle, parts, stable, mate, phase="soft", w_m=2, ledger=ledger, certify=True)
print("after lifting:", len(g), "nodes,", g.edge_count(), "edges, claw:", find_claw(g))
print(ledger.dump(g))

# %%
# The lifted graph's optimum equals the original plus the bonus, and the
# ledger maps an optimal set back.

lifted_best, chosen = brute_mwss(g)
print("lifted optimum", lifted_best, "bonus", ledger.pair_bonus(), "original optimum", brute_mwss(p4)[0])
back = unwind(chosen, ledger)
print("unwound:", g.tags_of(back))

# %%
# The solver runs these liftings in phases on every component; the counts
# show up in its statistics.

print(solve(p4).stats.soft_lifts, "soft lift(s) inside the solver for P4")
