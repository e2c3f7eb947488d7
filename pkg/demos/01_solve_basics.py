"""Solving small claw-free graphs and checking the answers by brute force."""

# %%
# A claw-free graph has no node with three pairwise non-adjacent neighbours.
# The five-cycle is the smallest interesting one: its best stable set has two
# nodes.

from clawfree import NotClawFree, WeightedGraph, solve
from clawfree.oracle import brute_mwss

c5 = WeightedGraph([1] * 5, [(i, (i + 1) % 5) for i in range(5)])
result = solve(c5, certify=True)
print("C5:", result.weight, result.nodes)

# %%
# Weights change the answer.  The net is a triangle with one pendant per
# corner; heavy pendants win over any triangle node.

net = WeightedGraph([1, 1, 1, 5, 5, 5], [(0, 1), (1, 2), (0, 2), (0, 3), (1, 4), (2, 5)])
result = solve(net, certify=True)
print("net:", result.weight, result.nodes, "oracle says", result.oracle)

# %%
# Tags travel with the nodes, so answers come back in the caller's names.

cities = WeightedGraph(
    [4, 3, 6, 2],
    [(0, 1), (1, 2), (2, 3)],
    tags=["oslo", "bergen", "tromso", "bodo"],
)
print("path with tags:", solve(cities).nodes)

# %%
# Graphs that contain a claw are rejected with a witness, centre first.

star = WeightedGraph([1] * 4, [(0, 1), (0, 2), (0, 3)])
try:
    solve(star)
except NotClawFree as exc:
    print("rejected:", exc, exc.witness)

# %%
# The statistics say what the solver did.  Twins (nodes with the same closed
# neighbourhood) are merged first.  Small components with an irregular node
# are solved directly; the rest are lifted and handed to the matching stage.

from clawfree.oracle import GenModel, gen_instance

g = gen_instance(GenModel("line", 24, seed=3))
result = solve(g, certify=True)
for key, value in result.stats.as_dict().items():
    print(f"  {key}: {value}")
assert result.weight == brute_mwss(g)[0]
