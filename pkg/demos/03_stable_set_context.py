"""The stable set that organises the reduction, and what it says about the graph."""

# %%
# Everything starts from a maximal stable set that cannot be improved by two
# simple local moves: swapping one node for two neighbours that are free
# (see only it), or swapping a node for a free neighbour that sees everything
# the node sees.  Such a set is called canonical here.

from clawfree.oracle import GenModel, check_canonical, gen_instance
from clawfree.stable import canonicalize, classify, free_components, greedy_maximal_stable_set, s_cover, wings
from clawfree.graph import WeightedGraph, popcount, remove_twins

p4 = WeightedGraph([1, 1, 1, 1], [(0, 1), (1, 2), (2, 3)], tags=[1, 2, 3, 4])
start = p4.mask_of_tags([1, 4])
better = canonicalize(p4, start)
print("P4:", p4.tags_of(start), "->", p4.tags_of(better), "canonical:", check_canonical(p4, better))

# %%
# On a generated instance the greedy set is usually close already.  Twins
# are removed first because the local moves cannot tell twins apart.

g, _ = remove_twins(gen_instance(GenModel("line", 40, seed=2)))
s0 = greedy_maximal_stable_set(g)
s = canonicalize(g, s0)
print("greedy size", popcount(s0), "canonical size", popcount(s))

# %%
# Relative to the stable set, each other node is free (one stable
# neighbour), bound (two) or superfree (none).  Claw-freeness rules out
# three or more.

cls = classify(g, s)
print("free", popcount(cls.free), "bound", popcount(cls.bound), "superfree", popcount(cls.superfree))

# %%
# Wings connect pairs of stable nodes.  A stable node with at most two wings
# has a neighbourhood that splits into two cliques; those clique pairs form
# the cover the later phases work on.

wm = wings(g, s, cls)
print("wing pairs:", len(wm.pairs()), "most wings at one node:", max(wm.number.values(), default=0))
cover = s_cover(g, s)
print("cover cliques:", len(cover.all_cliques()), "for", len(cover.cliques), "stable nodes")

# %%
# Free nodes with different stable neighbours that are adjacent form the
# dissimilarity graph; its components that are also maximal cliques are the
# free components.

fs = free_components(g, s, cls)
print("similarity classes:", len(fs.classes), "free components that are maximal cliques:", len(fs.family))
