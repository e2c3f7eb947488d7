"""Seeded instance generators and the plain-text instance format."""

# %%
# Three families are available.  Line graphs come from random root
# multigraphs, circular interval graphs from arcs on a circle, and the mixed
# family glues small claw-free blocks together.  Every family is claw-free by
# construction, and a seed fixes the instance completely.

from clawfree import find_claw, parse, render, solve
from clawfree.oracle import GenModel, gen_instance, line_graph, circular_interval_graph

for kind in ("line", "circular", "mixed"):
    g = gen_instance(GenModel(kind, n=30, seed=4))
    print(f"{kind:9s} nodes={len(g):3d} edges={g.edge_count():3d} claw={find_claw(g)}")

# %%
# The same seed gives the same graph, byte for byte.

a = render(gen_instance(GenModel("circular", 20, seed=9)))
b = render(gen_instance(GenModel("circular", 20, seed=9)))
print("deterministic:", a == b)

# %%
# The building blocks are public too.  The line graph of K4 is the
# octahedron; a single arc covering the whole circle gives a clique.

octahedron = line_graph([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
print("L(K4):", len(octahedron), "nodes,", octahedron.edge_count(), "edges")
ring = circular_interval_graph(8, [(i, 3) for i in range(0, 8, 2)])
print("ring of arcs:", ring.edge_count(), "edges, optimum", solve(ring).weight)

# %%
# Instances are stored as text: a header line, one weight line per node and
# one line per edge.  Parsing what was rendered gives the same text back.

text = render(gen_instance(GenModel("line", 8, seed=1)), comment="eight line-graph nodes")
print(text)
print("round trip:", render(parse(text), comment="eight line-graph nodes") == text)
