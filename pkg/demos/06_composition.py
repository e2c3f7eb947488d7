"""From a basic graph to a weighted matching problem and back."""

# %%
# After the liftings, deleting the matching splits the graph into cliques
# and strips.  Each strip is solved four times, once per choice of its two
# boundary nodes, and those values become edge weights of a small multigraph.
# A maximum weight matching there, plus a fixed offset, is the optimum.

from clawfree.composition import (
    ComponentSolver,
    build_root_instance,
    decode,
    decompose_basic,
    gadget_violation,
    max_weight_matching,
    solve_root,
    strip_values,
)
from clawfree.graph import remove_twins
from clawfree.oracle import GenModel, brute_matching, brute_mwss, gen_instance
from clawfree.pipeline import run

g, _ = remove_twins(gen_instance(GenModel("line", 12, seed=8)))
h, _ = g.subgraph(g.components()[0])
state = run(h, certify=True)
basic, mate = state.g, state.mate
dec = decompose_basic(basic, mate)
kinds = [c.kind for c in dec.components]
print(len(basic), "nodes:", kinds.count("clique"), "cliques,", kinds.count("strip"), "strips")

# %%
# The four boundary values of one strip.  Digit i says whether boundary
# node i is taken.

solver = ComponentSolver(basic)
index = kinds.index("strip")
print("strip values:", strip_values(basic, dec.components[index], index, solver).values)

# %%
# The multigraph, rendered as text (first lines only), and its matching.

inst = build_root_instance(basic, dec, solver)
print("\n".join(inst.render().splitlines()[:4]), "\n...")
result = solve_root(inst)
weight, chosen = decode(basic, inst, result)
print("matching weight", result.weight, "+ offset", inst.offset, "=", weight)
print("brute force on the basic graph:", brute_mwss(basic, limit=200)[0])

# %%
# Each strip's edges are checked against all four boundary patterns.

problems = [why for i in inst.strips if (why := gadget_violation(basic, inst, dec, i)) is not None]
print("strips checked:", len(inst.strips), "problems:", problems)

# %%
# The matching engine is independent of the rest and is checked against an
# exhaustive search on small inputs.

edges = [(0, 1, 5), (1, 2, 1), (2, 3, 5), (0, 3, 2)]
print("engine", max_weight_matching(edges).weight, "brute", brute_matching(edges)[0])
