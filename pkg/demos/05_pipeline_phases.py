"""Stepping through the reduction phases on one component."""

# %%
# The pipeline works on one connected, twin-free component at a time.  Each
# phase can be run by hand, and with ``certify=True`` each one checks the
# structure it promises before returning.

from clawfree.graph import remove_twins
from clawfree.oracle import GenModel, check_basic, gen_instance
from clawfree.pipeline import (
    extract_quasiline,
    free_lift_all,
    restore_detached,
    s_lift_loop,
    soft_lift_all,
    start,
)

g, _ = remove_twins(gen_instance(GenModel("line", 40, seed=22)))
component = max(g.components(), key=lambda c: bin(c).count("1"))
h, _ = g.subgraph(component)
print("component:", len(h), "nodes,", h.edge_count(), "edges")


def show(label, state):
    print(f"{label:>10s}: {len(state.g):4d} nodes, {len(state.mate) // 2:3d} matching edges")


# %%
# Start: a canonical stable set and an empty matching.

state = start(h, certify=True)
show("start", state)

# %%
# Soft phase: every soft clique met by the stable set is split along its
# rigid parts.  The matching grows by one edge per new part.

soft_lift_all(state)
show("soft", state)

# %%
# Extraction: parts of the graph around nodes whose neighbourhood is not two
# cliques are set aside as strips, leaving a quasi-line graph.

extract_quasiline(state)
show("extract", state)
print("   strips set aside:", len(state.detached))

# %%
# Free phase: free components that can be lifted become cliques whose every
# boundary edge is a matching edge.

free_lift_all(state)
show("free", state)

# %%
# The last loop lifts cover cliques until none qualifies.  Then the strips
# come back and the result is a basic graph: every component left after
# deleting the matching touches at most two matching edges, or is a clique.

s_lift_loop(state)
restore_detached(state)
show("final", state)
print("basic:", check_basic(state.g, state.mate))
print(f"lifts: {state.stats.soft_lifts} soft, {state.stats.free_lifts} free, {state.stats.s_lifts} in the last loop")
