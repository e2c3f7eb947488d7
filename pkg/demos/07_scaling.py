"""How running time and graph growth behave as instances get larger."""

# %%
# The lifted graph stays within a small multiple of the input.  Running
# time per doubling varies with the instance, since each size draws a fresh
# graph; over 200, 400 and 800 nodes the ratio has stayed well under eight.
# Sizes here are kept small so the script finishes in seconds.

import time

from clawfree import solve
from clawfree.oracle import GenModel, gen_instance

previous = None
print(f"{'n':>5s} {'seconds':>8s} {'ratio':>6s} {'growth':>7s} {'lifts':>6s}")
for n in (100, 200, 400):
    g = gen_instance(GenModel("line", n, seed=1))
    t0 = time.perf_counter()
    result = solve(g)
    elapsed = time.perf_counter() - t0
    s = result.stats
    ratio = f"{elapsed / previous:6.2f}" if previous else "     -"
    print(f"{n:5d} {elapsed:8.3f} {ratio} {s.node_growth:7.2f} {s.soft_lifts + s.free_lifts + s.s_lifts:6d}")
    previous = elapsed
