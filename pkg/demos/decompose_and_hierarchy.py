"""Decompose a cycle into low-diameter clusters, then stack the levels.

Run: python3 demos/decompose_and_hierarchy.py [seed]
"""

import sys
from collections import Counter

from lowdiam import (CallLedger, DecomposeParams, Graph, OracleConfig,
                     RandomStream, build_htsd, decoupling_level,
                     generate_graph, ledger_report, ts_decompose)

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 1

g = generate_graph("cycle(64,1)")
params = DecomposeParams(delta=512.0, c=2.0, n=g.n)
print(f"unit cycle C_{g.n}, diameter budget {params.delta}")
print(f"  shift rate beta = {params.beta:.6f}")
print(f"  long-edge threshold = {params.long_edge_threshold:.4f} "
      f"(unit edges survive)")
print()

cfg = OracleConfig()
ledger = CallLedger()
tsd = ts_decompose(g, params, cfg, RandomStream(seed, ("demo", "tsd")), ledger)

print(f"{len(tsd.clusters)} clusters after {tsd.iterations} rounds, "
      f"{len(tsd.cut_edges)} cut edges")
for c in tsd.clusters:
    members = sorted(int(v) for v in c.members)
    head = ", ".join(map(str, members[:5])) + (", ..." if len(members) > 5 else "")
    print(f"  round {c.iteration}: {len(members):>2} vertices [{head}], "
          f"tree diameter {c.tree.diameter():.0f} <= {params.delta:.0f}")
rep = ledger_report(ledger)
print(f"oracle calls: {rep['total']} raw, {rep['merged']} after merging "
      f"same-batch rounds")
print()

# Now the full hierarchy, on a graph with two length scales: tight blocks
# of unit edges joined by heavy bridges. The bridges fall to the long-edge
# threshold immediately; the blocks persist as clusters over several levels
# until the budget drops below the unit length.
edges = []
for b in range(8):
    base = 4 * b
    edges += [(base + j, base + j + 1, 1.0) for j in range(3)]
    if b:
        edges.append((base - 1, base, 1000.0))
hg = Graph.from_edges(32, edges)
hstream = RandomStream(seed, ("demo", "htsd"))
h = build_htsd(hg, 2.0, cfg, hstream, CallLedger())
print(f"hierarchy with {h.k + 1} cluster levels, budgets "
      + ", ".join(f"{d:g}" for d in h.d_seq))
for i, level in enumerate(h.levels):
    sizes = sorted((len(c.members) for c in level.clusters), reverse=True)
    shown = ", ".join(map(str, sizes[:6])) + (", ..." if len(sizes) > 6 else "")
    print(f"  level {i}: {len(level.clusters):>2} clusters, sizes [{shown}]")
print()

# Every edge separates at some level; the budget there caps how far apart
# the endpoints can land in any tree built on top of this hierarchy.
decouple = [decoupling_level(h, int(u), int(v)) for u, v in zip(hg.eu, hg.ev)]
hist = Counter(decouple)
print("edges decoupled per level:",
      {lvl: hist[lvl] for lvl in sorted(hist)})
loads = h.cumulative_loads()
print(f"max cumulative edge load across levels: {int(loads.max())}")
