"""Embed a cycle into two kinds of trees and measure what each edge pays.

Run: python3 demos/tree_embeddings.py [seed]
"""

import sys

import numpy as np

from lowdiam import (CallLedger, OracleConfig, RandomStream,
                     all_pairs_distances, build_hst, build_htsd,
                     build_projected_tree, generate_graph, p_stretch,
                     stretch_per_edge, verify_domination)

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 2

g = generate_graph("cycle(64,1)")
cfg = OracleConfig()
h = build_htsd(g, 2.0, cfg, RandomStream(seed, ("demo", "embed")),
               CallLedger())
print(f"hierarchy on unit C_64: {h.k + 1} levels, budgets from "
      f"{h.d_seq[0]:g} down to {h.d_seq[-1]:g}")
print()

# Projected tree: every tree vertex is a clone of a graph vertex and every
# tree edge is a real graph edge, so walking the tree is walking the graph.
pt = build_projected_tree(h)
stretch = stretch_per_edge(pt)
print(f"projected tree: {pt.node_count} clones over {g.n} vertices")
print(f"  per-edge stretch: min {stretch.min():g}, max {stretch.max():g}, "
      f"mean {stretch.mean():g}")
hist = dict(zip(*np.unique(stretch, return_counts=True)))
print(f"  distribution: { {float(k): int(v) for k, v in hist.items()} }")
print(f"  (one cycle edge is severed at the top level and pays the whole "
      f"detour; the rest are tree edges)")

tree_loads = pt.loads()
hier_loads = h.cumulative_loads()
edge_keys = list(zip(g.eu.tolist(), g.ev.tolist()))
assert all(tree_loads.get(e, 0) == c
           for e, c in zip(edge_keys, hier_loads.tolist()))
print("  edge loads in the tree match the hierarchy count for count")
print()

# The 2-separated tree trades edge identity for geometry: lengths halve
# per level, so distances have a closed form from the meeting level alone.
hst = build_hst(h)
hstretch = stretch_per_edge(hst)
print(f"2-separated tree: depth {hst.k}, root edge length {hst.d_seq[0]:g}")
print(f"  per-edge stretch: min {hstretch.min():g}, max {hstretch.max():g}, "
      f"mean {hstretch.mean():g}")
print(f"  every pair meets at the root here, so all tree distances equal "
      f"{hst.distance(0, 1):g}")
print()

# Domination: no tree may ever report a distance below the graph's.
apsp = all_pairs_distances(g)
for name, tree in (("projected", pt), ("2-separated", hst)):
    rep = verify_domination(tree, g, apsp=apsp)
    print(f"{name}: domination checked on {rep['pairs']} pairs, "
          f"{len(rep['violations'])} violations")
print()

# Sub-linear cost functions only care about stretch^p; at p = 1/2 the
# heavy detour hardly matters.
for name, arr in (("projected", stretch), ("2-separated", hstretch)):
    print(f"{name} mean p-stretch at p=1/2: {np.mean(arr ** 0.5):.4f}")
print(f"single-edge example, p_stretch(tree, 0, 1, 0.5): "
      f"{p_stretch(pt, 0, 1, 0.5):g}")
