"""
The decoding graph: where likelihood becomes geometry
=====================================================

Between the lattice and the decoder sits a weighted graph.  Each check
becomes a node once per round-slot; each way an error can connect two
checks becomes an edge whose weight is the negative log-likelihood of
that error.  Decoders then talk about distances instead of
probabilities: the likeliest explanation is the shortest path.
"""

import math

from qecdesk import decgraph, geometry

# The weight of a flip channel.  Rare errors are expensive, a coin
# flip is free, and the scale is exactly log((1-p)/p).
for p in (0.001, 0.01, 0.1, 0.5):
    print(f"p={p:<6} weight {decgraph.edge_weight(p):.3f}")
assert decgraph.edge_weight(0.5) == 0.0

# Wire a two-round window over the planar-3 patch.  Space edges join
# checks within a slot, boundary edges run to the single virtual node,
# and time edges join the same check across consecutive slots (they
# exist because a lying measurement looks like a defect pair in time).
code = geometry.build_planar(3)
g = decgraph.build_spacetime(code, window=2, p_data=0.01, q_meas=0.002)
kinds = {}
for e in g.edges:
    kinds[e.kind] = kinds.get(e.kind, 0) + 1
print(f"\n{len(g.adj)} nodes, {len(g.edges)} edges by kind: {kinds}")

# Edge weights encode the noise model: time edges are dearer than space
# edges here because measurement lies (0.002) are rarer than data
# errors (0.01).
w_space = next(e.weight for e in g.edges if e.kind == "space")
w_time = next(e.weight for e in g.edges if e.kind == "time")
print(f"space edge {w_space:.3f}, time edge {w_time:.3f}")
assert w_time > w_space

# Distances answer "what is the likeliest way to pair these defects?".
# Two adjacent checks in slot 0: one data error explains them.
m = len(code.h_x)
res = decgraph.shortest_distance(g, 0, 1)
print(f"\ncheck 0 -> check 1: weight {res.weight:.3f}, "
      f"via data edges {res.data_edges}")

# The same check one slot later: a single measurement lie explains it,
# and the path uses no data edges at all.
res = decgraph.shortest_distance(g, 0, m + 0)
print(f"check 0 -> itself next slot: weight {res.weight:.3f}, "
      f"data edges {res.data_edges} (a lie, not an error)")

# Paths may run through the boundary node: two errors on opposite
# rough edges explain a far-apart defect pair without a chain ever
# crossing the middle of the patch.
bnode = len(g.adj) - 1
res_b = decgraph.shortest_distance(g, 0, bnode)
res_far = decgraph.shortest_distance(g, 0, m - 1)
print(f"check 0 -> boundary {res_b.weight:.3f}; "
      f"check 0 -> opposite corner {res_far.weight:.3f} "
      f"(via edges {res_far.data_edges}, an escape on each side)")

# Multiplying probabilities is adding weights: a two-edge explanation
# costs exactly twice a one-edge explanation, which is why Dijkstra on
# this graph is the same computation as maximizing likelihood over
# independent flips.
two_hop = decgraph.shortest_distance(g, 0, 3)
assert math.isclose(two_hop.weight, 2 * w_space)
print(f"\ncheck 0 -> check 3: {two_hop.weight:.3f} = 2 x {w_space:.3f}")
