"""
A tour of the supported lattices
================================

Build the two code families, poke at their parity checks, and verify
the homology facts the decoder relies on: errors that slip past every
check are exactly the ones whose class is non-trivial.
"""

from qecdesk import geometry

# build_planar(d) lays out a distance-d planar patch with rough left and
# right columns; build_toric(L) wraps an L-by-L grid in both directions.
for code in (geometry.build_planar(3), geometry.build_planar(5),
             geometry.build_toric(4)):
    print(f"{code.kind}  n={code.n} data edges, "
          f"{len(code.h_x)} checks, k={geometry.logical_count(code)} logical")

# Every edge knows its lattice coordinates.  On the planar-3 patch the
# horizontal edge at row 0, column 0 carries index 0:
planar = geometry.build_planar(3)
print("\nedge 0 sits at", planar.edge_coords[0])

# A single error on one interior edge lights the checks touching it.
# Syndromes are packed integers, one bit per check.
e = 1 << planar.edge_index[("h", 0, 1)]
s = geometry.syndrome_css(planar.h_x, planar.n, e)
lit = [i for i in range(len(planar.h_x)) if (s >> i) & 1]
print("one interior error lights checks", lit)

# An edge on the rough boundary touches only one check -- the other
# endpoint is the boundary itself, where chains may terminate freely.
e = 1 << planar.edge_index[("h", 0, 0)]
s = geometry.syndrome_css(planar.h_x, planar.n, e)
lit = [i for i in range(len(planar.h_x)) if (s >> i) & 1]
print("a boundary error lights only", lit)

# The interesting errors are the silent ones.  A full row of horizontal
# edges crosses the patch, annihilates every check, and flips the
# encoded bit: syndrome zero, class non-trivial.
row = 0
for c in range(planar.d):
    row ^= 1 << planar.edge_index[("h", 1, c)]
assert geometry.syndrome_css(planar.h_x, planar.n, row) == 0
cls = geometry.homology_class(planar, row)
print(f"\nrow-crossing chain: syndrome 0, class {cls.label} "
      f"(trivial={cls.trivial})")

# Two crossings cancel: the combined chain bounds a region, so the
# encoded state is untouched even though each row alone would flip it.
row2 = 0
for c in range(planar.d):
    row2 ^= 1 << planar.edge_index[("h", 2, c)]
cls = geometry.homology_class(planar, row ^ row2)
print(f"two crossings: class {cls.label} (trivial={cls.trivial})")

# The minimum weight of a non-trivial silent chain is the code distance.
# (The search is exhaustive over the cycle space, so only the small
# codes qualify.)
for code in (geometry.build_planar(3), geometry.build_toric(4)):
    w = geometry.min_logical_weight(code)
    d = code.d if code.kind == "planar" else code.L
    print(f"{code.kind} d={d}: lightest logical has weight {w}")
    assert w == d

# On the torus there are two independent non-trivial directions, so two
# encoded qubits.  Each wrap-around cycle is silent under the checks the
# decoder watches:
toric = geometry.build_toric(4)
for cyc in toric.logical_z:
    assert geometry.syndrome_css(toric.h_x, toric.n, cyc) == 0
print(f"\ntoric-4: {len(toric.logical_z)} independent silent cycles, "
      f"k={geometry.logical_count(toric)}")
