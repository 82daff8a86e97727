"""
Maps that are not rank preserving
=================================

Three ways a candidate map gets rejected: a random search finds a rank
counterexample, the lambda scalars fail to multiply to 1 around a cycle, or
a proposed implementation disagrees with the map on some units.
"""

from cslrank import Implementation, Matrix, check_rank_preserving, chain_graph, classify_all, cycle_check, reconstruct, verify
from cslrank.demos import collapsing_spec, perturbed_crown_spec, phi1_spec
from cslrank.reconstruct import Block

# both diagonal units go to E_11
v = check_rank_preserving(collapsing_spec())
print(v.status, "A =", v.counterexample, f"rank {v.source_rank} -> {v.image_rank}")

# identity on the crown algebra with one entry doubled: every member looks
# fine on its own, the hexagon does not
spec = perturbed_crown_spec(2)
cyc = cycle_check(chain_graph(spec, classify_all(spec)))
for bad in cyc.violations:
    print("cycle", " -> ".join(map(repr, bad["cycle"])), "product", bad["product"])

# zero one column of a correct implementation
spec = phi1_spec()
(b,) = reconstruct(spec).implementation.blocks
cols = b.U.columns()
cols[0] = cols[0].scale(0)
broken = Implementation([Block(b.coords_G, b.coords_F, b.mode, Matrix.from_columns(cols), b.V)], 4, 4)
print("failing units:", [f["unit"] for f in verify(spec, broken).failures])
