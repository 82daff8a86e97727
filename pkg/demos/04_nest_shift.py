"""
The shift on a nest
===================

Every entry of an upper-triangular 6x6 matrix moves one step down the
diagonal of a 7x7 one.  The recovered U is the rectangular shift, rank is
preserved, and the map misses the first row and column of the target.
"""

from cslrank import reconstruct
from cslrank.demos import nest_shift_spec, shift_matrix

spec = nest_shift_spec(6)
impl = reconstruct(spec).implementation
rep = impl.report

print("U =", impl.blocks[0].U)
print("equals S:", impl.blocks[0].U == shift_matrix(6))
print(f"{rep.units_checked} units verified, certificate {rep.certificate}")
print(f"image dimension {rep.image_dim} of {rep.target_algebra_dim}")
