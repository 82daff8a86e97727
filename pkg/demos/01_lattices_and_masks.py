"""
Lattices, predecessors and star patterns
========================================

A lattice of coordinate sets determines which matrix entries its algebra may
use.  Here the four-dimensional algebra A_4 is recovered from its star
pattern, and the rank-one test is compared against the mask.
"""

from cslrank import interesting_family, lattice_from_mask, mask, rank_one_member
from cslrank.algebra import basis
from cslrank.demos import a2n_pattern

# the star pattern: odd rows reach their neighbours, row 1 wraps around
L = lattice_from_mask(4, a2n_pattern(2))
print("elements:", list(L))
print(mask(L).star_pattern())

# members whose predecessor is not everything carry rank-one operators
F = interesting_family(L)
for N in F:
    print(f"{N!r:10} N_- = {F.pred[N]!r:10} co = {F.co(N)!r}")

# e_i (x) e_j* belongs to the algebra exactly when (i, j) is starred
for i in range(1, 5):
    row = ["*" if rank_one_member(L, basis(4, i), basis(4, j)) else "." for j in range(1, 5)]
    print(" ".join(row))
