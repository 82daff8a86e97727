"""
Diagonal scaling on A_inf
=========================

The infinite algebra is cut to its leading 6x6 corner.  Entry (i, j) is
multiplied by i/j, which is conjugation by diag(1, ..., 6).
"""

from cslrank import apply, reconstruct, unit
from cslrank.demos import ainf_diag_spec

spec = ainf_diag_spec()
print(spec.source_mask.star_pattern())

for i, j in [(1, 2), (3, 2), (3, 4), (5, 4), (5, 6)]:
    print(f"({i},{j}) ->", apply(spec, unit(6, i, j))[i - 1, j - 1])

rec = reconstruct(spec)
print("components:", len(rec.graph.components))
print("U =", rec.implementation.blocks[0].U)
