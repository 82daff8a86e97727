"""
Recovering the implementing operators
=====================================

Local factors at each member are glued along chains of comparable members.
The result for Phi_1 is a permutation U with Phi_1(A) = U A U^-1; for Phi_2
the block is twisted and Phi_2(A) = U A^T V*.
"""

from cslrank import reconstruct
from cslrank.demos import phi1_spec, phi2_spec

for spec in (phi1_spec(), phi2_spec()):
    rec = reconstruct(spec)
    print("components:", len(rec.graph.components), " cycles ok:", bool(rec.cycles))
    for (lo, hi), lam in rec.graph.edges.items():
        print(f"  lambda {lo!r} <= {hi!r}: {lam}")
    for b in rec.implementation.blocks:
        print(" ", b.mode, "U =", b.U)
    print("  certificate:", rec.implementation.certificate)
