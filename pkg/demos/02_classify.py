"""
Consistent and twisted members
==============================

For every member N of the interesting family, a rank-preserving map either
keeps the vector and functional sides apart (consistent) or swaps them
(twisted).  Two maps on A_4 show both behaviours.
"""

from cslrank import classify_all, decompose
from cslrank.demos import mixed_blocks_spec, phi1_spec, phi2_spec

for name, spec in (("Phi_1", phi1_spec()), ("Phi_2", phi2_spec())):
    c = classify_all(spec)
    print(name)
    for N in c.family:
        e = c.entries[N]
        print(f"  {N!r:10} {e.tag:11} case={e.evidence.get('case')}")

# a direct sum of the two splits into a consistent and a twisted half
spec = mixed_blocks_spec()
d = decompose(spec, classify_all(spec))
print("M_c =", d.M_c, " M_t =", d.M_t)
