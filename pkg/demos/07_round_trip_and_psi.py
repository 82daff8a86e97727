"""
Round trips and the multiplicative normalisation
================================================

Build A -> U A V* from random invertible U, V* in the algebra of a random
lattice, reconstruct, and compare.  Dividing by Phi(I) on the right gives a
multiplicative map, conjugation by U.
"""

import random

from cslrank import factor_scalar, mask, psi, random_invertible_member, random_lattice, reconstruct, spec_from_factors

rng = random.Random(0)
for _ in range(5):
    L = random_lattice(rng.randint(3, 7), rng)
    M = mask(L)
    U, W = random_invertible_member(M, rng), random_invertible_member(M, rng)
    spec = spec_from_factors(L, L, U, W.H)
    impl = reconstruct(spec).implementation
    scalars = [factor_scalar(b, U, W.H) for b in impl.blocks]
    p = psi(spec, impl)
    print(f"n={L.n} blocks={len(impl.blocks)} certificate={impl.certificate} "
          f"scalars={[str(c) for c in scalars]} psi multiplicative={p.multiplicative}")
