import random
from fractions import Fraction

import pytest

from cslrank.algebra import basis, mask, random_invertible_member, unit
from cslrank.demos import (
    ainf_diag_spec,
    boolean_lattice,
    collapsing_spec,
    crown_lattice,
    mixed_blocks_spec,
    nest,
    nest_shift_spec,
    perturbed_crown_spec,
    phi1_spec,
    phi2_spec,
    shift_matrix,
)
from cslrank.errors import CoherenceError, InputError, NotRankPreserving, RefutationError, SingularError
from cslrank.exactlin import ONE, Matrix, Scalar, collinear, inverse, outer, rank
from cslrank.lattice import comparable, coords, orthocomplement_lattice
from cslrank.rankmap import MapSpec, Tag, apply, classify_all, spec_from_function, transpose_spec
from cslrank.reconstruct import (
    Block,
    Implementation,
    chain_graph,
    cycle_check,
    factor_scalar,
    lambda_edge,
    local_factors,
    psi,
    reconstruct,
    spec_from_factors,
    verify,
)

from conftest import lattices


def e(n, k):
    return basis(n, k)


def round_trip(L, rng):
    M = mask(L)
    U, W = random_invertible_member(M, rng), random_invertible_member(M, rng)
    return U, W.H, spec_from_factors(L, L, U, W.H)


class TestLocalFactors:
    def test_phi1_at_1(self):
        lf = local_factors(phi1_spec(), coords(4, 1), Tag.CONSISTENT)
        assert lf.U == {1: e(4, 3)}
        assert lf.V == {1: e(4, 3), 2: e(4, 4), 4: e(4, 2)}
        assert lf.base == (1, 1)

    def test_identity_on_diagonal(self):
        L = boolean_lattice(2)
        spec = spec_from_function(L, L, lambda A: A)
        lf = local_factors(spec, coords(2, 1), Tag.ISOLATED)
        assert lf.U == {1: e(2, 1)} and lf.V == {1: e(2, 1)}
        assert lf.mode is Tag.CONSISTENT and lf.flags == ["isolated"]

    def test_phi2_twisted_at_1(self):
        spec = phi2_spec()
        lf = local_factors(spec, coords(4, 1), Tag.TWISTED)
        assert lf.V == {1: e(4, 4)}
        for j in (1, 2, 4):
            assert spec.image(1, j) == outer(lf.U[j], lf.V[1])

    def test_rectangle_identity_everywhere(self):
        for spec in (phi1_spec(), phi2_spec(), ainf_diag_spec(), nest_shift_spec(4)):
            c = classify_all(spec)
            for N in c.family:
                lf = local_factors(spec, N, c.tag(N))
                for i in N:
                    for j in spec.family.co(N):
                        assert lf.predicted(i, j) == spec.image(i, j)

    def test_wrong_mode_fails(self):
        with pytest.raises(RefutationError):
            local_factors(phi1_spec(), coords(4, 1, 3), Tag.TWISTED)

    def test_rank_two_image(self):
        spec = phi1_spec()
        images = dict(spec.images)
        images[(1, 1)] = Matrix.identity(4)
        with pytest.raises(NotRankPreserving):
            local_factors(MapSpec(spec.source, spec.target, images), coords(4, 1), Tag.CONSISTENT)


class TestLambda:
    def test_self_edge(self):
        lf = local_factors(phi1_spec(), coords(4, 1, 3), Tag.CONSISTENT)
        assert lambda_edge(lf, lf) == ONE

    def test_ainf_edge(self):
        spec = ainf_diag_spec()
        a = local_factors(spec, coords(6, 1), Tag.CONSISTENT)
        b = local_factors(spec, coords(6, 1, 2, 3), Tag.CONSISTENT)
        lam = lambda_edge(a, b)
        assert a.U[1] == b.U[1].scale(lam)
        for j in b.V:
            assert b.V[j] == a.V[j].scale(lam.conj())

    def test_diagonal_conjugation_against_ground_truth(self):
        rng = random.Random(40)
        for L in lattices(15, seed=41, max_n=6):
            n = L.n
            D = Matrix.diag([Scalar(rng.randint(1, 9), rng.randint(-2, 2)) for _ in range(n)])
            spec = spec_from_factors(L, L, D, inverse(D).H)
            c = classify_all(spec)
            g = chain_graph(spec, c)
            for (lo, hi), lam in g.edges.items():
                for k, vec in g.factors[lo].U.items():
                    assert collinear(vec, D.column(k - 1))
                    if k in g.factors[hi].U:
                        assert vec == g.factors[hi].U[k].scale(lam)

    def test_cocycle(self):
        rng = random.Random(42)
        checked = 0
        for L in lattices(40, seed=43):
            _, _, spec = round_trip(L, rng)
            g = chain_graph(spec, classify_all(spec))
            for comp in g.components:
                ms = comp.members
                for a in ms:
                    for b in ms:
                        for c in ms:
                            if a < b < c:
                                assert g.lam(a, c) == g.lam(a, b) * g.lam(b, c)
                                checked += 1
        assert checked > 0

    def test_lambda_reciprocal(self):
        g = chain_graph(ainf_diag_spec(), classify_all(ainf_diag_spec()))
        for lo, hi in g.edges:
            assert g.lam(lo, hi) * g.lam(hi, lo) == ONE

    def test_incomparable_rejected(self):
        spec = phi1_spec()
        a = local_factors(spec, coords(4, 1), Tag.CONSISTENT)
        b = local_factors(spec, coords(4, 3), Tag.CONSISTENT)
        with pytest.raises(InputError):
            lambda_edge(a, b)


class TestChainGraph:
    def test_a4(self):
        g = chain_graph(phi1_spec(), classify_all(phi1_spec()))
        assert len(g.components) == 1
        comp = g.components[0]
        assert len(comp.members) == 5 and comp.G == coords(4, 1, 2, 3, 4)
        assert comp.root == coords(4, 1)

    def test_diagonal_identity(self):
        L = boolean_lattice(2)
        spec = spec_from_function(L, L, lambda A: A)
        g = chain_graph(spec, classify_all(spec))
        assert [c.members for c in g.components] == [(coords(2, 1),), (coords(2, 2),)]
        assert not g.components[0].G & g.components[1].G

    def test_mixed_blocks(self):
        spec = mixed_blocks_spec()
        g = chain_graph(spec, classify_all(spec))
        assert sorted(len(c.members) for c in g.components) == [5, 5]
        assert {c.mode for c in g.components} == {Tag.CONSISTENT, Tag.TWISTED}

    def test_edges_are_comparable_pairs(self):
        spec = phi1_spec()
        g = chain_graph(spec, classify_all(spec))
        want = {(a, b) for a in g.nodes for b in g.nodes if a < b}
        assert set(g.edges) == want
        assert all(comparable(a, b) for a, b in g.edges)


class TestCycles:
    def test_a4_holds(self):
        g = chain_graph(phi1_spec(), classify_all(phi1_spec()))
        cyc = cycle_check(g)
        assert cyc.ok
        # 8 comparabilities on 5 nodes: 4 tree edges, 4 independent cycles
        assert len(g.edges) == 8

    def test_nest_has_cycles_and_holds(self):
        spec = spec_from_function(nest(6), nest(6), lambda A: A)
        g = chain_graph(spec, classify_all(spec))
        assert len(g.edges) == 15
        assert cycle_check(g)

    def test_perturbed_crown(self):
        spec = perturbed_crown_spec(2)
        g = chain_graph(spec, classify_all(spec))
        cyc = cycle_check(g)
        assert not cyc
        for v in cyc.violations:
            cyc_nodes = v["cycle"]
            assert cyc_nodes[0] == cyc_nodes[-1]
            prod = ONE
            for a, b in zip(cyc_nodes, cyc_nodes[1:]):
                assert comparable(a, b)
                prod = prod * g.lam(a, b)
            assert prod == v["product"] == Scalar(2)

    def test_perturbed_crown_is_not_rank_preserving(self):
        # hexagon block: det = ace + bdf before, 2ace + bdf after
        spec = perturbed_crown_spec(2)
        A = unit(6, 1, 4) + unit(6, 2, 4) + unit(6, 2, 5) + unit(6, 3, 5) + unit(6, 3, 6) + unit(6, 1, 6).scale(-1)
        assert rank(A) == 2 and rank(apply(spec, A)) == 3

    def test_pipeline_refuses_crown(self):
        with pytest.raises(CoherenceError):
            reconstruct(perturbed_crown_spec(2))

    def test_unperturbed_crown(self):
        L = crown_lattice()
        rec = reconstruct(spec_from_function(L, L, lambda A: A))
        assert rec.implementation.certificate == "exact"


class TestAssembleVerify:
    def test_phi1(self):
        rec = reconstruct(phi1_spec())
        impl = rec.implementation
        assert impl.report.ok and impl.report.units_checked == 8
        P = Matrix([[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]])
        assert factor_scalar(impl.blocks[0], P, P) is not None
        assert impl.certificate == "exact"

    def test_phi2_transpose_form(self):
        impl = reconstruct(phi2_spec()).implementation
        (b,) = impl.blocks
        assert b.mode is Tag.TWISTED
        V = Matrix([[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]])
        assert factor_scalar(b, V, V) is not None
        A = unit(4, 1, 2).scale(3) + unit(4, 3, 4)
        assert impl.evaluate(A) == V @ A.T @ V.T

    def test_shift(self):
        impl = reconstruct(nest_shift_spec(6)).implementation
        rep = impl.report
        assert rep.ok and rep.units_checked == 21 and not rep.surjective
        S = shift_matrix(6)
        assert factor_scalar(impl.blocks[0], S, S) is not None

    def test_global_coherence(self):
        rng = random.Random(44)
        for L in lattices(20, seed=45):
            _, _, spec = round_trip(L, rng)
            rec = reconstruct(spec)
            U = rec.implementation.global_U()
            for comp in rec.graph.components:
                for M in comp.members:
                    s = rec.cycles.potentials[M]
                    for k, vec in rec.graph.factors[M].U.items():
                        assert U.column(k - 1) == vec.scale(s)

    def test_corrupted_implementation(self):
        spec = phi1_spec()
        impl = reconstruct(spec).implementation
        (b,) = impl.blocks
        k = 2
        cols = b.U.columns()
        cols[b.u_coords.index(k)] = cols[0].scale(0)
        bad = Implementation([Block(b.coords_G, b.coords_F, b.mode, Matrix.from_columns(cols), b.V)], 4, 4)
        rep = verify(spec, bad)
        assert not rep.ok and rep.certificate == "none"
        assert {f["unit"] for f in rep.failures} == {(i, j) for i, j in spec.source_mask.pairs() if i == k}

    def test_collapse_gets_no_certificate(self):
        spec = collapsing_spec()
        try:
            impl = reconstruct(spec).implementation
        except RefutationError:
            return
        assert impl.certificate != "exact"

    def test_scaling_invariance(self):
        s = Scalar(Fraction(2, 3), 1)
        for spec in (phi1_spec(), phi2_spec(), ainf_diag_spec()):
            scaled = spec.scaled(s)
            rec = reconstruct(scaled)
            assert rec.implementation.certificate == "exact"
            A = unit(spec.n1, 1, 1)
            assert rec.implementation.evaluate(A) == apply(spec, A).scale(s)

    def test_twisted_round_trip(self):
        rng = random.Random(46)
        for L in lattices(20, seed=47, max_n=6):
            P = orthocomplement_lattice(L)
            MP = mask(P)
            U, W = random_invertible_member(MP, rng), random_invertible_member(MP, rng)
            spec = spec_from_factors(L, P, U, W.H, transpose=True)
            rec = reconstruct(spec)
            impl = rec.implementation
            assert impl.certificate == "exact"
            A = unit(L.n, 1, 1)
            assert impl.evaluate(A) == U @ A.T @ W

    def test_duality_on_phi2(self):
        rec = reconstruct(transpose_spec(phi2_spec()))
        assert all(b.mode is Tag.CONSISTENT for b in rec.implementation.blocks)
        assert rec.implementation.certificate == "exact"


class TestPsi:
    def test_phi1(self):
        spec = phi1_spec()
        p = psi(spec, reconstruct(spec).implementation)
        assert p.phi_identity == Matrix.identity(4)
        assert p.multiplicative and p.matches_conjugation

    def test_two_u_inverse(self):
        rng = random.Random(48)
        for L in lattices(10, seed=49, max_n=6):
            U = random_invertible_member(mask(L), rng)
            Vstar = inverse(U).scale(2)
            spec = spec_from_factors(L, L, U, Vstar.H)
            p = psi(spec, reconstruct(spec).implementation)
            assert p.phi_identity == Matrix.identity(L.n).scale(2)
            assert p.multiplicative and p.matches_conjugation

    def test_phi2_is_not_multiplicative(self):
        assert not psi(phi2_spec()).multiplicative

    def test_singular(self):
        L = boolean_lattice(2)
        V = Matrix([[1, 0], [0, 0]])
        with pytest.raises(SingularError):
            psi(spec_from_factors(L, L, Matrix.identity(2), V))
