"""Recovering ``U, V`` with ``Phi(A) = U A V*`` (or ``U A^T V*``) blockwise.

The pipeline:

1. ``local_factors`` builds ``U_N, V_N`` for one member ``N`` of the
   interesting family from the images of the basis rank-ones ``E_ij``,
   ``i`` in ``N``, ``j`` in ``N_-^perp``, and checks that
   ``Phi(E_ij) = U_N e_i (x) (V_N e_j)*`` on the whole rectangle.
2. For comparable ``M <= N`` the two local factorisations differ by one
   scalar ``lam_MN`` (``U_M = lam U_N`` on the shared domain).
3. ``chain_graph`` joins comparable members of equal mode; its connected
   components give the blocks.  Around every cycle the product of the
   ``lam`` must be 1 (``cycle_check``).
4. ``assemble`` rescales each local factor by the path product from a root
   and glues them into one ``U`` and one ``V`` per block.

Twisted members use conjugate-linear ``U, V``.  Writing such a map as a
matrix ``U~`` composed with entrywise conjugation gives
``U(f) (x) V(x)* = U~ conj(f) (V~ conj(x))* = U~ (x (x) f*)^T V~*``,
so a twisted block is evaluated as ``U A^T V*`` with ``U`` indexed by the
functional side and ``V`` by the vector side.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .algebra import mask, unit
from .errors import (
    AlphaError,
    CoherenceError,
    CoverageError,
    FactorError,
    InputError,
    NotRankPreserving,
    OrthogonalityError,
    RefutationError,
    SingularError,
)
from .exactlin import (
    ONE,
    Matrix,
    Scalar,
    Vector,
    collinear,
    inverse,
    match_factor,
    outer,
    rank,
    rank_one_factor,
)
from .lattice import CoordSet, comparable
from .rankmap import Classification, MapSpec, Tag, apply, classify_all, validate


# --- local factors ----------------------------------------------------------


@dataclass
class LocalFactors:
    """``U_N`` and ``V_N`` as 1-indexed coordinate -> image-vector tables.

    Consistent: ``U`` lives on ``N`` and ``V`` on ``N_-^perp``.
    Twisted: ``U`` lives on ``N_-^perp`` and ``V`` on ``N``.
    """

    N: CoordSet
    co: CoordSet
    mode: Tag
    U: dict
    V: dict
    base: tuple
    flags: list = field(default_factory=list)

    @property
    def u_domain(self) -> tuple:
        return tuple(sorted(self.U))

    @property
    def v_domain(self) -> tuple:
        return tuple(sorted(self.V))

    def U_matrix(self) -> Matrix:
        return Matrix.from_columns([self.U[k] for k in self.u_domain])

    def V_matrix(self) -> Matrix:
        return Matrix.from_columns([self.V[k] for k in self.v_domain])

    def predicted(self, i: int, j: int) -> Matrix:
        """``Phi(E_ij)`` according to these factors (``i`` in ``N``, ``j`` in ``N_-^perp``)."""
        if self.mode is Tag.TWISTED:
            return outer(self.U[j], self.V[i])
        return outer(self.U[i], self.V[j])


def _image(spec: MapSpec, i: int, j: int) -> Matrix:
    return spec.image(i, j)


def local_factors(spec: MapSpec, N: CoordSet, mode: Tag) -> LocalFactors:
    """Local factors at ``N`` from the base pair ``(x1, f1)`` = first basis vectors.

    ``Phi(E_{x1 f1}) = u1 (x) v1*`` is factored canonically; every other
    column of ``U_N`` and ``V_N`` is then the unique vector matching
    ``u1`` or ``v1``.  The identity on the full rectangle is checked last:
    its failure means the scalar relating ``Phi(x (x) f*)`` to
    ``U x (x) (V f)*`` is not identically 1, which a rank-preserving map
    cannot produce.
    """
    F = spec.family
    co = F.co(N)
    flags = []
    if mode in (Tag.AMBIGUOUS, Tag.ISOLATED):
        flags.append("mode-ambiguous" if mode is Tag.AMBIGUOUS else "isolated")
        mode = Tag.CONSISTENT
    xs, fs = list(N), list(co)
    for i in xs:
        for j in fs:
            r = rank(_image(spec, i, j))
            if r != 1:
                raise NotRankPreserving(
                    f"Phi(E{(i, j)}) has rank {r} at {N}", {"element": N, "unit": (i, j), "rank": r}
                )
    x1, f1 = xs[0], fs[0]
    u1, v1 = rank_one_factor(_image(spec, x1, f1))
    U, V = {}, {}
    try:
        if mode is Tag.CONSISTENT:
            for i in xs:
                U[i] = match_factor(_image(spec, i, f1), v1)
            for j in fs:
                V[j] = match_factor(_image(spec, x1, j).H, u1)
        else:
            for j in fs:
                U[j] = match_factor(_image(spec, x1, j), v1)
            for i in xs:
                V[i] = match_factor(_image(spec, i, f1).H, u1)
    except FactorError as exc:
        raise AlphaError(f"{N}: images do not share the base factor ({exc})", {"element": N}) from exc
    lf = LocalFactors(N, co, mode, U, V, (x1, f1), flags)
    bad = [(i, j) for i in xs for j in fs if lf.predicted(i, j) != _image(spec, i, j)]
    if bad:
        raise AlphaError(
            f"{N}: {mode} factors fail on {bad}", {"element": N, "mode": mode, "units": bad}
        )
    return lf


# --- lambda scalars ---------------------------------------------------------


def lambda_edge(fM: LocalFactors, fN: LocalFactors) -> Scalar:
    """``lam_MN`` for ``M <= N``: ``U_M = lam U_N`` and ``V_N = conj(lam) V_M`` where both are defined."""
    if not fM.N <= fN.N:
        raise InputError(f"lambda_edge needs {fM.N} <= {fN.N}")
    if fM.mode is not fN.mode:
        raise InputError("lambda_edge needs equal modes")
    if fM.N == fN.N:
        return ONE
    ushared = sorted(set(fM.U) & set(fN.U))
    vshared = sorted(set(fM.V) & set(fN.V))
    ev = {"edge": (fM.N, fN.N)}
    lam = collinear(fM.U[ushared[0]], fN.U[ushared[0]])
    if lam is None or not lam:
        raise CoherenceError(f"U factors at {fM.N} and {fN.N} are not collinear", ev)
    for k in ushared:
        if fM.U[k] != fN.U[k].scale(lam):
            raise CoherenceError(f"U ratio at coordinate {k} differs on edge {fM.N}-{fN.N}", ev)
    lc = lam.conj()
    for k in vshared:
        if fN.V[k] != fM.V[k].scale(lc):
            raise CoherenceError(f"V ratio at coordinate {k} differs on edge {fM.N}-{fN.N}", ev)
    return lam


# --- chain graph ------------------------------------------------------------


@dataclass
class Component:
    root: CoordSet
    members: tuple
    mode: Tag
    G: CoordSet
    F: CoordSet
    flags: list = field(default_factory=list)


@dataclass
class ChainGraph:
    nodes: tuple
    factors: dict
    edges: dict
    adjacency: dict
    components: list

    def lam(self, P: CoordSet, Q: CoordSet) -> Scalar:
        """Directed ``lam_PQ`` for adjacent ``P, Q``."""
        if P == Q:
            return ONE
        if (P, Q) in self.edges:
            return self.edges[(P, Q)]
        return ONE / self.edges[(Q, P)]


def _lex(N: CoordSet):
    return N.members


def chain_graph(spec: MapSpec, c: Classification) -> ChainGraph:
    F = c.family
    factors = {N: local_factors(spec, N, c.tag(N)) for N in F}
    nodes = tuple(F)
    edges = {}
    adjacency = {N: [] for N in nodes}
    for a, M in enumerate(nodes):
        if c.tag(M) is Tag.ISOLATED:
            continue
        for N in nodes[a + 1:]:
            if c.tag(N) is Tag.ISOLATED or factors[M].mode is not factors[N].mode:
                continue
            if not comparable(M, N):
                continue
            lo, hi = (M, N) if M <= N else (N, M)
            edges[(lo, hi)] = lambda_edge(factors[lo], factors[hi])
            adjacency[M].append(N)
            adjacency[N].append(M)

    seen = set()
    components = []
    for start in sorted(nodes, key=_lex):
        if start in seen:
            continue
        comp = []
        queue = deque([start])
        seen.add(start)
        while queue:
            P = queue.popleft()
            comp.append(P)
            for Q in adjacency[P]:
                if Q not in seen:
                    seen.add(Q)
                    queue.append(Q)
        root = min(comp, key=_lex)
        G = F.lattice.empty
        Fs = F.lattice.empty
        for M in comp:
            G = G | M
            Fs = Fs | F.co(M)
        flags = sorted({fl for M in comp for fl in factors[M].flags})
        mode = factors[root].mode
        members = tuple(sorted(comp, key=lambda N: N.sort_key()))
        components.append(Component(root, members, mode, G, Fs, flags))

    for a, C1 in enumerate(components):
        for C2 in components[a + 1:]:
            if C1.G & C2.G or C1.F & C2.F:
                raise OrthogonalityError(
                    f"components rooted at {C1.root} and {C2.root} overlap",
                    {"components": (C1.root, C2.root)},
                )
    return ChainGraph(nodes, factors, edges, adjacency, components)


@dataclass
class CycleCheck:
    ok: bool
    violations: list = field(default_factory=list)
    potentials: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def _spanning_tree(g: ChainGraph, comp: Component) -> tuple:
    pot = {comp.root: ONE}
    parent = {comp.root: None}
    depth = {comp.root: 0}
    queue = deque([comp.root])
    while queue:
        P = queue.popleft()
        for Q in sorted(g.adjacency[P], key=_lex):
            if Q not in pot:
                pot[Q] = pot[P] * g.lam(P, Q)
                parent[Q] = P
                depth[Q] = depth[P] + 1
                queue.append(Q)
    return pot, parent, depth


def _tree_path(parent, depth, A, B) -> list:
    """Nodes from ``A`` up to the common ancestor and down to ``B``."""
    up, down = [A], [B]
    a, b = A, B
    while depth[a] > depth[b]:
        a = parent[a]
        up.append(a)
    while depth[b] > depth[a]:
        b = parent[b]
        down.append(b)
    while a != b:
        a, b = parent[a], parent[b]
        up.append(a)
        down.append(b)
    down.pop()
    return up + down[::-1]


def cycle_check(g: ChainGraph) -> CycleCheck:
    """Every fundamental cycle of a BFS spanning tree has ``lam`` product 1.

    The products are multiplicative over the cycle space, so checking a
    cycle basis checks every cycle.
    """
    violations = []
    potentials = {}
    for comp in g.components:
        pot, parent, depth = _spanning_tree(g, comp)
        potentials.update(pot)
        tree = {frozenset((Q, P)) for Q, P in parent.items() if P is not None}
        for (A, B), lam in g.edges.items():
            if A not in pot or frozenset((A, B)) in tree:
                continue
            product = pot[A] * lam / pot[B]
            if product != ONE:
                # walking the cycle multiplies lam over consecutive pairs to ``product``
                cycle = [A] + _tree_path(parent, depth, B, A)
                violations.append({"edge": (A, B), "cycle": cycle, "product": product})
    return CycleCheck(not violations, violations, potentials)


# --- assembly ---------------------------------------------------------------


@dataclass
class Block:
    coords_G: tuple
    coords_F: tuple
    mode: Tag
    U: Matrix
    V: Matrix

    @property
    def u_coords(self) -> tuple:
        return self.coords_F if self.mode is Tag.TWISTED else self.coords_G

    @property
    def v_coords(self) -> tuple:
        return self.coords_G if self.mode is Tag.TWISTED else self.coords_F

    def evaluate(self, A: Matrix) -> Matrix:
        sub = A.submatrix([i - 1 for i in self.coords_G], [j - 1 for j in self.coords_F])
        if self.mode is Tag.TWISTED:
            sub = sub.T
        return self.U @ sub @ self.V.H


@dataclass
class VerifyReport:
    failures: list
    units_checked: int
    block_ranks: list
    stacked_rank_U: int
    stacked_rank_V: int
    source_dim: int
    image_dim: int
    target_algebra_dim: int
    certificate: str

    @property
    def ok(self) -> bool:
        return not self.failures

    @property
    def surjective(self) -> bool:
        return self.image_dim == self.target_algebra_dim


@dataclass
class Implementation:
    blocks: list
    n_source: int
    n_target: int
    flags: list = field(default_factory=list)
    report: Optional[VerifyReport] = None

    @property
    def certificate(self) -> str:
        return self.report.certificate if self.report else "none"

    def evaluate(self, A: Matrix) -> Matrix:
        out = Matrix.zeros(self.n_target)
        for b in self.blocks:
            out = out + b.evaluate(A)
        return out

    def global_U(self) -> Matrix:
        """``n2 x n1`` matrix with column ``k`` the U-image of ``e_k`` across all blocks."""
        return self._glue("U")

    def global_V(self) -> Matrix:
        return self._glue("V")

    def _glue(self, which: str) -> Matrix:
        cols = [Vector.zeros(self.n_target) for _ in range(self.n_source)]
        for b in self.blocks:
            M = b.U if which == "U" else b.V
            ks = b.u_coords if which == "U" else b.v_coords
            for pos, k in enumerate(ks):
                cols[k - 1] = M.column(pos)
        return Matrix.from_columns(cols)


def assemble(spec: MapSpec, g: ChainGraph, check: Optional[CycleCheck] = None) -> Implementation:
    check = cycle_check(g) if check is None else check
    if not check:
        raise CoherenceError(
            "lambda products around a cycle differ from 1", {"violations": check.violations}
        )
    blocks = []
    flags = []
    L = spec.source
    cover_G = L.empty
    cover_F = L.empty
    for comp in g.components:
        pot = {M: check.potentials[M] for M in comp.members}
        ucols, vcols = {}, {}
        for M in comp.members:
            lf = g.factors[M]
            s = pot[M]
            sv = (ONE / s).conj()
            for k, vec in lf.U.items():
                _glue_column(ucols, k, vec.scale(s), M, "U")
            for k, vec in lf.V.items():
                _glue_column(vcols, k, vec.scale(sv), M, "V")
        G = comp.G.members
        Fc = comp.F.members
        if comp.mode is Tag.TWISTED:
            ukeys, vkeys = Fc, G
        else:
            ukeys, vkeys = G, Fc
        if set(ucols) != set(ukeys) or set(vcols) != set(vkeys):
            raise CoverageError(f"component rooted at {comp.root} leaves coordinates without factors")
        U = Matrix.from_columns([ucols[k] for k in ukeys])
        V = Matrix.from_columns([vcols[k] for k in vkeys])
        blocks.append(Block(G, Fc, comp.mode, U, V))
        flags.extend(f"{fl} block {list(G)}" for fl in comp.flags)
        cover_G = cover_G | comp.G
        cover_F = cover_F | comp.F
    if cover_G != L.full or cover_F != L.full:
        raise CoverageError(
            "blocks do not cover all source coordinates", {"G": cover_G, "F": cover_F}
        )
    return Implementation(blocks, spec.n1, spec.n2, flags)


def _glue_column(cols: dict, k: int, vec: Vector, M: CoordSet, which: str):
    prev = cols.get(k)
    if prev is None:
        cols[k] = vec
    elif prev != vec:
        raise CoherenceError(
            f"rescaled {which} factors disagree at coordinate {k} (member {M})",
            {"coordinate": k, "member": M},
        )


# --- verification -----------------------------------------------------------


def _flat(B: Matrix) -> list:
    return [a for r in B.entries for a in r]


def verify(spec: MapSpec, impl: Implementation) -> VerifyReport:
    """Unit-by-unit comparison of ``apply`` with the block evaluation rule.

    The allowed units span the source algebra, so agreement on all of them
    proves ``Phi = impl`` everywhere.  If additionally the stacked block
    ``U`` columns and ``V`` columns are each linearly independent, then
    ``Phi(A) = W D(A) Z*`` with ``W, Z`` injective and ``D(A)`` a block
    rearrangement of ``A``, so ranks are preserved exactly.
    """
    n1 = spec.n1
    failures = []
    pairs = spec.source_mask.pairs()
    for i, j in pairs:
        E = unit(n1, i, j)
        want = apply(spec, E)
        got = impl.evaluate(E)
        if want != got:
            failures.append({"unit": (i, j), "expected": want, "got": got})
    block_ranks = []
    for b in impl.blocks:
        ru, rv = rank(b.U), rank(b.V)
        block_ranks.append({"G": b.coords_G, "mode": b.mode, "rank_U": ru, "rank_V": rv,
                            "injective": ru == b.U.cols and rv == b.V.cols})
    W = Matrix.from_columns([c for b in impl.blocks for c in b.U.columns()]) if impl.blocks else Matrix.zeros(impl.n_target, 0)
    Z = Matrix.from_columns([c for b in impl.blocks for c in b.V.columns()]) if impl.blocks else Matrix.zeros(impl.n_target, 0)
    rW, rZ = rank(W), rank(Z)
    image_dim = rank(Matrix([_flat(spec.image(i, j)) for i, j in pairs])) if pairs else 0
    injective = rW == W.cols == n1 and rZ == Z.cols == n1
    cert = "exact" if (not failures and injective) else "none"
    return VerifyReport(
        failures, len(pairs), block_ranks, rW, rZ, len(pairs), image_dim,
        len(spec.target_mask.allowed), cert,
    )


# --- whole pipeline ---------------------------------------------------------


@dataclass
class Reconstruction:
    classification: Classification
    graph: ChainGraph
    cycles: CycleCheck
    implementation: Implementation


def reconstruct(spec: MapSpec, parallel: bool = False) -> Reconstruction:
    """Classify, build the chain graph, check cycles, assemble and verify.

    Raises a :class:`RefutationError` subclass as soon as a necessary
    condition of rank preservation fails.
    """
    rep = validate(spec)
    if not rep.ok:
        raise InputError("; ".join(rep.problems))
    c = classify_all(spec, parallel=parallel)
    g = chain_graph(spec, c)
    cyc = cycle_check(g)
    impl = assemble(spec, g, cyc)
    impl.report = verify(spec, impl)
    return Reconstruction(c, g, cyc, impl)


# --- normalising by Phi(I) -------------------------------------------------


@dataclass
class PsiResult:
    spec: MapSpec
    phi_identity: Matrix
    non_multiplicative: list
    matches_conjugation: Optional[bool]

    @property
    def multiplicative(self) -> bool:
        return not self.non_multiplicative


def psi(spec: MapSpec, impl: Optional[Implementation] = None) -> PsiResult:
    """The map ``A -> Phi(A) Phi(I)^{-1}`` and its multiplicativity on composable units.

    When ``impl`` is all-consistent with a square invertible global ``U``,
    the composed map is also compared against ``A -> U A U^{-1}``.
    """
    if spec.source.n != spec.target.n or spec.source.elements != spec.target.elements:
        raise InputError("psi needs the source and target lattices to coincide")
    n = spec.n1
    P = apply(spec, Matrix.identity(n))
    if rank(P) != n:
        raise SingularError("Phi(I) is singular")
    Pinv = inverse(P)
    images = {k: B @ Pinv for k, B in spec.images.items()}
    composed = MapSpec(spec.source, spec.target, images)
    pairs = spec.source_mask.pairs()
    by_row = {}
    for i, j in pairs:
        by_row.setdefault(i, []).append(j)
    bad = []
    for i, j in pairs:
        for k in by_row.get(j, []):
            if composed.image(i, k) != composed.image(i, j) @ composed.image(j, k):
                bad.append((i, j, k))
    match = None
    if impl is not None and all(b.mode is not Tag.TWISTED for b in impl.blocks):
        U = impl.global_U()
        if U.rows == U.cols and rank(U) == n:
            Uinv = inverse(U)
            match = all(composed.image(i, j) == U @ unit(n, i, j) @ Uinv for i, j in pairs)
        else:
            match = False
    return PsiResult(composed, P, bad, match)


def factor_scalar(block: Block, U: Matrix, V: Matrix) -> Optional[Scalar]:
    """``c`` with ``block.U = c U`` and ``block.V = (1/conj c) V`` on the block's coordinates.

    ``U`` and ``V`` are full ``n2 x n1`` reference factors; None when no such
    ``c`` exists.
    """
    ref_U = Matrix.from_columns([U.column(k - 1) for k in block.u_coords], rows=U.rows)
    ref_V = Matrix.from_columns([V.column(k - 1) for k in block.v_coords], rows=V.rows)
    c = collinear(_flat(block.U), _flat(ref_U))
    if not c:
        return None
    if block.V != ref_V.scale((ONE / c).conj()):
        return None
    return c


def spec_from_factors(source, target, U: Matrix, V: Matrix, transpose: bool = False) -> MapSpec:
    """Tabulate ``A -> U A V*`` (or ``U A^T V*``) on the allowed units of ``source``."""
    M = mask(source)
    images = {}
    for i, j in M.pairs():
        if transpose:
            images[(i, j)] = outer(U.column(j - 1), V.column(i - 1))
        else:
            images[(i, j)] = outer(U.column(i - 1), V.column(j - 1))
    return MapSpec(source, target, images)


__all__ = [
    "LocalFactors", "local_factors", "lambda_edge", "ChainGraph", "Component", "chain_graph",
    "CycleCheck", "cycle_check", "Block", "Implementation", "assemble", "VerifyReport", "verify",
    "Reconstruction", "reconstruct", "PsiResult", "psi", "spec_from_factors", "factor_scalar", "RefutationError",
]
