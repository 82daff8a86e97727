"""Built-in worked examples.

Every demo builds its lattice and images table in memory, runs the whole
pipeline and compares the outcome with the implementing operator known for
that example.  A demo succeeds iff every comparison holds exactly.

The A_4 / A_inf maps are transcribed from their letter layouts: ``SOURCE``
names the entry each letter occupies in the argument, and the image layout
says where (and with which coefficient) that letter reappears.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .algebra import lattice_from_mask, mask, unit
from .errors import RefutationError
from .exactlin import ONE, Matrix, Scalar
from .lattice import SubspaceLattice, closure, coords, direct_sum
from .rankmap import MapSpec, Tag, apply, decompose
from .reconstruct import Reconstruction, factor_scalar, psi, reconstruct


# --- lattices ---------------------------------------------------------------


def a2n_pattern(m: int) -> set:
    """Star pattern of ``A_{2m}``: odd rows reach their two neighbours, row 1 wraps to column 2m."""
    n = 2 * m
    allowed = {(k, k) for k in range(1, n + 1)}
    for i in range(1, n + 1, 2):
        allowed.add((i, i + 1))
        allowed.add((i, i - 1 if i > 1 else n))
    return allowed


def ainf_pattern(n: int) -> set:
    """``A_inf`` star pattern cut to the leading ``n x n`` corner."""
    allowed = {(k, k) for k in range(1, n + 1)}
    for i in range(1, n + 1, 2):
        if i + 1 <= n:
            allowed.add((i, i + 1))
        if i > 1:
            allowed.add((i, i - 1))
    return allowed


def a4_lattice() -> SubspaceLattice:
    return lattice_from_mask(4, a2n_pattern(2))


def ainf_lattice(n: int = 6) -> SubspaceLattice:
    return lattice_from_mask(n, ainf_pattern(n))


def nest(n: int) -> SubspaceLattice:
    return closure(n, [range(1, k + 1) for k in range(1, n + 1)])


def boolean_lattice(n: int) -> SubspaceLattice:
    return closure(n, [[k] for k in range(1, n + 1)])


def crown_lattice() -> SubspaceLattice:
    """Six coordinates: 1, 2, 3 below 4, 5, 6 in a hexagon with no 2x2 rectangle."""
    allowed = {(k, k) for k in range(1, 7)}
    allowed |= {(1, 4), (2, 4), (2, 5), (3, 5), (3, 6), (1, 6)}
    return lattice_from_mask(6, allowed)


# --- maps -------------------------------------------------------------------

A4_SOURCE = {
    "a": (1, 1), "b": (1, 2), "h": (1, 4), "c": (2, 2),
    "d": (3, 2), "e": (3, 3), "f": (3, 4), "g": (4, 4),
}

PHI1_IMAGE = [
    "e f 0 d",
    "0 g 0 0",
    "0 h a b",
    "0 0 0 c",
]

PHI2_IMAGE = [
    "g f 0 h",
    "0 e 0 0",
    "0 d c b",
    "0 0 0 a",
]

PHI1_U = [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]]
PHI2_V = [[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]]

AINF_SOURCE = {
    "a": (1, 1), "b": (1, 2), "c": (2, 2), "d": (3, 2), "e": (3, 3),
    "f": (3, 4), "g": (4, 4), "h": (5, 4), "i": (5, 5), "j": (5, 6), "k": (6, 6),
}

# the last row is not shown in the display; it follows U = diag(1..n)
AINF_IMAGE = [
    "a 1/2*b 0 0 0 0",
    "0 c 0 0 0 0",
    "0 3/2*d e 3/4*f 0 0",
    "0 0 0 g 0 0",
    "0 0 0 5/4*h i 5/6*j",
    "0 0 0 0 0 k",
]

AINF_SCALINGS = {(1, 2): Fraction(1, 2), (3, 2): Fraction(3, 2), (3, 4): Fraction(3, 4),
                 (5, 4): Fraction(5, 4), (5, 6): Fraction(5, 6)}


def spec_from_layout(source: SubspaceLattice, target: SubspaceLattice, letters: dict, image: list) -> MapSpec:
    """Images table from a letter layout.

    ``letters`` maps each letter to its source entry; ``image`` lists the
    rows of the target matrix, each cell ``0``, a letter or ``coef*letter``.
    """
    images = {}
    n2 = target.n
    for r, row in enumerate(image, start=1):
        for c, cell in enumerate(row.split(), start=1):
            if cell == "0":
                continue
            coef, _, name = cell.rpartition("*")
            s = Scalar(Fraction(coef)) if coef else ONE
            images[letters[name]] = unit(n2, r, c).scale(s)
    missing = set(letters.values()) - set(images)
    if missing:
        raise ValueError(f"letters at {sorted(missing)} have no image")
    return MapSpec(source, target, images)


def phi1_spec() -> MapSpec:
    L = a4_lattice()
    return spec_from_layout(L, L, A4_SOURCE, PHI1_IMAGE)


def phi2_spec() -> MapSpec:
    L = a4_lattice()
    return spec_from_layout(L, L, A4_SOURCE, PHI2_IMAGE)


def shift_matrix(n: int) -> Matrix:
    """``(n+1) x n`` with ``S e_k = e_{k+1}``."""
    return Matrix([[1 if r == c + 1 else 0 for c in range(n)] for r in range(n + 1)])


def nest_shift_spec(n: int = 6) -> MapSpec:
    """``E_ij -> E_{i+1, j+1}``: every entry moves one step down the diagonal."""
    src, tgt = nest(n), nest(n + 1)
    images = {}
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            images[(i, j)] = unit(n + 1, i + 1, j + 1)
    return MapSpec(src, tgt, images)


def ainf_diag_spec() -> MapSpec:
    L = ainf_lattice(6)
    return spec_from_layout(L, L, AINF_SOURCE, AINF_IMAGE)


def isolated_diag_spec(n: int = 3) -> MapSpec:
    L = boolean_lattice(n)
    return MapSpec(L, L, {(k, k): unit(n, k, k) for k in range(1, n + 1)})


def mixed_blocks_spec() -> MapSpec:
    """``Phi_1`` on the first copy of ``A_4`` and ``Phi_2`` on the second."""
    L = direct_sum(a4_lattice(), a4_lattice())
    images = {}
    for part, offset in ((phi1_spec(), 0), (phi2_spec(), 4)):
        for (i, j), B in part.images.items():
            (r, c), = B.support()
            images[(i + offset, j + offset)] = unit(8, r + 1 + offset, c + 1 + offset).scale(B[r, c])
    return MapSpec(L, L, images)


def collapsing_spec() -> MapSpec:
    """Diagonal ``2 x 2`` algebra with both diagonal units sent to ``E_11``."""
    L = boolean_lattice(2)
    return MapSpec(L, L, {(1, 1): unit(2, 1, 1), (2, 2): unit(2, 1, 1)})


def perturbed_crown_spec(factor=2) -> MapSpec:
    """Identity on the crown algebra with ``E_14`` multiplied by ``factor``.

    Every single member still sees a rank-one-preserving map; only the
    lambda product around the hexagon betrays the perturbation.
    """
    L = crown_lattice()
    images = {(i, j): unit(6, i, j) for i, j in mask(L).pairs()}
    images[(1, 4)] = images[(1, 4)].scale(factor)
    return MapSpec(L, L, images)


# --- runner -----------------------------------------------------------------


@dataclass
class DemoResult:
    name: str
    checks: list = field(default_factory=list)
    lines: list = field(default_factory=list)
    reconstruction: Optional[Reconstruction] = None

    @property
    def ok(self) -> bool:
        return bool(self.checks) and all(ok for _, ok in self.checks)

    def check(self, label: str, ok: bool):
        self.checks.append((label, bool(ok)))

    def say(self, line: str = ""):
        self.lines.append(line)

    def report(self) -> str:
        out = [f"== demo {self.name} =="]
        out.extend(self.lines)
        out.extend(f"[{'ok' if ok else 'FAIL'}] {label}" for label, ok in self.checks)
        out.append(f"result: {'success' if self.ok else 'failure'}")
        return "\n".join(out)


def _pipeline(res: DemoResult, spec: MapSpec) -> Optional[Reconstruction]:
    try:
        rec = reconstruct(spec)
    except RefutationError as exc:
        res.check(f"pipeline runs ({exc})", False)
        return None
    res.reconstruction = rec
    counts = rec.classification.counts()
    res.say("classification: " + ", ".join(f"{v} {k}" for k, v in counts.items() if v))
    res.say(f"chain components: {len(rec.graph.components)}")
    for comp in rec.graph.components:
        res.say(f"  root {comp.root} mode {comp.mode} members {list(comp.members)}")
    res.say(f"cycle check: {'ok' if rec.cycles else 'violated'}")
    rep = rec.implementation.report
    res.say(f"verified units: {rep.units_checked - len(rep.failures)}/{rep.units_checked}; certificate {rep.certificate}")
    return rec


def _all_tagged(rec: Reconstruction, tag: Tag) -> bool:
    c = rec.classification
    return all(c.tag(N) is tag for N in c.family)


def _single_block_scalar(rec: Reconstruction, U: Matrix, V: Matrix) -> Optional[Scalar]:
    blocks = rec.implementation.blocks
    if len(blocks) != 1:
        return None
    return factor_scalar(blocks[0], U, V)


def _unit_identity(spec: MapSpec, fn: Callable) -> bool:
    n = spec.n1
    return all(apply(spec, unit(n, i, j)) == fn(unit(n, i, j)) for i, j in spec.source_mask.pairs())


def demo_a4_phi1() -> DemoResult:
    res = DemoResult("a4-phi1")
    spec = phi1_spec()
    res.say("lattice of A_4 (from its star pattern):")
    res.say(spec.source_mask.star_pattern())
    rec = _pipeline(res, spec)
    if rec is None:
        return res
    U = Matrix(PHI1_U)
    fam = rec.classification.family
    res.check(f"all {len(fam)} members of the family consistent", len(fam) == 5 and _all_tagged(rec, Tag.CONSISTENT))
    res.check("one chain component", len(rec.graph.components) == 1)
    res.check("every cycle product equals 1", bool(rec.cycles))
    c = _single_block_scalar(rec, U, U)
    res.say(f"recovered U = {c} * permutation, V = conj(1/{c}) * permutation" if c else "recovered U not collinear")
    res.check("recovered U collinear with the permutation (one scalar), V matching", c is not None)
    res.check("Phi_1(A) = U A U^-1 on all 8 allowed units", rec.implementation.report.ok
              and rec.implementation.report.units_checked == 8 and _unit_identity(spec, lambda A: U @ A @ U.T))
    res.check("certificate exact", rec.implementation.certificate == "exact")
    p = psi(spec, rec.implementation)
    res.check("Phi_1(I) = I and Psi multiplicative", p.phi_identity == Matrix.identity(4) and p.multiplicative)
    return res


def demo_a4_phi2() -> DemoResult:
    res = DemoResult("a4-phi2")
    spec = phi2_spec()
    rec = _pipeline(res, spec)
    if rec is None:
        return res
    V = Matrix(PHI2_V)
    res.check("all members of the family twisted", _all_tagged(rec, Tag.TWISTED))
    res.check("single twisted block", len(rec.implementation.blocks) == 1
              and rec.implementation.blocks[0].mode is Tag.TWISTED)
    c = _single_block_scalar(rec, V, V)
    res.say(f"recovered U = {c} * anti-diagonal, Phi_2(A) = U A^T V*" if c else "recovered U not collinear")
    res.check("recovered U collinear with the anti-diagonal permutation", c is not None)
    res.check("Phi_2(A) = V A^T V^-1 on all allowed units", rec.implementation.report.ok
              and _unit_identity(spec, lambda A: V @ A.T @ V.T))
    res.check("certificate exact", rec.implementation.certificate == "exact")
    return res


def demo_nest_shift() -> DemoResult:
    res = DemoResult("nest-shift")
    spec = nest_shift_spec(6)
    rec = _pipeline(res, spec)
    if rec is None:
        return res
    S = shift_matrix(6)
    rep = rec.implementation.report
    res.check("Phi(A) = S A S* on all 21 allowed units", rep.ok and rep.units_checked == 21
              and _unit_identity(spec, lambda A: S @ A @ S.H))
    c = _single_block_scalar(rec, S, S)
    res.say(f"recovered U = {c} * S (7x6 shift)" if c else "recovered U not collinear with S")
    res.check("recovered U collinear with the shift", c is not None)
    res.check("U and V injective: rank preservation certified", rec.implementation.certificate == "exact")
    res.say(f"image dimension {rep.image_dim} of target algebra dimension {rep.target_algebra_dim}: "
            + ("onto" if rep.surjective else "not onto"))
    res.check("Phi is not onto", not rep.surjective)
    return res


def demo_ainf_diag() -> DemoResult:
    res = DemoResult("ainf-diag")
    spec = ainf_diag_spec()
    res.say("A_inf truncated to 6x6:")
    res.say(spec.source_mask.star_pattern())
    scal_ok = True
    for (i, j), want in AINF_SCALINGS.items():
        got = apply(spec, unit(6, i, j))[i - 1, j - 1]
        scal_ok &= got == Scalar(want)
        res.say(f"entry ({i},{j}) scaled by {got}")
    res.check("displayed entry scalings 1/2, 3/2, 3/4, 5/4, 5/6", scal_ok)
    rec = _pipeline(res, spec)
    if rec is None:
        return res
    D = Matrix.diag(range(1, 7))
    Dinv = Matrix.diag([Fraction(1, k) for k in range(1, 7)])
    res.check("all members consistent", _all_tagged(rec, Tag.CONSISTENT))
    scalars = [factor_scalar(b, D, Dinv) for b in rec.implementation.blocks]
    res.say("per-component scalars: " + ", ".join(str(c) for c in scalars))
    res.check("U collinear with diag(1..6) on every component", all(c is not None for c in scalars))
    res.check("Phi(A) = U A U^-1 on all allowed units", rec.implementation.report.ok
              and _unit_identity(spec, lambda A: D @ A @ Dinv))
    res.check("certificate exact", rec.implementation.certificate == "exact")
    return res


def demo_isolated_diag() -> DemoResult:
    res = DemoResult("isolated-diag")
    spec = isolated_diag_spec(3)
    rec = _pipeline(res, spec)
    if rec is None:
        return res
    res.check("every member isolated", _all_tagged(rec, Tag.ISOLATED))
    res.check("three singleton components", len(rec.graph.components) == 3
              and all(len(c.members) == 1 for c in rec.graph.components))
    res.say("flags: " + "; ".join(rec.implementation.flags))
    res.check("certificate exact", rec.implementation.certificate == "exact")
    return res


def demo_mixed_blocks() -> DemoResult:
    res = DemoResult("mixed-blocks")
    spec = mixed_blocks_spec()
    rec = _pipeline(res, spec)
    if rec is None:
        return res
    d = decompose(spec, rec.classification)
    res.say(f"M_c = {d.M_c}, M_t = {d.M_t}")
    res.check("M_c is the first copy, M_t the second", d.M_c == coords(8, 1, 2, 3, 4) and d.M_t == coords(8, 5, 6, 7, 8))
    sizes = sorted(len(c.members) for c in rec.graph.components)
    res.check("two components of five members", sizes == [5, 5])
    res.check("certificate exact", rec.implementation.certificate == "exact")
    return res


DEMOS = {
    "a4-phi1": demo_a4_phi1,
    "a4-phi2": demo_a4_phi2,
    "nest-shift": demo_nest_shift,
    "ainf-diag": demo_ainf_diag,
    "isolated-diag": demo_isolated_diag,
    "mixed-blocks": demo_mixed_blocks,
}


def run_demo(name: str) -> DemoResult:
    try:
        fn = DEMOS[name]
    except KeyError:
        raise KeyError(f"unknown demo {name!r}; choose from {', '.join(DEMOS)}") from None
    return fn()


__all__ = [
    "DEMOS", "DemoResult", "run_demo", "a4_lattice", "ainf_lattice", "nest", "boolean_lattice",
    "crown_lattice", "a2n_pattern", "ainf_pattern", "phi1_spec", "phi2_spec", "nest_shift_spec",
    "ainf_diag_spec", "isolated_diag_spec", "mixed_blocks_spec", "collapsing_spec",
    "perturbed_crown_spec", "shift_matrix", "spec_from_layout",
]
