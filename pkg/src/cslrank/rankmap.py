"""Linear maps between mask algebras and their element-wise classification.

A map is stored as the table of images of the allowed matrix units of its
source algebra and extended linearly.  For each member ``N`` of the
interesting family the map either acts as ``x (x) f* -> Ux (x) (Vf)*``
(consistent) or as ``x (x) f* -> Uf (x) (Vx)*`` with conjugate-linear
``U, V`` (twisted); one-dimensional members equal to their own ``N_-^perp``
are isolated and admit both forms.
"""

from __future__ import annotations

import enum
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Optional

from .algebra import (
    MaskAlgebra,
    basis,
    disallowed_entries,
    is_member,
    mask,
    random_member,
    random_rank_one,
    unit,
)
from .errors import (
    ConflictError,
    DimensionError,
    MembershipError,
    NotRankPreserving,
    ViolationError,
)
from .exactlin import Matrix, Vector, outer, rank, rank_one_factor, similar
from .lattice import (
    CoordSet,
    InterestingFamily,
    SubspaceLattice,
    interesting_family,
    orthocomplement_lattice,
)


class Tag(str, enum.Enum):
    CONSISTENT = "consistent"
    TWISTED = "twisted"
    ISOLATED = "isolated"
    AMBIGUOUS = "ambiguous"

    def __str__(self):
        return self.value


@dataclass(frozen=True, eq=False)
class MapSpec:
    """``Phi`` given by ``images[(i, j)] = Phi(E_ij)`` over allowed source pairs (1-indexed).

    Pairs missing from ``images`` map to zero.
    """

    source: SubspaceLattice
    target: SubspaceLattice
    images: Mapping

    @cached_property
    def source_mask(self) -> MaskAlgebra:
        return mask(self.source)

    @cached_property
    def target_mask(self) -> MaskAlgebra:
        return mask(self.target)

    @cached_property
    def family(self) -> InterestingFamily:
        return interesting_family(self.source)

    @property
    def n1(self) -> int:
        return self.source.n

    @property
    def n2(self) -> int:
        return self.target.n

    def image(self, i: int, j: int) -> Matrix:
        B = self.images.get((i, j))
        return Matrix.zeros(self.n2) if B is None else B

    def scaled(self, s) -> "MapSpec":
        return MapSpec(self.source, self.target, {k: B.scale(s) for k, B in self.images.items()})


@dataclass
class ValidationReport:
    ok: bool
    problems: list = field(default_factory=list)
    offending: dict = field(default_factory=dict)


def validate(spec: MapSpec) -> ValidationReport:
    """Structural checks; collects every problem instead of stopping at the first."""
    problems = []
    offending = {}
    smask = spec.source_mask
    tmask = spec.target_mask
    for key, B in sorted(spec.images.items()):
        if key not in smask.allowed:
            problems.append(f"image given for disallowed source entry {key}")
            continue
        if B.shape != (spec.n2, spec.n2):
            problems.append(f"image of {key} has shape {B.shape}, expected {(spec.n2, spec.n2)}")
            continue
        bad = disallowed_entries(B, tmask)
        if bad:
            offending[key] = bad
            problems.append(f"image of E{key} uses disallowed target entries {bad}")
    return ValidationReport(not problems, problems, offending)


def apply(spec: MapSpec, A: Matrix) -> Matrix:
    """``sum A_ij * Phi(E_ij)`` over the allowed source pairs."""
    if A.shape != (spec.n1, spec.n1):
        raise DimensionError(f"expected a {spec.n1}x{spec.n1} matrix, got {A.shape}")
    if not is_member(A, spec.source_mask):
        raise MembershipError("argument is not in the source algebra")
    out = Matrix.zeros(spec.n2)
    for i, j in A.support():
        B = spec.images.get((i + 1, j + 1))
        if B is not None:
            out = out + B.scale(A[i, j])
    return out


def apply_rank_one(spec: MapSpec, x, f) -> Matrix:
    return apply(spec, outer(x, f))


# --- probabilistic rank check ----------------------------------------------


@dataclass
class Verdict:
    refuted: bool
    trials_run: int
    counterexample: Optional[Matrix] = None
    source_rank: Optional[int] = None
    image_rank: Optional[int] = None
    stage: str = ""

    @property
    def status(self) -> str:
        return "refuted" if self.refuted else "probable"


def check_rank_preserving(spec: MapSpec, trials: int = 64, max_rank: Optional[int] = None, seed=0) -> Verdict:
    """Randomised search for a rank counterexample.

    Stage one feeds random rank-one members ``x (x) f*`` (``x`` in ``N``,
    ``f`` in ``N_-^perp``) for every member of the interesting family; stage
    two feeds random members of each rank up to ``max_rank``.  All arithmetic
    is exact, so a reported counterexample is genuine.  Passing only makes
    rank preservation probable: a nonzero polynomial in the random entries
    rarely vanishes at a random point.
    """
    if max_rank is None:
        max_rank = min(4, spec.n1, spec.n2)
    if max_rank > min(spec.n1, spec.n2):
        raise DimensionError("max_rank exceeds the smaller dimension")
    rng = random.Random(seed)
    runs = 0
    for N in spec.family:
        for _ in range(trials):
            x, f = random_rank_one(spec.source, N, rng)
            A = outer(x, f)
            B = apply(spec, A)
            runs += 1
            r = rank(B)
            if r != 1:
                return Verdict(True, runs, A, 1, r, f"rank-one member at {N}")
    for r in range(1, max_rank + 1):
        for _ in range(trials):
            A = random_member(spec.source_mask, r, seed=rng.getrandbits(64))
            ra = rank(A)
            rb = rank(apply(spec, A))
            runs += 1
            if ra != rb:
                return Verdict(True, runs, A, ra, rb, f"rank-{ra} member")
    return Verdict(False, runs)


# --- classification ---------------------------------------------------------


@dataclass
class ElementClass:
    tag: Tag
    evidence: dict = field(default_factory=dict)
    trace: list = field(default_factory=list)


@dataclass
class Classification:
    family: InterestingFamily
    entries: dict
    warnings: list = field(default_factory=list)

    def tag(self, N: CoordSet) -> Tag:
        return self.entries[N].tag

    def members(self, tag: Tag) -> list:
        return [N for N in self.family if self.entries[N].tag == tag]

    def counts(self) -> dict:
        out = {t: 0 for t in Tag}
        for e in self.entries.values():
            out[e.tag] += 1
        return out


def is_isolated(F: InterestingFamily, N: CoordSet) -> bool:
    return len(N) == 1 and F.co(N) == N


def _factor_image(spec: MapSpec, x: Vector, f: Vector, label: str) -> tuple:
    B = apply_rank_one(spec, x, f)
    r = rank(B)
    if r != 1:
        raise NotRankPreserving(
            f"image {label} has rank {r}, expected 1", {"image": label, "rank": r}
        )
    return rank_one_factor(B)


def classify_element(spec: MapSpec, N: CoordSet, x=None, y=None, f=None, g=None) -> ElementClass:
    """Read the dependency pattern of a few rank-one images at ``N``.

    By default ``x, y`` are the first two basis vectors of ``N`` and ``f, g``
    the first two of ``N_-^perp``; any nonzero, pairwise independent
    replacements inside the same subspaces may be passed instead.
    """
    F = spec.family
    if N not in F:
        raise MembershipError(f"{N} is not in the interesting family")
    n = spec.n1
    co = F.co(N)
    xs, fs = list(N), list(co)
    x = Vector(x) if x is not None else basis(n, xs[0])
    f = Vector(f) if f is not None else basis(n, fs[0])
    if len(xs) >= 2:
        y = Vector(y) if y is not None else basis(n, xs[1])
    if len(fs) >= 2:
        g = Vector(g) if g is not None else basis(n, fs[1])

    if len(xs) >= 2 and len(fs) >= 2:
        u, v = _factor_image(spec, x, f, "A = Phi(x(x)f*)")
        p, q = _factor_image(spec, y, f, "B = Phi(y(x)f*)")
        w, z = _factor_image(spec, x, g, "C = Phi(x(x)g*)")
        r, s = _factor_image(spec, y, g, "D = Phi(y(x)g*)")
        ev = {
            "case": "four-vectors",
            "u~w": similar(u, w), "v~q": similar(v, q), "p~r": similar(p, r), "z~s": similar(z, s),
            "v~z": similar(v, z), "u~p": similar(u, p), "w~r": similar(w, r), "q~s": similar(q, s),
            "u~r": similar(u, r), "v~s": similar(v, s), "p~w": similar(p, w), "q~z": similar(q, z),
        }
        crossed = [k for k in ("u~r", "v~s", "p~w", "q~z") if ev[k]]
        if crossed:
            raise NotRankPreserving(
                f"{N}: a rank-two sum collapses ({', '.join(crossed)})", ev
            )
        consistent = ev["u~w"] and ev["v~q"] and ev["p~r"] and ev["z~s"]
        twisted = ev["v~z"] and ev["u~p"] and ev["w~r"] and ev["q~s"]
    elif len(xs) == 1 and len(fs) >= 2:
        u, v = _factor_image(spec, x, f, "E = Phi(x(x)f*)")
        p, q = _factor_image(spec, x, g, "F = Phi(x(x)g*)")
        ev = {"case": "one-by-many", "u~p": similar(u, p), "v~q": similar(v, q)}
        consistent, twisted = ev["u~p"], ev["v~q"]
        if consistent and twisted:
            raise NotRankPreserving(f"{N}: images E and F cancel on a rank-one combination", ev)
    elif len(xs) >= 2 and len(fs) == 1:
        u, v = _factor_image(spec, x, f, "G = Phi(x(x)f*)")
        p, q = _factor_image(spec, y, f, "H = Phi(y(x)f*)")
        ev = {"case": "many-by-one", "u~p": similar(u, p), "v~q": similar(v, q)}
        consistent, twisted = ev["v~q"], ev["u~p"]
        if consistent and twisted:
            raise NotRankPreserving(f"{N}: images G and H cancel on a rank-one combination", ev)
    else:
        _factor_image(spec, x, f, "Phi(x(x)f*)")
        return ElementClass(Tag.AMBIGUOUS, {"case": "one-by-one"})

    if consistent and not twisted:
        return ElementClass(Tag.CONSISTENT, ev)
    if twisted and not consistent:
        return ElementClass(Tag.TWISTED, ev)
    raise NotRankPreserving(f"{N}: dependency pattern matches neither form", ev)


def classify_all(spec: MapSpec, parallel: bool = False) -> Classification:
    """Tag every member of the interesting family.

    Isolated members are recognised structurally.  The rest are classified
    directly; a tag is then pushed down to every smaller member, since a
    consistent (twisted) member forces the same tag below it.  Disagreement
    between a member's own tag and one pushed down from above refutes rank
    preservation.
    """
    F = spec.family
    entries = {}
    todo = []
    for N in F:
        if is_isolated(F, N):
            entries[N] = ElementClass(Tag.ISOLATED, {"case": "isolated"})
        else:
            todo.append(N)
    if parallel and len(todo) > 1:
        with ThreadPoolExecutor() as pool:
            results = list(pool.map(lambda N: classify_element(spec, N), todo))
    else:
        results = [classify_element(spec, N) for N in todo]
    entries.update(zip(todo, results))

    warnings = []
    definite = [M for M in todo if entries[M].tag in (Tag.CONSISTENT, Tag.TWISTED)]
    own = {M: entries[M].tag for M in definite}
    for N in todo:
        above = {}
        for M in definite:
            if N < M:
                above.setdefault(own[M], []).append(M)
        e = entries[N]
        tags = set(above)
        if e.tag in (Tag.CONSISTENT, Tag.TWISTED):
            tags.add(e.tag)
        if len(tags) > 1:
            raise ConflictError(
                f"{N} is forced to be both consistent and twisted",
                {"element": N, "own": e.tag, "above": above},
            )
        if e.tag is Tag.AMBIGUOUS:
            if tags:
                (t,) = tags
                e.tag = t
                e.trace.append(f"inherited {t} from {above[t][0]}")
            else:
                warnings.append(f"{N} stays mode-ambiguous")
        for t, Ms in above.items():
            e.trace.extend(f"agrees with {t} {M} above" for M in Ms)
    return Classification(F, entries, warnings)


@dataclass
class Decomposition:
    M_i: CoordSet
    M_c: CoordSet
    M_t: CoordSet
    ambiguous: CoordSet
    lattice_members: bool


def decompose(spec: MapSpec, c: Classification) -> Decomposition:
    """Split the coordinates into isolated, consistent and twisted parts.

    Checks that every non-isolated consistent ``M`` and twisted ``N`` are
    disjoint and have disjoint ``M_-^perp``, ``N_-^perp``.
    """
    L = spec.source
    F = c.family
    empty = L.empty
    union = {t: empty for t in Tag}
    for N in F:
        union[c.tag(N)] = union[c.tag(N)] | N
    M_i = union[Tag.ISOLATED]
    M_c = union[Tag.CONSISTENT] - M_i
    M_t = union[Tag.TWISTED] - M_i
    amb = union[Tag.AMBIGUOUS]
    for M in c.members(Tag.CONSISTENT):
        for N in c.members(Tag.TWISTED):
            if M & N:
                raise ViolationError(
                    f"consistent {M} and twisted {N} overlap", {"consistent": M, "twisted": N}
                )
            if F.co(M) & F.co(N):
                raise ViolationError(
                    f"co-supports of consistent {M} and twisted {N} overlap",
                    {"consistent": M, "twisted": N},
                )
    if (M_i | M_c | M_t | amb) != L.full:
        raise ViolationError("classified elements do not cover every coordinate")
    members = all(E in L for E in (M_i, M_c, M_t))
    return Decomposition(M_i, M_c, M_t, amb, members)


def transpose_spec(spec: MapSpec) -> MapSpec:
    """``B -> Phi(B^T)`` on the orthocomplement lattice (whose algebra is the transpose)."""
    src = orthocomplement_lattice(spec.source)
    return MapSpec(src, spec.target, {(j, i): B for (i, j), B in spec.images.items()})


def spec_from_function(source: SubspaceLattice, target: SubspaceLattice, fn) -> MapSpec:
    """Tabulate ``fn`` on the allowed units of ``source``."""
    M = mask(source)
    return MapSpec(source, target, {(i, j): fn(unit(source.n, i, j)) for i, j in M.pairs()})
