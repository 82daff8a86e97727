"""Exact analysis of rank-preserving linear maps between finite CSL algebras.

Lattices live in the diagonal model (members are coordinate sets), algebras
are star patterns of allowed entries, and maps are tables of images of the
allowed matrix units.  All arithmetic is over the Gaussian rationals.
"""

from .algebra import (
    MaskAlgebra,
    is_member,
    lattice_from_mask,
    mask,
    random_invertible_member,
    random_member,
    rank_one_member,
    span_check,
    unit,
)
from .demos import DEMOS, run_demo
from .errors import *  # noqa: F401,F403
from .exactlin import (
    Matrix,
    Scalar,
    Vector,
    collinear,
    format_scalar,
    inverse,
    match_factor,
    outer,
    parse_scalar,
    rank,
    rank_one_factor,
)
from .fileio import (
    load_implementation,
    load_lattice,
    load_map,
    save_implementation,
    save_lattice,
    save_map,
)
from .lattice import (
    CoordSet,
    SubspaceLattice,
    closure,
    coords,
    direct_sum,
    interesting_family,
    orthocomplement_lattice,
    predecessor,
    random_lattice,
    smallest_containing,
    validate_cdl,
)
from .rankmap import (
    MapSpec,
    Tag,
    apply,
    check_rank_preserving,
    classify_all,
    classify_element,
    decompose,
    spec_from_function,
    transpose_spec,
    validate,
)
from .reconstruct import (
    Implementation,
    assemble,
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

__version__ = "0.1.0"
