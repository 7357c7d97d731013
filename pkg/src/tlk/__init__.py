"""Exact-arithmetic toolkit for twisted Lawrence-Krammer representations.

Builds the representations of small-type positive braid monoids on the
module spanned by positive roots, restricts them to the fixed subspace
under a group of diagram automorphisms, and mechanically verifies the
finite structure: mesh censuses, configuration blocks, annihilating
polynomials, coupling coefficients, spectra, irreducibility certificates,
faithfulness spot-checks and non-equivalence discriminants.
"""

from .coxeter import (
    CoxeterMatrix,
    GraphAutomorphismGroup,
    IndexOrbit,
    QuotientMatrix,
    automorphism_group,
    index_orbits,
    parse_sigma_spec,
    parse_type_spec,
    quotient_matrix,
    validate,
)
from .lkrep import (
    LKContext,
    LKFamily,
    RepMatrix,
    build_lk_context,
    charpoly,
    phi_matrix,
    psi_matrix,
    solve_lk_family,
    verify_braid_relations,
    verify_equivariance,
)
from .rootsys import (
    MeshConfiguration,
    PositiveRootSystem,
    SigmaOrbit,
    census,
    classify_mesh,
    generate,
    j_mesh,
    sigma_orbits,
)
from .scalars import Poly, Scalar, Specialization, parse, render, specialize
from .twisted import (
    TwistedContext,
    TwistedGenerator,
    annihilator,
    build_context,
    burnside_certificate,
    coupling_coefficient,
    equivalence_discriminant,
    expected_block,
    restrict,
    spectrum,
    verify_blocks,
)

__version__ = "0.1.0"
