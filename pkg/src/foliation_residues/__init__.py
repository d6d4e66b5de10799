"""Exact computation of singular sets and Baum-Bott residues of holomorphic
foliations given by polynomial data, with a combinatorial duality engine for
simplicial manifolds."""

from .foliation import (
    FoliationPresentation,
    SliceSpec,
    SliceFoliation,
    involutivity_check,
    is_involutive,
    make_slice,
    poisson_analysis,
    singular_ideal,
    slice_foliation,
    twisted_form,
)
from .harness import (
    RetriesExhausted,
    certified_slice_residue,
    dimension_theorem_check,
    poisson_theorem_check,
    slice_invariance_test,
)
from .ideal import Ideal, groebner, krull_dimension, normal_form, standard_monomial_count
from .poly import Polynomial, parse_polynomial
from .residue import PhiSpec, baum_bott_residue, chern, grothendieck_residue, nondegenerate_oracle, parse_phi

__all__ = [
    "FoliationPresentation",
    "Ideal",
    "PhiSpec",
    "Polynomial",
    "RetriesExhausted",
    "SliceFoliation",
    "SliceSpec",
    "baum_bott_residue",
    "certified_slice_residue",
    "chern",
    "dimension_theorem_check",
    "groebner",
    "grothendieck_residue",
    "involutivity_check",
    "is_involutive",
    "krull_dimension",
    "make_slice",
    "nondegenerate_oracle",
    "normal_form",
    "parse_phi",
    "parse_polynomial",
    "poisson_analysis",
    "poisson_theorem_check",
    "singular_ideal",
    "slice_foliation",
    "slice_invariance_test",
    "standard_monomial_count",
    "twisted_form",
]
