"""Exact arithmetic for finite-dimensional Z-graded supercommutative algebras."""

from .core import (
    Flavor,
    GradedSeries,
    Monomial,
    Truncation,
    WeightSignature,
    mono_mul,
    mono_weight,
    partial_derivative,
    series_linear,
    series_mul,
    signature_new,
    weight_component,
)
from .diophantine import (
    BorelNormalForm,
    MinimalSolutionSet,
    SolutionVector,
    borel_normal_form,
    decompose_solution,
    expand_normal_form,
    hilbert_basis,
    minimal_solutions,
)
from .errors import GradedError, ParseError
from .euler import Derivation, commutator, derivation_apply, derivation_new, euler_apply, is_homogeneous
from .filtration import (
    INF,
    bound_kl,
    bound_lk,
    convert_truncation,
    mono_order,
    sequence_orders,
    series_order,
    truncate,
)
from .morphisms import (
    GradedMorphism,
    identity_morphism,
    jet_prolong,
    morphism_apply,
    morphism_compose,
    morphism_new,
    split_base,
)
from .parsing import format_expr, parse_expr, parse_signature

__version__ = "0.1.0"
