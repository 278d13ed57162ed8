"""Numerics for the integral operators induced by the Fock reproducing kernel.

S_t and T_t act on L^p(C^n, dv_s).  The package evaluates the closed forms
around them, applies them by Gaussian-measure quadrature, brackets their
norms on the threshold pt = 2s, and produces unboundedness witnesses off it.
"""

__version__ = "0.1.0"

from .errors import ConvergenceError, TruncationError, TruncationWarning
from .measure import (
    GaussianMeasure,
    GridFunction,
    MultiIndex,
    QuadratureRule,
    build_rule,
    gaussian_monomial_moment,
    integrate,
    lp_norm,
)
from .kernel import KernelParams, Polynomial, eval_kernel, inner, kernel_abs_integral, reproduce_check
from .operators import (
    OperatorSpec,
    RadialOperatorA,
    apply_A,
    apply_S,
    apply_S_adjoint,
    apply_T,
    apply_T_adjoint,
    kernel_A_eval,
    radial_correspondence_check,
)
from .norms import (
    Bounded,
    Inconclusive,
    NormEstimate,
    ParamTriple,
    SchurCertificate,
    Unbounded,
    Witness,
    classify,
    find_witness,
    lower_bound_feps,
    lower_bound_power_iteration,
    p1_growth_exponent,
    reduce_ab,
    schur_certify,
    schur_lambda,
    threshold_norm_estimate,
    witness_ratio_adjoint_fxk,
    witness_ratio_fxk,
)
from .asymptotics import Lemma13Params, lemma13_extrapolate, lemma13_value

__all__ = [
    "__version__",
    "GaussianMeasure",
    "GridFunction",
    "MultiIndex",
    "QuadratureRule",
    "build_rule",
    "gaussian_monomial_moment",
    "integrate",
    "lp_norm",
    "OperatorSpec",
    "RadialOperatorA",
    "apply_A",
    "apply_S",
    "apply_S_adjoint",
    "apply_T",
    "apply_T_adjoint",
    "kernel_A_eval",
    "radial_correspondence_check",
    "Bounded",
    "Inconclusive",
    "NormEstimate",
    "ParamTriple",
    "SchurCertificate",
    "Unbounded",
    "Witness",
    "classify",
    "find_witness",
    "lower_bound_feps",
    "lower_bound_power_iteration",
    "p1_growth_exponent",
    "reduce_ab",
    "schur_certify",
    "schur_lambda",
    "threshold_norm_estimate",
    "witness_ratio_adjoint_fxk",
    "witness_ratio_fxk",
    "ConvergenceError",
    "TruncationError",
    "TruncationWarning",
    "KernelParams",
    "Polynomial",
    "eval_kernel",
    "inner",
    "kernel_abs_integral",
    "reproduce_check",
    "Lemma13Params",
    "lemma13_extrapolate",
    "lemma13_value",
]
