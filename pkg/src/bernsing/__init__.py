"""Bernstein-type approximation of functions with an interior
singularity: stable basis evaluation, the bridged operator that never
samples the singular zone, weighted smoothness moduli, and a
verification harness with a CLI."""

from .basis import (
    BasisRow,
    basis_row,
    basis_value,
    bernstein_apply,
    central_moment_sum,
    inverse_moment_sum,
)
from .blending import Knots, TestFunction, bridge_p, fbar, fbar_d2, knots, psi, psi_d
from .exceptions import (
    Degenerate,
    Inadmissible,
    InvalidDegree,
    MissingDerivative,
    MissingExponent,
)
from .moduli import (
    ModulusConfig,
    k_functional_upper,
    quadrature_bound_ratio,
    modulus_curve,
    second_difference,
    steklov_means,
    weighted_modulus,
)
from .operator import OperatorInstance, bbar_apply, bbar_second, build_operator
from .weights import (
    EvalGrid,
    StepWeight,
    WeightParams,
    delta_n,
    refined_grid,
    step_weight,
    varphi,
    wbar,
    weighted_sup_norm,
)

__version__ = "0.1.0"
