"""Orthogonal polynomials of two variables in real ``(x, y)`` and complex ``(z, zb)`` form.

Bases are built from moment matrices, converted between the two
representations by a unitary change of basis, and analysed through their
three-term relations, reproducing kernels, common zeros and Gaussian cubature.
"""

from ._accel import BACKEND
from .basis import (
    BasisError,
    BasisLevel,
    determinant_oracle,
    hermitian_inv_sqrt,
    inner_product,
    monic_basis,
    orthonormal_basis,
    orthonormalize,
)
from .bridge import BridgeError, ConversionMatrix, RealLevel, build_L, complex_from_real, real_from_complex, real_level
from .families import (
    classical_eval,
    deltoid_level,
    disk_complex,
    family_levels,
    hermite_complex,
    real_family,
)
from .kernels import (
    KernelError,
    KernelEval,
    cd_kernel_complex,
    cd_kernel_real,
    disk_kernel_gegenbauer,
    kernel_complex,
    kernel_real,
)
from .polycore import CPoly, RPoly, complex_to_xy, conj_poly, cpoly_eval, poly_from_json, xy_to_complex
from .recurrence import (
    RecurrenceData,
    RecurrenceError,
    check_gamma_alpha,
    commuting_check,
    extract_complex_three_term,
    extract_real_three_term,
    favard_rank_check,
    translate_coeffs,
    vee,
)
from .weights import MomentError, MomentMatrix, QuadratureError, WeightSpec, moment, moment_matrix, region_integral
from .zeros import (
    CubatureError,
    CubatureRule,
    JacobiOperator,
    common_zeros,
    gaussian_cubature,
    jacobi_operator,
    max_zero_condition,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BasisError",
    "BasisLevel",
    "BridgeError",
    "CPoly",
    "ConversionMatrix",
    "CubatureError",
    "CubatureRule",
    "JacobiOperator",
    "KernelError",
    "KernelEval",
    "MomentError",
    "MomentMatrix",
    "QuadratureError",
    "RPoly",
    "RealLevel",
    "RecurrenceData",
    "RecurrenceError",
    "WeightSpec",
    "build_L",
    "cd_kernel_complex",
    "cd_kernel_real",
    "check_gamma_alpha",
    "classical_eval",
    "common_zeros",
    "commuting_check",
    "complex_from_real",
    "complex_to_xy",
    "conj_poly",
    "cpoly_eval",
    "deltoid_level",
    "determinant_oracle",
    "disk_complex",
    "disk_kernel_gegenbauer",
    "extract_complex_three_term",
    "extract_real_three_term",
    "family_levels",
    "favard_rank_check",
    "gaussian_cubature",
    "hermite_complex",
    "hermitian_inv_sqrt",
    "inner_product",
    "jacobi_operator",
    "kernel_complex",
    "kernel_real",
    "max_zero_condition",
    "moment",
    "moment_matrix",
    "monic_basis",
    "orthonormal_basis",
    "orthonormalize",
    "poly_from_json",
    "real_family",
    "real_from_complex",
    "real_level",
    "region_integral",
    "translate_coeffs",
    "vee",
    "xy_to_complex",
]
