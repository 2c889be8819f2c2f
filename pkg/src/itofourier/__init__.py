"""Mean-square approximation of iterated Ito stochastic integrals.

The package expands iterated Ito integrals of arbitrary multiplicity into
series of products of Gaussian basis-integral variables with coefficients
from multiple Fourier series over interchangeable orthonormal systems
(Legendre, trigonometric, Haar, Rademacher-Walsh), quantifies the exact
mean-square truncation error, and validates approximations against a
discretized pathwise oracle.
"""

__version__ = "0.1.0"

from .basis import (BasisSystem, Interval, breakpoints, eval_basis, gram_matrix,
                    integrate_basis, parse_basis)
from .coefficients import (CoefficientTensor, coefficient_tensor, fourier_coefficient,
                           moment_bound_2n, ms_error_bound, parseval_residual,
                           read_coefficient_table, write_coefficient_table)
from .errors import (ArityError, BasisIndexError, CapacityError, CompatibilityError,
                     ConfigError, DomainError, GridCompatibilityError, ItoFourierError,
                     NumericError, UnsupportedMultiplicityError)
from .expansion import (ExpansionResult, explicit_expansion, hermite_reference,
                        truncated_expansion)
from .kernel import (IntegralSpec, Weight, constant_spec, eval_kernel, eval_weight,
                     kernel_l2_norm_sq)
from .partitions import PairPartition, pair_partitions, partition_count
from .stochastic import (GaussianPool, WienerPath, brownian_path, gaussian_pool,
                         path_iterated_integral, path_seed, zeta_from_path)
from .validation import (MomentReport, ValidationReport, moment_check,
                         strong_error_estimate)

__all__ = [
    "ArityError", "BasisIndexError", "BasisSystem", "CapacityError",
    "CoefficientTensor", "CompatibilityError", "ConfigError", "DomainError",
    "ExpansionResult", "GaussianPool", "GridCompatibilityError", "IntegralSpec",
    "Interval", "ItoFourierError", "MomentReport", "NumericError", "PairPartition",
    "UnsupportedMultiplicityError", "ValidationReport", "Weight", "WienerPath",
    "breakpoints", "brownian_path", "coefficient_tensor", "constant_spec",
    "eval_basis", "eval_kernel", "eval_weight", "explicit_expansion",
    "fourier_coefficient", "gaussian_pool", "gram_matrix", "hermite_reference",
    "integrate_basis", "kernel_l2_norm_sq", "moment_bound_2n", "moment_check",
    "ms_error_bound", "pair_partitions", "parse_basis", "parseval_residual",
    "partition_count", "path_iterated_integral", "path_seed",
    "read_coefficient_table", "strong_error_estimate", "truncated_expansion",
    "write_coefficient_table", "zeta_from_path",
]
