"""Weight-module machinery for sl(2, C) and the universal cover of SU(1, 1).

Construction of the degree-one weight modules N(a1, a2), their
unitarizability classification, Hilbert tensor products with
highest-weight modules, and the computation and certification of the
discrete spectrum, including explicit generators and smooth-vector
exclusion tests.

Everything is built from pure functions over immutable values and is safe
to call concurrently; the spectral scan shards trivially over its
eigenvalue grid.
"""

from .hyp import Hyp2F1Params, hyp2f1, hyp2f1_derivative, indicial_exponents, theta_integral
from .modules import Case, ModuleSpec, WeightVector, act, case_of, casimir_scalar, support
from .scalars import QQi, Tolerance, approx_eq, default_tolerance, pochhammer
from .spectrum import (
    CSCandidate,
    SpectrumReport,
    cs_membership,
    cs_submodules,
    full_spectrum,
    hw_submodules,
    lw_submodules,
    smooth_membership,
    xi_grid_scan,
)
from .tensor import TensorCase, TensorSpec, TensorState, act_tensor, fe_tridiagonal
from .unitarity import SeriesKind, SeriesLabel, classify, norm_sq, verify_skew_adjoint

__version__ = "0.1.0"
