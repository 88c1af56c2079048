"""Kernel backend selection: compiled extension when built, pure Python otherwise."""

try:
    from . import _kernels as _impl

    BACKEND = "cython"
except ImportError:  # extension not built: fall back to the Python twin
    from . import _kernels_py as _impl

    BACKEND = "python"

fe_diag_sequence = _impl.fe_diag_sequence
hyp2f1_series = _impl.hyp2f1_series

__all__ = ["BACKEND", "fe_diag_sequence", "hyp2f1_series"]
