"""Unitarizability of the modules N(a1, a2) and their Hilbert structure.

An inner product making the real form act by skew-symmetric operators must
have orthogonal weight vectors, real weights, and satisfy

    <F x(k+1), x(k)> = - <x(k+1), E x(k)>,

which determines every ||x(k)||^2 from one anchor value by a first-order
recurrence whose positivity is the unitarizability criterion.  The result
is the familiar list: principal series (parameters x in [-1, 0), y != 0,
with a1 = -1 - x + iy, a2 = x + iy), complementary series (both parameters
reducible to (-1, 0)), highest/lowest weight modules and their
continuations, and the trivial module.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

import numpy as np

from .errors import IndexOutOfSupport, NotUnitarizable
from .modules import Case, ModuleSpec, casimir_scalar, e_coeff, f_coeff
from .scalars import (
    Scalar,
    Tolerance,
    conjugate,
    default_tolerance,
    imag_part,
    is_exact,
    real_part,
    to_complex,
)

__all__ = [
    "SeriesKind",
    "SeriesLabel",
    "UnitaryStructure",
    "unitary_structure",
    "classify",
    "norm_sq",
    "norm_ratio",
    "log_norm_sq",
    "log_norm_sq_consecutive",
    "verify_skew_adjoint",
    "nelson_matrix",
]


class SeriesKind(enum.Enum):
    PRINCIPAL = "Principal"
    COMPLEMENTARY = "Complementary"
    HIGHEST_WEIGHT = "HighestWeight"
    LOWEST_WEIGHT = "LowestWeight"
    TRIVIAL = "Trivial"
    NOT_UNITARIZABLE = "NotUnitarizable"


@dataclass(frozen=True)
class SeriesLabel:
    """Classification outcome with canonical parameters.

    params holds (x, y) for the principal series, the shift-reduced
    (a1, a2) in (-1, 0)^2 for the complementary series, and the positive
    parameter lam for highest/lowest weight modules.  boundary marks float
    decisions that fell within abs_eps of a window edge.
    """

    kind: SeriesKind
    params: Tuple[Tuple[str, Scalar], ...] = ()
    boundary: bool = False

    def param(self, name: str) -> Scalar:
        return dict(self.params)[name]

    @property
    def unitarizable(self) -> bool:
        return self.kind is not SeriesKind.NOT_UNITARIZABLE


def _floor(x: Scalar) -> int:
    if isinstance(x, Fraction):
        return math.floor(x)
    return math.floor(real_part(to_complex(x)))


def classify(a1: Scalar, a2: Scalar, tol: Tolerance | None = None) -> SeriesLabel:
    """Decide the series of N(a1, a2).

    The seven-case criterion reduces, under the shift equivalence
    N(a1, a2) = N(a1 - m, a2 + m), to: principal line Re(a1 + a2) = -1 with
    a common nonzero imaginary part; complementary window
    -2 - floor(a2) < a1 < -1 - floor(a2) for real non-integer parameters;
    one-sided modules with positive extremal weight; and the trivial module.
    """
    tol = tol or default_tolerance()
    spec = ModuleSpec(a1, a2, tol)
    a1, a2 = spec.a1, spec.a2

    def near(u, v) -> bool:
        return abs(to_complex(u) - to_complex(v)) <= tol.abs_eps

    no = lambda boundary=False: SeriesLabel(SeriesKind.NOT_UNITARIZABLE, boundary=boundary)

    # H must have real eigenvalues: a1 - a2 real.
    diff_im = imag_part(a1 - a2)
    if not (diff_im == 0 or abs(float(diff_im)) <= tol.abs_eps):
        return no()

    case = spec.case
    if case is Case.IV:
        # dim = -a1 - a2 - 1 > 1 kills positivity; the single point (-1, -1)
        # is the one-dimensional module, i.e. the trivial representation
        if spec.dimension == 1:
            return SeriesLabel(SeriesKind.TRIVIAL)
        return no()

    int1 = a1 if isinstance(a1, int) else None
    int2 = a2 if isinstance(a2, int) else None

    if case is Case.I:
        if int1 is not None and int2 is not None:
            if int1 == 0 and int2 == 0:
                return SeriesLabel(SeriesKind.TRIVIAL)
            return no()  # finite dimensional, dim a1 + a2 + 1 > 1
        if int2 is not None:  # a2 in Z_{>=0}: bounded above, highest weight type
            if imag_part(a1) != 0 and abs(float(imag_part(a1))) > tol.abs_eps:
                return no()
            lam = -(a1 + a2)
            if real_part(lam) > 0:
                return SeriesLabel(
                    SeriesKind.HIGHEST_WEIGHT, (("lam", real_part(lam)),),
                    boundary=near(lam, 0))
            return no(boundary=near(lam, 0))
        if int1 is not None:  # a1 in Z_{>=0}: bounded below, lowest weight type
            if imag_part(a2) != 0 and abs(float(imag_part(a2))) > tol.abs_eps:
                return no()
            lam = -(a1 + a2)
            if real_part(lam) > 0:
                return SeriesLabel(
                    SeriesKind.LOWEST_WEIGHT, (("lam", real_part(lam)),),
                    boundary=near(lam, 0))
            return no(boundary=near(lam, 0))
        # neither parameter integral
        y = imag_part(a2)
        y_zero = y == 0 or abs(float(y)) <= tol.abs_eps
        if not y_zero:
            # principal line: a1 = -1 - x + iy, a2 = x + iy
            if not near(real_part(a1 + a2), -1):
                return no()
            x = real_part(a2)
            x_red = x - _floor(x) - 1  # representative in [-1, 0)
            return SeriesLabel(
                SeriesKind.PRINCIPAL, (("x", x_red), ("y", y)),
                boundary=near(y, 0))
        r1, r2 = real_part(a1), real_part(a2)
        f2 = _floor(r2)
        if -2 - f2 < r1 < -1 - f2:
            shift = f2 + 1
            b1, b2 = r1 + shift, r2 - shift  # both land in (-1, 0)
            edge = near(r1, -2 - f2) or near(r1, -1 - f2)
            return SeriesLabel(
                SeriesKind.COMPLEMENTARY, (("a1", b1), ("a2", b2)), boundary=edge)
        return no(boundary=near(r1, -2 - f2) or near(r1, -1 - f2))

    if case is Case.II:  # a2 in Z_{<0}: bounded below, lowest weight type
        if imag_part(a1) != 0 and abs(float(imag_part(a1))) > tol.abs_eps:
            return no()
        lam = spec.weight(spec.index_min)  # lowest weight
        lam = real_part(lam)
        if int1 is not None:
            # always unitarizable; positivity of the norm products is automatic
            return SeriesLabel(SeriesKind.LOWEST_WEIGHT, (("lam", lam),))
        if lam > 0:  # equivalent to a1 + a2 + 2 > 0
            return SeriesLabel(
                SeriesKind.LOWEST_WEIGHT, (("lam", lam),), boundary=near(lam, 0))
        return no(boundary=near(lam, 0))

    # case III: a1 in Z_{<0}: bounded above, highest weight type
    if imag_part(a2) != 0 and abs(float(imag_part(a2))) > tol.abs_eps:
        return no()
    lam = -real_part(spec.weight(spec.index_max))  # minus the highest weight
    if int2 is not None:
        return SeriesLabel(SeriesKind.HIGHEST_WEIGHT, (("lam", lam),))
    if lam > 0:  # equivalent to a1 + a2 + 2 > 0 on the non-integral branch
        return SeriesLabel(
            SeriesKind.HIGHEST_WEIGHT, (("lam", lam),), boundary=near(lam, 0))
    return no(boundary=near(lam, 0))


def _require_unitarizable(spec: ModuleSpec) -> SeriesLabel:
    label = classify(spec.a1, spec.a2, spec.tol)
    if not label.unitarizable:
        raise NotUnitarizable(f"N({spec.a1}, {spec.a2}) is not unitarizable")
    return label


@dataclass(frozen=True)
class UnitaryStructure:
    """The invariant inner product of a unitarizable module.

    Norms are pinned to 1 at the anchor index (0 for two-sided modules,
    the extremal index for one-sided ones); norm_sq stays positive on the
    whole index set and realizes the adjointness E* = -F.
    """

    spec: ModuleSpec
    label: SeriesLabel
    anchor_index: int

    def norm_sq(self, k: int) -> Scalar:
        return norm_sq(self.spec, k)


def unitary_structure(spec: ModuleSpec) -> UnitaryStructure:
    label = _require_unitarizable(spec)
    return UnitaryStructure(spec, label, spec.anchor_index())


def norm_ratio(spec: ModuleSpec, k: int) -> Scalar:
    """||x(k+1)||^2 / ||x(k)||^2 = -f(k+1) / conj(e(k)); positive on unitarizable modules."""
    num = -f_coeff(spec, k + 1)
    den = conjugate(e_coeff(spec, k))
    if is_exact(num) and is_exact(den):
        return real_part(num / den)
    return (to_complex(num) / to_complex(den)).real


def norm_sq(spec: ModuleSpec, k: int) -> Scalar:
    """||x(k)||^2 with the anchor norm pinned to 1.

    The anchor is k = 0 for two-sided modules and the extremal index for
    one-sided ones; the closed product formulas per series are:

      principal:                 1
      complementary, k > 0:      prod (j + a1) / prod (j - 1 - a2)
      complementary, k < 0:      prod (j + a2) / prod (j - 1 - a1)
      one-sided, case I:         m! / prod (j - 1 - a1 - a2)
      one-sided, case II/III:    m! * prod (j - 1 - a1 - a2)   anchored at -a1 resp. a2
                                 m! * prod (j + 1 + a1 + a2)   anchored at a2+1 resp. -a1-1

    with m the number of steps from the anchor into the module.
    """
    label = _require_unitarizable(spec)
    if not spec.contains_index(k):
        raise IndexOutOfSupport(f"index {k} not in the index set of N({spec.a1}, {spec.a2})")
    a1, a2 = spec.a1, spec.a2
    one: Scalar = 1 if (is_exact(a1) and is_exact(a2)) else 1.0
    if label.kind is SeriesKind.TRIVIAL:
        return one
    if label.kind is SeriesKind.PRINCIPAL:
        return 1.0
    case = spec.case
    if case is Case.I and spec.index_min is None and spec.index_max is None:
        # complementary: anchored at 0
        out = one
        if k > 0:
            for j in range(1, k + 1):
                out = out * (j + a1) / (j - 1 - a2)
        else:
            for j in range(1, -k + 1):
                out = out * (j + a2) / (j - 1 - a1)
        return real_part(out)
    if case is Case.I:
        anchor = spec.index_max if spec.index_max is not None else spec.index_min
        m = abs(k - anchor)
        out = one
        for j in range(1, m + 1):
            out = out * j / (j - 1 - a1 - a2)
        return real_part(out)
    if case is Case.II:
        anchor = spec.index_min
        m = k - anchor
        hw_style = isinstance(a1, int) and a1 >= 0 and anchor == -a1
    else:  # case III
        anchor = spec.index_max
        m = anchor - k
        hw_style = isinstance(a2, int) and a2 >= 0 and anchor == a2
    out = one
    for j in range(1, m + 1):
        out = out * j * ((j - 1 - a1 - a2) if hw_style else (j + 1 + a1 + a2))
    return real_part(out)


def log_norm_sq(spec: ModuleSpec, k: int) -> float:
    """log ||x(k)||^2, overflow-safe (sums log norm ratios from the anchor)."""
    _require_unitarizable(spec)
    if not spec.contains_index(k):
        raise IndexOutOfSupport(str(k))
    anchor = spec.anchor_index()
    total = 0.0
    if k >= anchor:
        for j in range(anchor, k):
            total += math.log(float(real_part(norm_ratio(spec, j))))
    else:
        for j in range(k, anchor):
            total -= math.log(float(real_part(norm_ratio(spec, j))))
    return total


def log_norm_sq_consecutive(spec: ModuleSpec, k_start: int, count: int) -> np.ndarray:
    """log ||x(k)||^2 for k = k_start .. k_start + count - 1, vectorized."""
    _require_unitarizable(spec)
    if count <= 0:
        return np.zeros(0)
    if not (spec.contains_index(k_start) and spec.contains_index(k_start + count - 1)):
        raise IndexOutOfSupport(f"range [{k_start}, {k_start + count})")
    ks = np.arange(k_start, k_start + count - 1, dtype=np.float64)
    a1 = to_complex(spec.a1)
    a2 = to_complex(spec.a2)
    case = spec.case
    if case is Case.I:
        num, den = -(a1 + ks + 1), np.conj(a2) - ks
    elif case is Case.II:
        num, den = -(a1 + ks + 1) * (a2 - ks), np.ones_like(ks, dtype=complex)
    elif case is Case.III:
        num, den = -np.ones_like(ks, dtype=complex), np.conj((a1 + ks + 1) * (a2 - ks))
    else:
        raise NotUnitarizable("finite-dimensional module")
    ratios = (num / den).real
    logs = np.empty(count)
    logs[0] = log_norm_sq(spec, k_start)
    if count > 1:
        logs[1:] = logs[0] + np.cumsum(np.log(ratios))
    return logs


def verify_skew_adjoint(spec: ModuleSpec, K: int) -> float:
    """Max residual of <F x(k+1), x(k)> + <x(k+1), E x(k)> on the normalized basis.

    Also checks that H has real eigenvalues; orthogonality holds by
    construction.  Exactly zero in exact arithmetic; rounding-level in floats.
    """
    _require_unitarizable(spec)
    anchor = spec.anchor_index()
    lo = anchor - K if spec.index_min is None else max(spec.index_min, anchor - K)
    hi = anchor + K if spec.index_max is None else min(spec.index_max, anchor + K)
    worst = 0.0
    for k in range(lo, hi):
        r = float(real_part(norm_ratio(spec, k)))
        assert r > 0, f"norm ratio not positive at k={k}"
        w = to_complex(spec.weight(k))
        assert abs(w.imag) <= spec.tol.abs_eps, "H eigenvalue not real"
        t1 = to_complex(f_coeff(spec, k + 1)) / math.sqrt(r)
        t2 = to_complex(conjugate(e_coeff(spec, k))) * math.sqrt(r)
        worst = max(worst, abs(t1 + t2))
    return worst


def nelson_matrix(spec: ModuleSpec, K: int) -> np.ndarray:
    """Matrix of Omega - (E - F)^2 / 2 on the normalized truncated basis.

    This is the operator whose essential self-adjointness integrates the
    module to the group; here only its symmetry on truncations is certified.
    """
    _require_unitarizable(spec)
    anchor = spec.anchor_index()
    lo = anchor - K if spec.index_min is None else max(spec.index_min, anchor - K)
    hi = anchor + K if spec.index_max is None else min(spec.index_max, anchor + K)
    ks = list(range(lo, hi + 1))
    n = len(ks)
    E = np.zeros((n, n), dtype=complex)
    F = np.zeros((n, n), dtype=complex)
    for i, k in enumerate(ks[:-1]):
        r = math.sqrt(float(real_part(norm_ratio(spec, k))))
        E[i + 1, i] = to_complex(e_coeff(spec, k)) * r
        F[i, i + 1] = to_complex(f_coeff(spec, k + 1)) / r
    D = E - F
    A = to_complex(casimir_scalar(spec)) * np.eye(n) - 0.5 * (D @ D)
    return A
