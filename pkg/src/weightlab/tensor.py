"""Hilbert tensor products V = N(a1, a2) (x) N(a, 0).

The left factor is a lowest-weight module N(0, a2) (a2 < 0, possibly a
negative integer), a principal-series module, or a complementary-series
module; the right factor is highest weight with a < 0.  The basis is
z(k, l) = x(k) (x) y(l) with y(l) the descending basis of N(a, 0), l >= 0.

Four families of action formulas apply, selected by integrality:

    case A (a, a2 non-integral), B (a integral), C (a2 integral),
    D (both integral),

and every weight space of V carries the commutant generator FE as a
Jacobi-type three-term operator whose upper coefficient never vanishes;
that single fact drives both the cyclicity of weight spaces and the
absence of algebraic simple submodules.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Tuple

import numpy as np

from .errors import MalformedState, SupportMismatch
from .modules import ModuleSpec, WeightVector, act, casimir_scalar
from .scalars import (
    Scalar,
    Tolerance,
    as_integer,
    default_tolerance,
    imag_part,
    is_exact,
    real_part,
    to_complex,
)
from .unitarity import SeriesKind, classify, log_norm_sq_consecutive, norm_sq

__all__ = [
    "TensorCase",
    "TensorSpec",
    "TensorState",
    "act_tensor",
    "act_tensor_leibniz",
    "tensor_norm_sq",
    "weight_space_log_norms",
    "TridiagonalFE",
    "fe_tridiagonal",
    "fe_matrix",
    "cyclicity_witness",
    "quotient_witness",
]


class TensorCase(enum.Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"


_LEFT_KINDS = (SeriesKind.LOWEST_WEIGHT, SeriesKind.PRINCIPAL, SeriesKind.COMPLEMENTARY)


@dataclass(frozen=True)
class TensorSpec:
    """The pair of factors with the derived case tag and exponent s = a + a1 + a2."""

    left: ModuleSpec
    right: ModuleSpec
    tol: Tolerance = field(default_factory=default_tolerance, compare=False)

    def __post_init__(self):
        if self.right.a2 != 0:
            raise ValueError("right factor must be of the form N(a, 0)")
        a = self.right.a1
        if imag_part(a) != 0 or not real_part(a) < 0:
            raise ValueError("right factor parameter a must be real and negative")
        kind = classify(self.left.a1, self.left.a2, self.tol).kind
        if kind not in _LEFT_KINDS:
            raise ValueError(
                f"left factor N({self.left.a1}, {self.left.a2}) must be a lowest-weight, "
                "principal, or complementary module")
        # the spectral windows are stated for the canonical realizations:
        # N(0, a2), N(-1-x+iy, x+iy) with x in [-1, 0), or -1 < a1, a2 < 0
        if kind is SeriesKind.LOWEST_WEIGHT and self.left.a1 != 0:
            raise ValueError("lowest-weight left factor must be in the form N(0, a2)")
        if kind is SeriesKind.COMPLEMENTARY and not (
                -1 < real_part(self.left.a1) < 0 and -1 < real_part(self.left.a2) < 0):
            raise ValueError("complementary left factor must have parameters in (-1, 0); "
                             "shift-reduce it first")
        if kind is SeriesKind.PRINCIPAL and not -1 <= real_part(self.left.a2) < 0:
            raise ValueError("principal left factor must be in the form N(-1-x+iy, x+iy) "
                             "with x in [-1, 0); shift-reduce it first")

    @property
    def a1(self) -> Scalar:
        return self.left.a1

    @property
    def a2(self) -> Scalar:
        return self.left.a2

    @property
    def a(self) -> Scalar:
        return self.right.a1

    @property
    def s(self) -> Scalar:
        return self.a + self.a1 + self.a2

    @property
    def tensor_case(self) -> TensorCase:
        a_int = isinstance(self.a, int) or as_integer(self.a, self.tol) is not None
        a2_int = isinstance(self.a2, int)
        if a_int and a2_int:
            return TensorCase.D
        if a_int:
            return TensorCase.B
        if a2_int:
            return TensorCase.C
        return TensorCase.A

    def contains_index(self, k: int, l: int) -> bool:
        return l >= 0 and self.left.contains_index(k)

    def weight(self, k: int, l: int) -> Scalar:
        return self.a1 - self.a2 + self.a + 2 * (k - l)

    def l0(self, n0: int) -> int:
        """Smallest l on the weight space of weight a1 - a2 + a + 2 n0."""
        if self.left.index_min is None:
            return 0
        return max(0, self.left.index_min - n0)

    def support_base(self) -> Scalar:
        return self.a1 - self.a2 + self.a


@dataclass
class TensorState:
    """Finitely supported element of V as a sparse (k, l) -> coefficient map."""

    spec: TensorSpec
    coeffs: Dict[Tuple[int, int], Scalar]

    def __post_init__(self):
        for (k, l) in self.coeffs:
            if not self.spec.contains_index(k, l):
                raise MalformedState(f"index ({k}, {l}) outside the tensor basis")
        self.coeffs = {kl: u for kl, u in self.coeffs.items() if u != 0}


def _action_terms(spec: TensorSpec, X: str, k: int, l: int):
    """(coefficient, target) pairs of X applied to z(k, l), per the case formulas."""
    a1, a2, a = spec.a1, spec.a2, spec.a
    case = spec.tensor_case
    if X == "H":
        return ((spec.weight(k, l), (k, l)),)
    if X == "E":
        up = 1 if case in (TensorCase.C, TensorCase.D) else (a2 - k)
        down = l * (a - l + 1) if case in (TensorCase.B, TensorCase.D) else l
        return ((up, (k + 1, l)), (down, (k, l - 1)))
    if X == "F":
        down = k * (a2 - k + 1) if case in (TensorCase.C, TensorCase.D) else (a1 + k)
        up = 1 if case in (TensorCase.B, TensorCase.D) else (a - l)
        return ((down, (k - 1, l)), (up, (k, l + 1)))
    raise ValueError(f"unknown generator {X!r}")


def act_tensor(X: str, st: TensorState) -> TensorState:
    """Apply H, E, or F by linear extension of the case-(A)-(D) formulas."""
    spec = st.spec
    out: Dict[Tuple[int, int], Scalar] = {}
    for (k, l), u in st.coeffs.items():
        for c, target in _action_terms(spec, X, k, l):
            cu = u * c
            if cu == 0:
                continue
            assert spec.contains_index(*target), (
                f"{X}-coefficient failed to vanish at the boundary index ({k}, {l})"
            )
            out[target] = out.get(target, 0) + cu
    return TensorState(spec, out)


def act_tensor_leibniz(X: str, st: TensorState) -> TensorState:
    """Independent route: Leibniz rule through the factor-module actions.

    E (x (x) y) = (E x) (x) y + x (x) (E y) with y(l) = x(-l) in N(a, 0);
    used as the test oracle for :func:`act_tensor`.
    """
    spec = st.spec
    out: Dict[Tuple[int, int], Scalar] = {}

    def add(target, value):
        if value != 0:
            out[target] = out.get(target, 0) + value

    for (k, l), u in st.coeffs.items():
        v = act(X, WeightVector(spec.left, {k: u}))
        for kk, c in v.coeffs.items():
            add((kk, l), c)
        w = act(X, WeightVector(spec.right, {-l: u}))
        for jj, c in w.coeffs.items():
            add((k, -jj), c)
    return TensorState(spec, out)


def tensor_norm_sq(spec: TensorSpec, k: int, l: int) -> Scalar:
    """||z(k, l)||^2 = ||x(k)||^2 ||y(l)||^2 with both anchors normalized to 1."""
    if not spec.contains_index(k, l):
        raise MalformedState(f"index ({k}, {l}) outside the tensor basis")
    left = norm_sq(spec.left, k)
    right = norm_sq(spec.right, -l)
    return left * right


def weight_space_log_norms(spec: TensorSpec, n0: int, count: int) -> np.ndarray:
    """log ||z(l0 + n0 + j, l0 + j)||^2 for j = 0..count-1 along a weight space."""
    l0 = spec.l0(n0)
    left = log_norm_sq_consecutive(spec.left, l0 + n0, count)
    right = log_norm_sq_consecutive(spec.right, -(l0 + count - 1), count)[::-1]
    return left + right


@dataclass
class TridiagonalFE:
    """FE on one weight space: FE z_j = a_j z_{j-1} + b_j z_j + c_j z_{j+1}.

    Positions j >= 0 enumerate z_{n0}(j) = z(l0 + n0 + j, l0 + j).  The
    upper coefficient c never vanishes and the lower one vanishes at the
    bottom position, which the constructor asserts.
    """

    spec: TensorSpec
    n0: int
    l0: int
    lower: Callable[[int], Scalar]   # a at position j
    diagonal: Callable[[int], Scalar]
    upper: Callable[[int], Scalar]   # c at position j

    def index_at(self, j: int) -> Tuple[int, int]:
        return (self.l0 + self.n0 + j, self.l0 + j)

    def apply(self, u: Dict[int, Scalar]) -> Dict[int, Scalar]:
        """Apply FE to a coefficient vector over positions."""
        out: Dict[int, Scalar] = {}

        def add(j, v):
            if v != 0:
                out[j] = out.get(j, 0) + v

        for j, val in u.items():
            add(j - 1, val * self.lower(j))
            add(j, val * self.diagonal(j))
            add(j + 1, val * self.upper(j))
        assert -1 not in out, "lower coefficient failed to vanish at the bottom position"
        return out


def fe_tridiagonal(spec: TensorSpec, n0: int) -> TridiagonalFE:
    """Coefficients of FE on the weight space of weight a1 - a2 + a + 2 n0.

    Obtained by composing act_tensor(E) then act_tensor(F) on a basis
    vector and projecting back to the weight space (the composition lands
    there identically; no terms are discarded).
    """
    l0 = spec.l0(n0)

    def coeffs(j: int) -> Dict[Tuple[int, int], Scalar]:
        k, l = l0 + n0 + j, l0 + j
        fe = act_tensor("F", act_tensor("E", TensorState(spec, {(k, l): 1})))
        return fe.coeffs

    def lower(j: int) -> Scalar:
        k, l = l0 + n0 + j, l0 + j
        return coeffs(j).get((k - 1, l - 1), 0)

    def diagonal(j: int) -> Scalar:
        k, l = l0 + n0 + j, l0 + j
        return coeffs(j).get((k, l), 0)

    def upper(j: int) -> Scalar:
        k, l = l0 + n0 + j, l0 + j
        c = coeffs(j).get((k + 1, l + 1), 0)
        assert c != 0, f"FE upper coefficient vanished at position {j}"
        return c

    tri = TridiagonalFE(spec, n0, l0, lower, diagonal, upper)
    assert tri.lower(0) == 0, "FE lower coefficient must vanish at the bottom position"
    return tri


def fe_matrix(spec: TensorSpec, n0: int, size: int):
    """Dense truncation of FE on a weight space (rows/cols are positions 0..size-1)."""
    tri = fe_tridiagonal(spec, n0)
    exact = is_exact(spec.a1) and is_exact(spec.a2) and is_exact(spec.a)
    if exact:
        M = [[Fraction(0)] * size for _ in range(size)]
        for j in range(size):
            if j > 0:
                M[j - 1][j] = tri.lower(j)
            M[j][j] = tri.diagonal(j)
            if j + 1 < size:
                M[j + 1][j] = tri.upper(j)
        return M
    M = np.zeros((size, size), dtype=complex)
    for j in range(size):
        if j > 0:
            M[j - 1, j] = to_complex(tri.lower(j))
        M[j, j] = to_complex(tri.diagonal(j))
        if j + 1 < size:
            M[j + 1, j] = to_complex(tri.upper(j))
    return M


def _exact_rank(rows) -> int:
    """Fraction-valued Gaussian elimination rank."""
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    col = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pr = rows[rank]
        for i in range(rank + 1, len(rows)):
            if rows[i][col] != 0:
                f = rows[i][col] / pr[col]
                rows[i] = [x - f * y for x, y in zip(rows[i], pr)]
        rank += 1
    return rank


def cyclicity_witness(spec: TensorSpec, n0: int, M: int) -> bool:
    """Whether z_{n0}, FE z_{n0}, ..., FE^M z_{n0} span an (M+1)-dimensional space.

    Rank is computed by exact elimination for exact parameters and by SVD
    with a relative tolerance otherwise.
    """
    if M < 0:
        raise ValueError("M must be >= 0")
    tri = fe_tridiagonal(spec, n0)
    vecs = []
    u: Dict[int, Scalar] = {0: 1}
    for _ in range(M + 1):
        vecs.append(dict(u))
        u = tri.apply(u)
    exact = is_exact(spec.a1) and is_exact(spec.a2) and is_exact(spec.a)
    if exact:
        rows = [[Fraction(v.get(j, 0)) for j in range(M + 1)] for v in vecs]
        return _exact_rank(rows) == M + 1
    A = np.zeros((M + 1, M + 1), dtype=complex)
    for i, v in enumerate(vecs):
        for j, val in v.items():
            if j <= M:
                A[i, j] = to_complex(val)
        scale = np.max(np.abs(A[i]))
        if scale == 0:
            return False
        A[i] /= scale
    sv = np.linalg.svd(A, compute_uv=False)
    return bool(sv[-1] > 1e-10 * sv[0])


def quotient_witness(spec: TensorSpec, target: ModuleSpec) -> Tuple[int, Scalar]:
    """Weight index n0 and FE-eigenvalue chi realizing the target as a quotient.

    The target's distinguished weight (extremal when one-sided, else the
    k = 0 weight) must land in supp(V) = a1 - a2 + a + 2Z; then
    chi = chi_Omega - lam^2/4 - lam/2 on that weight vector.
    """
    if target.index_max is not None:
        lam = target.weight(target.index_max)
    elif target.index_min is not None:
        lam = target.weight(target.index_min)
    else:
        lam = target.weight(0)
    base = spec.support_base()
    exact = is_exact(lam) and is_exact(base)
    half = Fraction(1, 2) if exact else 0.5
    n0s = (lam - base) * half
    n0 = as_integer(n0s, spec.tol)
    if n0 is None:
        raise SupportMismatch(
            f"target weight {lam} not in the tensor support coset {base} + 2Z")
    quarter = Fraction(1, 4) if exact else 0.25
    chi = casimir_scalar(target) - lam * lam * quarter - lam * half
    return n0, chi
