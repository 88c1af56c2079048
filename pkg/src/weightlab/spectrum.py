"""Discrete spectrum of V = N(a1, a2) (x) N(a, 0).

Three mechanisms produce Hilbert submodules: highest-weight vectors
(kernel of E on a weight space), lowest-weight vectors (kernel of F,
only when a1 = 0), and complementary-series eigenvectors of FE on the
diagonal weight space.  The last are decided by a symbolic trichotomy on
the exponent r = (1+s)/2 - sqrt(mu + ((1+s)/2)^2):

  * r - a or r - a2 a non-positive integer: the generating function is
    (1-z)^r times a polynomial and fails square-summability;
  * 1 + a1 + a - r or 1 + a1 + a2 - r a non-positive integer: an Euler
    factorization cancels the singular factor and membership holds;
  * otherwise membership holds exactly when s is real, -1 < s < 0 and
    r = 0.

An independent numerical oracle re-derives the members by scanning FE
eigenvalue targets over the admissible window, solving the three-term
recurrence forward, and testing tail square-summability; the minimal
(summable) branch is separated from the dominant one with a casoratian
projection against the formal series solution at infinity.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

from .asymfit import (
    dyadic_block_exponent,
    frobenius_eval,
    frobenius_tail_coefficients,
)
from .errors import OutOfRange, OutOfWindow
from .hyp import indicial_exponents
from .kernels import fe_diag_sequence
from .modules import ModuleSpec, casimir_scalar
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
from .tensor import TensorCase, TensorSpec, fe_tridiagonal, weight_space_log_norms
from .unitarity import classify, SeriesKind

__all__ = [
    "CSCandidate",
    "Membership",
    "MembershipResult",
    "SubmoduleDescriptor",
    "HwLattice",
    "SpectrumReport",
    "complementary_window",
    "cs_candidate",
    "cs_membership",
    "cs_submodules",
    "hw_coefficients",
    "lw_coefficients",
    "hw_log_weighted_terms",
    "lw_log_weighted_terms",
    "hw_submodules",
    "lw_submodules",
    "full_spectrum",
    "generator_coefficients",
    "generator_residual",
    "diag_recurrence_sequence",
    "fe_diag_sequence_exact",
    "variable_change_factors",
    "series_coefficients",
    "diagonal_xis",
    "xi_grid_scan",
    "DetectedMember",
    "principal_tail_exponent",
    "smooth_membership",
    "SmoothResult",
]


# ---------------------------------------------------------------------------
# FE-eigenvalue candidates on the diagonal weight space
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CSCandidate:
    """An FE-eigenvalue target xi on the diagonal weight space with derived data."""

    spec: TensorSpec
    xi: Scalar

    @property
    def s(self) -> Scalar:
        return self.spec.s

    @property
    def mu(self) -> Scalar:
        return self.xi - self.spec.a2 * (1 + self.spec.a + self.spec.a1)

    @property
    def p(self) -> Scalar:
        return self.spec.a * self.spec.a2

    @property
    def discriminant(self) -> float:
        d = to_complex(self.mu) + ((1 + to_complex(self.s)) / 2) ** 2
        assert abs(d.imag) <= 1e-9 * max(1.0, abs(d)), \
            "discriminant must be real for diagonal eigenvalue targets"
        return d.real

    @property
    def r(self) -> complex:
        d = self.discriminant
        root = math.sqrt(d) if d >= 0 else complex(0, math.sqrt(-d))
        return (1 + to_complex(self.s)) / 2 - root


def cs_candidate(spec: TensorSpec, xi: Scalar) -> CSCandidate:
    return CSCandidate(spec, xi)


def complementary_window(spec: TensorSpec) -> Tuple[float, float]:
    """The open xi interval where the discriminant lies in (0, 1/4); width 1/4."""
    s = to_complex(spec.s)
    lo = (to_complex(spec.a2) * (1 + to_complex(spec.a) + to_complex(spec.a1))
          - ((1 + s) / 2) ** 2)
    assert abs(lo.imag) < 1e-9 * max(1.0, abs(lo))
    return lo.real, lo.real + 0.25


class Membership(enum.Enum):
    MEMBER = "Member"
    NOT_MEMBER = "NotMember"


@dataclass(frozen=True)
class MembershipResult:
    verdict: Membership
    tag: str  # 'terminating-2f1' | 'euler-a' | 'euler-a2' | 'bergman-r0' | 'generic' | 'principal-range'
    boundary: bool = False

    @property
    def member(self) -> bool:
        return self.verdict is Membership.MEMBER


def cs_membership(cand: CSCandidate, tol: Tolerance | None = None) -> MembershipResult:
    """Symbolic membership trichotomy for a complementary-range candidate.

    Candidates with non-positive discriminant are never members (principal
    range); discriminant >= 1/4 is outside the scan and raises OutOfRange.
    """
    tol = tol or default_tolerance()
    d = cand.discriminant
    if d >= 0.25:
        raise OutOfRange(f"discriminant {d} >= 1/4: outside the eigenvalue window")
    if d <= 0:
        return MembershipResult(Membership.NOT_MEMBER, "principal-range",
                                boundary=abs(d) <= tol.abs_eps)
    spec = cand.spec
    r = cand.r
    a, a1, a2 = to_complex(spec.a), to_complex(spec.a1), to_complex(spec.a2)

    def nonpos_int(w: complex) -> bool:
        m = as_integer(w, tol)
        return m is not None and m <= 0

    edge = abs(d) <= tol.abs_eps or abs(d - 0.25) <= tol.abs_eps
    for w in (r - a, r - a2):
        if nonpos_int(w):
            return MembershipResult(Membership.NOT_MEMBER, "terminating-2f1", edge)
    if nonpos_int(1 + a1 + a - r):
        return MembershipResult(Membership.MEMBER, "euler-a", edge)
    if nonpos_int(1 + a1 + a2 - r):
        return MembershipResult(Membership.MEMBER, "euler-a2", edge)
    s = to_complex(cand.s)
    s_real = abs(s.imag) <= tol.abs_eps
    if s_real and -1 < s.real < 0 and abs(r) <= tol.abs_eps:
        return MembershipResult(Membership.MEMBER, "bergman-r0", edge)
    return MembershipResult(Membership.NOT_MEMBER, "generic", edge)


# ---------------------------------------------------------------------------
# Highest / lowest weight solvers
# ---------------------------------------------------------------------------


def _e_up_coeff(spec: TensorSpec, k):
    """Coefficient of z(k+1, l) in E z(k, l)."""
    if spec.tensor_case in (TensorCase.C, TensorCase.D):
        return 1
    return spec.a2 - k


def _e_down_coeff(spec: TensorSpec, l):
    """Coefficient of z(k, l-1) in E z(k, l)."""
    if spec.tensor_case in (TensorCase.B, TensorCase.D):
        return l * (spec.a - l + 1)
    return l


def _f_down_coeff(spec: TensorSpec, k):
    """Coefficient of z(k-1, l) in F z(k, l)."""
    if spec.tensor_case in (TensorCase.C, TensorCase.D):
        return k * (spec.a2 - k + 1)
    return spec.a1 + k


def _f_up_coeff(spec: TensorSpec, l):
    """Coefficient of z(k, l+1) in F z(k, l)."""
    if spec.tensor_case in (TensorCase.B, TensorCase.D):
        return 1
    return spec.a - l


def hw_coefficients(spec: TensorSpec, n0: int, count: int, exact: bool = False):
    """Coefficients u_j of the E-kernel series sum_j u_j z(j + n0, j), u_0 = 1.

    The recurrence u_j A(j + n0) + u_{j+1} B(j + 1) = 0 telescopes E to a
    single boundary term.  When the left index set is bounded below and
    n0 < 0 the boundary forces the zero solution, returned as zeros.
    """
    if spec.l0(n0) > 0:
        return [0] * count if exact else np.zeros(count, dtype=complex)
    if exact:
        u = [Fraction(1)]
        for j in range(count - 1):
            u.append(-u[-1] * _e_up_coeff(spec, j + n0) / _e_down_coeff(spec, j + 1))
        return u
    u = np.empty(count, dtype=complex)
    u[0] = 1
    for j in range(count - 1):
        u[j + 1] = -u[j] * to_complex(_e_up_coeff(spec, j + n0)) \
            / to_complex(_e_down_coeff(spec, j + 1))
    return u


def lw_coefficients(spec: TensorSpec, n0: int, count: int, exact: bool = False):
    """Coefficients u_j of the F-kernel series sum_j u_j z(l0+n0+j, l0+j).

    Nonzero solutions require a left factor with a1 = 0 and n0 <= 0; the
    series starts at l0 = -n0 where the lower F-coefficient vanishes.
    """
    if spec.left.index_min is None or n0 > 0:
        return [0] * count if exact else np.zeros(count, dtype=complex)
    l0 = spec.l0(n0)
    if exact:
        u = [Fraction(1)]
        for j in range(count - 1):
            l = l0 + j
            u.append(-u[-1] * _f_up_coeff(spec, l) / _f_down_coeff(spec, l + n0 + 1))
        return u
    u = np.empty(count, dtype=complex)
    u[0] = 1
    for j in range(count - 1):
        l = l0 + j
        u[j + 1] = -u[j] * to_complex(_f_up_coeff(spec, l)) \
            / to_complex(_f_down_coeff(spec, l + n0 + 1))
    return u


def hw_log_weighted_terms(spec: TensorSpec, n0: int, count: int) -> np.ndarray:
    """log(|u_j|^2 ||z(j+n0, j)||^2) for the E-kernel series, overflow-safe."""
    assert spec.l0(n0) == 0, "no highest-weight series on this weight space"
    js = np.arange(count - 1, dtype=float)
    if spec.tensor_case in (TensorCase.C, TensorCase.D):
        num = np.ones_like(js)
    else:
        num = np.abs(to_complex(spec.a2) - (js + n0))
    if spec.tensor_case in (TensorCase.B, TensorCase.D):
        den = np.abs((js + 1) * (to_complex(spec.a) - js))
    else:
        den = js + 1
    logu = np.concatenate([[0.0], np.cumsum(np.log(num / den))])
    return 2 * logu + weight_space_log_norms(spec, n0, count)


def lw_log_weighted_terms(spec: TensorSpec, n0: int, count: int) -> np.ndarray:
    """log(|u_j|^2 ||z_j||^2) for the F-kernel series (a1 = 0, n0 <= 0)."""
    assert spec.left.index_min is not None and n0 <= 0
    l0 = spec.l0(n0)
    ls = np.arange(l0, l0 + count - 1, dtype=float)
    if spec.tensor_case in (TensorCase.B, TensorCase.D):
        num = np.ones_like(ls)
    else:
        num = np.abs(to_complex(spec.a) - ls)
    ks = ls + n0 + 1
    if spec.tensor_case in (TensorCase.C, TensorCase.D):
        den = np.abs(ks * (to_complex(spec.a2) - ks + 1))
    else:
        den = np.abs(to_complex(spec.a1) + ks)
    logu = np.concatenate([[0.0], np.cumsum(np.log(num / den))])
    return 2 * logu + weight_space_log_norms(spec, n0, count)


# ---------------------------------------------------------------------------
# Submodule descriptors and assembly
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubmoduleDescriptor:
    """One discrete-spectrum entry: the abstract module, its weight index, and generator."""

    kind: str            # 'HighestWeight' | 'LowestWeight' | 'Complementary'
    b1: Scalar
    b2: Scalar
    n0: int
    xi: Scalar           # FE eigenvalue on the weight space carrying the generator
    generator_kind: str  # 'hw' | 'lw' | 'cs-hyp' | 'cs-binom'

    @property
    def module(self) -> ModuleSpec:
        return ModuleSpec(self.b1, self.b2)


@dataclass(frozen=True)
class HwLattice:
    """Infinite highest-weight family: one module for every n0 <= n0_max."""

    n0_max: int
    weight_base: Scalar  # highest weight at n0 = 0; entry n0 has weight base + 2 n0


@dataclass
class SpectrumReport:
    a1: Scalar
    a2: Scalar
    a: Scalar
    entries: List[SubmoduleDescriptor]
    hw_lattice: Optional[HwLattice]
    excluded: List[str]

    def __eq__(self, other) -> bool:
        return (type(other) is SpectrumReport
                and self.to_dict() == other.to_dict())

    def to_dict(self) -> dict:
        def scal(x):
            if isinstance(x, Fraction):
                return str(x)
            z = to_complex(x)
            return [z.real, z.imag] if z.imag else z.real

        spec = TensorSpec(ModuleSpec(self.a1, self.a2), ModuleSpec(self.a, 0))
        return {
            "params": {"a1": scal(self.a1), "a2": scal(self.a2), "a": scal(self.a)},
            "entries": [
                {
                    "kind": e.kind,
                    "params": {"b1": scal(e.b1), "b2": scal(e.b2)},
                    "n0": e.n0,
                    "xi": scal(e.xi),
                    "generator": {
                        "kind": e.generator_kind,
                        "coefficients_head": [
                            scal(c) for c in generator_coefficients(spec, e, 10)],
                    },
                }
                for e in self.entries
            ],
            "hw_lattice": None if self.hw_lattice is None else {
                "n0_max": self.hw_lattice.n0_max,
                "weight_base": scal(self.hw_lattice.weight_base),
            },
            "excluded": list(self.excluded),
        }

    @staticmethod
    def from_dict(d: dict) -> "SpectrumReport":
        def unscal(v):
            if isinstance(v, str):
                return Fraction(v)
            if isinstance(v, list):
                return complex(v[0], v[1])
            return v

        entries = [
            SubmoduleDescriptor(
                kind=e["kind"], b1=unscal(e["params"]["b1"]), b2=unscal(e["params"]["b2"]),
                n0=e["n0"], xi=unscal(e["xi"]), generator_kind=e["generator"]["kind"])
            for e in d["entries"]
        ]
        lat = d.get("hw_lattice")
        lattice = None if lat is None else HwLattice(lat["n0_max"], unscal(lat["weight_base"]))
        p = d["params"]
        return SpectrumReport(unscal(p["a1"]), unscal(p["a2"]), unscal(p["a"]),
                              entries, lattice, list(d.get("excluded", [])))


def _strict_max_below(threshold: float) -> int:
    """Largest integer n with n < threshold."""
    n = math.ceil(threshold) - 1
    return n


def hw_submodules(spec: TensorSpec) -> Tuple[List[SubmoduleDescriptor], Optional[HwLattice]]:
    """Highest-weight entries: E-kernel series with square-summable tails.

    The tail weight behaves like l^(a + a1 - a2 + 2 n0), so admissibility is
    2 n0 < -1 - a - a1 + a2; with a bounded-below left factor (a1 = 0) the
    weight index must also be non-negative, giving a finite list, otherwise
    every sufficiently negative n0 works and the family is reported as a
    lattice.
    """
    a, a1, a2 = spec.a, spec.a1, spec.a2
    threshold = real_part(-1 - a - a1 + a2) / 2.0
    n0_max = _strict_max_below(float(threshold))
    base = real_part(a1 + a - a2)  # highest weight at n0 = 0 (a1 - a2 real)

    def entry(n0: int) -> SubmoduleDescriptor:
        lam = base + 2 * n0
        xi_chi = _weight_space_xi(spec, ModuleSpec(lam, 0), n0)
        return SubmoduleDescriptor("HighestWeight", lam, 0, n0, xi_chi, "hw")

    if spec.left.index_min is not None:  # a1 = 0: n0 >= 0 and finite
        return [entry(n0) for n0 in range(0, n0_max + 1)], None
    return [], HwLattice(n0_max, base)


def lw_submodules(spec: TensorSpec) -> List[SubmoduleDescriptor]:
    """Lowest-weight entries: F-kernel series, nonzero only for a1 = 0.

    Admissibility window: 1 + a2 - a < 2 n0 <= 0; the entry at n0 is
    N(0, a2 - a - 2 n0) with lowest weight a - a2 + 2 n0.
    """
    if spec.left.index_min is None:
        return []
    a, a2 = spec.a, spec.a2
    lo = real_part(1 + a2 - a) / 2.0
    n0_min = math.floor(float(lo)) + 1  # smallest integer strictly above lo
    out = []
    for n0 in range(n0_min, 1):
        c = a2 - a - 2 * n0
        xi_chi = _weight_space_xi(spec, ModuleSpec(0, c), n0)
        out.append(SubmoduleDescriptor("LowestWeight", 0, c, n0, xi_chi, "lw"))
    return out


def _weight_space_xi(spec: TensorSpec, module: ModuleSpec, n0: int) -> Scalar:
    """FE eigenvalue of the target module's vector of weight base + 2 n0."""
    lam = spec.support_base() + 2 * n0
    exact = is_exact(lam)
    half = Fraction(1, 2) if exact else 0.5
    quarter = Fraction(1, 4) if exact else 0.25
    chi = casimir_scalar(module) - lam * lam * quarter - lam * half
    if not exact and abs(to_complex(chi).imag) < 1e-12:
        chi = to_complex(chi).real
    return chi


def cs_submodules(spec: TensorSpec, tol: Tolerance | None = None) -> List[SubmoduleDescriptor]:
    """Complementary-series entries on the diagonal weight space.

    Two disjoint windows produce one entry each:

      * a1, a2 real and -1 < a + a1 + a2 < 0: N(a + a1, a2), generated by
        sum_n (-a)_n (-a2)_n / ((1 + a1)_n n!) z(n, n);
      * -1 < a1, a2 < 0 and -2 < a1 + a2 - a < -1: N(a1, a2 - a),
        generated by sum_n (-a)_n / n! z(n, n).
    """
    tol = tol or default_tolerance()
    a, a1, a2 = spec.a, spec.a1, spec.a2
    out: List[SubmoduleDescriptor] = []
    real_params = (imag_part(a1) == 0 or abs(float(imag_part(a1))) <= tol.abs_eps) and \
                  (imag_part(a2) == 0 or abs(float(imag_part(a2))) <= tol.abs_eps)
    if real_params:
        s = real_part(spec.s)
        if -1 < float(s) < 0:
            b1, b2 = a + a1, a2
            xi = a2 * (1 + a + a1)
            assert classify(b1, b2, tol).kind is SeriesKind.COMPLEMENTARY
            out.append(SubmoduleDescriptor("Complementary", b1, b2, 0, xi, "cs-hyp"))
        w = float(real_part(a1 + a2 - a))
        left_cpl = classify(a1, a2, tol).kind is SeriesKind.COMPLEMENTARY
        if left_cpl and -2 < w < -1:
            b1, b2 = a1, a2 - a
            xi = (a2 - a) * (1 + a1)
            assert classify(b1, b2, tol).kind is SeriesKind.COMPLEMENTARY
            out.append(SubmoduleDescriptor("Complementary", b1, b2, 0, xi, "cs-binom"))
    return out


def full_spectrum(spec: TensorSpec) -> SpectrumReport:
    """All discrete-spectrum entries: highest/lowest weight plus complementary.

    Principal-series modules never appear (their diagonal FE solutions fail
    square-summability by exactly the critical exponent); this exclusion is
    recorded in the report.
    """
    hw, lattice = hw_submodules(spec)
    entries = hw + lw_submodules(spec) + cs_submodules(spec)
    excluded = ["principal series: tail weight ~ 1/n (or log^2(n)/n), never summable"]
    return SpectrumReport(spec.a1, spec.a2, spec.a, entries, lattice, excluded)


# ---------------------------------------------------------------------------
# Generators: closed forms, residuals
# ---------------------------------------------------------------------------


def generator_coefficients(spec: TensorSpec, desc: SubmoduleDescriptor, count: int,
                           exact: bool = False):
    """Coefficients of the generator series along its weight space.

    Positions j enumerate z(l0 + n0 + j, l0 + j); for the complementary
    kinds the weight space is the diagonal and the closed forms are
    hypergeometric-factorial ratios.
    """
    if desc.generator_kind == "hw":
        return hw_coefficients(spec, desc.n0, count, exact)
    if desc.generator_kind == "lw":
        return lw_coefficients(spec, desc.n0, count, exact)
    a, a1, a2 = spec.a, spec.a1, spec.a2
    if desc.generator_kind == "cs-hyp":
        if exact:
            u = [Fraction(1)]
            for n in range(count - 1):
                u.append(u[-1] * (n - a) * (n - a2) / ((n + 1 + a1) * (n + 1)))
            return u
        u = np.empty(count, dtype=complex)
        u[0] = 1
        ns = np.arange(count - 1)
        ratios = (ns - to_complex(a)) * (ns - to_complex(a2)) \
            / ((ns + 1 + to_complex(a1)) * (ns + 1))
        u[1:] = np.cumprod(ratios)
        return u
    if desc.generator_kind == "cs-binom":
        if exact:
            u = [Fraction(1)]
            for n in range(count - 1):
                u.append(u[-1] * (n - a) / (n + 1))
            return u
        u = np.empty(count, dtype=complex)
        u[0] = 1
        ns = np.arange(count - 1)
        u[1:] = np.cumprod((ns - to_complex(a)) / (ns + 1))
        return u
    raise ValueError(f"unknown generator kind {desc.generator_kind!r}")


def generator_residual(spec: TensorSpec, desc: SubmoduleDescriptor, K: int) -> float:
    """Relative interior residual ||(FE - xi) w_{<=K}|| / ||w_{<=K}|| in the V-norm.

    w_{<=K} keeps the first K coefficients; applying FE - xi leaves one
    boundary artifact where the truncation cuts the last recurrence row,
    which is excluded, so only rows with complete data contribute.  Those
    vanish identically and the result is rounding-level for any K >= 2 (a
    single term cannot satisfy a three-term recurrence, so K = 1 is
    dominated by its incomplete row and stays large).
    """
    tri = fe_tridiagonal(spec, desc.n0)
    w = generator_coefficients(spec, desc, K)
    if not isinstance(w, np.ndarray):
        w = np.asarray([to_complex(x) for x in w])
    xi = to_complex(desc.xi)
    interior = max(K - 1, 1)
    resid = np.zeros(interior, dtype=complex)
    for j in range(interior):
        val = (to_complex(tri.diagonal(j)) - xi) * w[j]
        if j >= 1:
            val += to_complex(tri.upper(j - 1)) * w[j - 1]
        if j + 1 < K:
            val += to_complex(tri.lower(j + 1)) * w[j + 1]
        resid[j] = val
    log_norms = weight_space_log_norms(spec, desc.n0, K)
    with np.errstate(divide="ignore"):
        log_num_terms = 2 * np.log(np.abs(resid)) + log_norms[:interior]
        log_den_terms = 2 * np.log(np.abs(w)) + log_norms
    log_num = logsumexp(log_num_terms[np.isfinite(log_num_terms)]) \
        if np.any(np.isfinite(log_num_terms)) else -np.inf
    log_den = logsumexp(log_den_terms[np.isfinite(log_den_terms)])
    return float(np.exp(0.5 * (log_num - log_den)))


# ---------------------------------------------------------------------------
# Diagonal recurrences: raw case forms, normal form, bridges
# ---------------------------------------------------------------------------


def diag_recurrence_sequence(spec: TensorSpec, xi: Scalar, count: int,
                             exact: bool = False):
    """Solve the raw diagonal FE eigenvalue recurrence of the spec's own case.

    Row n of (FE - xi) v = 0 reads
    lower(n+1) u_{n+1} + diagonal(n) u_n + upper(n-1) u_{n-1} = xi u_n,
    with the case-specific tridiagonal coefficients; u_0 = 1.
    """
    tri = fe_tridiagonal(spec, 0)
    if exact:
        u = [Fraction(1)]
        for n in range(count - 1):
            rhs = (xi - tri.diagonal(n)) * u[n]
            if n >= 1:
                rhs -= tri.upper(n - 1) * u[n - 1]
            u.append(rhs / tri.lower(n + 1))
        return u
    u = np.empty(count, dtype=complex)
    u[0] = 1
    xi_c = to_complex(xi)
    for n in range(count - 1):
        rhs = (xi_c - to_complex(tri.diagonal(n))) * u[n]
        if n >= 1:
            rhs -= to_complex(tri.upper(n - 1)) * u[n - 1]
        u[n + 1] = rhs / to_complex(tri.lower(n + 1))
    return u


def fe_diag_sequence_exact(a1, a2, a, xi, count: int):
    """Exact-arithmetic twin of the compiled normal-form kernel."""
    s = a + a1 + a2
    p = a * a2
    mu = xi - a2 * (1 + a + a1)
    u = [Fraction(1)]
    if count == 1:
        return u
    u.append((p + mu) / (1 + a1))
    for m in range(count - 2):
        lead = (m + 2) * (m + 2 + a1)
        trail = (m - a) * (m - a2)
        mid = s + 2 - mu - lead - trail
        u.append(-(mid * u[-1] + trail * u[-2]) / lead)
    return u


def variable_change_factors(spec: TensorSpec, count: int, exact: bool = False):
    """Products turning a raw case-(B)/(C)/(D) solution into the case-(A) normal form.

    v_n = prod_{j<=n} g(j) * u_n with g(j) = (a + 1 - j) when a is integral,
    (a2 + 1 - j) when a2 is integral, and their product when both are; the
    case-A factor is 1.
    """
    a, a2 = spec.a, spec.a2
    case = spec.tensor_case
    one = Fraction(1) if exact else 1.0 + 0j

    def g(j):
        out = one
        if case in (TensorCase.B, TensorCase.D):
            out = out * (a + 1 - j)
        if case in (TensorCase.C, TensorCase.D):
            out = out * (a2 + 1 - j)
        return out

    factors = [one]
    for j in range(1, count):
        factors.append(factors[-1] * g(j))
    return factors if exact else np.asarray([to_complex(f) for f in factors])


def series_coefficients(spec: TensorSpec, xi: Scalar, count: int) -> np.ndarray:
    """Power-series coefficients of (1 - t)^r 2F1(r - a, r - a2; 1 + a1; t).

    This closed form solves the normal-form recurrence with the matching
    initial data, so its coefficients must reproduce the recurrence
    solution; the comparison is one of the package's acceptance checks.
    """
    cand = CSCandidate(spec, xi)
    r = cand.r
    a, a1, a2 = to_complex(spec.a), to_complex(spec.a1), to_complex(spec.a2)
    # hypergeometric coefficients h_m
    h = np.empty(count, dtype=complex)
    h[0] = 1
    ms = np.arange(count - 1)
    h[1:] = np.cumprod((r - a + ms) * (r - a2 + ms) / ((1 + a1 + ms) * (ms + 1)))
    # binomial series of (1 - t)^r: b_j = (-1)^j binom(r, j)
    b = np.empty(count, dtype=complex)
    b[0] = 1
    js = np.arange(count - 1)
    b[1:] = np.cumprod(-(r - js) / (js + 1))
    return np.convolve(b, h)[:count]


# ---------------------------------------------------------------------------
# The independent xi-grid oracle
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DetectedMember:
    xi: float
    dip: float            # |c+| at the member over the window median
    tail_exponent: float  # fitted exponent of |u_n|^2 n^(2 + Re s) at the member


def _recurrence_polys(spec: TensorSpec, xi: complex):
    a, a1, a2 = to_complex(spec.a), to_complex(spec.a1), to_complex(spec.a2)
    s = a + a1 + a2
    mu = xi - a2 * (1 + a + a1)
    p = np.array([2 * (2 + a1), 4 + a1, 1.0], dtype=complex)
    r = np.array([a * a2, -(a + a2), 1.0], dtype=complex)
    q = np.array([s + 2 - mu - p[0] - r[0], -p[1] - r[1], -p[2] - r[2]], dtype=complex)
    return r, q, p, s, mu


def _casoratian_scale(spec: TensorSpec, n_max: int) -> np.ndarray:
    """log W_n with W_{n+1} = (r_n / p_n) W_n; xi-independent."""
    a, a1, a2 = to_complex(spec.a), to_complex(spec.a1), to_complex(spec.a2)
    js = np.arange(n_max - 1)
    steps = np.log((js - a) * (js - a2) + 0j) - np.log((js + 2) * (js + 2 + a1) + 0j)
    return np.concatenate([[0.0 + 0j], np.cumsum(steps)])


def _minimal_branch_projection(spec: TensorSpec, xi: float, n_max: int,
                               log_w: np.ndarray, order: int = 6,
                               probes: Sequence[int] | None = None) -> complex:
    """Casoratian of the forward solution against the minimal formal branch.

    Vanishes (to truncation error) exactly when the forward solution is the
    square-summable branch, i.e. when xi is a member.
    """
    r, q, p, s, mu = _recurrence_polys(spec, complex(xi))
    _, alpha_minus = indicial_exponents(s, mu)
    tail = frobenius_tail_coefficients(r, q, p, alpha_minus, order)
    u = fe_diag_sequence(to_complex(spec.a1), to_complex(spec.a2),
                         to_complex(spec.a), complex(xi), n_max)
    probes = probes or (int(n_max * 0.68), int(n_max * 0.78), int(n_max * 0.88))
    ests = []
    for n in probes:
        v = frobenius_eval(alpha_minus, tail, np.array([n, n + 1]))
        K = u[n + 1] * v[0] - u[n] * v[1]
        ests.append(K * np.exp(-log_w[n]))
    return complex(np.median(np.real(ests)), np.median(np.imag(ests)))


def _tail_exponent_at(spec: TensorSpec, xi: float, n_max: int) -> float:
    """Block-sum exponent of |u_n|^2 n^(2 + Re s) for the forward solution."""
    u = fe_diag_sequence(to_complex(spec.a1), to_complex(spec.a2),
                         to_complex(spec.a), complex(xi), n_max)
    ns = np.arange(1, n_max, dtype=float)
    log_terms = np.full(n_max, -np.inf)
    with np.errstate(divide="ignore"):
        log_terms[1:] = 2 * np.log(np.abs(u[1:])) + (2 + to_complex(spec.s).real) * np.log(ns)
    m_hi = int(math.log2(n_max)) - 1
    return dyadic_block_exponent(log_terms, max(m_hi - 6, 2), m_hi)


def diagonal_xis(spec: TensorSpec, margin: float = 1e-9) -> List[Tuple[float, str]]:
    """Expected square-summable FE eigenvalues on the diagonal weight space.

    Complementary entries live on the diagonal already; highest-weight
    entries with n0 >= 0 and lowest-weight entries also have a weight
    vector there (m steps below resp. above their extremal weight), whose
    FE eigenvalue may fall inside the scan window.  Those are genuine
    members of one-sided type, not complementary ones, and the oracle must
    expect them too.
    """
    lo, hi = complementary_window(spec)
    out: List[Tuple[float, str]] = []

    def push(module: ModuleSpec, kind: str):
        xi = _weight_space_xi(spec, module, 0)  # eigenvalue at the diagonal weight
        x = float(real_part(xi))
        if lo + margin < x < hi - margin:
            if any(abs(x - x0) < 1e-9 for x0, _ in out):
                return
            out.append((x, kind))

    hw, lattice = hw_submodules(spec)
    for e in hw:
        if e.n0 >= 0:  # the diagonal weight lies in the module's support
            push(e.module, "HighestWeight")
    if lattice is not None:
        for n0 in range(0, lattice.n0_max + 1):
            push(ModuleSpec(lattice.weight_base + 2 * n0, 0), "HighestWeight")
    for e in lw_submodules(spec):
        push(e.module, "LowestWeight")
    for e in cs_submodules(spec):
        push(e.module, "Complementary")
    return sorted(out)


def xi_grid_scan(spec: TensorSpec, n_points: int = 400, refine: int = 40,
                 n_max: int = 4096, dip_threshold: float = 0.02) -> List[DetectedMember]:
    """Scan the complementary window for square-summable FE recurrence solutions.

    For each grid xi the recurrence is solved forward and projected onto
    the complement of the minimal branch; members are the isolated zeros
    of that projection, located by sign change or parabolic dip and
    corroborated by the block-sum tail exponent.  The grid is refined near
    the symbolic predictions so isolated members are not stepped over.
    """
    lo, hi = complementary_window(spec)
    inset = 1e-6 * (hi - lo)
    grid = np.linspace(lo + inset, hi - inset, n_points)
    for xi_pred, _ in diagonal_xis(spec):
        extra = np.linspace(max(xi_pred - 1e-3, lo + inset),
                            min(xi_pred + 1e-3, hi - inset), refine)
        grid = np.concatenate([grid, extra])
    grid = np.unique(grid)
    log_w = _casoratian_scale(spec, n_max)
    proj = np.array([_minimal_branch_projection(spec, x, n_max, log_w) for x in grid])
    mag = np.abs(proj)
    med = float(np.median(mag))
    detected: List[DetectedMember] = []
    for i in range(1, len(grid) - 1):
        if not (mag[i] <= mag[i - 1] and mag[i] <= mag[i + 1]):
            continue
        if mag[i] > dip_threshold * med:
            continue
        # parabolic vertex on |proj|^2; falls back to the sign change of the
        # real part when the parameters are real
        h0, h1, h2 = mag[i - 1] ** 2, mag[i] ** 2, mag[i + 1] ** 2
        denom = h0 - 2 * h1 + h2
        delta = 0.5 * (h0 - h2) / denom if denom > 0 else 0.0
        x_left, x_right = grid[i - 1], grid[i + 1]
        step = (x_right - x_left) / 2
        x_star = grid[i] + delta * step
        re = proj.real
        if abs(to_complex(spec.s).imag) < 1e-12:
            for j in (i - 1, i):
                if np.sign(re[j]) * np.sign(re[j + 1]) < 0:
                    x_star = grid[j] - re[j] * (grid[j + 1] - grid[j]) / (re[j + 1] - re[j])
                    break
        detected.append(DetectedMember(
            xi=float(x_star),
            dip=float(mag[i] / med) if med > 0 else 0.0,
            tail_exponent=_tail_exponent_at(spec, float(x_star), n_max)))
    # merge duplicates from overlapping refinement clusters
    merged: List[DetectedMember] = []
    for d in sorted(detected, key=lambda d: d.xi):
        if merged and abs(d.xi - merged[-1].xi) < 1e-6:
            if d.dip < merged[-1].dip:
                merged[-1] = d
            continue
        merged.append(d)
    return merged


def principal_tail_exponent(spec: TensorSpec, xi: float, n_max: int = 8192) -> float:
    """Tail exponent of |u_n|^2 n^(2 + Re s) for a principal-range target.

    For discriminant <= 0 the branch exponents share the real part
    (-Re s - 3)/2 and differ by an imaginary shift, so real solutions carry
    a log-periodic modulation whose period can exceed any reachable window;
    a plain log-log fit is then meaningless.  The modulus is therefore
    fitted through its smooth envelope: the solution is decomposed
    pointwise into the two formal branches and the envelope
    |c_+ v_+|^2 + |c_- v_-|^2 replaces the oscillating square.  The fitted
    exponent sits at -1 (or slightly above for the critical log^2 case):
    never square-summable.
    """
    cand = CSCandidate(spec, xi)
    d = cand.discriminant
    if d > 0:
        raise OutOfRange("xi is not in the principal range (discriminant > 0)")
    u = fe_diag_sequence(to_complex(spec.a1), to_complex(spec.a2),
                         to_complex(spec.a), complex(xi), n_max)
    two_s = 2 + to_complex(spec.s).real
    if math.sqrt(-d) < 1e-6:  # merged roots: no oscillation, possible log^2 trend
        ns = np.arange(1, n_max, dtype=float)
        log_terms = np.full(n_max, -np.inf)
        with np.errstate(divide="ignore"):
            log_terms[1:] = 2 * np.log(np.abs(u[1:])) + two_s * np.log(ns)
        m_hi = int(math.log2(n_max)) - 1
        return dyadic_block_exponent(log_terms, max(m_hi - 7, 2), m_hi)
    r, q, p, s, mu = _recurrence_polys(spec, complex(xi))
    alpha_a, alpha_b = indicial_exponents(s, mu)
    ns = np.arange(n_max // 64, n_max - 1)
    va = frobenius_eval(alpha_a, frobenius_tail_coefficients(r, q, p, alpha_a, 5), ns)
    va1 = frobenius_eval(alpha_a, frobenius_tail_coefficients(r, q, p, alpha_a, 5), ns + 1)
    vb = frobenius_eval(alpha_b, frobenius_tail_coefficients(r, q, p, alpha_b, 5), ns)
    vb1 = frobenius_eval(alpha_b, frobenius_tail_coefficients(r, q, p, alpha_b, 5), ns + 1)
    det = va * vb1 - va1 * vb
    ca = (u[ns] * vb1 - u[ns + 1] * vb) / det
    cb = (u[ns + 1] * va - u[ns] * va1) / det
    envelope = np.abs(ca * va) ** 2 + np.abs(cb * vb) ** 2
    from .asymfit import fit_exponent
    return fit_exponent(ns, np.log(envelope) + two_s * np.log(ns))


# ---------------------------------------------------------------------------
# Smooth vectors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SmoothResult:
    diverges_at: Optional[int]   # smallest probed order with non-summable tail
    exponents: Tuple[Tuple[int, float], ...]

    @property
    def converges(self) -> bool:
        return self.diverges_at is None


def _w_ray_coefficients(spec: TensorSpec, k: int, count: int) -> np.ndarray:
    """Coefficients of the complementary generator's weight-k relative w(k).

    Returned at positions j = 0..count-1 along the weight space (so at
    basis vectors z(l0 + k + j, l0 + j)).  For k >= 0, and for k < 0 with
    a1 != 0, these are the closed hypergeometric ratios with parameters
    shifted by k, including the normalization prefactor; for a1 = 0 and
    k < 0 the closed form degenerates (its lower parameter hits a
    non-positive integer) and the coefficients are produced by applying F
    repeatedly to w(0).
    """
    a, a1, a2 = to_complex(spec.a), to_complex(spec.a1), to_complex(spec.a2)
    if k >= 0 or abs(a1) > 0:
        pref = 1.0 + 0j
        if k > 0:
            for j in range(1, k + 1):
                pref *= (a + a1 + j) / (a1 + j)
        elif k < 0:
            for j in range(1, -k + 1):
                pref *= (a1 + 1 - j) / (a + a1 + 1 - j)
        u = np.empty(count, dtype=complex)
        u[0] = 1
        ns = np.arange(count - 1)
        u[1:] = np.cumprod((ns - a) * (ns + k - a2) / ((ns + k + 1 + a1) * (ns + 1)))
        return pref * u
    # a1 = 0, k < 0: descend with F, which maps the ray k' to k' - 1 via
    # v_l = u_l (a1 + k' + l) + u_{l-1} (a - l + 1)  (both Leibniz terms).
    m = -k
    u = _w_ray_coefficients(spec, 0, count + m)
    for kk in range(0, -m, -1):
        v = np.zeros(len(u), dtype=complex)
        ls = np.arange(len(u), dtype=float)
        v += u * (a1 + ls + kk)
        v[1:] += u[:-1] * (a - ls[1:] + 1)
        u = v
    # positions below l = m carry exactly vanishing coefficients
    assert np.all(u[:m] == 0)
    return u[m:m + count]


def smooth_membership(spec: TensorSpec, k: int, max_order: int = 3,
                      count: int = 8192) -> SmoothResult:
    """Tail test of w(k) against the rapid-decay weights (k^2 + l^2)^N.

    Requires the first-bullet window (-1 < a + a1 + a2 < 0 with
    -1 < a, a2 < 0 and -1 < a1 <= 0, all real).  The N = 0 series is the
    membership statement itself (exponent < -1); already N = 1 diverges,
    which is the smooth-vector exclusion.
    """
    a, a1, a2 = spec.a, spec.a1, spec.a2
    for name, v in (("a", a), ("a2", a2)):
        if imag_part(v) != 0 or not -1 < float(real_part(v)) < 0:
            raise OutOfWindow(f"{name} must be real in (-1, 0)")
    if imag_part(a1) != 0 or not -1 < float(real_part(a1)) <= 0:
        raise OutOfWindow("a1 must be real in (-1, 0]")
    s = float(real_part(spec.s))
    if not -1 < s < 0:
        raise OutOfWindow("a + a1 + a2 must lie in (-1, 0)")
    u = _w_ray_coefficients(spec, k, count)
    n0 = k
    l_start = spec.l0(n0)
    log_norms = weight_space_log_norms(spec, n0, count)
    ls = np.arange(l_start, l_start + count, dtype=float)
    ks = ls + n0
    with np.errstate(divide="ignore"):
        base = 2 * np.log(np.abs(u)) + log_norms
    log_radius = np.log(ks * ks + ls * ls + 1e-300)
    m_hi = int(math.log2(count)) - 1
    exps = []
    diverges_at = None
    for N in range(max_order + 1):
        e = dyadic_block_exponent(base + N * log_radius, max(m_hi - 5, 2), m_hi)
        exps.append((N, e))
        if diverges_at is None and e >= -1:
            diverges_at = N
    return SmoothResult(diverges_at, tuple(exps))
