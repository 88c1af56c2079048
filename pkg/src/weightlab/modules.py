"""Degree-one simple weight modules N(a1, a2) for sl(2, C).

The basis x(k) is indexed by the integers k with

    a1 + k < 0 iff a1 < 0   (when a1 is an integer),
    a2 - k < 0 iff a2 < 0   (when a2 is an integer),

and the triple (H, E, F) acts through one of four families of formulas
selected by which of a1, a2 are negative integers:

    case I   (neither):    E x(k) = (a2 - k) x(k+1),        F x(k) = (a1 + k) x(k-1)
    case II  (a2 only):    E x(k) = x(k+1),                 F x(k) = (a1 + k)(a2 - k + 1) x(k-1)
    case III (a1 only):    E x(k) = (a1 + k + 1)(a2 - k) x(k+1),  F x(k) = x(k-1)
    case IV  (both):       E x(k) = (a1 + k + 1) x(k+1),    F x(k) = (a2 - k + 1) x(k-1)

with H x(k) = (a1 - a2 + 2k) x(k) throughout.  Where a formula reaches the
boundary of the index set its coefficient vanishes identically; the code
asserts this instead of clamping.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional

from .errors import MalformedVector
from .scalars import (
    Scalar,
    Tolerance,
    as_integer,
    default_tolerance,
    is_exact,
)

__all__ = [
    "Case",
    "ModuleSpec",
    "WeightVector",
    "SupportDescriptor",
    "case_of",
    "act",
    "casimir_scalar",
    "support",
]


class Case(enum.Enum):
    I = "I"
    II = "II"
    III = "III"
    IV = "IV"


def case_of(a1: Scalar, a2: Scalar, tol: Tolerance | None = None) -> Case:
    """Four-way split by which parameters are negative integers."""
    tol = tol or default_tolerance()
    n1, n2 = as_integer(a1, tol), as_integer(a2, tol)
    neg1 = n1 is not None and n1 < 0
    neg2 = n2 is not None and n2 < 0
    if neg1 and neg2:
        return Case.IV
    if neg1:
        return Case.III
    if neg2:
        return Case.II
    return Case.I


@dataclass(frozen=True)
class ModuleSpec:
    """The pair (a1, a2) with its derived case tag and index-set data.

    Integer-valued parameters are snapped to int so the discrete case split
    and boundary vanishing are exact in float mode too.
    """

    a1: Scalar
    a2: Scalar
    tol: Tolerance = field(default_factory=default_tolerance, compare=False)

    def __post_init__(self):
        for name in ("a1", "a2"):
            m = as_integer(getattr(self, name), self.tol)
            if m is not None:
                object.__setattr__(self, name, m)

    @property
    def case(self) -> Case:
        return case_of(self.a1, self.a2, self.tol)

    @property
    def index_min(self) -> Optional[int]:
        """Smallest admissible k, or None when unbounded below."""
        lo = None
        if isinstance(self.a1, int):
            # a1 >= 0 forces a1 + k >= 0; a1 < 0 imposes no lower bound
            if self.a1 >= 0:
                lo = -self.a1
        if isinstance(self.a2, int) and self.a2 < 0:
            # a2 - k < 0 forces k > a2
            lo = self.a2 + 1 if lo is None else max(lo, self.a2 + 1)
        return lo

    @property
    def index_max(self) -> Optional[int]:
        """Largest admissible k, or None when unbounded above."""
        hi = None
        if isinstance(self.a2, int) and self.a2 >= 0:
            hi = self.a2
        if isinstance(self.a1, int) and self.a1 < 0:
            hi = -self.a1 - 1 if hi is None else min(hi, -self.a1 - 1)
        return hi

    def contains_index(self, k: int) -> bool:
        lo, hi = self.index_min, self.index_max
        return (lo is None or k >= lo) and (hi is None or k <= hi)

    @property
    def dimension(self) -> Optional[int]:
        """Dimension when the index set is finite, else None."""
        lo, hi = self.index_min, self.index_max
        if lo is None or hi is None:
            return None
        return max(hi - lo + 1, 0)

    def weight(self, k: int) -> Scalar:
        return self.a1 - self.a2 + 2 * k

    def anchor_index(self) -> int:
        """Reference index: 0 when two-sided, else the finite end of the index set."""
        lo, hi = self.index_min, self.index_max
        if lo is None and hi is None:
            return 0
        if lo is not None and hi is not None:
            return lo
        return lo if lo is not None else hi


@dataclass
class WeightVector:
    """Finitely supported vector over a module, as a sparse index -> coefficient map."""

    spec: ModuleSpec
    coeffs: Dict[int, Scalar]

    def __post_init__(self):
        for k in self.coeffs:
            if not self.spec.contains_index(k):
                raise MalformedVector(
                    f"index {k} outside the index set of N({self.spec.a1}, {self.spec.a2})"
                )
        self.coeffs = {k: u for k, u in self.coeffs.items() if u != 0}

    def __eq__(self, other) -> bool:
        return self.spec == other.spec and self.coeffs == other.coeffs


def basis_vector(spec: ModuleSpec, k: int, coeff: Scalar = 1) -> WeightVector:
    return WeightVector(spec, {k: coeff})


def e_coeff(spec: ModuleSpec, k: int) -> Scalar:
    """Coefficient of x(k+1) in E x(k)."""
    a1, a2, case = spec.a1, spec.a2, spec.case
    if case is Case.I:
        return a2 - k
    if case is Case.II:
        return 1
    if case is Case.III:
        return (a1 + k + 1) * (a2 - k)
    return a1 + k + 1


def f_coeff(spec: ModuleSpec, k: int) -> Scalar:
    """Coefficient of x(k-1) in F x(k)."""
    a1, a2, case = spec.a1, spec.a2, spec.case
    if case is Case.I:
        return a1 + k
    if case is Case.II:
        return (a1 + k) * (a2 - k + 1)
    if case is Case.III:
        return 1
    return a2 - k + 1


def act(X: str, v: WeightVector) -> WeightVector:
    """Apply H, E, or F by linear extension of the case formulas."""
    spec = v.spec
    out: Dict[int, Scalar] = {}
    for k, u in v.coeffs.items():
        if X == "H":
            c, target = spec.weight(k), k
        elif X == "E":
            c, target = e_coeff(spec, k), k + 1
        elif X == "F":
            c, target = f_coeff(spec, k), k - 1
        else:
            raise ValueError(f"unknown generator {X!r}")
        cu = u * c
        if cu == 0:
            continue
        assert spec.contains_index(target), (
            f"{X}-coefficient failed to vanish at the boundary index {k}"
        )
        out[target] = out.get(target, 0) + cu
    return WeightVector(spec, out)


def casimir_scalar(spec: ModuleSpec) -> Scalar:
    """Scalar by which H^2/4 + H/2 + FE acts; equals c(1 + c) with c = (a1 + a2)/2."""
    half = Fraction(1, 2) if (is_exact(spec.a1) and is_exact(spec.a2)) else 0.5
    c = (spec.a1 + spec.a2) * half
    return c * (1 + c)


@dataclass(frozen=True)
class SupportDescriptor:
    """Weight support as a lattice descriptor.

    direction 'full' means base + 2Z, 'down' means base + 2Z_{<=0} (highest
    weight base), 'up' means base + 2Z_{>=0} (lowest weight base), 'finite'
    a finite string of the given length starting at base and going up.
    """

    base: Scalar
    direction: str
    count: Optional[int] = None

    def contains(self, w: Scalar, tol: Tolerance | None = None) -> bool:
        half = Fraction(1, 2) if is_exact(w) and is_exact(self.base) else 0.5
        m = as_integer((w - self.base) * half, tol)
        if m is None:
            return False
        if self.direction == "full":
            return True
        if self.direction == "down":
            return m <= 0
        if self.direction == "up":
            return m >= 0
        return 0 <= m < (self.count or 0)


def support(spec: ModuleSpec) -> SupportDescriptor:
    """Support of the module, anchored at the extremal weight when one exists."""
    lo, hi = spec.index_min, spec.index_max
    if lo is None and hi is None:
        return SupportDescriptor(spec.weight(0), "full")
    if lo is not None and hi is not None:
        return SupportDescriptor(spec.weight(lo), "finite", count=spec.dimension)
    if hi is not None:
        return SupportDescriptor(spec.weight(hi), "down")
    return SupportDescriptor(spec.weight(lo), "up")
