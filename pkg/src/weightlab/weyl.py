"""Weyl-algebra modules W(a) and the embedded sl(2) action.

W(a) has basis x(k) indexed by the set K(a) of integer vectors k with
a_i + k_i < 0 iff a_i < 0 whenever a_i is an integer.  The generators act by

    q_i . x(k) = (a_i + k_i + 1) x(k + e_i)   if a_i is a negative integer,
                 x(k + e_i)                    otherwise,
    p_i . x(k) = x(k - e_i)                    if a_i is a negative integer,
                 (a_i + k_i) x(k - e_i)        otherwise.

Embedding the sl(2) triple as E = q1 p2, F = q2 p1, H = q1 p1 - q2 p2 and
restricting to the zero-sum index set K0(a) reproduces the degree-one weight
modules; this module is kept deliberately independent of
:mod:`weightlab.modules` so the two can be cross-checked.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Tuple

from .errors import MalformedVector
from .scalars import Scalar, Tolerance, as_integer, default_tolerance

__all__ = ["WeylParams", "kset_member", "weyl_act", "sl2_from_weyl", "SL2_GENERATORS"]

Index = Tuple[int, ...]
SparseVec = Dict[Index, Scalar]

SL2_GENERATORS = ("E", "F", "H")


@dataclass(frozen=True)
class WeylParams:
    """Parameter vector a in C^n with its integrality bookkeeping.

    Components recognized as integers (exactly, or within abs_eps in float
    mode) are snapped to int so the discrete case split and the boundary
    vanishing of coefficients are exact in every mode.
    """

    a: Tuple[Scalar, ...]
    tol: Tolerance = field(default_factory=default_tolerance)

    def __post_init__(self):
        snapped = []
        for ai in self.a:
            m = as_integer(ai, self.tol)
            snapped.append(m if m is not None else ai)
        object.__setattr__(self, "a", tuple(snapped))

    @property
    def n(self) -> int:
        return len(self.a)

    def neg_int(self, i: int) -> bool:
        """Whether a_i (1-based) is a negative integer."""
        ai = self.a[i - 1]
        return isinstance(ai, int) and ai < 0


def kset_member(params: WeylParams, k: Index) -> bool:
    """Membership of k in K(a): integral coordinates must keep their sign class."""
    if len(k) != params.n:
        raise ValueError("index length does not match parameter length")
    for ai, ki in zip(params.a, k):
        if isinstance(ai, int) and ((ai + ki < 0) != (ai < 0)):
            return False
    return True


def _validated(params: WeylParams, vec: SparseVec) -> SparseVec:
    for k in vec:
        if not kset_member(params, k):
            raise MalformedVector(f"index {k} outside K(a) for a={params.a}")
    return vec


def weyl_act(kind: str, i: int, params: WeylParams, vec: SparseVec) -> SparseVec:
    """Apply q_i or p_i (1-based i) to a sparse vector over W(a)."""
    if kind not in ("q", "p"):
        raise ValueError("generator kind must be 'q' or 'p'")
    if not 1 <= i <= params.n:
        raise ValueError(f"generator index {i} out of range")
    _validated(params, vec)
    ai = params.a[i - 1]
    neg = params.neg_int(i)
    out: SparseVec = {}
    for k, u in vec.items():
        if kind == "q":
            c = (ai + k[i - 1] + 1) if neg else 1
            step = 1
        else:
            c = 1 if neg else (ai + k[i - 1])
            step = -1
        cu = u * c
        if cu == 0:
            continue
        target = k[: i - 1] + (k[i - 1] + step,) + k[i:]
        # nonzero coefficients never leave K(a): the formulas vanish first
        assert kset_member(params, target), (
            f"action coefficient failed to vanish at the K(a) boundary: {k} -> {target}"
        )
        out[target] = out.get(target, 0) + cu
    return {k: u for k, u in out.items() if u != 0}


def _in_k0(k: Index) -> bool:
    return sum(k) == 0


def sl2_from_weyl(params: WeylParams, X: str, vec: SparseVec) -> SparseVec:
    """Act by the embedded sl(2) triple on a K0(a)-supported vector.

    E acts as q1 p2, F as q2 p1, H as q1 p1 - q2 p2; the zero-sum support is
    preserved.
    """
    if params.n != 2:
        raise ValueError("the sl(2) embedding uses n = 2")
    if X not in SL2_GENERATORS:
        raise ValueError(f"unknown generator {X!r}")
    for k in vec:
        if not _in_k0(k):
            raise MalformedVector(f"index {k} is not zero-sum")
    if X == "E":
        out = weyl_act("q", 1, params, weyl_act("p", 2, params, vec))
    elif X == "F":
        out = weyl_act("q", 2, params, weyl_act("p", 1, params, vec))
    else:
        plus = weyl_act("q", 1, params, weyl_act("p", 1, params, vec))
        minus = weyl_act("q", 2, params, weyl_act("p", 2, params, vec))
        out = dict(plus)
        for k, u in minus.items():
            out[k] = out.get(k, 0) - u
        out = {k: u for k, u in out.items() if u != 0}
    assert all(_in_k0(k) for k in out), "sl(2) action left the zero-sum index set"
    return out
