"""Named verification suites runnable from the command line.

Each suite re-runs one family of structural checks on canned parameter
samples and returns per-check pass/fail results; ``run_suite('all')``
chains every suite.  The same properties are exercised more broadly by
the pytest suite; these are the quick single-command versions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List

import numpy as np

from .asymfit import fit_exponent
from .hyp import (
    Hyp2F1Params,
    gauss_value,
    hyp2f1,
    theta_integral,
    theta_integral_quadrature,
)
from .modules import ModuleSpec, WeightVector, act, casimir_scalar
from .spectrum import (
    diagonal_xis,
    full_spectrum,
    generator_residual,
    principal_tail_exponent,
    smooth_membership,
    xi_grid_scan,
)
from .tensor import TensorSpec, TensorState, act_tensor, fe_matrix
from .unitarity import nelson_matrix, verify_skew_adjoint
from .weyl import WeylParams, sl2_from_weyl

__all__ = ["CheckResult", "run_suite", "SUITES"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


_MODULE_SAMPLES = {
    "I": ModuleSpec(Fraction(-1, 2), Fraction(-1, 4)),
    "II": ModuleSpec(Fraction(3, 7), Fraction(-2)),
    "III": ModuleSpec(Fraction(-3), Fraction(1, 3)),
    "IV": ModuleSpec(Fraction(-2), Fraction(-3)),
}

_TENSOR_SAMPLES = {
    "A": TensorSpec(ModuleSpec(Fraction(-1, 2), Fraction(-1, 4)), ModuleSpec(Fraction(-1, 5), 0)),
    "B": TensorSpec(ModuleSpec(Fraction(-1, 2), Fraction(-1, 4)), ModuleSpec(-2, 0)),
    "C": TensorSpec(ModuleSpec(0, -2), ModuleSpec(Fraction(-1, 5), 0)),
    "D": TensorSpec(ModuleSpec(0, -2), ModuleSpec(-3, 0)),
}


def _commutator_zero(spec: ModuleSpec, K: int) -> bool:
    for k in range(-K, K + 1):
        if not spec.contains_index(k):
            continue
        v = WeightVector(spec, {k: Fraction(1)})
        lhs = act("E", act("F", v)).coeffs
        rhs = act("F", act("E", v)).coeffs
        h = act("H", v).coeffs
        keys = set(lhs) | set(rhs) | set(h)
        if any(lhs.get(j, 0) - rhs.get(j, 0) - h.get(j, 0) != 0 for j in keys):
            return False
    return True


def suite_sl2_relations(K: int = 20) -> List[CheckResult]:
    out = []
    for case, spec in _MODULE_SAMPLES.items():
        ok = _commutator_zero(spec, K)
        out.append(CheckResult(f"module-case-{case} [E,F]=H", ok, f"exact, |k| <= {K}"))
    for case, tsp in _TENSOR_SAMPLES.items():
        ok = True
        for (k, l) in [(0, 0), (1, 2), (3, 1)]:
            if not tsp.contains_index(k, l):
                continue
            v = TensorState(tsp, {(k, l): Fraction(1)})
            lhs = act_tensor("E", act_tensor("F", v)).coeffs
            rhs = act_tensor("F", act_tensor("E", v)).coeffs
            h = act_tensor("H", v).coeffs
            keys = set(lhs) | set(rhs) | set(h)
            ok &= all(lhs.get(j, 0) - rhs.get(j, 0) - h.get(j, 0) == 0 for j in keys)
        out.append(CheckResult(f"tensor-case-{case} [E,F]=H", ok, "exact"))
    return out


def suite_casimir(K: int = 20) -> List[CheckResult]:
    out = []
    for case, spec in _MODULE_SAMPLES.items():
        target = casimir_scalar(spec)
        ok = True
        for k in range(-K, K + 1):
            if not spec.contains_index(k):
                continue
            v = WeightVector(spec, {k: Fraction(1)})
            w = spec.weight(k)
            omega = {j: Fraction(w) * Fraction(w) / 4 * c + Fraction(w) / 2 * c
                     for j, c in v.coeffs.items()}
            fe = act("F", act("E", v)).coeffs
            for j in set(omega) | set(fe):
                val = omega.get(j, 0) + fe.get(j, 0)
                ok &= val == (target if j == k else 0)
        out.append(CheckResult(f"casimir-case-{case}", ok, f"Omega = {target}"))
    return out


def suite_weyl_oracle(K: int = 15) -> List[CheckResult]:
    out = []
    for case, spec in _MODULE_SAMPLES.items():
        params = WeylParams((spec.a1, spec.a2))
        ok = True
        for k in range(-K, K + 1):
            if not spec.contains_index(k):
                continue
            for X in ("H", "E", "F"):
                got = sl2_from_weyl(params, X, {(k, -k): Fraction(1)})
                want = act(X, WeightVector(spec, {k: Fraction(1)})).coeffs
                ok &= got == {(j, -j): c for j, c in want.items()}
        out.append(CheckResult(f"weyl-oracle-case-{case}", ok, "x(k) <-> x((k, -k))"))
    return out


def suite_skew_adjoint(K: int = 50) -> List[CheckResult]:
    samples = {
        "principal": ModuleSpec(-0.5 + 1j, -0.5 + 1j),
        "complementary": ModuleSpec(-0.5, -0.25),
        "highest-weight": ModuleSpec(-1.7, 0),
        "lowest-weight": ModuleSpec(0, -0.6),
    }
    out = []
    for name, spec in samples.items():
        r = verify_skew_adjoint(spec, K)
        out.append(CheckResult(f"skew-adjoint-{name}", r < 1e-10, f"residual {r:.2e} at K={K}"))
    return out


def suite_nelson_symmetry(K: int = 50) -> List[CheckResult]:
    out = []
    for name, spec in (("complementary", ModuleSpec(-0.5, -0.25)),
                       ("principal", ModuleSpec(-0.5 + 1j, -0.5 + 1j)),
                       ("highest-weight", ModuleSpec(-1.7, 0))):
        A = nelson_matrix(spec, K)
        asym = float(np.max(np.abs(A - A.conj().T)))
        out.append(CheckResult(f"nelson-symmetry-{name}", asym < 1e-10, f"asymmetry {asym:.2e}"))
    return out


def _dense_generator(tsp: TensorSpec, X: str, n0_from: int, n0_to: int, size: int):
    """Dense matrix of X between truncated weight spaces (positions 0..size-1)."""
    l_from = tsp.l0(n0_from)
    l_to = tsp.l0(n0_to)
    M = [[Fraction(0)] * size for _ in range(size)]
    for j in range(size):
        k, l = l_from + n0_from + j, l_from + j
        v = act_tensor(X, TensorState(tsp, {(k, l): Fraction(1)})).coeffs
        for (kk, ll), c in v.items():
            assert kk - ll == n0_to
            jj = ll - l_to
            if 0 <= jj < size:
                M[jj][j] = c
    return M


def suite_fe_oracle(K: int = 20) -> List[CheckResult]:
    out = []
    for case, tsp in _TENSOR_SAMPLES.items():
        for n0 in (1, -2) if tsp.left.index_min is not None else (1,):
            M = fe_matrix(tsp, n0, K)
            E = _dense_generator(tsp, "E", n0, n0 + 1, K + 1)
            F = _dense_generator(tsp, "F", n0 + 1, n0, K + 1)
            FE = [[sum(F[i][m] * E[m][j] for m in range(K + 1)) for j in range(K)]
                  for i in range(K)]
            ok = all(FE[i][j] == M[i][j] for i in range(K - 1) for j in range(K - 1))
            out.append(CheckResult(f"fe-matrix-oracle-case-{case}-n0={n0}", ok,
                                   f"dense F.E == tridiagonal, size {K}"))
    return out


def suite_generator_residual(K: int = 200) -> List[CheckResult]:
    out = []
    samples = [
        TensorSpec(ModuleSpec(0, -0.3), ModuleSpec(-0.4, 0)),
        TensorSpec(ModuleSpec(-0.5, -0.25), ModuleSpec(-0.2, 0)),
        TensorSpec(ModuleSpec(-0.9, -0.8), ModuleSpec(-0.2, 0)),
    ]
    for tsp in samples:
        for desc in full_spectrum(tsp).entries:
            if not desc.kind == "Complementary":
                continue
            r = generator_residual(tsp, desc, K)
            out.append(CheckResult(
                f"generator-residual {desc.generator_kind} N({desc.b1:.3g},{desc.b2:.3g})",
                r < 1e-8, f"interior residual {r:.2e} at K={K}"))
    return out


def suite_theta_integral(K: int = 10**4) -> List[CheckResult]:
    out = []
    worst = 0.0
    for nu in (-0.9, -0.5, -0.3, 0.2):
        for t in (0.1, 0.5, 0.9):
            worst = max(worst, abs(theta_integral(nu, t) - theta_integral_quadrature(nu, t, K)))
    out.append(CheckResult("theta-series-vs-quadrature", worst <= 1e-8, f"max diff {worst:.2e}"))
    return out


def suite_gauss_boundary(K: int = 0) -> List[CheckResult]:
    out = []
    p = Hyp2F1Params(0.3, -0.7, 2.1)  # margin gamma-alpha-beta = 2.5 > 0
    target = gauss_value(p)
    # values converge monotonically at the O(1 - z) rate set by F'(1)
    errs = [abs(hyp2f1(p, 1 - 10.0 ** (-j)) - target) for j in range(2, 7)]
    ok = all(errs[i + 1] <= 0.2 * errs[i] for i in range(len(errs) - 1)) and errs[-1] < 1e-5
    out.append(CheckResult("gauss-boundary-continuity", ok,
                           f"errors {', '.join(f'{e:.1e}' for e in errs)}"))
    p2 = Hyp2F1Params(1.3, 1.1, 1.0)  # gamma-alpha-beta = -1.4 < 0: blowup
    ts = 1 - np.power(2.0, -np.arange(6, 13))
    vals = [abs(hyp2f1(p2, t)) for t in ts]
    slope = fit_exponent(1 - ts, np.log(vals))
    ok2 = abs(slope - (-1.4)) < 0.05
    out.append(CheckResult("gauss-boundary-blowup", ok2, f"fitted exponent {slope:+.3f} vs -1.4"))
    return out


def suite_spectrum_windows(K: int = 0) -> List[CheckResult]:
    cases = [
        (TensorSpec(ModuleSpec(0, -0.3), ModuleSpec(-0.4, 0)),
         {("Complementary", -0.4, -0.3)}),
        (TensorSpec(ModuleSpec(0, -0.2), ModuleSpec(-1.5, 0)),
         {("HighestWeight", -1.3, 0)}),
        (TensorSpec(ModuleSpec(0, -1.5), ModuleSpec(-0.2, 0)),
         {("LowestWeight", 0, -1.3)}),
    ]
    out = []
    for tsp, want in cases:
        got = {(e.kind, round(float(e.b1), 9), round(float(e.b2), 9)) for e in full_spectrum(tsp).entries}
        want = {(k, round(float(x), 9), round(float(y), 9)) for k, x, y in want}
        out.append(CheckResult(f"spectrum N({tsp.a1},{tsp.a2})(x)N({tsp.a},0)",
                               got == want, f"{sorted(got)}"))
    return out


def suite_spectrum_oracle(K: int = 4096) -> List[CheckResult]:
    tsp = TensorSpec(ModuleSpec(0, -0.3), ModuleSpec(-0.4, 0))
    detected = xi_grid_scan(tsp, n_max=K)
    expected = diagonal_xis(tsp)
    ok = len(detected) == len(expected) and all(
        abs(d.xi - x) < 1e-3 for d, (x, _) in zip(detected, expected))
    return [CheckResult("xi-grid-oracle", ok,
                        f"detected {[round(d.xi, 5) for d in detected]}, "
                        f"expected {[round(x, 5) for x, _ in expected]}")]


def suite_smooth_vectors(K: int = 8192) -> List[CheckResult]:
    out = []
    for tsp in (TensorSpec(ModuleSpec(-0.5, -0.25), ModuleSpec(-0.2, 0)),
                TensorSpec(ModuleSpec(0, -0.3), ModuleSpec(-0.4, 0))):
        res = smooth_membership(tsp, 0, max_order=1, count=K)
        e0 = dict(res.exponents)[0]
        ok = e0 < -1 and res.diverges_at == 1
        out.append(CheckResult(f"smooth-exclusion N({tsp.a1},{tsp.a2})(x)N({tsp.a},0)",
                               ok, f"N=0 exponent {e0:+.3f}, diverges at N={res.diverges_at}"))
    return out


def suite_principal_exclusion(K: int = 8192) -> List[CheckResult]:
    tsp = TensorSpec(ModuleSpec(-0.5, -0.25), ModuleSpec(-0.2, 0))
    from .spectrum import complementary_window
    lo, _ = complementary_window(tsp)
    worst = min(principal_tail_exponent(tsp, float(xi), K)
                for xi in np.linspace(lo - 2.0, lo - 1e-3, 10))
    return [CheckResult("principal-exclusion", worst >= -1.05,
                        f"min fitted exponent {worst:+.4f} (never summable)")]


SUITES: Dict[str, Callable[[int], List[CheckResult]]] = {
    "sl2-relations": suite_sl2_relations,
    "casimir": suite_casimir,
    "weyl-oracle": suite_weyl_oracle,
    "skew-adjoint": suite_skew_adjoint,
    "nelson-symmetry": suite_nelson_symmetry,
    "fe-oracle": suite_fe_oracle,
    "generator-residual": suite_generator_residual,
    "theta-integral": suite_theta_integral,
    "gauss-boundary": suite_gauss_boundary,
    "spectrum-windows": suite_spectrum_windows,
    "spectrum-oracle": suite_spectrum_oracle,
    "smooth-vectors": suite_smooth_vectors,
    "principal-exclusion": suite_principal_exclusion,
}


def run_suite(name: str, K: int | None = None) -> List[CheckResult]:
    """Run one named suite (or 'all'); K overrides the suite's default truncation."""
    if name == "all":
        out = []
        for fn in SUITES.values():
            out.extend(fn() if K is None else fn(K))
        return out
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; available: {', '.join(sorted(SUITES))}, all")
    fn = SUITES[name]
    return fn() if K is None else fn(K)
