"""Gauss hypergeometric machinery on the closed unit disc.

Series evaluation with adaptive stopping, the closed form at z = 1,
Euler factorizations for the integer-offset configurations, the circle
integral of |1 - t e^{i theta}|^{2 nu}, and the indicial exponents of the
diagonal recurrence at infinity.
"""

from __future__ import annotations

import cmath
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import loggamma

from .errors import DivergentAtBoundary, GammaPole, NotInConfiguration
from .kernels import hyp2f1_series
from .scalars import Scalar, Tolerance, as_integer, default_tolerance, to_complex

__all__ = [
    "Hyp2F1Params",
    "hyp2f1",
    "hyp2f1_derivative",
    "gauss_value",
    "euler_factorization",
    "EulerFactorization",
    "theta_integral",
    "theta_integral_quadrature",
    "indicial_exponents",
]

MAX_TERMS = 10**6


@dataclass(frozen=True)
class Hyp2F1Params:
    """Parameter triple of 2F1(alpha, beta; gamma; z)."""

    alpha: Scalar
    beta: Scalar
    gamma: Scalar

    def shifted(self, d: int) -> "Hyp2F1Params":
        return Hyp2F1Params(self.alpha + d, self.beta + d, self.gamma + d)


def _poly_degree(p: Hyp2F1Params, tol: Tolerance) -> int | None:
    """Degree of the terminating series, or None when it does not terminate."""
    degs = []
    for x in (p.alpha, p.beta):
        m = as_integer(x, tol)
        if m is not None and m <= 0:
            degs.append(-m)
    return min(degs) if degs else None


def _check_pole(p: Hyp2F1Params, tol: Tolerance) -> int | None:
    """Validate the lower parameter; returns the polynomial degree if any."""
    deg = _poly_degree(p, tol)
    g = as_integer(p.gamma, tol)
    if g is not None and g <= 0 and (deg is None or deg > -g):
        raise GammaPole(f"gamma = {p.gamma} poles the series before it terminates")
    return deg


def hyp2f1(p: Hyp2F1Params, z: Scalar, tol: Tolerance | None = None,
           max_terms: int = MAX_TERMS) -> complex:
    """Evaluate the series on |z| <= 1 (anywhere for terminating series).

    On the unit circle the series is admitted only when Re(gamma - alpha -
    beta) > 0; otherwise DivergentAtBoundary is raised.  Convergence uses
    the 5-consecutive-small-terms rule with a hard term cap.
    """
    tol = tol or default_tolerance()
    deg = _check_pole(p, tol)
    zc = to_complex(z)
    r = abs(zc)
    if deg is None:
        if r > 1 + tol.abs_eps:
            raise ValueError(f"|z| = {r} > 1 outside the series domain")
        if r >= 1 - tol.abs_eps:
            margin = to_complex(p.gamma - p.alpha - p.beta).real
            if margin <= 0:
                raise DivergentAtBoundary(
                    f"Re(gamma-alpha-beta) = {margin} <= 0 at |z| = 1")
    value, terms, converged = hyp2f1_series(
        to_complex(p.alpha), to_complex(p.beta), to_complex(p.gamma),
        zc, tol.abs_eps, max_terms)
    if not converged:
        warnings.warn(
            f"2F1 series hit the {max_terms}-term cap at z = {zc}; "
            "value may be short of full precision", stacklevel=2)
    return value


def hyp2f1_derivative(p: Hyp2F1Params, z: Scalar, tol: Tolerance | None = None) -> complex:
    """d/dz 2F1 = (alpha beta / gamma) 2F1(alpha+1, beta+1; gamma+1; z), |z| < 1."""
    tol = tol or default_tolerance()
    factor = to_complex(p.alpha) * to_complex(p.beta) / to_complex(p.gamma)
    return factor * hyp2f1(p.shifted(1), z, tol)


def gauss_value(p: Hyp2F1Params, tol: Tolerance | None = None) -> complex:
    """Value at z = 1.

    Terminating series use the Chu-Vandermonde product; otherwise
    Re(gamma - alpha - beta) > 0 is required and the value is
    Gamma(gamma) Gamma(gamma-alpha-beta) / (Gamma(gamma-alpha) Gamma(gamma-beta)).
    """
    tol = tol or default_tolerance()
    deg = _check_pole(p, tol)
    a, b, g = to_complex(p.alpha), to_complex(p.beta), to_complex(p.gamma)
    if deg is not None:
        # pick the terminating slot: 2F1(-n, b; g; 1) = (g - b)_n / (g)_n
        if as_integer(p.alpha, tol) == -deg:
            top, n = g - b, deg
        else:
            top, n = g - a, deg
        num = den = 1.0 + 0.0j
        for j in range(n):
            num *= top + j
            den *= g + j
        return num / den
    if (g - a - b).real <= 0:
        raise DivergentAtBoundary("Gauss value requires Re(gamma-alpha-beta) > 0")
    for w in (g - a, g - b):
        m = as_integer(w, tol)
        if m is not None and m <= 0:
            return 0.0 + 0.0j  # reciprocal Gamma pole
    return complex(cmath.exp(loggamma(g) + loggamma(g - a - b)
                             - loggamma(g - a) - loggamma(g - b)))


@dataclass(frozen=True)
class EulerFactorization:
    """Data of 2F1 = (1 - z)^exponent * P(z) with P polynomial of the given degree."""

    exponent: complex
    degree: int
    value_at_1: complex
    poly: Hyp2F1Params  # parameters of the terminating series equal to P


def euler_factorization(p: Hyp2F1Params, tol: Tolerance | None = None) -> EulerFactorization:
    """Factor 2F1(gamma + n, beta; gamma; z) = (1 - z)^{gamma - alpha - beta} P_n(z).

    Requires one upper parameter to exceed the lower one by a non-negative
    integer n (either slot).  P_n = 2F1(gamma-alpha, gamma-beta; gamma; .)
    terminates at degree n, and P_n(1) follows from Chu-Vandermonde.
    """
    tol = tol or default_tolerance()
    n = as_integer(p.alpha - p.gamma, tol)
    if n is None or n < 0:
        n2 = as_integer(p.beta - p.gamma, tol)
        if n2 is None or n2 < 0:
            raise NotInConfiguration(
                "euler_factorization needs alpha - gamma or beta - gamma in Z_{>=0}")
        p = Hyp2F1Params(p.beta, p.alpha, p.gamma)  # normalize: offset in the alpha slot
        n = n2
    exponent = to_complex(p.gamma - p.alpha - p.beta)
    poly = Hyp2F1Params(p.gamma - p.alpha, p.gamma - p.beta, p.gamma)
    # P_n(1) = (beta)_n / (gamma)_n
    num = den = 1.0 + 0.0j
    for j in range(n):
        num *= to_complex(p.beta) + j
        den *= to_complex(p.gamma) + j
    return EulerFactorization(exponent, n, num / den, poly)


def theta_integral(nu: Scalar, t: float, tol: Tolerance | None = None) -> float:
    """Normalized circle integral of |1 - t e^{i theta}|^{2 nu} for 0 <= t < 1.

    Equals 2F1(-nu, -nu; 1; t^2); the quadrature twin below is the
    independent oracle.
    """
    if not 0 <= t < 1:
        raise ValueError("t must lie in [0, 1)")
    p = Hyp2F1Params(-to_complex(nu), -to_complex(nu), 1.0)
    return hyp2f1(p, t * t, tol).real


def theta_integral_quadrature(nu: Scalar, t: float, n: int = 10**4) -> float:
    """Uniform-grid quadrature of the same integral (spectrally accurate: periodic)."""
    if not 0 <= t < 1:
        raise ValueError("t must lie in [0, 1)")
    theta = np.arange(n) * (2 * np.pi / n)
    vals = (1 + t * t - 2 * t * np.cos(theta)) ** complex(nu)
    return float(np.mean(vals).real)


def indicial_exponents(s: Scalar, mu: Scalar) -> tuple[complex, complex]:
    """Roots of x^2 + (3 + s) x + (s + 2 - mu) = 0: (-s-3)/2 +- sqrt(mu + ((1+s)/2)^2)."""
    sc, mc = to_complex(s), to_complex(mu)
    root = cmath.sqrt(mc + ((1 + sc) / 2) ** 2)
    base = (-sc - 3) / 2
    return base + root, base - root
