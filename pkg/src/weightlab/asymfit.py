"""Power-law tail analysis.

Sequences in this package (coefficient solutions, norms, membership
weights) behave like C n^e (1 + c1/n + ...) for large n, possibly times
log factors.  Decisions that depend on growth are made by fitting e over
a dyadic window, and, where two competing power branches must be
separated, by a formal series solution of the recurrence at infinity.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import logsumexp

__all__ = [
    "fit_exponent",
    "window_exponent",
    "dyadic_block_exponent",
    "frobenius_tail_coefficients",
    "frobenius_eval",
]


def fit_exponent(ns: np.ndarray, log_vals: np.ndarray) -> float:
    """Least-squares slope of log values against log n."""
    ns = np.asarray(ns, dtype=float)
    x = np.log(ns)
    y = np.asarray(log_vals, dtype=float)
    A = np.stack([x, np.ones_like(x)], axis=1)
    slope, _ = np.linalg.lstsq(A, y, rcond=None)[0]
    return float(slope)


def window_exponent(log_terms: np.ndarray, lo: int, hi: int) -> float:
    """Fitted exponent of a sequence (given as log |terms| indexed by n) over [lo, hi)."""
    if not 1 <= lo < hi <= len(log_terms):
        raise ValueError(f"window [{lo}, {hi}) out of range for length {len(log_terms)}")
    ns = np.arange(lo, hi)
    return fit_exponent(ns, log_terms[lo:hi])


def dyadic_block_exponent(log_terms: np.ndarray, m_lo: int, m_hi: int) -> float:
    """Exponent estimate from dyadic block sums.

    Sums the terms (given as logs, indexed by n) over blocks [2^m, 2^(m+1))
    and fits log(block sum) against log(2^m); for terms ~ n^e the slope is
    e + 1.  Robust to sign oscillation (which puts -inf entries in the log
    array) and the standard choice wherever terms may vanish inside the
    fitting window.
    """
    xs, ys = [], []
    for m in range(m_lo, m_hi + 1):
        lo, hi = 2 ** m, min(2 ** (m + 1), len(log_terms))
        if hi <= lo:
            break
        block = np.asarray(log_terms[lo:hi], dtype=float)
        block = block[np.isfinite(block)]
        if len(block) == 0:
            continue
        xs.append(math.log(2.0 ** m))
        ys.append(float(logsumexp(block)))
    if len(xs) < 2:
        raise ValueError("not enough dyadic blocks to fit an exponent")
    A = np.stack([np.asarray(xs), np.ones(len(xs))], axis=1)
    slope, _ = np.linalg.lstsq(A, np.asarray(ys), rcond=None)[0]
    return float(slope) - 1.0


def _binom(beta: complex, i: int) -> complex:
    out = 1.0 + 0.0j
    for t in range(i):
        out *= (beta - t) / (t + 1)
    return out


def frobenius_tail_coefficients(r_poly, q_poly, p_poly, alpha: complex,
                                order: int) -> np.ndarray:
    """Correction coefficients of a power-like solution at infinity.

    For the recurrence p(n) u_{n+2} + q(n) u_{n+1} + r(n) u_n = 0 with
    quadratic polynomial coefficients whose two leading symbol orders
    cancel (the regular-singular case), solutions behave like
    n^alpha (1 + e_1/n + e_2/n^2 + ...).  Returns e_1..e_order for the
    branch with the given indicial root alpha.

    The coefficients come from expanding the residual in powers of 1/n:
    with G(w; b) = sum_{j, d} c_{j, d} binom(b, d-2+w) j^{d-2+w} (j the
    shift, c_{j, d} the n^d coefficient), the order-(m+2) equation is
    e_m G(2; alpha - m) = -sum_{k<m} e_k G(m+2-k; alpha - k), and
    G(2; .) is the indicial polynomial, nonzero off the exponent lattice.
    """
    shifts = {0: np.asarray(r_poly, dtype=complex),
              1: np.asarray(q_poly, dtype=complex),
              2: np.asarray(p_poly, dtype=complex)}

    def G(w: int, beta: complex) -> complex:
        total = 0.0 + 0.0j
        for j, cs in shifts.items():
            for d, c in enumerate(cs):
                i = d - 2 + w
                if i < 0 or (j == 0 and i > 0):
                    continue
                total += c * _binom(beta, i) * (j ** i if i else 1)
        return total

    for w in (0, 1):
        if abs(G(w, alpha)) > 1e-9 * max(1.0, abs(alpha)) ** 2:
            raise ValueError("recurrence is not regular-singular at infinity")
    assert abs(G(2, alpha)) < 1e-8 * max(1.0, abs(alpha)) ** 2, \
        "alpha is not an indicial root"
    e = [1.0 + 0.0j]
    for m in range(1, order + 1):
        acc = sum(e[k] * G(m + 2 - k, alpha - k) for k in range(m))
        e.append(-acc / G(2, alpha - m))
    return np.asarray(e[1:], dtype=complex)


def frobenius_eval(alpha: complex, tail: np.ndarray, ns: np.ndarray) -> np.ndarray:
    """Evaluate n^alpha (1 + sum_k tail[k-1] n^-k) at the given indices."""
    ns = np.asarray(ns, dtype=float)
    out = np.ones(len(ns), dtype=complex)
    for k, ek in enumerate(tail, start=1):
        out += ek * ns ** (-float(k))
    return ns ** alpha * out
