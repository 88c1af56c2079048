"""Pure-Python fallback for the compiled kernels.

Same semantics as ``_kernels.pyx``, selected by ``weightlab.kernels`` when
the extension is unavailable.  Noticeably slower on the spectral scan; see
benchmarks/bench_kernels.py.
"""

import numpy as np


def fe_diag_sequence(a1, a2, a, xi, n):
    """First n coefficients u_0..u_{n-1} of the FE eigenvector recurrence."""
    a1, a2, a, xi = complex(a1), complex(a2), complex(a), complex(xi)
    s = a + a1 + a2
    p = a * a2
    mu = xi - a2 * (1.0 + a + a1)
    out = np.empty(n, dtype=np.complex128)
    if n <= 0:
        return out
    out[0] = u_prev = 1.0
    if n == 1:
        return out
    out[1] = u_cur = (p + mu) / (1.0 + a1)
    for m in range(n - 2):
        lead = (m + 2.0) * (m + 2.0 + a1)
        trail = (m - a) * (m - a2)
        mid = s + 2.0 - mu - lead - trail
        u_next = -(mid * u_cur + trail * u_prev) / lead
        out[m + 2] = u_next
        u_prev, u_cur = u_cur, u_next
    return out


def hyp2f1_series(alpha, beta, gamma, z, eps, max_terms):
    """Forward-term summation of 2F1; returns (value, terms_used, converged).

    The stopping rule |term| * (k + 1) < eps * scale (5 consecutive times,
    scale = the largest partial-sum modulus seen) keeps the discarded tail below eps even for the polynomially
    decaying boundary case |z| = 1.
    """
    alpha, beta, gamma, z = complex(alpha), complex(beta), complex(gamma), complex(z)
    term = 1.0 + 0.0j
    total = 1.0 + 0.0j
    scale = 1.0
    k = 0
    consec = 0
    while k < max_terms:
        an = alpha + k
        bn = beta + k
        if an == 0 or bn == 0:
            return total, k + 1, True
        gn = gamma + k
        if gn == 0:
            return complex("nan"), k, False
        term = term * an * bn / (gn * (k + 1.0)) * z
        total = total + term
        k += 1
        if abs(total) > scale:
            scale = abs(total)
        if abs(term) * (k + 1) < eps * scale:
            consec += 1
            if consec >= 5:
                return total, k, True
        else:
            consec = 0
    return total, k, False
