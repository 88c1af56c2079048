# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops.

Two sequential kernels dominate the package's runtime: the three-term
recurrence for FE-eigenvector coefficients on the diagonal weight space
(driven thousands of times by the spectral scan) and the Gauss 2F1 series,
which needs up to ~10^6 terms near the unit circle.  Both have pure-Python
twins in ``_kernels_py`` with identical semantics; ``weightlab.kernels``
selects whichever is importable.
"""

import numpy as np


def fe_diag_sequence(double complex a1, double complex a2, double complex a,
                     double complex xi, Py_ssize_t n):
    """First n coefficients u_0..u_{n-1} of the FE eigenvector recurrence.

    Normal form (case-A variables): u_0 = 1, (1 + a1) u_1 = (p + mu) u_0 and

        (m+2)(m+2+a1) u_{m+2}
          + (s + 2 - mu - (m+2)(m+2+a1) - (m-a)(m-a2)) u_{m+1}
          + (m-a)(m-a2) u_m = 0

    with s = a + a1 + a2, p = a*a2, mu = xi - a2(1 + a + a1).
    """
    cdef double complex s = a + a1 + a2
    cdef double complex p = a * a2
    cdef double complex mu = xi - a2 * (1.0 + a + a1)
    out = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] u = out
    cdef Py_ssize_t m
    cdef double complex lead, mid, trail
    if n <= 0:
        return out
    u[0] = 1.0
    if n == 1:
        return out
    u[1] = (p + mu) / (1.0 + a1)
    for m in range(n - 2):
        lead = (m + 2.0) * (m + 2.0 + a1)
        trail = (m - a) * (m - a2)
        mid = s + 2.0 - mu - lead - trail
        u[m + 2] = -(mid * u[m + 1] + trail * u[m]) / lead
    return out


def hyp2f1_series(double complex alpha, double complex beta, double complex gamma,
                  double complex z, double eps, long max_terms):
    """Forward-term summation of 2F1(alpha, beta; gamma; z).

    Stops once |term| * (k + 1) < eps * scale holds for 5 consecutive
    terms (scale = the largest partial-sum modulus seen), when the series terminates (alpha or beta a non-positive
    integer), or at max_terms.  The factor k + 1 keeps the discarded tail
    below eps even for the polynomially-decaying boundary case |z| = 1.
    Returns (value, terms_used, converged).  A pole of the lower parameter
    reached before termination yields (nan, k, False); callers are expected
    to pre-check that configuration.
    """
    cdef double complex term = 1.0
    cdef double complex total = 1.0
    cdef double complex an, bn, gn
    cdef double scale = 1.0
    cdef long k = 0
    cdef int consec = 0
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
