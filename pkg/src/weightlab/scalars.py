"""Arithmetic substrate shared by every module.

Scalars are plain Python numbers.  Float mode uses ``complex``/``float``;
exact mode uses :class:`fractions.Fraction` for real rationals and
:class:`QQi` for Gaussian rationals (needed once parameters acquire an
imaginary part).  All algebraic routines in this package are written
field-agnostically, so they accept either mode.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

__all__ = [
    "QQi",
    "Scalar",
    "Tolerance",
    "default_tolerance",
    "approx_eq",
    "pochhammer",
    "conjugate",
    "to_complex",
    "is_exact",
    "as_integer",
    "is_integer",
    "is_negative_integer",
    "is_nonnegative_integer",
    "parse_scalar",
]

_ENV_EPS = "WEIGHTLAB_EPS"


@dataclass(frozen=True)
class Tolerance:
    """Absolute/relative tolerance pair used by all numerical assertions."""

    abs_eps: float = 1e-10
    rel_eps: float = 1e-10

    def __post_init__(self):
        if not (self.abs_eps > 0 and self.rel_eps > 0):
            raise ValueError("tolerances must be positive")


def default_tolerance() -> Tolerance:
    """Default policy; the WEIGHTLAB_EPS environment variable overrides abs_eps."""
    env = os.environ.get(_ENV_EPS)
    if env:
        eps = float(env)
        return Tolerance(abs_eps=eps, rel_eps=eps)
    return Tolerance()


class QQi:
    """Gaussian rational a + b*i with Fraction components.

    Closed under +, -, *, and / by any nonzero element, which is what the
    exact-mode property tests need.  Mixes transparently with int and
    Fraction operands.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, *a):  # immutable
        raise AttributeError("QQi is immutable")

    @staticmethod
    def _coerce(x):
        if isinstance(x, QQi):
            return x
        if isinstance(x, (int, Fraction)):
            return QQi(x, 0)
        return NotImplemented

    def __add__(self, other):
        o = QQi._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QQi(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return QQi(-self.re, -self.im)

    def __sub__(self, other):
        o = QQi._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QQi(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = QQi._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = QQi._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QQi(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = QQi._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return QQi((self.re * o.re + self.im * o.im) / d,
                   (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        o = QQi._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def conjugate(self):
        return QQi(self.re, -self.im)

    def __eq__(self, other):
        o = QQi._coerce(other)
        if o is NotImplemented:
            return complex(self) == other
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if self.im == 0:
            return f"QQi({self.re})"
        return f"QQi({self.re}, {self.im})"


Scalar = Union[int, float, complex, Fraction, QQi]


def is_exact(x: Scalar) -> bool:
    return isinstance(x, (int, Fraction, QQi))


def conjugate(x: Scalar) -> Scalar:
    if isinstance(x, (int, float, Fraction)):
        return x
    return x.conjugate()


def to_complex(x: Scalar) -> complex:
    return complex(x)


def _abs(x: Scalar) -> float:
    return abs(complex(x))


def approx_eq(x: Scalar, y: Scalar, tol: Tolerance | None = None) -> bool:
    """True iff |x - y| <= abs_eps + rel_eps * max(|x|, |y|)."""
    if is_exact(x) and is_exact(y):
        xq, yq = QQi._coerce(x), QQi._coerce(y)
        if xq is not NotImplemented and yq is not NotImplemented:
            return xq == yq
    tol = tol or default_tolerance()
    return _abs(complex(x) - complex(y)) <= tol.abs_eps + tol.rel_eps * max(_abs(x), _abs(y))


def pochhammer(b: Scalar, n: int) -> Scalar:
    """Rising product (b)_0 = 1, (b)_n = prod_{j=1}^{n} (b - 1 + j)."""
    if n < 0:
        raise ValueError("pochhammer order must be non-negative")
    out: Scalar = 1 if is_exact(b) else 1.0
    for j in range(1, n + 1):
        out = out * (b - 1 + j)
    return out


def as_integer(x: Scalar, tol: Tolerance | None = None) -> int | None:
    """The integer x represents, or None.

    Exact scalars are tested exactly; floats within abs_eps of an integer
    are snapped to it (the case splits downstream are discrete, so silent
    misclassification is worse than snapping).
    """
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else None
    if isinstance(x, QQi):
        if x.im != 0:
            return None
        return int(x.re) if x.re.denominator == 1 else None
    tol = tol or default_tolerance()
    z = complex(x)
    if abs(z.imag) > tol.abs_eps:
        return None
    r = round(z.real)
    return int(r) if abs(z.real - r) <= tol.abs_eps else None


def is_integer(x: Scalar, tol: Tolerance | None = None) -> bool:
    return as_integer(x, tol) is not None


def is_negative_integer(x: Scalar, tol: Tolerance | None = None) -> bool:
    n = as_integer(x, tol)
    return n is not None and n < 0


def is_nonnegative_integer(x: Scalar, tol: Tolerance | None = None) -> bool:
    n = as_integer(x, tol)
    return n is not None and n >= 0


def real_part(x: Scalar):
    if isinstance(x, (int, float, Fraction)):
        return x
    if isinstance(x, QQi):
        return x.re
    return x.real


def imag_part(x: Scalar):
    if isinstance(x, (int, float, Fraction)):
        return 0
    if isinstance(x, QQi):
        return x.im
    return x.imag


def parse_scalar(text: str) -> Scalar:
    """Parse a CLI literal: decimal, rational ``p/q`` (exact mode), or complex.

    Rational literals with an imaginary part use ``p/q+r/s i``, e.g.
    ``-1/2+1i``.
    """
    text = text.strip()
    if "/" in text and "j" not in text and "i" not in text:
        return Fraction(text)
    if ("i" in text or "j" in text) and "/" in text:
        body = text.replace("j", "i").rstrip("i")
        # split at the sign of the imaginary part (skip a leading sign)
        for pos in range(len(body) - 1, 0, -1):
            if body[pos] in "+-":
                return QQi(Fraction(body[:pos]), Fraction(body[pos:] or "1"))
        raise ValueError(f"cannot parse scalar literal {text!r}")
    try:
        f = float(text)
        return f
    except ValueError:
        pass
    try:
        return complex(text.replace("i", "j"))
    except ValueError as exc:
        raise ValueError(f"cannot parse scalar literal {text!r}") from exc
