"""Arithmetic helpers for the coefficient rings used throughout.

Values of the base algebra B are either scalars (float/complex/Fraction,
for d = 1, where Fraction enables exact rational paths) or d x d numpy
arrays.  ``Dual`` adjoins a square-zero infinitesimal: a pair p + eps*q
multiplies like the upper-triangular lift [[p, q], [0, p]], which is how
first-order (infinitesimal) data rides along every computation.
"""

import numbers

import numpy as np


def mdot(a, b):
    """Product in B: matrix product for arrays, plain product otherwise."""
    if isinstance(a, Dual) or isinstance(b, Dual):
        return as_dual(a) * as_dual(b)
    if isinstance(a, np.ndarray) and isinstance(b, np.ndarray):
        return a @ b
    return a * b


def mdot_chain(*vals):
    out = vals[0]
    for v in vals[1:]:
        out = mdot(out, v)
    return out


def scale(w, v):
    """Multiply by a central scalar weight (Fraction-safe, array-safe)."""
    if isinstance(v, Dual):
        return Dual(scale(w, v.re), scale(w, v.de))
    if isinstance(v, np.ndarray):
        return float(w) * v
    return w * v


def unit_like(v):
    """Multiplicative unit of the ring containing ``v``."""
    if isinstance(v, Dual):
        return Dual(unit_like(v.re), zero_like(v.re))
    if isinstance(v, np.ndarray):
        return np.eye(v.shape[0], dtype=complex)
    return 1


def zero_like(v):
    if isinstance(v, Dual):
        return Dual(zero_like(v.re), zero_like(v.re))
    if isinstance(v, np.ndarray):
        return np.zeros_like(v, dtype=complex)
    return 0


def minv(v):
    """Inverse in B."""
    if isinstance(v, Dual):
        r = minv(v.re)
        return Dual(r, -mdot(mdot(r, v.de), r))
    if isinstance(v, np.ndarray):
        return np.linalg.inv(v)
    return 1 / v


def mnorm(v):
    """Operator norm (spectral norm for arrays, modulus for scalars)."""
    if isinstance(v, np.ndarray):
        return float(np.linalg.norm(v, 2))
    return abs(v)


class Dual:
    """p + eps*q with eps^2 = 0; p, q scalars or same-shape arrays."""

    __slots__ = ("re", "de")

    def __init__(self, re, de=None):
        self.re = re
        self.de = zero_like(re) if de is None else de

    def __add__(self, other):
        other = as_dual(other)
        return Dual(self.re + other.re, self.de + other.de)

    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.re, -self.de)

    def __sub__(self, other):
        return self + (-as_dual(other))

    def __rsub__(self, other):
        return as_dual(other) + (-self)

    def __mul__(self, other):
        other = as_dual(other)
        return Dual(mdot(self.re, other.re),
                    mdot(self.re, other.de) + mdot(self.de, other.re))

    def __rmul__(self, other):
        other = as_dual(other)
        return other * self

    def __truediv__(self, other):
        return self * minv(as_dual(other))

    def __rtruediv__(self, other):
        return as_dual(other) * minv(self)

    def __repr__(self):
        return f"Dual({self.re!r}, {self.de!r})"


def as_dual(v):
    return v if isinstance(v, Dual) else Dual(v)
