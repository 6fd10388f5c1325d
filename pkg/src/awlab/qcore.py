"""Scalar q-deformed kernel: sinh_q/cosh_q, q-brackets, q-Pochhammer symbols and
terminating 4phi3 series.

Everything downstream (matrix representations, overlap tables, weights) is built
from these few scalars, so they carry the precision policy: a QContext selects
either plain float64 or an mpmath-backed extended mode. Entries in the matrix
problems scale like q^{-O(N)}, which is why the extended mode exists at all.
"""
import math
from dataclasses import dataclass, field

import mpmath


@dataclass(frozen=True)
class QContext:
    """Deformation parameter plus numerical policy, threaded through every call.

    q        : the deformation parameter, 0 < q < 1 (strict)
    eps_inf  : truncation threshold for infinite products
    default_tol : relative residual threshold used by checks
    precision: "double" (float64) or "extended" (mpmath, ~40 digits)
    """
    q: float
    eps_inf: float = 1e-18
    default_tol: float = 1e-10
    precision: str = "double"
    dps: int = 40

    def __post_init__(self):
        if not (0.0 < self.q < 1.0):
            raise ValueError("q must satisfy 0 < q < 1, got %r" % (self.q,))
        if self.eps_inf <= 0 or self.default_tol <= 0:
            raise ValueError("eps_inf and default_tol must be positive")
        if self.precision not in ("double", "extended"):
            raise ValueError("precision must be 'double' or 'extended'")

    def qval(self):
        if self.precision == "extended":
            mpmath.mp.dps = self.dps
            return mpmath.mpf(repr(self.q))
        return self.q


def _finite(v):
    if isinstance(v, (float, int)):
        if not math.isfinite(v):
            raise OverflowError("q-kernel produced a non-finite value")
    elif not mpmath.isfinite(v):
        raise OverflowError("q-kernel produced a non-finite value")
    return v


def sinh_q(ctx, x):
    """q^x - q^{-x}; odd in x, negative for x > 0 since q < 1."""
    qq = ctx.qval()
    return _finite(qq**x - qq**(-x))


def cosh_q(ctx, x):
    """q^x + q^{-x}; even, >= 2 for real x."""
    qq = ctx.qval()
    return _finite(qq**x + qq**(-x))


def qbracket(ctx, n):
    """q-number [n] = sinh_q(n)/sinh_q(1); [1] = 1."""
    return _finite(sinh_q(ctx, n) / sinh_q(ctx, 1))


def qpoch(ctx, a, base, n):
    """Finite q-Pochhammer (a; base)_n = prod_{i<n} (1 - a*base^i)."""
    if n < 0:
        raise ValueError("qpoch order must be >= 0")
    r = 1.0
    f = a
    for _ in range(n):
        r = r * (1 - f)
        f = f * base
    return _finite(r)


def qpoch_inf(ctx, a, base):
    """Infinite q-Pochhammer (a; base)_inf, truncated once the running factor is
    within ctx.eps_inf of 1. Deterministic for a fixed context."""
    if abs(base) >= 1:
        raise ValueError("qpoch_inf requires |base| < 1")
    r = 1.0
    term = a
    k = 0
    while abs(term) > ctx.eps_inf and k < 100000:
        r = r * (1 - term)
        term = term * base
        k += 1
    return _finite(r)


def phi43(ctx, num, den, base, z, nmax):
    """Terminating 4phi3 with numerator parameters num (4) and denominator
    parameters den (3), summed for k = 0..nmax.

    Terms are accumulated through the running ratio term_{k+1}/term_k so
    Pochhammers are never recomputed from scratch.
    """
    if len(num) != 4 or len(den) != 3:
        raise ValueError("phi43 expects 4 numerator and 3 denominator parameters")
    s = 1.0
    t = 1.0
    for k in range(nmax):
        ratio = z / (1 - base**(k + 1))
        for a in num:
            ratio = ratio * (1 - a * base**k)
        for b in den:
            d = 1 - b * base**k
            if d == 0:
                raise ZeroDivisionError(
                    "denominator Pochhammer vanished at term %d" % k)
            ratio = ratio / d
        t = t * ratio
        s = s + t
    return _finite(s)
