"""Truncated Laurent series modelling elements of C_inf.

A :class:`CinfNum` is ``sum_k c_k pi^k`` with digits ``c_k`` in F_{q^m},
``pi^r = 1/theta``, and all exponents ``>= prec`` unknown.  Valuations are in
``pi``-units, so ``v(theta) == -r`` and ``|x| = q^(-v(x)/r)``.

Every inexact number carries at most ``params.P`` significant digits (its
precision is capped at ``valuation + P``).  Exact numbers (``prec == inf``)
stay exact as long as their digit span is shorter than ``P``.
"""

from __future__ import annotations

import functools
import math

import numpy as np

from .field import FieldParams

INF = math.inf


class PrecisionError(ArithmeticError):
    """A value cannot be determined at the precision available."""


def _conv(a, b, fld):
    """Product of two digit arrays, as an (n1 + n2 - 1, k) array."""
    n1, n2 = a.shape[0], b.shape[0]
    if n1 == 0 or n2 == 0:
        return np.zeros((0, fld.k), dtype=np.int64)
    k, p = fld.k, fld.p
    if k == 1:
        return (np.convolve(a[:, 0], b[:, 0]) % p)[:, None]
    s = 2 * k - 1
    A = np.zeros((n1, s), dtype=np.int64)
    A[:, :k] = a
    B = np.zeros((n2, s), dtype=np.int64)
    B[:, :k] = b
    C = np.convolve(A.ravel(), B.ravel())
    C = np.concatenate([C, np.zeros(1, dtype=np.int64)]).reshape(n1 + n2, s)[: n1 + n2 - 1]
    return fld.reduce_rows(C)


def _mul_trunc(a, b, n, fld):
    return _conv(a[:n], b[:n], fld)[:n]


def _pad(a, n, k):
    if a.shape[0] >= n:
        return a[:n]
    return np.vstack([a, np.zeros((n - a.shape[0], k), dtype=np.int64)])


def _one_row(fld):
    row = np.zeros((1, fld.k), dtype=np.int64)
    row[0, 0] = 1
    return row


def _inv_unit(u, n, fld):
    """Inverse of a 1-unit digit array (u[0] == 1) to n digits, by Newton."""
    p = fld.p
    z = _one_row(fld)
    ln = 1
    while ln < n:
        ln = min(2 * ln, n)
        e = (-_mul_trunc(u, _pad(z, ln, fld.k), ln, fld)) % p
        e = _pad(e, ln, fld.k)
        e[0, 0] = (e[0, 0] + 1) % p
        z = (_pad(z, ln, fld.k) + _mul_trunc(z, e, ln, fld)) % p
    return _pad(z, n, fld.k)


def _pow_trunc(a, e, n, fld):
    result = _one_row(fld)
    base = a[:n]
    while e:
        if e & 1:
            result = _mul_trunc(result, base, n, fld)
        e >>= 1
        if e:
            base = _mul_trunc(base, base, n, fld)
    return _pad(result, n, fld.k)


@functools.lru_cache(maxsize=None)
def _frob(params, i):
    fld = params.fld
    # x^(q^m) = x on F_{q^m}
    return fld.frobenius_matrix(params.q ** (i % params.m))


class CinfNum:
    """An element of C_inf known up to ``O(pi^prec)``."""

    __slots__ = ("params", "lo", "digits", "prec")

    def __init__(self, params, lo, digits, prec):
        # trusted constructor; use _make for normalisation
        self.params = params
        self.lo = lo
        self.digits = digits
        self.prec = prec

    # -- construction --------------------------------------------------------
    @classmethod
    def _make(cls, params, lo, arr, prec):
        k = params.k
        arr = np.asarray(arr, dtype=np.int64).reshape(-1, k) % params.p
        if prec != INF:
            keep = max(0, prec - lo)
            arr = arr[:keep]
        nz = np.flatnonzero(arr.any(axis=1))
        if nz.size == 0:
            return cls(params, 0, np.zeros((0, k), dtype=np.int64), prec)
        lo = lo + int(nz[0])
        arr = arr[nz[0]: nz[-1] + 1]
        P = params.P
        if prec == INF and arr.shape[0] <= P:
            return cls(params, lo, arr, INF)
        prec = min(prec, lo + P)
        arr = arr[: prec - lo]
        nz = np.flatnonzero(arr.any(axis=1))
        arr = arr[: nz[-1] + 1]
        return cls(params, lo, arr, prec)

    @classmethod
    def zero(cls, params, prec=INF):
        return cls(params, 0, np.zeros((0, params.k), dtype=np.int64), prec)

    @classmethod
    def scalar(cls, params, code, prec=INF):
        """The F_{q^m} element with integer code ``code`` (an int n < p means n mod p)."""
        vec = params.fld.int_to_vec(code)
        return cls._make(params, 0, np.array([vec]), prec)

    @classmethod
    def one(cls, params):
        return cls.scalar(params, 1)

    @classmethod
    def monomial(cls, params, exp, code=1):
        """``c * pi^exp`` for the field element with code ``c``."""
        vec = params.fld.int_to_vec(code)
        return cls._make(params, exp, np.array([vec]), INF)

    @classmethod
    def theta(cls, params, n=1):
        """``theta^n = pi^(-r n)``."""
        return cls.monomial(params, -params.r * n)

    @classmethod
    def theta_poly(cls, params, coeffs):
        """``sum coeffs[n] theta^n`` with F_{q^m} codes as coefficients (exact)."""
        total = cls.zero(params)
        for n, c in enumerate(coeffs):
            if c:
                total = total + cls.monomial(params, -params.r * n, c)
        return total

    @classmethod
    def from_terms(cls, params, terms, prec=INF):
        """Build from ``{exponent: code-or-vector}``."""
        terms = dict(terms)
        if not terms:
            return cls.zero(params, prec)
        lo = min(terms)
        hi = max(terms)
        arr = np.zeros((hi - lo + 1, params.k), dtype=np.int64)
        for e, c in terms.items():
            arr[e - lo] = params.fld.int_to_vec(c) if isinstance(c, (int, np.integer)) else c
        return cls._make(params, lo, arr, prec)

    # -- basic attributes ----------------------------------------------------
    def is_zero(self):
        """True when no digit is known to be nonzero (zero up to ``prec``)."""
        return self.digits.shape[0] == 0

    def is_exact(self):
        return self.prec == INF

    @property
    def val(self):
        """Valuation in pi-units; for an inexact zero this is its precision."""
        return self.lo if self.digits.shape[0] else self.prec

    @property
    def rel_prec(self):
        if self.is_zero():
            return 0
        return self.prec - self.lo

    def lead(self):
        """Integer code of the leading digit."""
        return self.params.fld.vec_to_int(self.digits[0])

    def terms(self):
        """Nonzero digits as ``[(exponent, code), ...]`` in increasing exponent."""
        fld = self.params.fld
        return [(self.lo + j, fld.vec_to_int(row)) for j, row in enumerate(self.digits) if row.any()]

    def _check(self, other):
        if isinstance(other, CinfNum):
            if other.params != self.params:
                raise ValueError("mismatched FieldParams")
            return other
        if isinstance(other, (int, np.integer)):
            return CinfNum.scalar(self.params, int(other) % self.params.p)
        return NotImplemented

    # -- ring operations -------------------------------------------------------
    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        prec = min(self.prec, other.prec)
        if self.is_zero():
            return CinfNum._make(self.params, other.lo, other.digits, prec)
        if other.is_zero():
            return CinfNum._make(self.params, self.lo, self.digits, prec)
        lo = min(self.lo, other.lo)
        hi = max(self.lo + self.digits.shape[0], other.lo + other.digits.shape[0])
        if prec != INF:
            hi = min(hi, prec)
        hi = max(hi, lo)
        arr = np.zeros((hi - lo, self.params.k), dtype=np.int64)
        for x in (self, other):
            n = min(x.digits.shape[0], hi - x.lo)
            if n > 0:
                arr[x.lo - lo: x.lo - lo + n] += x.digits[:n]
        return CinfNum._make(self.params, lo, arr, prec)

    __radd__ = __add__

    def __neg__(self):
        return CinfNum(self.params, self.lo, (-self.digits) % self.params.p, self.prec)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        vx, vy = self.val, other.val
        if (self.is_zero() and self.is_exact()) or (other.is_zero() and other.is_exact()):
            return CinfNum.zero(self.params)
        prec = min(self.prec + vy, other.prec + vx)
        if self.is_zero() or other.is_zero():
            return CinfNum.zero(self.params, prec)
        fld = self.params.fld
        a, b = self.digits, other.digits
        if prec != INF:
            need = prec - vx - vy
            a, b = a[:need], b[:need]
        return CinfNum._make(self.params, vx + vy, _conv(a, b, fld), prec)

    __rmul__ = __mul__

    def shift(self, n):
        """Multiply by ``pi^n``."""
        return CinfNum(self.params, self.lo + n, self.digits, self.prec + n)

    def scale(self, code):
        """Multiply by the F_{q^m} element with the given code."""
        return self * CinfNum.scalar(self.params, code)

    def inv(self):
        """Multiplicative inverse: leading-term inversion times a Newton-computed unit tail."""
        if self.is_zero():
            raise PrecisionError("cannot invert a number indistinguishable from zero")
        params, fld = self.params, self.params.fld
        c = self.lead()
        cinv = fld.inv(c)
        if self.digits.shape[0] == 1 and self.is_exact():
            return CinfNum.monomial(params, -self.lo, cinv)
        n = params.P if self.is_exact() else min(params.P, self.rel_prec)
        cvec = np.array([fld.int_to_vec(cinv)], dtype=np.int64)
        unit = _conv(self.digits[:n], cvec, fld)
        z = _inv_unit(unit, n, fld)
        z = _conv(z, cvec, fld)[:n]
        return CinfNum._make(params, -self.lo, z, -self.lo + n)

    def __truediv__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, n):
        if n < 0:
            return self.inv() ** (-n)
        result = CinfNum.one(self.params)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def qpow(self, i=1):
        """``x^(q^i)``: digits raised to q^i, exponents scaled by q^i."""
        if i == 0:
            return self
        params = self.params
        Q = params.q ** i
        if self.is_zero():
            return CinfNum.zero(params, self.prec * Q if self.prec != INF else INF)
        n = self.digits.shape[0]
        lo = self.lo * Q
        if self.is_exact() and (n - 1) * Q < params.P:
            rel, prec = (n - 1) * Q + 1, INF
        else:
            rel = params.P if self.is_exact() else min(params.P, self.rel_prec * Q)
            prec = lo + rel
        src = self.digits[: (rel - 1) // Q + 1]
        out = np.zeros(((src.shape[0] - 1) * Q + 1, params.k), dtype=np.int64)
        out[::Q] = (src @ _frob(params, i).T) % params.p
        return CinfNum._make(params, lo, out, prec)

    def with_prec(self, prec):
        """Forget all digits at exponents ``>= prec``."""
        return CinfNum._make(self.params, self.lo, self.digits, min(self.prec, prec))

    def with_rel_prec(self, n):
        if self.is_zero():
            return self
        return self.with_prec(self.lo + n)

    # -- comparison ------------------------------------------------------------
    def __eq__(self, other):
        """Equality up to the smaller of the two precisions."""
        other = self._check(other)
        if other is NotImplemented:
            return other
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        from .render import cinf_to_text
        return f"CinfNum({cinf_to_text(self)})"


def kth_root(x, k):
    """A ``k``-th root of ``x`` (p must not divide k).

    The leading digit's root is the smallest, by integer code, of the roots in
    F_{q^m}; the 1-unit part is lifted by Newton iteration on the inverse root.
    """
    params = x.params
    fld = params.fld
    p = params.p
    if k <= 0 or k % p == 0:
        raise ValueError(f"k={k} must be positive and prime to p={p}")
    if x.is_zero():
        raise PrecisionError("kth_root of a number indistinguishable from zero")
    if x.lo % k:
        raise ValueError(f"valuation {x.lo} is not divisible by {k}; choose r accordingly")
    roots = fld.roots(x.lead(), k)
    if not roots:
        raise ValueError(f"leading digit has no {k}th root in F_{{{params.q}^{params.m}}}")
    c0 = roots[0]
    if x.digits.shape[0] == 1 and x.is_exact():
        return CinfNum.monomial(params, x.lo // k, c0)
    n = params.P if x.is_exact() else min(params.P, x.rel_prec)
    cinv = np.array([fld.int_to_vec(fld.inv(x.lead()))], dtype=np.int64)
    u = _pad(_conv(x.digits[:n], cinv, fld), n, params.k)
    kinv = pow(k, -1, p)
    s = _one_row(fld)
    ln = 1
    while ln < n:
        ln = min(2 * ln, n)
        e = (-_mul_trunc(u, _pow_trunc(_pad(s, ln, params.k), k, ln, fld), ln, fld)) % p
        e = _pad(e, ln, params.k)
        e[0, 0] = (e[0, 0] + 1) % p
        s = (_pad(s, ln, params.k) + kinv * _mul_trunc(s, e, ln, fld)) % p
    y = _mul_trunc(u, _pow_trunc(s, k - 1, n, fld), n, fld)
    y = _conv(y, np.array([fld.int_to_vec(c0)], dtype=np.int64), fld)[:n]
    return CinfNum._make(params, x.lo // k, y, x.lo // k + n)


def lambda_theta(params):
    """The fixed (q-1)th root of -theta used throughout."""
    q = params.q
    if params.r % (q - 1):
        raise ValueError(f"r={params.r} must be a multiple of q-1={q - 1} to construct lambda_theta")
    return kth_root(-CinfNum.theta(params), q - 1)
