"""Tate series, meromorphic functions with poles on J, Gauss norms and residues.

``J`` is the divisor ``(t - theta) + (t - theta^q) + (t - theta^(q^2)) + ...``.
A :class:`MeroJRep` stores a function on it as

    tail(t) + sum_{i <= H} sum_{k <= d} c[i][k-1] * (t - theta^(q^i))^(-k)

with ``tail`` a :class:`TateSeries` and ``tail_bound`` a lower bound on the
valuation of the sup norm, over the unit disk, of everything at indices
``i > H``.  Sizes are valuations in ``pi``-units (``v(theta) == -r``).
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction

from .base_arith import INF, CinfNum, PrecisionError
from .base_arith.render import cinf_to_json

NEG_INF = -math.inf


class HorizonError(PrecisionError):
    """Twisting pushed a significant principal part past the tracked horizon."""


def binom_mod(n, k, p):
    """C(n, k) mod p by Lucas' theorem; negative ``n`` is allowed."""
    if k < 0:
        return 0
    if n < 0:
        sign = -1 if k % 2 else 1
        return (sign * binom_mod(k - n - 1, k, p)) % p
    out = 1
    while n or k:
        ni, ki = n % p, k % p
        if ki > ni:
            return 0
        out = out * math.comb(ni, ki) % p
        n //= p
        k //= p
    return out


def _times_int(x, n):
    n %= x.params.p
    if n == 1:
        return x
    if n == 0:
        return CinfNum.zero(x.params)
    return x * n


@functools.lru_cache(maxsize=None)
def pole(params, i):
    """``theta^(q^i)``, the point of ``tau^i j``."""
    return CinfNum.theta(params, params.q ** i)


def pole_val(params, i):
    return -params.r * params.q ** i


@functools.lru_cache(maxsize=None)
def _inv_diff_pow(params, i, j, n):
    """``(theta^(q^i) - theta^(q^j))^(-n)``."""
    if n == 1:
        return (pole(params, i) - pole(params, j)).inv()
    return _inv_diff_pow(params, i, j, n - 1) * _inv_diff_pow(params, i, j, 1)


class TateSeries:
    """A power series in ``t`` over C_inf, stored up to some degree.

    ``err`` bounds (as a valuation on the unit disk) every term of degree
    beyond the stored coefficients; ``INF`` means the series is a polynomial.
    """

    def __init__(self, params, coeffs=(), err=INF, rho_log=Fraction(0)):
        self.params = params
        self.coeffs = tuple(coeffs)
        self.err = err
        self.rho_log = Fraction(rho_log)

    @classmethod
    def zero(cls, params):
        return cls(params)

    @classmethod
    def const(cls, c):
        return cls(c.params, (c,))

    @classmethod
    def monomial(cls, params, n, c=None):
        c = CinfNum.one(params) if c is None else c
        return cls(params, [CinfNum.zero(params)] * n + [c])

    @classmethod
    def from_fq_poly(cls, params, codes):
        """Polynomial with F_q coefficients given as field codes, low degree first."""
        return cls(params, [CinfNum.scalar(params, c) for c in codes])

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_polynomial(self):
        return self.err == INF

    def coeff(self, n):
        if n < len(self.coeffs):
            return self.coeffs[n]
        return CinfNum.zero(self.params, INF if self.err == INF else self.err)

    def coeff_val(self):
        """Smallest valuation among the stored coefficients."""
        return min([c.val for c in self.coeffs] + [INF])

    def unit_disk_val(self):
        """Valuation of the Gauss norm at radius 1, including the truncation bound."""
        return min([c.val for c in self.coeffs] + [self.err])

    def _binary(self, other, sign):
        n = max(len(self.coeffs), len(other.coeffs))
        zero = CinfNum.zero(self.params)
        out = []
        for i in range(n):
            a = self.coeffs[i] if i < len(self.coeffs) else zero
            b = other.coeffs[i] if i < len(other.coeffs) else zero
            out.append(a + b if sign > 0 else a - b)
        err = min(self.err, other.err)
        if err != INF:
            cap = min(s.degree for s in (self, other) if s.err != INF)
            err = min([err] + [c.val for c in out[cap + 1:]])
            out = out[: cap + 1]
        return TateSeries(self.params, out, err, self.rho_log)

    def __add__(self, other):
        return self._binary(other, 1)

    def __sub__(self, other):
        return self._binary(other, -1)

    def __neg__(self):
        return TateSeries(self.params, [-c for c in self.coeffs], self.err, self.rho_log)

    def scale(self, c):
        err = self.err + c.val if self.err != INF else INF
        return TateSeries(self.params, [c * a for a in self.coeffs], err, self.rho_log)

    def __mul__(self, other):
        if isinstance(other, CinfNum):
            return self.scale(other)
        f, g = self.coeffs, other.coeffs
        if not f or not g:
            err = min(self.err + other.unit_disk_val(), other.err + self.unit_disk_val())
            return TateSeries(self.params, (), err, self.rho_log)
        n = len(f) + len(g) - 1
        zero = CinfNum.zero(self.params)
        out = [zero] * n
        for a, x in enumerate(f):
            if x.is_zero() and x.is_exact():
                continue
            for b, y in enumerate(g):
                out[a + b] = out[a + b] + x * y
        err = min(self.err + other.unit_disk_val(), other.err + self.unit_disk_val())
        if err != INF:
            cap = min(s.degree for s in (self, other) if s.err != INF)
            err = min([err] + [c.val for c in out[cap + 1:]])
            out = out[: cap + 1]
        return TateSeries(self.params, out, err, self.rho_log)

    def mul_t(self, n=1):
        """Multiply by ``t^n``."""
        return TateSeries(self.params, [CinfNum.zero(self.params)] * n + list(self.coeffs), self.err, self.rho_log)

    def truncate(self, D):
        if len(self.coeffs) <= D + 1:
            return self
        err = min([self.err] + [c.val for c in self.coeffs[D + 1:]])
        return TateSeries(self.params, self.coeffs[: D + 1], err, self.rho_log)

    def twist(self, i=1):
        """Frobenius twist: ``sum a_n t^n -> sum a_n^(q^i) t^n``."""
        err = self.err * self.params.q ** i if self.err != INF else INF
        return TateSeries(self.params, [c.qpow(i) for c in self.coeffs], err, self.rho_log)

    def hyperderivative(self, j):
        """``a_n t^n -> C(n, j) a_n t^(n-j)``."""
        p = self.params.p
        out = [_times_int(c, binom_mod(n, j, p)) for n, c in enumerate(self.coeffs) if n >= j]
        return TateSeries(self.params, out, self.err, self.rho_log)

    def taylor_at(self, a, m):
        """Hyperderivatives ``[d^(0) f(a), ..., d^(m-1) f(a)]`` of a polynomial."""
        if not self.is_polynomial():
            raise PrecisionError("Taylor expansion away from the unit disk needs a polynomial tail")
        p = self.params.p
        zero = CinfNum.zero(self.params)
        powers = [CinfNum.one(self.params)]
        for _ in range(len(self.coeffs)):
            powers.append(powers[-1] * a)
        out = []
        for j in range(m):
            s = zero
            for n, c in enumerate(self.coeffs):
                if n >= j and not (c.is_zero() and c.is_exact()):
                    b = binom_mod(n, j, p)
                    if b:
                        s = s + _times_int(c * powers[n - j], b)
            out.append(s)
        return out

    def __call__(self, x):
        return self.taylor_at(x, 1)[0]

    def equals(self, other, threshold):
        """True when the difference has unit-disk valuation at least ``threshold``."""
        return (self - other).unit_disk_val() >= threshold

    def __repr__(self):
        return f"TateSeries(deg={self.degree}, err={self.err})"


def gauss_norm(f, rho_log):
    """``log_q`` of ``||f||_rho`` with ``rho = q^rho_log``: max of ``-v(a_n)/r + n rho_log``.

    Monomials are orthogonal for the Gauss norm, so the infimum over
    representations is attained coefficientwise.  Returns ``-inf`` for 0.
    """
    r = f.params.r
    rho_log = Fraction(rho_log)
    best = NEG_INF
    for n, c in enumerate(f.coeffs):
        if c.is_zero():
            continue
        best = max(best, Fraction(-c.val, r) + n * rho_log)
    return best


class MeroJRep:
    """Principal parts along J plus a holomorphic tail (see module docstring)."""

    def __init__(self, params, parts, tail=None, tail_bound=INF, guard=2):
        self.params = params
        d = max([len(p) for p in parts] + [0])
        zero = CinfNum.zero(params)
        self.parts = tuple(tuple(p) + (zero,) * (d - len(p)) for p in parts)
        self.tail = TateSeries.zero(params) if tail is None else tail
        self.tail_bound = tail_bound
        self.guard = guard

    # -- constructors ----------------------------------------------------------
    @classmethod
    def zero(cls, params, nparts, d=1, guard=2):
        zero = CinfNum.zero(params)
        return cls(params, [(zero,) * d for _ in range(nparts)], guard=guard)

    @classmethod
    def simple_pole(cls, params, nparts, i=0, k=1, c=None, guard=2):
        """``c (t - theta^(q^i))^(-k)``."""
        c = CinfNum.one(params) if c is None else c
        zero = CinfNum.zero(params)
        parts = [[zero] * k for _ in range(nparts)]
        parts[i][k - 1] = c
        return cls(params, parts, guard=guard)

    @classmethod
    def from_tail(cls, tail, nparts, guard=2):
        return cls(tail.params, [() for _ in range(nparts)], tail, guard=guard)

    # -- shape -----------------------------------------------------------------
    @property
    def nparts(self):
        return len(self.parts)

    @property
    def H(self):
        return len(self.parts) - 1

    @property
    def horizon(self):
        """The trusted horizon I (tracked indices minus the guard band)."""
        return self.H - self.guard

    @property
    def order_cap(self):
        return len(self.parts[0]) if self.parts else 0

    def pole_order(self, i):
        """Largest ``k`` with a coefficient known to be nonzero at ``tau^i j``."""
        for k in range(len(self.parts[i]), 0, -1):
            if not self.parts[i][k - 1].is_zero():
                return k
        return 0

    def max_pole_order(self):
        return max([self.pole_order(i) for i in range(self.nparts)] + [0])

    def part_val(self, i, k):
        """Sup-norm valuation on the unit disk of ``c[i][k-1] (t - theta^(q^i))^(-k)``."""
        c = self.parts[i][k - 1]
        return c.val - k * pole_val(self.params, i)

    def size(self):
        """Lower bound for the valuation of the sup norm on the unit disk."""
        vals = [self.tail.unit_disk_val(), self.tail_bound]
        for i, part in enumerate(self.parts):
            for k in range(1, len(part) + 1):
                vals.append(self.part_val(i, k))
        return min(vals)

    def sup_val(self):
        return self.size()

    def is_zero(self):
        """No stored digit anywhere (the neglected horizon is not inspected)."""
        return all(c.is_zero() for part in self.parts for c in part) and all(c.is_zero() for c in self.tail.coeffs)

    # -- linear structure ------------------------------------------------------
    def _align(self, other):
        if other.params != self.params:
            raise ValueError("mismatched FieldParams")
        n = min(self.nparts, other.nparts)
        d = max(self.order_cap, other.order_cap)
        return n, d

    def _part(self, i, k):
        if i < self.nparts and k <= self.order_cap:
            return self.parts[i][k - 1]
        return CinfNum.zero(self.params)

    def __add__(self, other):
        n, d = self._align(other)
        parts = [[self._part(i, k) + other._part(i, k) for k in range(1, d + 1)] for i in range(n)]
        bound = min(self.tail_bound, other.tail_bound, self._dropped_val(n), other._dropped_val(n))
        return MeroJRep(self.params, parts, self.tail + other.tail, bound, min(self.guard, other.guard))

    def _dropped_val(self, n):
        vals = [self.part_val(i, k) for i in range(n, self.nparts) for k in range(1, self.order_cap + 1)]
        return min(vals + [INF])

    def __neg__(self):
        parts = [[-c for c in p] for p in self.parts]
        return MeroJRep(self.params, parts, -self.tail, self.tail_bound, self.guard)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        parts = [[c * x for x in p] for p in self.parts]
        bound = self.tail_bound + c.val if self.tail_bound != INF else INF
        return MeroJRep(self.params, parts, self.tail.scale(c), bound, self.guard)

    # -- Laurent data at a pole ------------------------------------------------
    def regular_taylor(self, i, m):
        """Taylor coefficients (orders ``0..m-1``) at ``theta^(q^i)`` of everything
        except the principal part at ``i``."""
        params = self.params
        p = params.p
        out = self.tail.taylor_at(pole(params, i), m) if m else []
        out = list(out)
        for j, part in enumerate(self.parts):
            if j == i:
                continue
            for k, c in enumerate(part, start=1):
                if c.is_zero() and c.is_exact():
                    continue
                for s in range(m):
                    b = binom_mod(-k, s, p)
                    if b:
                        out[s] = out[s] + _times_int(c * _inv_diff_pow(params, i, j, k + s), b)
        return out

    # -- products --------------------------------------------------------------
    def __mul__(self, other):
        """Product of two functions whose tails are polynomials.

        Principal parts come from the Laurent expansions at each pole.  The
        product of the two pole sums contributes nothing to the tail: both sums
        tend to 0 away from J, so their product minus its principal parts is an
        entire function tending to 0, hence 0.  Tail-times-pole products are
        expanded exactly.
        """
        if isinstance(other, CinfNum):
            return self.scale(other)
        if isinstance(other, TateSeries):
            other = MeroJRep.from_tail(other, self.nparts, self.guard)
        if not (self.tail.is_polynomial() and other.tail.is_polynomial()):
            raise PrecisionError("MeroJRep products need polynomial tails")
        params = self.params
        n, _ = self._align(other)
        df, dg = self.order_cap, other.order_cap
        zero = CinfNum.zero(params)
        parts = []
        for i in range(n):
            fpp = [self._part(i, k) for k in range(1, df + 1)]
            gpp = [other._part(i, k) for k in range(1, dg + 1)]
            freg = self.regular_taylor(i, dg)
            greg = other.regular_taylor(i, df)
            out = [zero] * (df + dg)
            # s^-a * s^-b
            for a, x in enumerate(fpp, start=1):
                if x.is_zero() and x.is_exact():
                    continue
                for b, y in enumerate(gpp, start=1):
                    out[a + b - 1] = out[a + b - 1] + x * y
            # s^-a * s^m (m < a) and symmetric
            for pp, reg in ((fpp, greg), (gpp, freg)):
                for a, x in enumerate(pp, start=1):
                    if x.is_zero() and x.is_exact():
                        continue
                    for m in range(min(a, len(reg))):
                        out[a - m - 1] = out[a - m - 1] + x * reg[m]
            parts.append(out)
        tail = self.tail * other.tail
        tail = tail + _poly_times_poles(self.tail, other, n) + _poly_times_poles(other.tail, self, n)
        sf, sg = self.sup_val(), other.sup_val()
        bound = min(self.tail_bound + sg, other.tail_bound + sf)
        return MeroJRep(params, parts, tail, bound, min(self.guard, other.guard))

    def mul_t(self):
        return self * TateSeries.monomial(self.params, 1)

    # -- Frobenius twist and hyperderivatives ------------------------------------
    def twist(self, i=1, threshold=None):
        """Apply ``tau^i``: the part at index ``j`` moves to ``j + i`` with q^i-powered
        coefficients; parts leaving the tracked range go into ``tail_bound``."""
        params = self.params
        threshold = params.P // 2 if threshold is None else threshold
        Q = params.q ** i
        n, d = self.nparts, self.order_cap
        zero = CinfNum.zero(params)
        parts = [[zero] * d for _ in range(min(i, n))]
        dropped = INF
        for j, part in enumerate(self.parts):
            tw = [c.qpow(i) for c in part]
            if j + i < n:
                parts.append(tw)
            else:
                for k, c in enumerate(tw, start=1):
                    if not c.is_zero():
                        v = c.val - k * pole_val(params, j + i)
                        if v < threshold:
                            raise HorizonError(
                                f"principal part at index {j + i} has size {v} < {threshold}; "
                                "increase the horizon or guard band")
                        dropped = min(dropped, v)
        bound = min(self.tail_bound * Q if self.tail_bound != INF else INF, dropped)
        return MeroJRep(params, parts, self.tail.twist(i), bound, self.guard)

    def hyperderivative(self, j):
        """``d^(j)/dt``: ``c (t-a)^(-k) -> C(-k, j) c (t-a)^(-k-j)``."""
        params = self.params
        p = params.p
        d = self.order_cap
        zero = CinfNum.zero(params)
        parts = []
        for part in self.parts:
            new = [zero] * (d + j)
            for k, c in enumerate(part, start=1):
                new[k + j - 1] = _times_int(c, binom_mod(-k, j, p))
            parts.append(new)
        return MeroJRep(params, parts, self.tail.hyperderivative(j), self.tail_bound, self.guard)

    def truncate_order(self, d):
        """Drop the storage of pole orders above ``d`` (they must be zero)."""
        for i in range(self.nparts):
            if self.pole_order(i) > d:
                raise ValueError(f"pole of order {self.pole_order(i)} > {d} at index {i}")
        parts = [p[:d] for p in self.parts]
        return MeroJRep(self.params, parts, self.tail, self.tail_bound, self.guard)

    # -- views -----------------------------------------------------------------
    def residue(self):
        return scalar_residue(self)

    def expand_on_disk(self, D):
        return expand_on_disk(self, D)

    def to_json(self):
        return mero_to_json(self)

    def __repr__(self):
        return f"MeroJRep(H={self.H}, d={self.order_cap}, size={self.size()})"


def _poly_times_poles(poly, f, n):
    """Regular part of ``poly * (principal parts of f)`` as a polynomial."""
    params = f.params
    p = params.p
    out = TateSeries.zero(params)
    if not poly.coeffs or all(c.is_zero() for c in poly.coeffs):
        return out
    for j in range(min(n, f.nparts)):
        part = f.parts[j]
        if all(c.is_zero() and c.is_exact() for c in part):
            continue
        a = pole(params, j)
        tay = poly.taylor_at(a, len(poly.coeffs))
        # (t - a)^e expanded in powers of t
        for k, c in enumerate(part, start=1):
            if c.is_zero() and c.is_exact():
                continue
            for m in range(k, len(tay)):
                coef = tay[m] * c
                e = m - k
                terms = []
                for l in range(e + 1):
                    b = binom_mod(e, l, p)
                    if b:
                        terms.append(_times_int(coef * (-a) ** (e - l), b))
                    else:
                        terms.append(CinfNum.zero(params))
                out = out + TateSeries(params, terms)
    return out


def twist(f, i=1):
    return f.twist(i)


def twist_mero(g, i=1, threshold=None):
    return g.twist(i, threshold)


def hyperderivative(f, j):
    return f.hyperderivative(j)


def scalar_residue(g):
    """Coefficient of ``(t - theta)^(-1)``."""
    if not g.parts or not g.parts[0]:
        return CinfNum.zero(g.params)
    return g.parts[0][0]


def expand_on_disk(g, D):
    """Power-series expansion on the unit disk, truncated at degree ``D``.

    ``c (t-a)^(-k) = c (-1)^k sum_n C(n+k-1, k-1) a^(-k-n) t^n``; the returned
    series records in ``err`` a bound for everything dropped.
    """
    params = g.params
    p = params.p
    zero = CinfNum.zero(params)
    coeffs = [g.tail.coeff(n) if n <= g.tail.degree else zero for n in range(D + 1)]
    err = min([g.tail.err, g.tail_bound] + [c.val for c in g.tail.coeffs[D + 1:]])
    for i, part in enumerate(g.parts):
        w = -pole_val(params, i)
        for k, c in enumerate(part, start=1):
            if c.is_zero():
                if not c.is_exact():
                    err = min(err, c.val + k * w)
                continue
            base = c if k % 2 == 0 else -c
            for n in range(D + 1):
                b = binom_mod(n + k - 1, k - 1, p)
                if b:
                    coeffs[n] = coeffs[n] + _times_int(base.shift(w * (k + n)), b)
            err = min(err, c.val + w * (k + D + 1))
    return TateSeries(params, coeffs, err)


def holomorphy_check(g, n, radii=None, window=0.25, max_radius_log=None):
    """Heuristic test that ``g`` has poles of order ``<= n`` on J and nothing else.

    The tail must be a polynomial, or have coefficients whose valuations in the
    last ``window`` fraction exceed ``deg * rho_log`` at the largest sampled
    radius (so the series still converges there).  Radii default to
    ``rho_log in {0, 1, ..., q^I}``.
    """
    params = g.params
    if any(g.pole_order(i) > n for i in range(g.nparts)):
        return False
    if max_radius_log is None:
        max_radius_log = params.q ** max(g.horizon, 0)
    if radii is None:
        radii = range(0, max_radius_log + 1)
    tail = g.tail
    for rho in radii:
        gn = gauss_norm(tail, rho)
        if gn == math.inf:
            return False
    if tail.is_polynomial():
        return True
    coeffs = tail.coeffs
    start = int(len(coeffs) * (1 - window))
    rho_max = Fraction(max(radii))
    for deg in range(start, len(coeffs)):
        c = coeffs[deg]
        if c.is_zero():
            continue
        if Fraction(c.val, params.r) <= deg * rho_max:
            return False
    return Fraction(tail.err, params.r) > len(coeffs) * rho_max if tail.err != INF else True


def series_to_json(f):
    return {
        "coeffs": [cinf_to_json(c) for c in f.coeffs],
        "err": None if f.err == INF else f.err,
        "rho_log": str(f.rho_log),
    }


def mero_to_json(g):
    return {
        "parts": [[cinf_to_json(c) for c in part] for part in g.parts],
        "tail": series_to_json(g.tail),
        "tail_bound": None if g.tail_bound == INF else g.tail_bound,
        "guard": g.guard,
    }


def series_from_json(params, obj):
    from .base_arith.render import cinf_from_json

    err = INF if obj.get("err") is None else obj["err"]
    return TateSeries(params, [cinf_from_json(params, c) for c in obj["coeffs"]], err, Fraction(obj.get("rho_log", "0")))


def mero_from_json(params, obj):
    from .base_arith.render import cinf_from_json

    parts = [[cinf_from_json(params, c) for c in part] for part in obj["parts"]]
    bound = INF if obj.get("tail_bound") is None else obj["tail_bound"]
    return MeroJRep(params, parts, series_from_json(params, obj["tail"]), bound, obj.get("guard", 2))
