"""Finite fields F_{p^k} and the parameter record for the C_inf model.

Elements of F_{p^k} are handled in two encodings:

* as coefficient vectors ``(c_0, ..., c_{k-1})`` over F_p in the basis
  ``1, z, ..., z^{k-1}`` where ``z`` is a root of a fixed monic irreducible
  polynomial (this is what digit arrays of series store), and
* as integers ``sum c_j p^j`` (used for table lookups and for the total order
  that makes root selection deterministic).
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

import numpy as np


def _is_prime(n):
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n ** 0.5) + 1))


def _polymulmod_p(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return out


def _polymod_p(a, f, p):
    """Remainder of ``a`` modulo the monic polynomial ``f`` (low-to-high lists)."""
    a = list(a)
    k = len(f) - 1
    for deg in range(len(a) - 1, k - 1, -1):
        c = a[deg] % p
        if c:
            for j in range(k + 1):
                a[deg - k + j] = (a[deg - k + j] - c * f[j]) % p
    return [x % p for x in a[:k]] + [0] * max(0, k - len(a))


def _is_irreducible(f, p):
    k = len(f) - 1
    if k == 1:
        return True
    # trial division by every monic polynomial of degree <= k/2
    for d in range(1, k // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            g = list(tail) + [1]
            if not any(_polymod_p(f, g, p)):
                return False
    return True


@functools.lru_cache(maxsize=None)
def conway_like_modulus(p, k):
    """Smallest monic irreducible polynomial of degree ``k`` over F_p.

    "Smallest" is with respect to the integer encoding of the lower
    coefficients, so the choice is reproducible.
    """
    for tail in itertools.product(range(p), repeat=k):
        f = list(reversed(tail)) + [1]
        if f[0] == 0 and k > 1:
            continue
        if _is_irreducible(f, p):
            return tuple(f)
    raise ValueError(f"no irreducible polynomial of degree {k} over F_{p}")


class FiniteField:
    """The field F_{p^k} with table-driven scalar arithmetic."""

    def __init__(self, p, k):
        if not _is_prime(p):
            raise ValueError(f"p={p} is not prime")
        self.p = p
        self.k = k
        self.order = p ** k
        self.modulus = conway_like_modulus(p, k)
        self._mod_arr = np.array(self.modulus[:k], dtype=np.int64)
        self._build_tables()

    def _build_tables(self):
        p, k, Q = self.p, self.k, self.order
        vecs = [self.int_to_vec(i) for i in range(Q)]
        # find a generator of the multiplicative group by brute force
        for g in range(1, Q):
            seen = {}
            x = [1] + [0] * (k - 1)
            for e in range(Q - 1):
                idx = self.vec_to_int(x)
                if idx in seen:
                    break
                seen[idx] = e
                x = _polymod_p(_polymulmod_p(x, vecs[g], p), self.modulus, p)
            if len(seen) == Q - 1:
                break
        self._log = np.zeros(Q, dtype=np.int64)
        self._exp = np.zeros(2 * (Q - 1), dtype=np.int64)
        for idx, e in seen.items():
            self._log[idx] = e
            self._exp[e] = idx
            self._exp[e + Q - 1] = idx
        self.generator = g

    # -- encodings -------------------------------------------------------
    def int_to_vec(self, n):
        out = []
        for _ in range(self.k):
            n, c = divmod(n, self.p)
            out.append(c)
        return out

    def vec_to_int(self, v):
        n = 0
        for c in reversed(list(v)):
            n = n * self.p + int(c) % self.p
        return n

    # -- scalar arithmetic on integer codes ---------------------------------
    def add(self, a, b):
        va, vb = self.int_to_vec(a), self.int_to_vec(b)
        return self.vec_to_int([(x + y) % self.p for x, y in zip(va, vb)])

    def neg(self, a):
        return self.vec_to_int([(-x) % self.p for x in self.int_to_vec(a)])

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return int(self._exp[self._log[a] + self._log[b]])

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in finite field")
        return int(self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)])

    def pow(self, a, n):
        if a == 0:
            return 0 if n > 0 else 1
        return int(self._exp[(self._log[a] * n) % (self.order - 1)])

    def elements(self):
        """All elements in the canonical total order (by integer code)."""
        return range(self.order)

    def roots(self, a, n):
        """All ``n``-th roots of ``a``, in increasing code order."""
        return [x for x in self.elements() if self.pow(x, n) == a]

    def frobenius_matrix(self, power):
        """Matrix of ``x -> x^power`` on coefficient vectors (columns = images of z^j).

        Only meaningful for ``power`` a power of p, where the map is F_p-linear.
        """
        cols = []
        for j in range(self.k):
            e = [0] * self.k
            e[j] = 1
            cols.append(self.int_to_vec(self.pow(self.vec_to_int(e), power)))
        return np.array(cols, dtype=np.int64).T

    def reduce_rows(self, arr):
        """Reduce an (n, 2k-1) array of polynomial rows to (n, k) field vectors."""
        p, k = self.p, self.k
        arr = arr % p
        for deg in range(arr.shape[1] - 1, k - 1, -1):
            c = arr[:, deg]
            if c.any():
                arr[:, deg - k:deg] -= np.outer(c, self._mod_arr)
                arr[:, deg - k:deg] %= p
        return arr[:, :k] % p

    def format(self, vec, var="z"):
        terms = []
        for j, c in enumerate(vec):
            c = int(c)
            if not c:
                continue
            if j == 0:
                terms.append(str(c))
            else:
                mon = var if j == 1 else f"{var}^{j}"
                terms.append(mon if c == 1 else f"{c}*{mon}")
        return " + ".join(terms) if terms else "0"

    def parse(self, text, var="z"):
        vec = [0] * self.k
        text = text.replace(" ", "")
        if text == "0":
            return vec
        for term in text.split("+"):
            coeff, _, mon = term.partition("*") if "*" in term else (None, None, term)
            if coeff is None:
                if var in mon:
                    coeff = "1"
                else:
                    coeff, mon = mon, ""
            if mon == "":
                j = 0
            elif mon == var:
                j = 1
            else:
                j = int(mon.split("^")[1])
            vec[j] = (vec[j] + int(coeff)) % self.p
        return vec


@functools.lru_cache(maxsize=None)
def finite_field(p, k):
    return FiniteField(p, k)


@dataclass(frozen=True)
class FieldParams:
    """Parameters of the truncated model of C_inf.

    ``q = p**e``; digits live in F_{q^m}; the value group is (1/r)Z, i.e. the
    uniformizer ``pi`` satisfies ``pi**r == 1/theta``; ``P`` is the number of
    significant ``pi``-digits carried by any inexact number.
    """

    p: int
    e: int = 1
    m: int = 0
    r: int = 0
    P: int = 200
    fld: FiniteField = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"p={self.p} is not prime")
        if self.e < 1:
            raise ValueError("e must be >= 1")
        q = self.p ** self.e
        if self.m == 0:
            object.__setattr__(self, "m", 1 if self.p == 2 else 2)
        if self.r == 0:
            object.__setattr__(self, "r", q - 1)
        if self.m < 1 or self.r < 1 or self.P < 1:
            raise ValueError("m, r and P must be positive")
        object.__setattr__(self, "fld", finite_field(self.p, self.e * self.m))

    @classmethod
    def for_q(cls, q, **kw):
        for p in range(2, q + 1):
            if q % p == 0:
                break
        e = 0
        n = q
        while n % p == 0:
            n //= p
            e += 1
        if n != 1:
            raise ValueError(f"q={q} is not a prime power")
        return cls(p=p, e=e, **kw)

    @property
    def q(self):
        return self.p ** self.e

    @property
    def k(self):
        """Degree of the digit field over F_p."""
        return self.e * self.m

    def fq_elements(self):
        """Codes of the elements of the subfield F_q, in increasing order."""
        f = self.fld
        return [x for x in f.elements() if f.pow(x, self.q) == x]

    def zeta(self):
        """The least element (by code) with zeta^(q-1) == -1."""
        f = self.fld
        minus_one = f.neg(1)
        roots = f.roots(minus_one, self.q - 1)
        if not roots:
            raise ValueError(f"F_{{{self.q}^{self.m}}} has no (q-1)th root of -1; increase m")
        return roots[0]
