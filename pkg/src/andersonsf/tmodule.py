"""Anderson F_q[t]-modules in fixed coordinates.

A module is stored through the image of ``t`` only:
``phi(t) = A_0 + A_1 tau + ... + A_s tau^s`` with d x d matrices over C_inf.
Matrices are plain lists of lists of :class:`CinfNum`.
"""

from __future__ import annotations

from .base_arith import INF, CinfNum, PrecisionError
from .base_arith.render import cinf_from_json, cinf_to_json
from .tate_mero import MeroJRep, TateSeries


class NilpotencyError(ValueError):
    """``A_0 - theta`` is not nilpotent."""


# -- matrix helpers --------------------------------------------------------------
def zeros(params, n, m=None):
    m = n if m is None else m
    return [[CinfNum.zero(params) for _ in range(m)] for _ in range(n)]


def identity(params, n):
    out = zeros(params, n)
    for i in range(n):
        out[i][i] = CinfNum.one(params)
    return out


def mat_add(A, B):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A, B):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_neg(A):
    return [[-x for x in row] for row in A]


def mat_scale(c, A):
    return [[c * x for x in row] for row in A]


def mat_mul(A, B):
    params = A[0][0].params
    n, k, m = len(A), len(B), len(B[0])
    out = zeros(params, n, m)
    for i in range(n):
        for l in range(k):
            a = A[i][l]
            if a.is_zero() and a.is_exact():
                continue
            for j in range(m):
                out[i][j] = out[i][j] + a * B[l][j]
    return out


def mat_vec(A, v):
    out = [row_dot(row, v) for row in A]
    return [_zero_like(v[0]) if x is None else x for x in out]


def row_dot(row, v):
    total = None
    for a, x in zip(row, v):
        if a.is_zero() and a.is_exact():
            continue
        term = x.scale(a) if not isinstance(x, CinfNum) else a * x
        total = term if total is None else total + term
    return total


def mat_qpow(A, i=1):
    return [[x.qpow(i) for x in row] for row in A]


def mat_val(A):
    """Smallest valuation among the entries (``inf`` for an exact zero matrix)."""
    return min(x.val for row in A for x in row)


def mat_is_zero(A):
    return all(x.is_zero() for row in A for x in row)


def mat_is_exact_zero(A):
    return all(x.is_zero() and x.is_exact() for row in A for x in row)


def mat_inv(A):
    """Inverse by Gauss-Jordan elimination, pivoting on the smallest valuation."""
    params = A[0][0].params
    n = len(A)
    M = [list(row) + list(e) for row, e in zip(A, identity(params, n))]
    for col in range(n):
        piv = min(range(col, n), key=lambda r: M[r][col].val)
        if M[piv][col].is_zero():
            raise PrecisionError("matrix is singular at the available precision")
        M[col], M[piv] = M[piv], M[col]
        inv = M[col][col].inv()
        M[col] = [inv * x for x in M[col]]
        for r in range(n):
            if r != col and not M[r][col].is_zero():
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [row[n:] for row in M]


def mat_equal(A, B, threshold):
    return all((x - y).val >= threshold for ra, rb in zip(A, B) for x, y in zip(ra, rb))


def mat_from_codes(params, rows):
    """Matrix of F_{q^m} codes, or of nested CinfNum JSON renderings."""
    out = []
    for row in rows:
        out.append([x if isinstance(x, CinfNum) else
                    CinfNum.scalar(params, x) if isinstance(x, int) else
                    cinf_from_json(params, x) for x in row])
    return out


def theta_poly_matrix(A, poly):
    """``sum poly[n] A^n`` for an F_q[t]-polynomial given by codes (low degree first)."""
    params = A[0][0].params
    d = len(A)
    out = zeros(params, d)
    power = identity(params, d)
    for n, c in enumerate(poly):
        if c:
            out = mat_add(out, mat_scale(CinfNum.scalar(params, c), power))
        if n + 1 < len(poly):
            power = mat_mul(power, A)
    return out


# -- tau-polynomials with matrix coefficients -------------------------------------------
class TauMatrixPoly:
    """``A_0 + A_1 tau + ... + A_s tau^s`` acting on d-vectors."""

    def __init__(self, mats):
        mats = [list(map(list, A)) for A in mats]
        while len(mats) > 1 and mat_is_exact_zero(mats[-1]):
            mats.pop()
        self.mats = mats
        self.d = len(mats[0])
        self.params = mats[0][0][0].params

    @property
    def degree(self):
        return len(self.mats) - 1

    def __getitem__(self, i):
        if i < len(self.mats):
            return self.mats[i]
        return zeros(self.params, self.d)

    def __add__(self, other):
        n = max(len(self.mats), len(other.mats))
        return TauMatrixPoly([mat_add(self[i], other[i]) for i in range(n)])

    def __sub__(self, other):
        n = max(len(self.mats), len(other.mats))
        return TauMatrixPoly([mat_sub(self[i], other[i]) for i in range(n)])

    def compose(self, other):
        """Operator composition ``self o other``: ``sum A_i B_j^(q^i) tau^(i+j)``."""
        out = [zeros(self.params, self.d, other.d) for _ in range(self.degree + other.degree + 1)]
        for i, A in enumerate(self.mats):
            if mat_is_exact_zero(A):
                continue
            for j, B in enumerate(other.mats):
                out[i + j] = mat_add(out[i + j], mat_mul(A, mat_qpow(B, i)))
        return TauMatrixPoly(out)

    __matmul__ = compose

    def scale_left(self, c):
        return TauMatrixPoly([mat_scale(c, A) for A in self.mats])

    def truncate(self, s):
        return TauMatrixPoly(self.mats[: s + 1])

    def apply(self, w):
        """``sum_i A_i tau^i(w)`` for a d-vector of CinfNum, TateSeries or MeroJRep."""
        if len(w) != len(self.mats[0][0]):
            raise ValueError(f"vector of length {len(w)} for a {self.d}-dimensional operator")
        out = [None] * self.d
        for i, A in enumerate(self.mats):
            if mat_is_exact_zero(A):
                continue
            tw = [_twist(x, i) for x in w]
            v = mat_vec(A, tw)
            out = [y if x is None else x + y for x, y in zip(out, v)]
        return [_zero_like(w[0]) if x is None else x for x in out]

    def equals(self, other, threshold):
        n = max(len(self.mats), len(other.mats))
        return all(mat_equal(self[i], other[i], threshold) for i in range(n))

    def to_json(self):
        return [[[cinf_to_json(x) for x in row] for row in A] for A in self.mats]

    def __repr__(self):
        return f"TauMatrixPoly(d={self.d}, s={self.degree})"


def _twist(x, i):
    if i == 0:
        return x
    if isinstance(x, CinfNum):
        return x.qpow(i)
    return x.twist(i)


def _zero_like(x):
    if isinstance(x, CinfNum):
        return CinfNum.zero(x.params)
    if isinstance(x, TateSeries):
        return TateSeries.zero(x.params)
    return MeroJRep.zero(x.params, x.nparts, guard=x.guard)


# -- modules --------------------------------------------------------------------------
class TModule:
    """An Anderson F_q[t]-module given by ``phi(t)`` in fixed coordinates."""

    def __init__(self, name, phi_t, provenance=None, validate=True):
        self.name = name
        self.phi_t = phi_t
        self.provenance = provenance if provenance is not None else {"type": "user_defined"}
        if validate:
            nilpotency_order(self)

    @property
    def params(self):
        return self.phi_t.params

    @property
    def d(self):
        return self.phi_t.d

    @property
    def A0(self):
        return self.phi_t[0]

    @property
    def N(self):
        """Nilpotent part ``A_0 - theta``."""
        th = CinfNum.theta(self.params)
        return mat_sub(self.A0, mat_scale(th, identity(self.params, self.d)))

    def d_phi(self, poly):
        """Tangent action ``a(A_0)`` of ``a in F_q[t]`` (codes, low degree first)."""
        return theta_poly_matrix(self.A0, poly)

    def phi(self, poly):
        """``phi(a)`` by Horner's rule in the tau-ring."""
        params = self.params
        out = TauMatrixPoly([zeros(params, self.d)])
        for c in reversed(list(poly)):
            out = self.phi_t.compose(out)
            out = out + TauMatrixPoly([mat_scale(CinfNum.scalar(params, c), identity(params, self.d))])
        return out

    def apply_phi_t(self, w):
        return self.phi_t.apply(w)

    def __repr__(self):
        return f"TModule({self.name}, d={self.d}, s={self.phi_t.degree})"


def nilpotency_order(E):
    """Smallest ``k`` with ``N^k == 0`` exactly; raises if ``N^d != 0``."""
    N = E.N
    d = E.d
    power = identity(E.params, d)
    for k in range(1, d + 1):
        power = mat_mul(power, N)
        if mat_is_zero(power):
            return k
    raise NilpotencyError(f"(A_0 - theta)^{d} is nonzero (valuation {mat_val(power)}); "
                          f"A_0 - theta must be nilpotent")


def apply_phi_t(E, w):
    return E.apply_phi_t(w)


def carlitz(params):
    th = CinfNum.theta(params)
    one = CinfNum.one(params)
    return TModule("carlitz", TauMatrixPoly([[[th]], [[one]]]), {"type": "carlitz"})


def carlitz_tensor(params, n):
    """``C^(tensor n)``: theta on the diagonal, 1s above it, tau in the corner."""
    if n < 1:
        raise ValueError("tensor power must be >= 1")
    th = CinfNum.theta(params)
    one = CinfNum.one(params)
    A0 = zeros(params, n)
    A1 = zeros(params, n)
    for i in range(n):
        A0[i][i] = th
        if i + 1 < n:
            A0[i][i + 1] = one
    A1[n - 1][0] = one
    name = "carlitz" if n == 1 else f"carlitz_tensor:{n}"
    return TModule(name, TauMatrixPoly([A0, A1]), {"type": "carlitz_tensor", "n": n})


def prolongation(params, k):
    """k-th prolongation of the Carlitz module.

    On vectors ``(d^(k) f, ..., d^(1) f, f)`` the rule
    ``t d^(l)(f) = d^(l)(t f) - d^(l-1)(f)`` gives ``A_0 = theta - (superdiagonal 1s)``
    and ``A_1 = Id``.
    """
    if k < 0:
        raise ValueError("prolongation order must be >= 0")
    th = CinfNum.theta(params)
    one = CinfNum.one(params)
    n = k + 1
    A0 = zeros(params, n)
    for i in range(n):
        A0[i][i] = th
        if i + 1 < n:
            A0[i][i + 1] = -one
    name = "carlitz" if k == 0 else f"prolongation:{k}"
    return TModule(name, TauMatrixPoly([A0, identity(params, n)]), {"type": "prolongation", "k": k})


def direct_sum(*mods):
    if not mods:
        raise ValueError("direct_sum of nothing")
    params = mods[0].params
    d = sum(E.d for E in mods)
    s = max(E.phi_t.degree for E in mods)
    mats = [zeros(params, d) for _ in range(s + 1)]
    off = 0
    for E in mods:
        for i in range(E.phi_t.degree + 1):
            A = E.phi_t[i]
            for r in range(E.d):
                for c in range(E.d):
                    mats[i][off + r][off + c] = A[r][c]
        off += E.d
    name = "+".join(E.name for E in mods)
    return TModule(name, TauMatrixPoly(mats), {"type": "direct_sum", "parts": [E.provenance for E in mods]})


def user_defined(params, mats, name="user_defined"):
    """Module from explicit matrices (codes, CinfNum, or CinfNum JSON renderings)."""
    mats = [mat_from_codes(params, A) for A in mats]
    return TModule(name, TauMatrixPoly(mats), {"type": "user_defined"})


def tau_inverse(M, degree):
    """Inverse of ``M = M_0 + M_1 tau + ...`` when ``M_0^-1 (M - M_0)`` is nilpotent
    in the tau-ring; the Neumann series is cut at tau-degree ``degree`` and the
    result is checked."""
    params = M.params
    M0inv = mat_inv(M[0])
    # M = M_0 (1 + X), X = M_0^-1 (M - M_0)
    X = TauMatrixPoly([zeros(params, M.d)] + [mat_mul(M0inv, M[i]) for i in range(1, M.degree + 1)])
    one = TauMatrixPoly([identity(params, M.d)])
    inv = one
    term = one
    for _ in range(degree):
        term = X.compose(term).truncate(degree)
        term = term.scale_left(-CinfNum.one(params))
        inv = inv + term
    inv = inv.compose(TauMatrixPoly([M0inv]))
    return inv


def conjugate(E, M, degree=None, threshold=None):
    """``E' = M o phi o M^-1`` for a tau-matrix ``M`` with nilpotent higher part."""
    params = E.params
    threshold = params.P // 2 if threshold is None else threshold
    degree = (M.degree + 1) * E.d * max(E.phi_t.degree, 1) + M.degree if degree is None else degree
    Minv = tau_inverse(M, degree)
    check = M.compose(Minv)
    one = TauMatrixPoly([identity(params, E.d)])
    if not check.equals(one, threshold):
        raise PrecisionError("tau-matrix is not invertible with a nilpotent higher part")
    phi = M.compose(E.phi_t).compose(Minv)
    # drop high tau-degrees that are exactly zero or below the threshold
    mats = list(phi.mats)
    while len(mats) > 1 and all(x.is_zero() or x.val >= threshold for row in mats[-1] for x in row):
        mats.pop()
    return TModule(f"{E.name}^M", TauMatrixPoly(mats), {"type": "conjugate", "of": E.provenance})


def module_from_descriptor(params, desc):
    """Build a module from ``"carlitz"``, ``"carlitz_tensor:3"``, ``"prolongation:2"``,
    ``"direct_sum:carlitz,carlitz"`` or a JSON-style dict."""
    if isinstance(desc, str):
        kind, _, arg = desc.partition(":")
        if kind == "carlitz":
            return carlitz(params)
        if kind == "carlitz_tensor":
            return carlitz_tensor(params, int(arg or 1))
        if kind == "prolongation":
            return prolongation(params, int(arg or 0))
        if kind == "direct_sum":
            return direct_sum(*[module_from_descriptor(params, s) for s in _split_top(arg)])
        raise ValueError(f"unknown module type {kind!r}")
    kind = desc.get("type")
    if kind == "carlitz":
        return carlitz(params)
    if kind == "carlitz_tensor":
        return carlitz_tensor(params, int(desc.get("n", 1)))
    if kind == "prolongation":
        return prolongation(params, int(desc.get("k", 0)))
    if kind == "direct_sum":
        return direct_sum(*[module_from_descriptor(params, s) for s in desc["parts"]])
    if kind == "user_defined":
        return user_defined(params, desc["mats"])
    raise ValueError(f"unknown module type {kind!r}")


def _split_top(text):
    # split "a,b" but keep "direct_sum:x,y" nesting out of scope: use ';' for nested sums
    sep = ";" if ";" in text else ","
    return [s for s in text.split(sep) if s]
