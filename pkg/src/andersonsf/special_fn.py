"""Special functions of Anderson modules: construction, checks, residues, filtration.

A special function of ``E`` is a d-vector ``w`` of functions with poles on J
such that ``phi(t) w = t w``.  Vectors are lists of :class:`MeroJRep`.
Residuals are measured relative to the size of the input: a residual
valuation of ``n`` means ``n`` pi-digits of agreement.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .base_arith import INF, CinfNum, PrecisionError, lambda_theta
from .exp_lattice import exp_coeffs, lattice_member
from .tate_mero import (HorizonError, MeroJRep, TateSeries, binom_mod, holomorphy_check, pole,
                        pole_val)
from .tmodule import (TauMatrixPoly, conjugate, mat_mul, mat_qpow, mat_sub, mat_vec, theta_poly_matrix,
                      identity, zeros, carlitz)

DEFAULT_HORIZON = 6
DEFAULT_GUARD = 2


@dataclass
class SpecialFunction:
    E: object
    comps: list
    source: dict = field(default_factory=dict)

    @property
    def params(self):
        return self.E.params

    def residue(self):
        return residue_at_j(self)

    def size(self):
        return vector_size(self.comps)

    def max_pole_order(self):
        return max(c.max_pole_order() for c in self.comps)

    def __add__(self, other):
        return SpecialFunction(self.E, [a + b for a, b in zip(self.comps, other.comps)])

    def __sub__(self, other):
        return SpecialFunction(self.E, [a - b for a, b in zip(self.comps, other.comps)])

    def mul_poly(self, poly):
        """Multiply by ``a(t)``, ``a`` in F_q[t] given by codes."""
        a = TateSeries.from_fq_poly(self.params, poly)
        return SpecialFunction(self.E, [c * a for c in self.comps])


@dataclass
class Residual:
    """Outcome of a numerical identity check."""

    name: str
    residual: float
    threshold: float
    detail: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.residual >= self.threshold

    def as_dict(self):
        return {"name": self.name, "residual": _num(self.residual), "threshold": self.threshold,
                "passed": self.passed, **self.detail}


def _num(x):
    return None if x == INF else x


def vector_size(comps):
    return min(c.size() for c in comps)


def relative_residual(diff, ref):
    """``size(diff) - size(ref)``; ``inf`` if ``diff`` is zero at precision."""
    s = vector_size(diff) if not isinstance(diff[0], CinfNum) else min(x.val for x in diff)
    r = vector_size(ref) if not isinstance(ref[0], CinfNum) else min(x.val for x in ref)
    if s == INF:
        return INF
    if r == INF:
        return -INF if s != INF else INF
    return s - r


def default_threshold(params):
    return params.P // 2


# -- the Anderson-Thakur function ------------------------------------------------------
def anderson_thakur_omega(params, horizon=DEFAULT_HORIZON, guard=DEFAULT_GUARD, terms=None):
    """``lambda_theta prod_{i>=0} (1 - t/theta^(q^i))^(-1)`` as principal parts.

    The residue at ``theta^(q^i)`` is ``-lambda a_i prod_{j != i} (1 - a_i/a_j)^(-1)``
    with ``a_j = theta^(q^j)``; factors with ``j > terms`` are dropped, and each
    residue keeps only the digits that truncation leaves correct.
    """
    lam = lambda_theta(params)
    H = horizon + guard
    q, r = params.q, params.r
    # every tracked pole needs its own factor, so ``terms`` is raised to H + 1 at least
    terms = max(terms or 0, H + 1)
    while r * (q ** (terms + 1) - q ** (H + 1)) < params.P:
        terms += 1
    one = CinfNum.one(params)
    coeffs = []
    for i in range(H + 2):
        a = pole(params, i)
        c = -(lam * a)
        for j in range(terms + 1):
            if j != i:
                c = c * (one - a * pole(params, j).inv()).inv()
        trunc = r * (q ** (terms + 1) - q ** i)
        coeffs.append(c.with_rel_prec(trunc))
    parts = [[c] for c in coeffs[: H + 1]]
    bound = coeffs[H + 1].val - pole_val(params, H + 1)
    w = MeroJRep(params, parts, TateSeries.zero(params), bound, guard)
    return SpecialFunction(carlitz(params), [w], {"kind": "omega"})


# -- checks ---------------------------------------------------------------------------------
def t_times(comps):
    t = TateSeries.monomial(comps[0].params, 1)
    return [c * t for c in comps]


def sf_residual(E, comps):
    """``phi(t) w - t w``."""
    lhs = E.apply_phi_t(comps)
    rhs = t_times(comps)
    return [a - b for a, b in zip(lhs, rhs)]


def sf_check(E, w, threshold=None):
    """Relative size of ``phi(t) w - t w`` against ``w``; passes above ``threshold``."""
    params = E.params
    threshold = default_threshold(params) if threshold is None else threshold
    comps = w.comps if isinstance(w, SpecialFunction) else w
    try:
        res = sf_residual(E, comps)
    except HorizonError as exc:
        return Residual("sf_check", -INF, threshold, {"error": str(exc)})
    size = vector_size(comps)
    abs_res = vector_size(res)
    if all(c.is_zero() for c in res):
        rel = INF
    elif size == INF:
        rel = abs_res
    else:
        rel = abs_res - size
    return Residual("sf_check", rel, threshold,
                    {"size": _num(size), "residual_abs": _num(abs_res), "max_pole_order": max(c.max_pole_order() for c in comps)})


def residue_at_j(w):
    """Componentwise residue at ``t = theta`` (the residue of ``w dt``)."""
    comps = w.comps if isinstance(w, SpecialFunction) else w
    return [c.residue() for c in comps]


def is_zero_vector(comps, threshold):
    return all(c.size() >= threshold for c in comps)


# -- special functions from lattice vectors -------------------------------------------------
def _fq_poly(params, poly):
    return TateSeries.from_fq_poly(params, poly)


def divided_difference(u):
    """Coefficients ``D_k`` (as F_q-polynomials in T) of ``(u(t) - u(T))/(t - T) = sum_k t^k D_k(T)``."""
    n = len(u) - 1
    out = []
    for k in range(n):
        # (t^m - T^m)/(t - T) = sum_{k<m} t^k T^(m-1-k)
        Dk = [0] * n
        for m in range(k + 1, n + 1):
            if u[m]:
                Dk[m - 1 - k] = u[m]
        out.append(Dk)
    return out


def _poly_divmod(num, den):
    """Division of CinfNum polynomials (low degree first); ``den`` has a unit leading coefficient."""
    num = list(num)
    lead_inv = den[-1].inv()
    dq = len(num) - len(den) + 1
    if dq <= 0:
        return [], num
    quot = [None] * dq
    for s in range(dq - 1, -1, -1):
        c = num[s + len(den) - 1] * lead_inv
        quot[s] = c
        if not (c.is_zero() and c.is_exact()):
            for j, dj in enumerate(den):
                num[s + j] = num[s + j] - c * dj
    return quot, num[: len(den) - 1]


def _poly_mul(a, b, params):
    out = [CinfNum.zero(params) for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def _poly_pow(a, n, params):
    out = [CinfNum.one(params)]
    for _ in range(n):
        out = _poly_mul(out, a, params)
    return out


def sf_from_lattice(E, lam, u=(0, 1), ec=None, horizon=DEFAULT_HORIZON, guard=DEFAULT_GUARD,
                    threshold=None):
    """The special function attached to ``lam`` through the exponential of ``E``.

    With ``e_i`` the exponential coefficients, ``A_0 = dphi(t)``, ``n_u = u(A_0) - u(theta)``
    and ``D_k`` the divided difference of ``u``, this is

        sum_i sum_{j<d} [sum_k t^k e_i (n_u^j D_k(A_0) lam)^(q^i)] / (u(t) - u(a_i))^(j+1)

    with ``a_i = theta^(q^i)``.  Each inner rational function is reduced to its
    principal part at ``a_i``; the other roots of ``u(t) = u(a_i)`` must cancel,
    and the size of the leftover remainder is reported as ``cancellation``.
    ``u`` is an F_q[t]-polynomial given by codes, with nonzero derivative.
    """
    params = E.params
    threshold = default_threshold(params) if threshold is None else threshold
    u = list(u)
    while len(u) > 1 and not u[-1]:
        u.pop()
    if not separating(params, u):
        raise ValueError(f"u = {u} has zero derivative; it is not separating")
    if len(u) < 2:
        raise ValueError("u must be nonconstant")
    fld = params.fld
    d = E.d
    H = horizon + guard
    if ec is None or len(ec) < H + 2:
        ec = exp_coeffs(E, H + 2)
    A0 = E.A0
    th = CinfNum.theta(params)
    u_th = _fq_poly(params, u)(th)
    n_u = mat_sub(theta_poly_matrix(A0, u), [[u_th if i == j else CinfNum.zero(params) for j in range(d)] for i in range(d)])
    Dks = [theta_poly_matrix(A0, Dk) for Dk in divided_difference(u)]
    # vectors n_u^j D_k lam, independent of i
    base = []
    for j in range(d):
        row = []
        for Dk in Dks:
            v = mat_vec(Dk, lam)
            for _ in range(j):
                v = mat_vec(n_u, v)
            row.append(v)
        base.append(row)
    deg_u = len(u) - 1
    zero = CinfNum.zero(params)
    parts = [[[zero] * d for _ in range(H + 1)] for _ in range(d)]  # [comp][i][k-1]
    worst_cancel = INF
    bound = INF
    for i in range(H + 2):
        a = pole(params, i)
        ua = _fq_poly(params, u)(a)
        # u(t) - u(a) and W = (u(t) - u(a))/(t - a)
        du = [CinfNum.scalar(params, c) for c in u]
        du[0] = du[0] - ua
        W, rem = _poly_divmod(du, [-a, CinfNum.one(params)])
        ei = ec[i]
        # numerators N_ij(t) (vector valued, degree < deg u)
        Rs = [[zero] for _ in range(d)]
        for j in range(d):
            shift = _poly_pow(du, d - 1 - j, params)
            for comp in range(d):
                num = []
                for k in range(deg_u):
                    v = mat_vec(ei, [x.qpow(i) for x in base[j][k]])
                    num.append(v[comp])
                Rs[comp] = _poly_add(Rs[comp], _poly_mul(num, shift, params))
        Wd = _poly_pow(W, d, params)
        for comp in range(d):
            Q, rem = _poly_divmod(Rs[comp], Wd)
            for c in rem:
                if not c.is_zero():
                    worst_cancel = min(worst_cancel, c.val - d * deg_u * pole_val(params, i))
            Q = Q + [zero] * (d - len(Q))
            tay = TateSeries(params, Q[:d]).taylor_at(a, d)
            for m in range(d):
                c = tay[m]
                if i <= H:
                    parts[comp][i][d - m - 1] = c
                elif not c.is_zero():
                    bound = min(bound, c.val - (d - m) * pole_val(params, i))
    comps = [MeroJRep(params, parts[comp], TateSeries.zero(params), bound, guard) for comp in range(d)]
    size = vector_size(comps)
    cancel_rel = worst_cancel - size if worst_cancel != INF and size != INF else INF
    if cancel_rel < threshold:
        raise PrecisionError(f"poles off J did not cancel: remainder {cancel_rel} digits below the "
                             f"function (need {threshold})")
    return SpecialFunction(E, comps, {"lambda": lam, "u": u, "cancellation": cancel_rel})


def _poly_add(a, b):
    n = max(len(a), len(b))
    z = (a or b)[0].__class__.zero((a or b)[0].params)
    return [(a[i] if i < len(a) else z) + (b[i] if i < len(b) else z) for i in range(n)]


def separating(params, u):
    """``u' != 0`` in F_q[t]."""
    p = params.p
    return any(c and n % p for n, c in enumerate(u))


# -- bases of the example families -----------------------------------------------------------
def omega_power(omega, n):
    w = omega
    for _ in range(n - 1):
        w = w * omega
    return w


def tensor_generator(params, n, horizon=DEFAULT_HORIZON, guard=DEFAULT_GUARD, omega=None):
    """``((t - theta)^k omega^n)_{k < n}`` for ``C^(tensor n)``."""
    from .tmodule import carlitz_tensor

    om = omega or anderson_thakur_omega(params, horizon, guard).comps[0]
    E = carlitz_tensor(params, n)
    w = omega_power(om, n)
    lin = TateSeries(params, [-CinfNum.theta(params), CinfNum.one(params)])
    comps = [w]
    for _ in range(1, n):
        comps.append(comps[-1] * lin)
    return SpecialFunction(E, comps, {"kind": f"tensor_generator:{n}"})


def prolongation_basis(params, k, horizon=DEFAULT_HORIZON, guard=DEFAULT_GUARD, omega=None):
    """``omega_{j+1} = (d^(j) omega, ..., d^(1) omega, omega, 0, ..., 0)`` for ``j = 0..k``."""
    from .tmodule import prolongation

    om = omega or anderson_thakur_omega(params, horizon, guard).comps[0]
    E = prolongation(params, k)
    derivs = [om] + [om.hyperderivative(j) for j in range(1, k + 1)]
    zero = MeroJRep.zero(params, om.nparts, guard=om.guard)
    basis = []
    for j in range(k + 1):
        comps = [derivs[j - c] if c <= j else zero for c in range(k + 1)]
        basis.append(SpecialFunction(E, comps, {"kind": f"prolongation_basis:{j + 1}"}))
    return basis


def direct_sum_basis(E, blocks):
    """Basis of a direct sum from per-summand bases, padded with zeros."""
    params = E.params
    sizes = [len(b[0].comps) for b in blocks]
    ref = blocks[0][0].comps[0]
    zero = MeroJRep.zero(params, ref.nparts, guard=ref.guard)
    out = []
    off = 0
    for basis, n in zip(blocks, sizes):
        for w in basis:
            comps = [zero] * off + list(w.comps) + [zero] * (sum(sizes) - off - n)
            out.append(SpecialFunction(E, comps, {"kind": "direct_sum_basis"}))
        off += n
    return out


def random_multiples(E, lam, count, seed, max_deg=2):
    """``dphi(a) lam`` for random nonzero ``a`` in F_q[t] of degree <= max_deg."""
    params = E.params
    rng = random.Random(seed)
    fq = params.fq_elements()
    out = []
    while len(out) < count:
        deg = rng.randint(0, max_deg)
        poly = [rng.choice(fq) for _ in range(deg)] + [rng.choice(fq[1:])]
        out.append((poly, mat_vec(E.d_phi(poly), lam)))
    return out


# -- filtration --------------------------------------------------------------------------
def _fq_basis_codes(params):
    """An F_p-basis of F_q inside F_{q^m}, as codes."""
    fld = params.fld
    fq = params.fq_elements()
    basis, vecs = [], []
    for c in fq[1:]:
        v = np.array(fld.int_to_vec(c), dtype=np.int64)
        if _rank_mod_p(np.array(vecs + [v]), params.p) > len(vecs):
            basis.append(c)
            vecs.append(v)
        if len(basis) == params.e:
            break
    return basis


def _rank_mod_p(M, p):
    M = np.array(M, dtype=np.int64) % p
    if M.size == 0:
        return 0
    rows, cols = M.shape
    rank = 0
    for col in range(cols):
        piv = None
        for r in range(rank, rows):
            if M[r, col]:
                piv = r
                break
        if piv is None:
            continue
        M[[rank, piv]] = M[[piv, rank]]
        M[rank] = (M[rank] * pow(int(M[rank, col]), -1, p)) % p
        for r in range(rows):
            if r != rank and M[r, col]:
                M[r] = (M[r] - M[r, col] * M[rank]) % p
        rank += 1
        if rank == rows:
            break
    return rank


def filtration_ranks(E, basis, threshold=None, check=True):
    """Ranks ``r_0..r_d`` of the pole-order filtration on the F_q-span of ``basis``.

    ``r_n`` is the F_q-dimension of the combinations whose principal parts of
    order ``> n`` vanish at every trusted pole.  Coefficients are compared digit
    by digit over F_p, on the exponents known for all basis elements.
    """
    params = E.params
    threshold = default_threshold(params) if threshold is None else threshold
    if check:
        for w in basis:
            res = sf_check(E, w, threshold)
            if not res.passed:
                raise ValueError(f"basis element fails the special-function check ({res.residual})")
    p, e = params.p, params.e
    fqb = _fq_basis_codes(params)
    nb = len(basis)
    ref = basis[0].comps[0]
    ntrust = ref.horizon + 1
    dmax = max(c.order_cap for w in basis for c in w.comps)
    ranks = []
    for n in range(0, E.d + 1):
        # build digit matrix
        coords = []
        for comp in range(E.d):
            for i in range(ntrust):
                for k in range(n + 1, dmax + 1):
                    coords.append((comp, i, k))
        blocks = []
        for comp, i, k in coords:
            entries = [w.comps[comp]._part(i, k) for w in basis]
            known = [x for x in entries if not (x.is_zero() and x.is_exact())]
            if not known:
                continue
            lo = min(x.val for x in known)
            hi = min(x.prec for x in known)
            if hi == INF:
                hi = max(x.lo + x.digits.shape[0] for x in known)
            hi = int(min(hi, lo + params.P))
            lo = int(lo)
            blk = []
            for x in entries:
                for beta in fqb:
                    y = x.scale(beta)
                    arr = np.zeros((hi - lo, params.k), dtype=np.int64)
                    if not y.is_zero():
                        s = y.lo - lo
                        m = min(y.digits.shape[0], hi - y.lo)
                        if m > 0:
                            arr[s:s + m] = y.digits[:m]
                    blk.append(arr.ravel())
            blocks.append(np.array(blk))
        if blocks:
            M = np.concatenate(blocks, axis=1)
            rank = _rank_mod_p(M, p)
        else:
            rank = 0
        kernel = nb * e - rank
        ranks.append(kernel // e)
    jumps = [n for n in range(1, len(ranks)) if ranks[n] > ranks[n - 1]]
    if ranks[0] > 0:
        jumps = [0] + jumps
    return ranks, jumps


# -- coordinate changes -------------------------------------------------------------------
def apply_tau_matrix(M, comps):
    return M.apply(comps)


def coordinate_change_check(E, M, w, threshold=None):
    """Residue of ``M w`` against ``M_0`` times the residue of ``w``; ``M w`` must also
    be special for the conjugated module ``M phi M^-1``."""
    params = E.params
    threshold = default_threshold(params) if threshold is None else threshold
    E2 = conjugate(E, M, threshold=threshold)
    comps = w.comps if isinstance(w, SpecialFunction) else w
    Mw = M.apply(comps)
    lhs = residue_at_j(Mw)
    rhs = mat_vec(M[0], residue_at_j(comps))
    diff = [a - b for a, b in zip(lhs, rhs)]
    ref = min(x.val for x in rhs)
    dv = min(x.val for x in diff)
    rel = INF if all(x.is_zero() for x in diff) else dv - ref
    sf = sf_check(E2, Mw, threshold)
    return Residual("coordinate_change", min(rel, sf.residual), threshold,
                    {"residue_residual": _num(rel), "sf_residual": _num(sf.residual)})


def standard_basis(E, horizon=DEFAULT_HORIZON, guard=DEFAULT_GUARD, omega=None):
    """Built-in basis of special functions for the example families."""
    params = E.params
    prov = E.provenance
    kind = prov.get("type")
    om = omega or anderson_thakur_omega(params, horizon, guard).comps[0]
    if kind == "carlitz" or (kind == "carlitz_tensor" and prov["n"] == 1) or (kind == "prolongation" and prov["k"] == 0):
        return [SpecialFunction(E, [om], {"kind": "omega"})]
    if kind == "carlitz_tensor":
        g = tensor_generator(params, prov["n"], omega=om)
        return [SpecialFunction(E, g.comps, g.source)]
    if kind == "prolongation":
        return [SpecialFunction(E, b.comps, b.source) for b in prolongation_basis(params, prov["k"], omega=om)]
    if kind == "direct_sum":
        from .tmodule import module_from_descriptor

        blocks = [standard_basis(module_from_descriptor(params, p), omega=om) for p in prov["parts"]]
        return direct_sum_basis(E, blocks)
    raise ValueError(f"no built-in special-function basis for module type {kind!r}; pass --lambda")
