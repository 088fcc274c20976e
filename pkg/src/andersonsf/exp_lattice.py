"""Exponential of an Anderson module, the Carlitz period and lattice membership."""

from __future__ import annotations

from dataclasses import dataclass, field

from .base_arith import INF, CinfNum, PrecisionError, lambda_theta
from .tmodule import (identity, mat_add, mat_is_exact_zero, mat_mul, mat_neg, mat_qpow, mat_scale,
                      mat_sub, mat_val, mat_vec, zeros)


@dataclass
class ExpCoeffs:
    """``exp_E = sum_i e_i tau^i`` in coordinates, ``e_0 = Id``."""

    E: object
    coeffs: list
    residuals: list = field(default_factory=list)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def vals(self):
        return [mat_val(e) for e in self.coeffs]


def exp_coeffs(E, count):
    """``e_0 .. e_{count-1}`` from ``exp o dphi(t) = phi(t) o exp``.

    In tau-degree ``n`` this reads ``e_n A_0^(n) - A_0 e_n = sum_{j>=1} A_j e_{n-j}^(j)``.
    With ``A_0 = theta + N`` the left side is ``delta e_n + L(e_n)``,
    ``delta = theta^(q^n) - theta`` and ``L(X) = X N^(n) - N X``; ``L`` is nilpotent, so
    ``e_n = sum_k (-1)^k L^k(R) / delta^(k+1)`` is a finite sum.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    params = E.params
    d = E.d
    phi = E.phi_t
    N = E.N
    th = CinfNum.theta(params)
    coeffs = [identity(params, d)]
    for n in range(1, count):
        R = zeros(params, d)
        for j in range(1, min(phi.degree, n) + 1):
            Aj = phi[j]
            if mat_is_exact_zero(Aj):
                continue
            R = mat_add(R, mat_mul(Aj, mat_qpow(coeffs[n - j], j)))
        delta = th.qpow(n) - th
        if delta.is_zero():
            raise PrecisionError(f"theta^(q^{n}) - theta vanishes at precision {params.P}")
        dinv = delta.inv()
        Nn = mat_qpow(N, n)
        term = R
        en = zeros(params, d)
        dpow = dinv
        for k in range(2 * d):
            piece = mat_scale(dpow, term)
            en = mat_add(en, piece if k % 2 == 0 else mat_neg(piece))
            term = mat_sub(mat_mul(term, Nn), mat_mul(N, term))
            if mat_is_exact_zero(term) or all(x.is_zero() for row in term for x in row):
                break
            dpow = dpow * dinv
        coeffs.append(en)
    out = ExpCoeffs(E, coeffs)
    out.residuals = functional_residual(out)
    return out


def functional_residual(ec):
    """Relative valuation of ``e_n A_0^(n) - sum_j A_j e_{n-j}^(j)`` per tau-degree.

    The value is ``v(residual) - min v(terms)``, i.e. how many digits of agreement
    there are; it is ``inf`` when the residual vanishes at the working precision.
    """
    E = ec.E
    phi = E.phi_t
    out = []
    for n, en in enumerate(ec.coeffs):
        lhs = mat_mul(en, mat_qpow(phi[0], n))
        rhs = zeros(E.params, E.d)
        for j in range(0, min(phi.degree, n) + 1):
            rhs = mat_add(rhs, mat_mul(phi[j], mat_qpow(ec.coeffs[n - j], j)))
        res = mat_sub(lhs, rhs)
        scale = min(mat_val(lhs), mat_val(rhs))
        if all(x.is_zero() for row in res for x in row):
            out.append(INF)
        else:
            out.append(mat_val(res) - scale)
    return out


@dataclass
class ExpValue:
    value: list
    err: float


def exp_eval(ec, x, target=None):
    """``sum_i e_i x^(q^i)`` with an error bound for the omitted terms.

    The bound extrapolates the last computed term sizes, which must be strictly
    increasing; a :class:`PrecisionError` is raised if it does not reach ``target``.
    """
    params = ec.E.params
    target = params.P // 2 if target is None else target
    if all(c.is_zero() and c.is_exact() for c in x):
        return ExpValue([CinfNum.zero(params) for _ in x], INF)
    vx = min(c.val for c in x)
    total = [CinfNum.zero(params) for _ in x]
    sizes = []
    for i, e in enumerate(ec.coeffs):
        xi = [c.qpow(i) for c in x]
        total = [a + b for a, b in zip(total, mat_vec(e, xi))]
        sizes.append(mat_val(e) + params.q ** i * vx)
    # omitted terms: the term sizes grow at least as fast as the last increment
    if len(sizes) >= 3:
        incs = [b - a for a, b in zip(sizes[-3:], sizes[-2:])]
        if not all(s > 0 for s in incs) or incs[1] < incs[0]:
            raise PrecisionError(f"exp term sizes {sizes[-3:]} are not increasing fast enough "
                                 "to bound the omitted tail")
        err = sizes[-1] + incs[1]
    elif len(sizes) == 2 and sizes[1] > sizes[0]:
        err = sizes[1] + (sizes[1] - sizes[0])
    else:
        err = sizes[-1] if len(sizes) > 1 else INF
    if err < target:
        raise PrecisionError(f"exp tail bound {err} below target {target}; use more terms")
    total = [c.with_prec(err) if c.prec > err else c for c in total]
    return ExpValue(total, err)


def lattice_member(ec, x, threshold=None):
    """Whether ``exp_E(x) == 0`` at ``threshold`` (normalized by the size of x).

    Returns ``(ok, residual)`` with ``residual = min v(exp(x)) - min v(x)``: the
    number of digits by which ``exp(x)`` is smaller than ``x``.
    """
    params = ec.E.params
    threshold = params.P // 2 if threshold is None else threshold
    if all(c.is_zero() for c in x):
        return True, INF
    vx = min(c.val for c in x)
    ev = exp_eval(ec, x, target=vx + threshold)
    v = min(c.val for c in ev.value)
    residual = v - vx
    return residual >= threshold, residual


def carlitz_period(params, terms=None):
    """The Carlitz period, normalized as the residue at theta of the
    Anderson-Thakur function: ``-theta lambda prod_{i>=1} (1 - theta^(1-q^i))^(-1)``."""
    lam = lambda_theta(params)
    th = CinfNum.theta(params)
    if terms is None:
        terms = default_terms(params)
    prod = CinfNum.one(params)
    for i in range(1, terms + 1):
        prod = prod * (CinfNum.one(params) - th ** (1 - params.q ** i))
    return -(th * lam) * prod.inv()


def default_terms(params):
    """Smallest ``n`` with ``theta^(1 - q^(n+1))`` beyond the working precision."""
    n = 1
    while params.r * (params.q ** (n + 1) - 1) < params.P:
        n += 1
    return n
