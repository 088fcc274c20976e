"""The acceptance suite: nine groups of identity checks at the default parameters.

Each criterion returns a list of :class:`Case`; a criterion passes when all
its cases pass.  Residuals are pi-digit counts (see :mod:`special_fn`).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .base_arith import INF, CinfNum, FieldParams
from .exp_lattice import carlitz_period, exp_coeffs, lattice_member
from .special_fn import (SpecialFunction, anderson_thakur_omega, coordinate_change_check,
                         direct_sum_basis, filtration_ranks, prolongation_basis, random_multiples,
                         relative_residual, residue_at_j, sf_check, sf_from_lattice, tensor_generator,
                         vector_size)
from .tate_mero import MeroJRep, TateSeries, holomorphy_check
from .tmodule import (TauMatrixPoly, carlitz, carlitz_tensor, direct_sum, identity, mat_scale,
                      prolongation, zeros)

NON_MONOMIAL_U = (0, 1, 1)  # t^2 + t, derivative 1 in every characteristic


@dataclass
class Case:
    name: str
    passed: bool
    residual: float = None
    threshold: float = None
    detail: dict = field(default_factory=dict)

    def as_dict(self):
        r = None if self.residual in (None, INF) else self.residual
        return {"name": self.name, "passed": self.passed, "residual": r,
                "threshold": self.threshold, **self.detail}


def _case(name, residual, threshold, **detail):
    return Case(name, residual >= threshold, residual, threshold, detail)


class Context:
    """Objects shared between criteria for one field (built lazily, cached)."""

    def __init__(self, params, horizon=6, guard=2, threshold=None, seed=0):
        self.params = params
        self.horizon = horizon
        self.guard = guard
        self.threshold = params.P // 2 if threshold is None else threshold
        self.seed = seed
        self._cache = {}

    def get(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def omega(self):
        return self.get("omega", lambda: anderson_thakur_omega(self.params, self.horizon, self.guard))

    @property
    def period(self):
        return self.get("period", lambda: carlitz_period(self.params))

    def ec(self, E):
        return self.get(("ec", E.name), lambda: exp_coeffs(E, self.horizon + self.guard + 2))

    def module(self, name):
        P = self.params
        builders = {
            "C": lambda: carlitz(P),
            "C^2": lambda: carlitz_tensor(P, 2),
            "C^3": lambda: carlitz_tensor(P, 3),
            "rho1": lambda: prolongation(P, 1),
            "rho2": lambda: prolongation(P, 2),
            "C+C": lambda: direct_sum(carlitz(P), carlitz(P)),
        }
        return self.get(("mod", name), builders[name])

    def tensor(self, n):
        om = self.omega.comps[0]
        return self.get(("tensor", n), lambda: tensor_generator(self.params, n, omega=om))

    def prolong(self, k):
        om = self.omega.comps[0]
        return self.get(("prolong", k), lambda: prolongation_basis(self.params, k, omega=om))

    def basis_functions(self):
        """The special functions of criterion 3, keyed by a label."""
        out = {"omega": self.omega}
        for n in (2, 3):
            out[f"C^{n} generator"] = self.tensor(n)
        for k in (1, 2):
            for j, b in enumerate(self.prolong(k), start=1):
                out[f"rho{k} omega_{j}"] = b
        return out


def criterion_1(ctx):
    """Exponential coefficients satisfy the functional equation in every tau-degree."""
    cases = []
    count = ctx.horizon + ctx.guard + 1
    for name in ("C", "C^2", "C^3", "rho1", "rho2", "C+C"):
        E = ctx.module(name)
        ec = exp_coeffs(E, count)
        res = min(ec.residuals)
        cases.append(_case(f"exp functional equation {name}", res, ctx.threshold, degrees=count - 1))
    return cases


def criterion_2(ctx):
    """The lattice construction at the period reproduces omega; twist(omega) = (t - theta) omega."""
    P = ctx.params
    om = ctx.omega.comps[0]
    C = ctx.module("C")
    w = sf_from_lattice(C, [ctx.period], (0, 1), ctx.ec(C), ctx.horizon, ctx.guard, ctx.threshold)
    cases = [_case("omega == sf_from_lattice(pi, u=t)", relative_residual([w.comps[0] - om], [om]), ctx.threshold)]
    lin = TateSeries(P, [-CinfNum.theta(P), CinfNum.one(P)])
    diff = om.twist() - om * lin
    cases.append(_case("twist(omega) == (t - theta) omega", relative_residual([diff], [om]), ctx.threshold))
    D = 48
    series = om.twist().expand_on_disk(D) - om.expand_on_disk(D) * lin
    cases.append(_case("twist identity on the disk to degree 48",
                       series.truncate(D).coeff_val() - om.size(), ctx.threshold))
    return cases


def criterion_3(ctx):
    """The example bases satisfy phi(t) w = t w."""
    cases = []
    for label, w in ctx.basis_functions().items():
        r = sf_check(w.E, w, ctx.threshold)
        cases.append(_case(f"sf_check {label}", r.residual, ctx.threshold))
    return cases


def _generators(ctx, name):
    if name == "C":
        return [[ctx.period]]
    if name == "C^2":
        return [residue_at_j(ctx.tensor(2))]
    if name == "rho1":
        return [residue_at_j(b) for b in ctx.prolong(1)]
    raise KeyError(name)


def criterion_4(ctx):
    """Residue of the lattice construction returns the lattice vector."""
    cases = []
    for name in ("C", "C^2", "rho1"):
        E = ctx.module(name)
        ec = ctx.ec(E)
        lams = []
        for g, gen in enumerate(_generators(ctx, name)):
            lams.append((f"gen{g}", gen))
            for poly, lm in random_multiples(E, gen, 3, seed=ctx.seed + 17 * g):
                lams.append((f"a={poly}*gen{g}", lm))
        for u in ((0, 1), NON_MONOMIAL_U):
            for label, lam in lams:
                w = sf_from_lattice(E, lam, u, ec, ctx.horizon, ctx.guard, ctx.threshold)
                diff = [a - b for a, b in zip(residue_at_j(w), lam)]
                rt = relative_residual(diff, lam)
                sf = sf_check(E, w, ctx.threshold).residual
                ctx._cache.setdefault("lattice_sfs", []).append((f"{name} {label} u={list(u)}", w))
                cases.append(_case(f"round trip {name} {label} u={list(u)}", min(rt, sf), ctx.threshold,
                                   residue_residual=None if rt == INF else rt, sf_residual=None if sf == INF else sf))
    return cases


def criterion_5(ctx):
    """Residues of the basis special functions lie in the kernel of exp."""
    cases = []
    for label, w in ctx.basis_functions().items():
        ok, res = lattice_member(ctx.ec(w.E), residue_at_j(w), ctx.threshold)
        cases.append(_case(f"exp(residue({label})) == 0", res, ctx.threshold))
    return cases


def criterion_6(ctx):
    """Pole orders are bounded by d and nothing else is polar."""
    cases = []
    funcs = dict(ctx.basis_functions())
    if "lattice_sfs" not in ctx._cache:
        criterion_4(ctx)
    for label, w in ctx._cache["lattice_sfs"]:
        funcs[f"lattice sf {label}"] = w
    for label, w in funcs.items():
        d = w.E.d
        holo = all(holomorphy_check(c, d) for c in w.comps)
        size = vector_size(w.comps)
        neglected = min(c.tail_bound for c in w.comps) - size
        res = neglected if holo else -INF
        cases.append(_case(f"poles of order <= {d}, holomorphic elsewhere: {label}", res, ctx.threshold,
                           max_pole_order=w.max_pole_order()))
    return cases


def criterion_7(ctx):
    """A special function without poles is zero."""
    P = ctx.params
    W = ctx.omega
    om = W.comps[0]
    C = W.E
    zero = SpecialFunction(C, [om - om])
    r0 = sf_check(C, zero, ctx.threshold)
    is_zero = zero.comps[0].is_zero()
    cases = [Case("omega - omega passes and is zero", r0.passed and is_zero, r0.residual, ctx.threshold)]
    parts = [list(p) for p in om.parts]
    parts[0] = [CinfNum.zero(P)]
    stripped = MeroJRep(P, parts, om.tail, om.tail_bound, om.guard)
    r1 = sf_check(C, [stripped], ctx.threshold)
    cases.append(Case("omega without its pole at theta fails", not r1.passed, r1.residual, ctx.threshold,
                      {"expected": "fail"}))
    return cases


def criterion_8(ctx):
    """Jumps of the pole-order filtration."""
    cases = []
    P = ctx.params
    om = ctx.omega
    for n in (1, 2, 3):
        if n == 1:
            E, basis = ctx.module("C"), [om]
        else:
            w = ctx.tensor(n)
            E, basis = w.E, [w]
        ranks, jumps = filtration_ranks(E, basis, ctx.threshold)
        cases.append(Case(f"C^{n}: single jump at {n}", jumps == [n] and ranks[n] == 1, None, None,
                          {"ranks": ranks, "jumps": jumps}))
    for n in (1, 2):
        base = ctx.module("C") if n == 1 else ctx.module(f"C^{n}")
        E = direct_sum(base, base)
        block = [om] if n == 1 else [ctx.tensor(n)]
        basis = direct_sum_basis(E, [block, block])
        ranks, jumps = filtration_ranks(E, basis, ctx.threshold)
        cases.append(Case(f"(C^{n})^2: single jump at {n} of rank 2", jumps == [n] and ranks[n] == 2, None, None,
                          {"ranks": ranks, "jumps": jumps}))
    for k in (1, 2):
        basis = ctx.prolong(k)
        ranks, jumps = filtration_ranks(basis[0].E, basis, ctx.threshold)
        want = list(range(1, k + 2))
        cases.append(Case(f"rho{k}: jumps at {want}", jumps == want and ranks == list(range(k + 2)), None, None,
                          {"ranks": ranks, "jumps": jumps}))
    return cases


def criterion_9(ctx):
    """Residues transform by M_0 under a change of coordinates M."""
    P = ctx.params
    E = ctx.module("C+C")
    om = ctx.omega
    basis = direct_sum_basis(E, [[om], [om]])
    one = identity(P, 2)
    e1d = zeros(P, 2)
    e1d[0][1] = CinfNum.one(P)
    Ms = {
        "Id": TauMatrixPoly([one]),
        "c*Id": TauMatrixPoly([mat_scale(CinfNum.theta(P) + 1, one)]),
        "Id + E_12 tau": TauMatrixPoly([one, e1d]),
    }
    cases = []
    for label, M in Ms.items():
        for j, w in enumerate(basis):
            r = coordinate_change_check(E, M, w, ctx.threshold)
            cases.append(_case(f"M = {label}, basis element {j + 1}", r.residual, ctx.threshold))
    return cases


CRITERIA = [
    (1, "exp functional equation", criterion_1),
    (2, "Anderson-Thakur consistency", criterion_2),
    (3, "special-function equation", criterion_3),
    (4, "residue round trip", criterion_4),
    (5, "kernel containment", criterion_5),
    (6, "meromorphic continuation", criterion_6),
    (7, "no pole, no function", criterion_7),
    (8, "filtration jumps", criterion_8),
    (9, "coordinate independence", criterion_9),
]


def default_fields(P=200):
    return [FieldParams.for_q(2, P=P), FieldParams.for_q(3, P=P)]


def run_suite(fields=None, horizon=6, guard=2, threshold=None, seed=0, only=None):
    """Run the criteria over the given fields.

    Returns ``[(number, title, passed, cases, seconds)]`` where ``cases`` holds
    ``(q, Case)`` pairs.
    """
    fields = default_fields() if fields is None else fields
    ctxs = [Context(P, horizon, guard, threshold, seed) for P in fields]
    out = []
    for num, title, fn in CRITERIA:
        if only and num not in only:
            continue
        t0 = time.perf_counter()
        cases = []
        for ctx in ctxs:
            cases.extend((ctx.params.q, c) for c in fn(ctx))
        passed = all(c.passed for _, c in cases)
        out.append((num, title, passed, cases, time.perf_counter() - t0))
    return out
