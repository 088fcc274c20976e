import pytest

import oracle_f2
from andersonsf.base_arith import INF, CinfNum, FieldParams, PrecisionError, lambda_theta
from andersonsf.exp_lattice import carlitz_period, exp_coeffs
from andersonsf.special_fn import (SpecialFunction, anderson_thakur_omega, coordinate_change_check,
                                   direct_sum_basis, divided_difference, filtration_ranks, prolongation_basis,
                                   relative_residual, residue_at_j, separating, sf_check, sf_from_lattice,
                                   standard_basis, tensor_generator)
from andersonsf.tate_mero import MeroJRep, TateSeries, expand_on_disk
from andersonsf.tmodule import (TauMatrixPoly, carlitz, carlitz_tensor, direct_sum, identity, mat_vec,
                                prolongation, zeros)


@pytest.fixture(scope="module")
def omegas():
    return {q: anderson_thakur_omega(FieldParams.for_q(q)) for q in (2, 3)}


def test_omega_disk_expansion_matches_oracle():
    P = FieldParams.for_q(2, P=120)
    om = anderson_thakur_omega(P, horizon=6).comps[0]
    s = expand_on_disk(om, 6)
    for deg in range(7):
        c = s.coeffs[deg]
        # s.err bounds the dropped degrees; stored coefficients carry their own precision
        cutoff = min(c.prec, 118)
        # oracle digits are shifted by -1 (the leading theta)
        bits, shift = oracle_f2.omega_disk_coeff(deg, int(cutoff) + 2)
        want = [k for k in oracle_f2.exponents(bits, shift) if k < cutoff]
        got = [k for k, _ in c.terms() if k < cutoff]
        assert got == want, deg
        assert cutoff > 40


def test_omega_residue_is_period(params, omegas):
    om = omegas[params.q]
    res = om.residue()[0]
    pi = carlitz_period(params)
    assert relative_residual([res - pi], [pi]) >= params.P // 2


def test_omega_simple_poles(params, omegas):
    om = omegas[params.q]
    assert om.max_pole_order() == 1
    w = om.comps[0]
    assert all(w.pole_order(i) == 1 for i in range(w.nparts))
    assert all(c.is_zero() for c in w.tail.coeffs)


def test_omega_is_special(params, omegas):
    om = omegas[params.q]
    assert sf_check(om.E, om).passed
    tw = om.comps[0].twist()
    lin = TateSeries(params, [-CinfNum.theta(params), CinfNum.one(params)])
    assert relative_residual([tw - om.comps[0] * lin], [om.comps[0]]) >= params.P // 2


def test_omega_plus_constant_fails(params, omegas):
    om = omegas[params.q]
    w = om.comps[0]
    bad = MeroJRep(params, w.parts, TateSeries.const(CinfNum.one(params)), w.tail_bound, w.guard)
    r = sf_check(om.E, [bad])
    assert not r.passed and r.residual < 10


def test_stripped_omega_fails(params, omegas):
    w = omegas[params.q].comps[0]
    parts = [list(p) for p in w.parts]
    parts[0] = [CinfNum.zero(params)]
    r = sf_check(carlitz(params), [MeroJRep(params, parts, w.tail, w.tail_bound, w.guard)])
    assert not r.passed


def test_zero_function_passes(q3, omegas):
    w = omegas[3].comps[0]
    r = sf_check(carlitz(q3), [w - w])
    assert r.passed and r.residual == INF


@pytest.mark.parametrize("u", [(0, 1), (0, 1, 1)], ids=["t", "t2+t"])
def test_lattice_construction_recovers_omega(params, omegas, u):
    C = carlitz(params)
    om = omegas[params.q]
    w = sf_from_lattice(C, [carlitz_period(params)], u)
    assert relative_residual([w.comps[0] - om.comps[0]], om.comps) >= params.P // 2
    assert w.source["cancellation"] >= params.P // 2


def test_lattice_construction_of_zero(q3):
    w = sf_from_lattice(carlitz(q3), [CinfNum.zero(q3)])
    assert w.comps[0].is_zero()


def test_lattice_scaling_by_polynomial(q3, omegas):
    # lambda = dphi(a) pi gives a(t) omega
    C = carlitz(q3)
    pi = carlitz_period(q3)
    a = [1, 2, 1]
    lam = mat_vec(C.d_phi(a), [pi])
    w = sf_from_lattice(C, lam, (0, 1))
    want = omegas[3].mul_poly(a)
    assert relative_residual([w.comps[0] - want.comps[0]], want.comps) >= q3.P // 2


def test_residue_of_t_times_w(params, omegas):
    # residue(t w) = dphi(t) residue(w) for special w
    om = omegas[params.q]
    tw = om.mul_poly([0, 1])
    assert sf_check(om.E, tw).passed
    lhs = residue_at_j(tw)[0]
    rhs = CinfNum.theta(params) * residue_at_j(om)[0]
    assert relative_residual([lhs - rhs], [rhs]) >= params.P // 2


def test_tensor_and_prolongation_bases_are_special(q3, omegas):
    om = omegas[3].comps[0]
    for n in (2, 3):
        g = tensor_generator(q3, n, omega=om)
        assert sf_check(g.E, g).passed and g.max_pole_order() == n
    for b in prolongation_basis(q3, 2, omega=om):
        assert sf_check(b.E, b).passed


def test_lattice_construction_on_tensor_square(q3, omegas):
    g = tensor_generator(q3, 2, omega=omegas[3].comps[0])
    lam = residue_at_j(g)
    for u in ((0, 1), (0, 1, 1)):
        w = sf_from_lattice(g.E, lam, u)
        diff = [a - b for a, b in zip(residue_at_j(w), lam)]
        assert relative_residual(diff, lam) >= q3.P // 2
        assert sf_check(g.E, w).passed


def test_filtration_examples(q3, omegas):
    om = omegas[3]
    assert filtration_ranks(om.E, [om]) == ([0, 1], [1])
    g = tensor_generator(q3, 2, omega=om.comps[0])
    assert filtration_ranks(g.E, [g]) == ([0, 0, 1], [2])
    basis = prolongation_basis(q3, 1, omega=om.comps[0])
    assert filtration_ranks(basis[0].E, basis) == ([0, 1, 2], [1, 2])
    E = direct_sum(carlitz(q3), carlitz(q3))
    ranks, jumps = filtration_ranks(E, direct_sum_basis(E, [[om], [om]]))
    assert (ranks, jumps) == ([0, 2, 2], [1])


def test_filtration_rejects_non_special(q3, omegas):
    w = omegas[3].comps[0]
    bad = MeroJRep(q3, w.parts, TateSeries.const(CinfNum.one(q3)), w.tail_bound, w.guard)
    with pytest.raises(ValueError):
        filtration_ranks(carlitz(q3), [SpecialFunction(carlitz(q3), [bad])])


def test_coordinate_change(q3, omegas):
    E = direct_sum(carlitz(q3), carlitz(q3))
    basis = direct_sum_basis(E, [[omegas[3]], [omegas[3]]])
    e12 = zeros(q3, 2)
    e12[0][1] = CinfNum.one(q3)
    M = TauMatrixPoly([identity(q3, 2), e12])
    for w in basis:
        assert coordinate_change_check(E, M, w).passed


def test_standard_basis_dispatch(q3, omegas):
    om = omegas[3].comps[0]
    assert len(standard_basis(carlitz(q3), omega=om)) == 1
    assert len(standard_basis(prolongation(q3, 2), omega=om)) == 3
    assert len(standard_basis(direct_sum(carlitz(q3), carlitz_tensor(q3, 2)), omega=om)) == 2


def test_separating_and_divided_difference(q3):
    assert separating(q3, [0, 1])
    assert not separating(q3, [0, 0, 0, 1])
    assert separating(q3, [0, 1, 0, 1])
    # (t^2 + t - T^2 - T)/(t - T) = (T + 1) + t
    assert divided_difference([0, 1, 1]) == [[1, 1], [1, 0]]
    with pytest.raises(ValueError):
        sf_from_lattice(carlitz(q3), [carlitz_period(q3)], (0, 0, 0, 1))


def test_short_horizon_changes_nothing_on_trusted_poles(q3, omegas):
    short = anderson_thakur_omega(q3, horizon=3).comps[0]
    full = omegas[3].comps[0]
    for i in range(4):
        assert (short.parts[i][0] - full.parts[i][0]).val >= q3.P // 2 + short.parts[i][0].val
