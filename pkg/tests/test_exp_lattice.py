import pytest

from andersonsf.base_arith import INF, CinfNum, PrecisionError
from andersonsf.exp_lattice import carlitz_period, exp_coeffs, exp_eval, lattice_member
from andersonsf.tmodule import carlitz, carlitz_tensor, direct_sum, prolongation


def carlitz_coeff(params, i):
    """Closed form ``1 / prod_{j<i} (theta^(q^i) - theta^(q^j))``."""
    th = CinfNum.theta(params)
    den = CinfNum.one(params)
    for j in range(i):
        den = den * (th.qpow(i) - th.qpow(j))
    return den.inv()


def test_carlitz_coeffs_closed_form(params):
    ec = exp_coeffs(carlitz(params), 5)
    for i in range(5):
        assert ec[i][0][0] == carlitz_coeff(params, i)


def test_residuals_exact(params):
    for E in (carlitz(params), carlitz_tensor(params, 3), prolongation(params, 2),
              direct_sum(carlitz(params), carlitz_tensor(params, 2))):
        ec = exp_coeffs(E, 7)
        assert ec.residuals == [INF] * 7


def test_coefficient_sizes_increase(params):
    vals = exp_coeffs(carlitz(params), 8).vals()
    assert all(a < b for a, b in zip(vals, vals[1:]))
    # v(e_i) = r * i * q^i: the product has i factors of size q^i
    assert vals == [params.r * i * params.q ** i for i in range(8)]


def test_tensor_e1(q3):
    # solving delta X + X N - N X = E_21 by hand, N = E_12
    ec = exp_coeffs(carlitz_tensor(q3, 2), 2)
    th = CinfNum.theta(q3)
    delta = th.qpow(1) - th
    e1 = ec[1]
    assert e1[1][0] == delta.inv()
    d2 = (delta * delta).inv()
    assert e1[0][0] == d2 and e1[1][1] == -d2
    assert e1[0][1] == -CinfNum.scalar(q3, 2) * d2 * delta.inv()


def test_period_valuation(params):
    pi = carlitz_period(params)
    q, r = params.q, params.r
    assert pi.val * (q - 1) == -r * q


def test_exp_kills_period(params):
    ec = exp_coeffs(carlitz(params), 12)
    pi = carlitz_period(params)
    ok, res = lattice_member(ec, [pi])
    assert ok and res >= params.P // 2
    ok, _ = lattice_member(ec, [pi * CinfNum.theta(params) + pi])
    assert ok
    ok, res = lattice_member(ec, [pi * CinfNum.theta(params).inv()])
    assert not ok and res < 10
    ok, _ = lattice_member(ec, [pi + CinfNum.one(params)])
    assert not ok


def test_exp_zero_and_linearity(q3):
    ec = exp_coeffs(carlitz(q3), 12)
    z = exp_eval(ec, [CinfNum.zero(q3)])
    assert z.value[0].is_zero() and z.err == INF
    x = CinfNum.monomial(q3, 5, 1)
    y = CinfNum.monomial(q3, 7, 2)
    lhs = exp_eval(ec, [x + y]).value[0]
    rhs = exp_eval(ec, [x]).value[0] + exp_eval(ec, [y]).value[0]
    assert (lhs - rhs).val >= q3.P // 2


def test_exp_fq_linear_scalar(q3):
    ec = exp_coeffs(carlitz(q3), 12)
    x = CinfNum.monomial(q3, 3, 1)
    c = CinfNum.scalar(q3, 2)
    lhs = exp_eval(ec, [c * x]).value[0]
    rhs = c * exp_eval(ec, [x]).value[0]
    assert (lhs - rhs).val >= q3.P // 2


def test_too_few_terms_raises(params):
    ec = exp_coeffs(carlitz(params), 3)
    with pytest.raises(PrecisionError):
        lattice_member(ec, [carlitz_period(params)])


def test_count_must_be_positive(q3):
    with pytest.raises(ValueError):
        exp_coeffs(carlitz(q3), 0)
