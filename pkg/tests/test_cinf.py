import pytest
from hypothesis import given, strategies as st

from andersonsf.base_arith import (INF, CinfNum, FieldParams, PrecisionError, cinf_from_json, cinf_to_json,
                                   cinf_to_text, kth_root, lambda_theta)

SMALL = {q: FieldParams.for_q(q, P=40) for q in (2, 3, 4, 5)}


def numbers(q, min_val=-6, max_val=6, exact=True):
    """Random CinfNum strategy over the small field with the given q."""
    P = SMALL[q]
    codes = st.integers(0, P.fld.order - 1)

    @st.composite
    def build(draw):
        lo = draw(st.integers(min_val, max_val))
        digits = draw(st.lists(codes, min_size=1, max_size=12))
        digits[0] = draw(st.integers(1, P.fld.order - 1))
        prec = INF if exact else lo + draw(st.integers(len(digits), 30))
        return CinfNum.from_terms(P, {lo + j: c for j, c in enumerate(digits)}, prec)

    return build()


def test_theta_times_inverse(params):
    th = CinfNum.theta(params)
    assert th * th.inv() == CinfNum.one(params)
    assert (th * th.inv()).is_exact()


def test_lambda_power(params):
    lam = lambda_theta(params)
    assert lam ** (params.q - 1) == -CinfNum.theta(params)
    # |lambda| = q^(1/(q-1))
    assert lam.val * (params.q - 1) == -params.r


def test_difference_of_squares(q3):
    pi = CinfNum.monomial(q3, 1)
    one = CinfNum.one(q3)
    assert (one + pi) * (one - pi) == one - pi * pi


def test_inverse_of_theta_is_pi_power(params):
    assert CinfNum.theta(params).inv().terms() == [(params.r, 1)]


def test_geometric_series(q3):
    x = CinfNum.theta(q3).inv()
    one = CinfNum.one(q3)
    inv = (one - x).inv()
    assert inv.prec == q3.P
    assert [k for k, _ in inv.terms()] == list(range(0, q3.P, q3.r))
    assert all(c == 1 for _, c in inv.terms())


def test_lambda_inverse_roundtrip(params):
    lam = lambda_theta(params)
    assert lam * lam.inv() == CinfNum.one(params)


def test_qpow_examples(params):
    th = CinfNum.theta(params)
    assert th.qpow(1) == CinfNum.theta(params, params.q)
    lam = lambda_theta(params)
    assert lam.qpow(1) == -(th * lam)


def test_precision_rules(q3):
    a = CinfNum.from_terms(q3, {0: 1, 1: 2}, prec=10)
    b = CinfNum.from_terms(q3, {-2: 1}, prec=5)
    assert (a + b).prec == 5
    assert (a * b).prec == min(10 + b.val, 5 + a.val)


def test_relative_cap():
    P = FieldParams.for_q(3, P=30)
    x = (CinfNum.one(P) - CinfNum.monomial(P, 1)).inv()
    assert x.rel_prec == 30
    big = CinfNum.theta(P, 100) - CinfNum.theta(P)  # span > P digits
    assert not big.is_exact() and big.rel_prec == 30


def test_mismatched_params_rejected(q2, q3):
    with pytest.raises(ValueError):
        CinfNum.one(q2) + CinfNum.one(q3)


def test_inverse_of_zero_rejected(q3):
    with pytest.raises(PrecisionError):
        CinfNum.zero(q3, prec=10).inv()


def test_kth_root_examples(params):
    one = CinfNum.one(params)
    assert kth_root(one, params.q - 1 if params.q > 2 else 1) == one
    lam = kth_root(-CinfNum.theta(params), params.q - 1)
    assert lam ** (params.q - 1) == -CinfNum.theta(params)


def test_kth_root_of_square(q3):
    x = CinfNum.one(q3) + CinfNum.monomial(q3, 1)
    assert kth_root(x * x, 2) == x


def test_kth_root_errors(q3):
    with pytest.raises(ValueError):
        kth_root(CinfNum.one(q3), 3)  # divisible by p
    with pytest.raises(ValueError):
        kth_root(CinfNum.monomial(q3, 1), 2)  # valuation not divisible
    with pytest.raises(PrecisionError):
        kth_root(CinfNum.zero(q3, 4), 2)
    P = FieldParams.for_q(3, m=1)
    with pytest.raises(ValueError):
        kth_root(-CinfNum.one(P), 2)  # -1 is not a square in F_3


def test_lambda_needs_compatible_ramification():
    with pytest.raises(ValueError):
        lambda_theta(FieldParams.for_q(5, r=2))


def test_carlitz_period_matches_bit_oracle():
    import oracle_f2

    P = FieldParams.for_q(2, P=120)
    from andersonsf import carlitz_period

    bits, shift = oracle_f2.carlitz_period_bits(120)
    want = oracle_f2.exponents(bits, shift)
    got = [k for k, _ in carlitz_period(P).terms()]
    assert got == [k for k in want if k < -2 + 120]


def test_period_digits_frozen():
    # [DERIVED] frozen from the F_2[[x]] oracle in oracle_f2.py
    from andersonsf import carlitz_period

    got = [k for k, _ in carlitz_period(FieldParams.for_q(2)).terms()][:20]
    assert got == [-2, -1, 0, 4, 7, 10, 12, 13, 15, 16, 18, 21, 24, 26, 27, 28, 29, 30, 31, 32]


def test_json_and_text_roundtrip(params):
    lam = lambda_theta(params)
    for x in (lam, CinfNum.theta(params), CinfNum.zero(params), CinfNum.zero(params, 7)):
        y = cinf_from_json(params, cinf_to_json(x))
        assert y.prec == x.prec and y.terms() == x.terms()
    assert cinf_to_text(CinfNum.theta(FieldParams.for_q(2))) == "[(-1, 1)]"
    assert cinf_to_text(CinfNum.zero(FieldParams.for_q(2), 5)) == "[0] + O(pi^5)"


@pytest.mark.parametrize("q", [2, 3, 4])
@given(data=st.data())
def test_field_axioms(q, data):
    x, y, z = (data.draw(numbers(q)) for _ in range(3))
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x * x.inv() == CinfNum.one(SMALL[q])


@pytest.mark.parametrize("q", [2, 3, 5])
@given(data=st.data())
def test_frobenius_is_ring_homomorphism(q, data):
    x, y = data.draw(numbers(q, exact=False)), data.draw(numbers(q, exact=False))
    assert (x * y).qpow(1) == x.qpow(1) * y.qpow(1)
    assert (x + y).qpow(1) == x.qpow(1) + y.qpow(1)
    assert x.qpow(2).val == q * q * x.val


@pytest.mark.parametrize("q", [2, 3])
@given(data=st.data())
def test_ultrametric(q, data):
    x, y = data.draw(numbers(q)), data.draw(numbers(q))
    s = x + y
    if not s.is_zero():
        assert s.val >= min(x.val, y.val)
    if x.val != y.val:
        assert s.val == min(x.val, y.val)


@pytest.mark.parametrize("q,k", [(3, 2), (5, 2), (5, 4), (4, 3), (2, 3)])
@given(data=st.data())
def test_kth_root_roundtrip(q, k, data):
    P = SMALL[q]
    x = data.draw(numbers(q, exact=False))
    x = x.shift(-x.val)  # valuation 0, divisible by k
    y = x ** k
    r = kth_root(y, k)
    assert r ** k == y
