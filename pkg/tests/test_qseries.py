import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sheafgen.errors import (
    BeyondTruncation,
    NonDivergingLeadExponent,
    NonUnitConstantTerm,
    UnrepresentablePrefactor,
)
from sheafgen.laurent import ONE, X, Y, LaurentPoly
from sheafgen.qseries import (
    FracSeries,
    ProductFactor,
    q4,
    qs_coeff,
    qs_equal_to_order,
    qs_eta_quotient,
    qs_invert,
    qs_product,
    qs_theta,
)
from sheafgen.qseries import series as series_mod


def mono(c, xd=0, yd=0):
    return LaurentPoly.monomial(c, xd, yd)


def univariate(s: FracSeries) -> dict[int, int]:
    out = {}
    for e, p in s:
        assert p.is_monomial() and p.terms()[0][0] == (0, 0)
        out[e] = p.terms()[0][1]
    return out


def test_q4_conversion():
    assert q4(1) == 4
    assert q4("1/4") == 1
    assert q4(Fraction(3, 2)) == 6
    with pytest.raises(ValueError):
        q4(Fraction(1, 8))


def test_truncated_difference_of_squares():
    a = FracSeries(8, {0: 1, 1: 1})
    b = FracSeries(8, {0: 1, 1: -1})
    assert a * b == FracSeries(8, {0: 1, 2: -1})


def test_product_truncates_to_smaller_order():
    a = FracSeries(4, {0: 1, 3: X})
    b = FracSeries(8, {0: 1, 5: Y})
    prod = a * b
    assert prod.order == 4
    assert prod == FracSeries(4, {0: 1, 3: X})


def test_invert_examples():
    geo = qs_invert(FracSeries(12, {0: 1, 4: -1}))
    assert geo == FracSeries(12, {0: 1, 4: 1, 8: 1})
    assert qs_invert(FracSeries.one(8)) == FracSeries.one(8)
    xy = X * Y
    inv = qs_invert(FracSeries(6, {0: 1, 2: -xy}))
    assert inv == FracSeries(6, {0: 1, 2: xy, 4: xy * xy})


def test_invert_rejects_non_units():
    with pytest.raises(NonUnitConstantTerm):
        qs_invert(FracSeries(8, {0: 2}))
    with pytest.raises(NonUnitConstantTerm):
        qs_invert(FracSeries(8, {0: X + 1}))
    with pytest.raises(NonUnitConstantTerm):
        qs_invert(FracSeries(8, {1: 1}))


unit_series = st.builds(
    lambda terms, c0: FracSeries(16, {0: c0, **terms}),
    st.dictionaries(
        st.integers(1, 15),
        st.dictionaries(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), st.integers(-5, 5), max_size=3).map(
            LaurentPoly
        ),
        max_size=4,
    ),
    st.sampled_from([ONE, -ONE, mono(1, 2, 0), mono(-1, -1, 3)]),
)


@settings(max_examples=60, deadline=None)
@given(unit_series)
def test_inverse_property(a):
    assert a * qs_invert(a) == FracSeries.one(16)


def test_euler_function_and_pentagonal_numbers():
    order = q4(30)
    euler = qs_product((ProductFactor.one_minus(4 * n) for n in range(1, 100)), order)
    expected = {}
    for k in range(-10, 11):
        e = k * (3 * k - 1) // 2
        if e < 30:
            expected[4 * e] = (-1) ** k
    assert univariate(euler) == expected


def test_product_examples():
    assert qs_product(iter(()), 8) == FracSeries.one(8)
    assert qs_product([ProductFactor.one_minus(4)], 8) == FracSeries(8, {0: 1, 4: -1})


def test_product_rejects_nonmonotone_and_bad_factors():
    with pytest.raises(ValueError):
        qs_product([ProductFactor.one_minus(4), ProductFactor.one_minus(2)], 16)
    with pytest.raises(NonUnitConstantTerm):
        ProductFactor(4, factor=FracSeries(8, {0: 2, 4: 1}))


def test_product_guards_against_stalled_streams(monkeypatch):
    monkeypatch.setattr(series_mod, "MAX_FACTORS", 50)

    def stalled():
        while True:
            yield ProductFactor.one_minus(4)

    with pytest.raises(NonDivergingLeadExponent):
        qs_product(stalled(), 8)


def test_ramanujan_tau_from_eta_24():
    delta = qs_eta_quotient([(1, 24)], q4(4))
    assert univariate(delta) == {4: 1, 8: -24, 12: 252}


def test_eta_quotient_prefactor_and_guard():
    s = qs_eta_quotient([(1, 4), ("1/2", -2)], q4(2), extra="1/8")
    assert s.valuation() == 1 and s.coeff(1) == ONE
    # q^(1/4) (1 + 2 q^(1/2) + ...) from 1/prod(1 - q^(n/2))^2
    assert s.coeff(3) == 2 * ONE
    assert qs_eta_quotient([(1, 0)], 8) == FracSeries.one(8)
    with pytest.raises(UnrepresentablePrefactor):
        qs_eta_quotient([(1, 1)], 8)


def test_theta01_coefficients():
    th = qs_theta("01", q4(5))
    assert th.coeff(0) == ONE
    assert th.coeff(2) == -(mono(1, 2) + mono(1, -2))
    assert th.coeff(8) == mono(1, 4) + mono(1, -4)


def test_theta11_needs_aux_mode():
    with pytest.raises(UnrepresentablePrefactor):
        qs_theta("11", 8)
    shift, th = qs_theta("11", 8, aux=True)
    assert shift == Fraction(1, 8)
    assert th.coeff(0) == mono(1, 1) - mono(1, -1)


def test_jacobi_triple_product_for_theta01():
    # with p = q^(1/4): prod (1 - p^2n)(1 - t p^(2n-1))(1 - t^-1 p^(2n-1)) = sum (-1)^k p^(k^2) t^k
    order = q4(6)
    factors = []
    for n in range(1, 30):
        factors.append(ProductFactor.one_minus(2 * n))
        factors.append(ProductFactor.one_minus(2 * n - 1, 2, 0))
        factors.append(ProductFactor.one_minus(2 * n - 1, -2, 0))
    factors.sort(key=lambda f: f.lead_exp)
    prod = qs_product(factors, order)
    # the product carries t^k q^(k^2/4); theta01 carries t^k q^(k^2/2): rescale q
    rescaled = FracSeries(2 * order, {2 * e: p for e, p in prod})
    assert rescaled.truncate(order) == qs_theta("01", order)


def test_coeff_beyond_truncation():
    s = FracSeries.one(4)
    assert qs_coeff(s, 0) == ONE
    assert qs_coeff(s, 3) == LaurentPoly()
    with pytest.raises(BeyondTruncation):
        qs_coeff(s, 4)


def test_equal_to_order_reports():
    a = FracSeries(16, {0: 1})
    b = FracSeries(16, {0: 1, 4: 1})
    assert qs_equal_to_order(a, a, 16).passed
    assert qs_equal_to_order(a, b, 2).passed
    cmp = qs_equal_to_order(a, b, 8)
    assert cmp.status == "FAIL"
    assert cmp.first_mismatch[0] == 4
    assert cmp.to_json()["firstMismatch"]["expQuadrupled"] == 4
    with pytest.raises(BeyondTruncation):
        qs_equal_to_order(a, b, 20)


def test_json_round_trip():
    s = FracSeries(12, {1: (X - 1) ** 2, 5: mono(-3, 1, 1)})
    data = json.loads(json.dumps(s.to_json()))
    assert data["orderQuadrupled"] == 12
    assert FracSeries.from_json(data) == s
