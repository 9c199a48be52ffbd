from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import make_sig, parity, sig_and_series, signatures, homogeneous_series, series_over
from zgraded.core import (
    Flavor,
    GradedSeries,
    Truncation,
    mono_mul,
    mono_weight,
    partial_derivative,
    series_linear,
    series_mul,
    signature_new,
    weight_component,
    weights_present,
)
from zgraded.errors import FlavorMismatch, SignatureError, SignatureMismatch, UnknownVariable
from zgraded.parsing import parse_expr, parse_signature


@pytest.fixture
def s12():
    return signature_new(["x"], [("xi1", 1), ("xi2", 2), ("eta1", -3)])


@pytest.fixture
def odd2():
    return signature_new([], [("theta1", 1), ("theta2", 1)])


def test_signature_derived_data():
    sig = signature_new([], [("xi", 2), ("eta", -2)])
    assert sig.alpha == (2,) and sig.beta == (2,) and sig.kappa == 2
    sig = signature_new(["x"], [("xi1", 1), ("xi2", 2), ("eta1", -3)])
    assert sig.alpha == (1, 2) and sig.beta == (3,) and sig.kappa == 1
    assert (sig.alpha_min, sig.alpha_max, sig.beta_min, sig.beta_max) == (1, 2, 3, 3)
    assert sig.names == ("x", "xi1", "xi2", "eta1")


def test_signature_one_sided_extrema():
    sig = signature_new([], [("a", 1), ("b", 3)])
    assert sig.beta == () and sig.beta_max is None and sig.kappa is None


@pytest.mark.parametrize("zero, graded", [
    ([], [("xi", 0)]),
    (["x"], [("x", 1)]),
    ([], [("a", 1), ("a", 2)]),
])
def test_signature_errors(zero, graded):
    with pytest.raises(SignatureError):
        signature_new(zero, graded)


def test_mono_weight(s12):
    assert mono_weight(s12, s12.monomial(xi1=1, xi2=2, eta1=1)) == 2
    assert mono_weight(s12, s12.one) == 0
    assert mono_weight(s12, s12.monomial(x=3)) == 0


def test_unknown_variable(s12):
    with pytest.raises(UnknownVariable):
        s12.monomial(zeta=1)
    with pytest.raises(UnknownVariable):
        partial_derivative(s12, "zeta", GradedSeries.zero(s12))


def test_mono_mul_odd_transposition(odd2):
    t1, t2 = odd2.monomial(theta1=1), odd2.monomial(theta2=1)
    assert mono_mul(odd2, t2, t1) == (-1, (1, 1))
    assert mono_mul(odd2, t1, t2) == (1, (1, 1))
    assert mono_mul(odd2, t1, t1) is None


def test_mono_mul_mixed_parity():
    sig = signature_new([], [("xi", 2), ("theta", 1)])
    xt = sig.monomial(xi=1, theta=1)
    assert mono_mul(sig, xt, xt) is None
    assert mono_mul(sig, xt, sig.monomial(xi=1)) == (1, (2, 1))


def test_mono_mul_counts_all_odd_pairs():
    sig = signature_new([], [("a", 1), ("b", 1), ("c", 1), ("d", 1)])
    # (b d) * (a c) -> a b c d needs a past b, d and c past d: 3 swaps
    assert mono_mul(sig, sig.monomial(b=1, d=1), sig.monomial(a=1, c=1)) == (-1, (1, 1, 1, 1))


def test_series_linear():
    sig = signature_new([], [("xi", 2), ("eta", -2)])
    f = parse_expr(sig, "xi + 3*eta")
    assert series_linear(1, f, -1, f).is_zero()
    xi = GradedSeries.var(sig, "xi")
    assert series_linear(2, xi, 3, xi) == xi.scale(5)
    g = f.retag(("UF", 3)) + f.retag(("UF", 5))
    assert g.truncation == Truncation(Flavor.UF, 3)


def test_series_linear_flavor_mismatch():
    sig = signature_new([], [("xi", 2)])
    xi = GradedSeries.var(sig, "xi")
    with pytest.raises(FlavorMismatch):
        xi.retag(("UF", 3)) + xi.retag(("F", 3))


def test_signature_mismatch():
    a = GradedSeries.var(signature_new([], [("xi", 2)]), "xi")
    b = GradedSeries.var(signature_new([], [("xi", 4)]), "xi")
    with pytest.raises(SignatureMismatch):
        a + b


def test_series_mul_truncated_example():
    sig = signature_new([], [("xi", 2), ("eta", -2)])
    f = parse_expr(sig, "1 + xi").retag(("UF", 2))
    g = parse_expr(sig, "1 + eta").retag(("UF", 2))
    assert series_mul(sig, f, g) == parse_expr(sig, "1 + xi + eta", truncation=("UF", 2))


def test_series_mul_unit_and_odd_sign(odd2):
    f = parse_expr(odd2, "3 + theta1")
    one = GradedSeries.constant(odd2, 1)
    assert series_mul(odd2, f, one) == f
    t1, t2 = GradedSeries.var(odd2, "theta1"), GradedSeries.var(odd2, "theta2")
    assert t1 * t2 == -(t2 * t1)


def test_weight_component():
    sig = signature_new([], [("xi", 2), ("eta", -2)])
    f = parse_expr(sig, "xi + xi*eta")
    assert weight_component(sig, f, 2) == GradedSeries.var(sig, "xi")
    assert weight_component(sig, f, 5).is_zero()


def test_partial_derivative_examples(odd2):
    sig = signature_new([], [("xi", 2), ("eta", -2)])
    assert partial_derivative(sig, "xi", parse_expr(sig, "xi^2")) == parse_expr(sig, "2*xi")
    assert partial_derivative(odd2, "theta2", parse_expr(odd2, "theta1*theta2")) == \
        parse_expr(odd2, "-theta1")
    assert partial_derivative(sig, "xi", GradedSeries.var(sig, "eta")).is_zero()


def test_partial_derivative_lowers_truncation():
    sig = signature_new([], [("xi", 2), ("eta", -2)])
    f = parse_expr(sig, "xi + xi^2", truncation=("F", 6))
    assert partial_derivative(sig, "xi", f).truncation == Truncation(Flavor.F, 4)
    assert partial_derivative(sig, "eta", f).truncation == Truncation(Flavor.F, 6)


def test_odd_exponent_rejected(odd2):
    with pytest.raises(Exception):
        GradedSeries(odd2, {(2, 0): 1})


def test_coefficients_are_exact():
    sig = signature_new(["x"], [])
    f = parse_expr(sig, "1/3*x") * 3
    assert f.terms == {(1,): Fraction(1)}


@given(sig_and_series(count=1), st.data())
def test_weight_components_partition(data, draw):
    sig, f = data
    total = GradedSeries.zero(sig)
    for r in weights_present(f):
        total = total + weight_component(sig, f, r)
    assert total == f


@settings(max_examples=150)
@given(signatures(), st.data())
def test_supercommutativity(sig, data):
    r1 = data.draw(st.integers(-4, 4))
    r2 = data.draw(st.integers(-4, 4))
    f = data.draw(homogeneous_series(sig, r1))
    g = data.draw(homogeneous_series(sig, r2))
    sign = -1 if parity(sig, f) and parity(sig, g) else 1
    assert series_mul(sig, f, g) == series_mul(sig, g, f).scale(sign)


@settings(max_examples=100)
@given(sig_and_series(count=3, max_terms=3), st.sampled_from([None, ("F", 4), ("UF", 3)]))
def test_associativity(data, tag):
    sig, f, g, h = data
    if tag:
        f, g, h = f.retag(tag), g.retag(tag), h.retag(tag)
    assert (f * g) * h == f * (g * h)


@given(signatures(), st.data())
def test_weight_additive(sig, data):
    a = data.draw(series_over(sig, 1))
    b = data.draw(series_over(sig, 1))
    for m1 in a.terms:
        for m2 in b.terms:
            prod = mono_mul(sig, m1, m2)
            if prod is not None:
                assert mono_weight(sig, prod[1]) == mono_weight(sig, m1) + mono_weight(sig, m2)


@given(signatures())
def test_odd_nilpotence(sig):
    for i in sig.odd_indices:
        theta = GradedSeries.var(sig, sig.names[i])
        assert (theta * theta).is_zero()


@settings(max_examples=150)
@given(signatures(), st.data())
def test_graded_leibniz_for_partials(sig, data):
    v = data.draw(st.sampled_from(sig.names))
    f = data.draw(homogeneous_series(sig, data.draw(st.integers(-3, 3))))
    g = data.draw(series_over(sig))
    pv = sig.parity_of(v)
    sign = -1 if pv and parity(sig, f) else 1
    lhs = partial_derivative(sig, v, f * g)
    rhs = partial_derivative(sig, v, f) * g + (f * partial_derivative(sig, v, g)).scale(sign)
    assert lhs == rhs


def test_parse_signature_consistency():
    sig = parse_signature("zero: x; vars: xi1:1, xi2:2, eta1:-3")
    assert sig == signature_new(["x"], [("xi1", 1), ("xi2", 2), ("eta1", -3)])
    assert make_sig((), (1, -1)).names == ("g0", "g1")
