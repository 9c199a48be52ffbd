import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import make_sig, random_series, sig_and_series
from zgraded.core import GradedSeries, Truncation, signature_new
from zgraded.diophantine import borel_normal_form
from zgraded.errors import GradedError, ParseError, SignatureError, UnknownVariable
from zgraded.morphisms import morphism_new
from zgraded.parsing import (
    Num,
    Power,
    Var,
    format_expr,
    format_morphism,
    format_normal_form,
    format_signature,
    load_morphism,
    load_signature,
    parse_ast,
    parse_expr,
    parse_morphism,
    parse_normal_form,
    parse_signature,
    parse_truncation,
)


@pytest.fixture
def s12():
    return parse_signature("zero: x; vars: xi1:1, xi2:2, eta1:-3")


@pytest.fixture
def odd2():
    return parse_signature("vars: theta1:1, theta2:1")


def test_parse_signature_examples(s12):
    assert s12.alpha == (1, 2) and s12.beta == (3,)
    sig = parse_signature("vars: theta:1")
    assert sig.zero_vars == () and sig.odd_indices == (0,)


def test_parse_signature_multiline_with_comments():
    text = "# a chart\nzero: x, y\nvars: xi:2,  # positive\n  eta:-2\n"
    assert parse_signature(text) == signature_new(["x", "y"], [("xi", 2), ("eta", -2)])


@pytest.mark.parametrize("text, where", [
    ("vars: a:0", "1:"),
    ("vars: a:1, a:2", "1:"),
    ("zero: x\nvars: x:1", "2:"),
    ("vars: a 1", "1:"),
    ("colors: red", "1:"),
])
def test_parse_signature_errors(text, where):
    with pytest.raises((ParseError, SignatureError)) as info:
        parse_signature(text)
    assert str(info.value).startswith(where)


def test_signature_format_roundtrip(s12):
    assert parse_signature(format_signature(s12)) == s12


def test_load_signature(tmp_path, s12):
    path = tmp_path / "s.gsig"
    path.write_text(format_signature(s12) + "\n")
    assert load_signature(path) == s12
    with pytest.raises(GradedError):
        load_signature(tmp_path / "missing.gsig")


def test_parse_expr_examples(s12, odd2):
    f = parse_expr(s12, "3/2*x^2*xi1 - eta1")
    assert len(f.terms) == 2
    assert f.terms[s12.monomial(x=2, xi1=1)] == Fraction(3, 2)
    g = parse_expr(odd2, "theta2*theta1")
    assert g == -parse_expr(odd2, "theta1*theta2")
    assert parse_expr(odd2, "theta1*theta1").is_zero()


def test_ast_shapes():
    ast, trunc = parse_ast("x^3")
    assert ast == Power(Var("x", 1, 1), 3) and trunc is None
    ast, trunc = parse_ast("7 + O(UF^2)")
    assert ast == Num(Fraction(7)) and trunc == Truncation("UF", 2)


@pytest.mark.parametrize("text, message", [
    ("xi1^(-1)", "negative exponent"),
    ("xi1^-1", "negative exponent"),
    ("xi1^1/2", "fractional exponent"),
    ("xi1 xi2", "1:5"),
    ("zeta", "zeta"),
    ("(xi1 + 1", "1:"),
    ("xi1 +", "1:"),
    ("1/0", "1:"),
    ("xi1 $ 2", "1:5"),
])
def test_parse_expr_errors(s12, text, message):
    with pytest.raises((ParseError, UnknownVariable)) as info:
        parse_expr(s12, text)
    assert message in str(info.value)


def test_unknown_variable_positioned(s12):
    with pytest.raises(GradedError) as info:
        parse_expr(s12, "xi1 + zeta")
    assert "1:7" in str(info.value)


def test_format_examples(s12, odd2):
    assert format_expr(s12, GradedSeries.zero(s12)) == "0"
    assert format_expr(odd2, parse_expr(odd2, "theta2*theta1")) == "-theta1*theta2"
    assert format_expr(s12, parse_expr(s12, "1/2*xi1 + 1 - eta1")) == "-eta1 + 1 + 1/2*xi1"


def test_format_truncation_marker(s12):
    f = parse_expr(s12, "1 + xi1", truncation=("UF", 4))
    text = format_expr(s12, f)
    assert text == "1 + xi1 + O(UF^4)"
    assert parse_expr(s12, text) == f


def test_truncated_zero_roundtrip(s12):
    z = GradedSeries.zero(s12, ("F", 0))
    assert parse_expr(s12, format_expr(s12, z)) == z


def test_parse_truncation():
    assert parse_truncation("UF:4") == Truncation("UF", 4)
    for bad in ("UF4", "G:3", "F:-1", "F:x"):
        with pytest.raises(ParseError):
            parse_truncation(bad)


def test_parenthesized_powers(s12):
    assert parse_expr(s12, "(x + 1)^2") == parse_expr(s12, "x^2 + 2*x + 1")
    assert parse_expr(s12, "-(x)^2") == parse_expr(s12, "-x^2")


@settings(max_examples=200)
@given(sig_and_series(count=1, max_terms=6), st.sampled_from([None, ("F", 3), ("UF", 2)]))
def test_roundtrip_property(data, tag):
    sig, f = data
    if tag:
        f = f.retag(tag)
    assert parse_expr(sig, format_expr(sig, f)) == f


@settings(max_examples=200)
@given(st.text(alphabet="xiet12^*+-/()O FU: 0", max_size=20))
def test_parser_is_total(text):
    sig = signature_new(["x"], [("xi1", 1), ("e", -2)])
    try:
        parse_expr(sig, text)
    except GradedError as exc:
        assert isinstance(exc, (ParseError, UnknownVariable)) or str(exc)


def test_morphism_roundtrip(tmp_path):
    src = signature_new(["z"], [("zeta", 2), ("theta", -2)])
    tgt = signature_new(["x"], [("xi", 2)])
    phi = morphism_new(src, tgt, {"x": parse_expr(src, "z + zeta*theta"), "xi": parse_expr(src, "zeta")},
                       ("UF", 3))
    assert parse_morphism(format_morphism(phi)) == phi
    (tmp_path / "src.gsig").write_text(format_signature(src))
    (tmp_path / "m.gmor").write_text(
        "source: src.gsig\ntarget: {zero: x; vars: xi:2}\ntrunc: UF:3\n"
        "x := z + zeta*theta  # base plus nilpotent\nxi := zeta\n")
    assert load_morphism(tmp_path / "m.gmor") == phi


@pytest.mark.parametrize("text, where", [
    ("source: {vars: a:1}\ntarget: {vars: b:1}\nc := a", "3:"),
    ("source: {vars: a:1}\ntarget: {vars: b:1}\nb := a +", "3:"),
    ("source: {vars: a:1}\nb := a", "1:"),
    ("source: {vars: a:1}\ntarget: {vars: b:1}\nnonsense", "3:"),
])
def test_morphism_errors(text, where):
    with pytest.raises(ParseError) as info:
        parse_morphism(text)
    assert str(info.value).startswith(where)


def test_normal_form_roundtrip():
    rng = random.Random(6)
    for weights in [(1, 2, -3), (2, -2, 1, -1)]:
        sig = make_sig(("x",), weights)
        for r in (-1, 0, 2):
            f = random_series(rng, sig, nterms=5, box=3, weight=r)
            nf = borel_normal_form(sig, f, r)
            assert parse_normal_form(sig, format_normal_form(nf)) == nf


def test_normal_form_text_example():
    sig = signature_new([], [("xi", 2), ("eta", -2)])
    nf = borel_normal_form(sig, parse_expr(sig, "xi + xi^2*eta"), 2)
    assert format_normal_form(nf) == "weight: 2\nz1 := p=(1) q=(1)\n[p=(1) q=(0)] 1 + z1"


def test_normal_form_errors():
    sig = signature_new([], [("xi", 2), ("eta", -2)])
    with pytest.raises(ParseError):
        parse_normal_form(sig, "z1 := p=(1) q=(1)")
    with pytest.raises(ParseError):
        parse_normal_form(sig, "weight: 2\n[p=(2) q=(0)] 1")
    with pytest.raises(ParseError):
        parse_normal_form(sig, "weight: 2\nz1 := p=(2) q=(2)")
