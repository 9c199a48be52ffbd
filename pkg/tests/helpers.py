import itertools
from fractions import Fraction

from hypothesis import strategies as st

from zgraded.core import GradedSeries, WeightSignature


def make_sig(zero=(), weights=()):
    graded = tuple((f"g{i}", w) for i, w in enumerate(weights))
    return WeightSignature(tuple(zero), graded)


def box_monomials(sig, box, zero_box=None):
    """All legal monomials with exponents <= box (odd variables capped at 1)."""
    zero_box = box if zero_box is None else zero_box
    ranges = []
    for w in sig.weights:
        if w == 0:
            ranges.append(range(zero_box + 1))
        elif w % 2:
            ranges.append(range(min(box, 1) + 1))
        else:
            ranges.append(range(box + 1))
    return list(itertools.product(*ranges))


def random_coeff(rng):
    num = rng.randint(-5, 5) or 1
    return Fraction(num, rng.choice((1, 1, 1, 2, 3)))


def random_series(rng, sig, nterms=4, box=3, weight=None, pool=None, truncation=None):
    if pool is None:
        pool = box_monomials(sig, box)
        if weight is not None:
            pool = [m for m in pool if sum(e * w for e, w in zip(m, sig.weights)) == weight]
    if not pool:
        return GradedSeries.zero(sig, truncation)
    terms = {}
    for _ in range(rng.randint(0, nterms)):
        terms[rng.choice(pool)] = random_coeff(rng)
    return GradedSeries(sig, terms, truncation)


weights_st = st.lists(st.integers(-4, 4).filter(bool), min_size=1, max_size=4)


@st.composite
def signatures(draw, max_zero=1):
    nzero = draw(st.integers(0, max_zero))
    return make_sig([f"x{i}" for i in range(nzero)], draw(weights_st))


@st.composite
def series_over(draw, sig, max_terms=4, box=2):
    exps = []
    for w in sig.weights:
        cap = 1 if w % 2 else box
        exps.append(st.integers(0, cap))
    monos = st.tuples(*exps)
    coeffs = st.fractions(min_value=-3, max_value=3, max_denominator=3)
    terms = draw(st.dictionaries(monos, coeffs, max_size=max_terms))
    return GradedSeries(sig, terms)


@st.composite
def sig_and_series(draw, count=2, max_terms=4):
    sig = draw(signatures())
    return (sig,) + tuple(draw(series_over(sig, max_terms)) for _ in range(count))


@st.composite
def homogeneous_series(draw, sig, weight, max_terms=4, box=2):
    pool = [m for m in box_monomials(sig, box, zero_box=1)
            if sum(e * w for e, w in zip(m, sig.weights)) == weight]
    if not pool:
        return GradedSeries.zero(sig)
    coeffs = st.fractions(min_value=-3, max_value=3, max_denominator=3)
    terms = draw(st.dictionaries(st.sampled_from(pool), coeffs, max_size=max_terms))
    return GradedSeries(sig, terms)


def parity(sig, f):
    """Parity of a homogeneous series (weight mod 2); zero series count as even."""
    ws = {sum(e * w for e, w in zip(m, sig.weights)) % 2 for m in f.terms}
    assert len(ws) <= 1
    return ws.pop() if ws else 0
