"""Filtration orders, truncation and the cofinal bounds relating the two filtrations."""

from __future__ import annotations

import math
from fractions import Fraction

from .core import (
    Flavor,
    GradedSeries,
    Monomial,
    Truncation,
    WeightSignature,
    _dot,
    as_truncation,
)
from .errors import GradedError, NotHomogeneous, OneSidedSignature, SignatureMismatch

INF = math.inf


def mono_order(sig: WeightSignature, m: Monomial, flavor) -> int:
    """F: total positive-weight contribution.  UF: degree in nonzero-weight variables."""
    ow = sig.order_weights[Flavor(flavor)]
    if len(m) != len(ow):
        raise SignatureMismatch("monomial does not match signature")
    return _dot(ow, m)


def series_order(sig: WeightSignature, f: GradedSeries, flavor):
    """Minimum order over the stored terms; ``INF`` for the zero series."""
    ow = sig.order_weights[Flavor(flavor)]
    return min((_dot(ow, m) for m in f.terms), default=INF)


def truncate(sig: WeightSignature, f: GradedSeries, flavor, p: int) -> GradedSeries:
    if f.sig != sig:
        raise SignatureMismatch("series is over a different signature")
    tag = as_truncation((flavor, p))
    if f.truncation is not None and f.truncation.flavor != tag.flavor:
        # a coset of the other flavor only determines terms below its own order
        raise GradedError(
            f"cannot re-truncate a {f.truncation.flavor}-truncated series in flavor {tag.flavor};"
            " use convert_truncation")
    if f.truncation is not None and f.truncation.order < tag.order:
        tag = f.truncation
    return GradedSeries(sig, f.terms, tag)


def _require_two_sided(sig):
    if not sig.alpha or not sig.beta:
        raise OneSidedSignature(
            "the cofinal bounds need both positive and negative weight variables")


def bound_lk(sig: WeightSignature, r: int, k: int) -> int:
    """Smallest UF-order guaranteed for weight-``r`` monomials of F-order >= ``k``."""
    _require_two_sided(sig)
    if k < 0:
        raise GradedError("filtration index must be nonnegative")
    amax, bmax = sig.alpha_max, sig.beta_max
    value = k * (Fraction(1, amax) + Fraction(1, bmax)) - Fraction(r, bmax)
    return max(math.ceil(value), 0)


def bound_kl(sig: WeightSignature, r: int, l: int) -> int:
    """Smallest F-order guaranteed for weight-``r`` monomials of UF-order >= ``l``."""
    _require_two_sided(sig)
    if l < 0:
        raise GradedError("filtration index must be nonnegative")
    return max(math.ceil(Fraction(r + sig.kappa * l, 2)), 0)


def convert_truncation(sig: WeightSignature, f: GradedSeries, r: int) -> GradedSeries:
    """Move a weight-``r`` coset representative to the other filtration.

    ``(F, k)`` becomes ``(UF, bound_lk(r, k))`` and ``(UF, l)`` becomes
    ``(F, bound_kl(r, l))``.  Every term discarded lies in the target ideal.
    """
    if f.sig != sig:
        raise SignatureMismatch("series is over a different signature")
    if f.truncation is None:
        raise GradedError("convert_truncation needs a truncated series")
    _require_two_sided(sig)
    w = sig.weights
    for m in f.terms:
        if _dot(w, m) != r:
            raise NotHomogeneous(f"term {m} has weight {_dot(w, m)}, expected {r}")
    flavor, p = f.truncation
    if flavor is Flavor.F:
        tag = Truncation(Flavor.UF, bound_lk(sig, r, p))
    else:
        tag = Truncation(Flavor.F, bound_kl(sig, r, p))
    return GradedSeries(sig, f.terms, tag)


def sequence_orders(sig: WeightSignature, terms) -> list:
    """(F-order, UF-order) of each increment of a candidate Cauchy sequence."""
    return [(series_order(sig, t, Flavor.F), series_order(sig, t, Flavor.UF)) for t in terms]


def increments(partial_sums) -> list:
    return [b - a for a, b in zip(partial_sums, partial_sums[1:])]


def example_family(n: int):
    """Signature xi_i (weight i), eta_i (weight -i) for i = 1..n, with the
    increments xi_i*eta_i of the sequence of partial sums of sum_i xi_i*eta_i."""
    graded = []
    for i in range(1, n + 1):
        graded += [(f"xi{i}", i), (f"eta{i}", -i)]
    sig = WeightSignature((), tuple(graded))
    incs = [GradedSeries.var(sig, f"xi{i}") * GradedSeries.var(sig, f"eta{i}")
            for i in range(1, n + 1)]
    return sig, incs
