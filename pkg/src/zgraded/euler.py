"""The Euler derivation, pure-weight derivations and their graded commutators."""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    GradedSeries,
    Truncation,
    WeightSignature,
    _dot,
    meet_truncations,
    partial_derivative,
    series_mul,
)
from .errors import FlavorMismatch, SignatureMismatch, WeightError
from .filtration import series_order


def euler_apply(sig: WeightSignature, f: GradedSeries) -> GradedSeries:
    """sum_i alpha_i xi_i d/dxi_i f - sum_j beta_j eta_j d/deta_j f."""
    if f.sig != sig:
        raise SignatureMismatch("series is over a different signature")
    g = f.untagged()
    total = GradedSeries.zero(sig)
    for name, w in sig.graded_vars:
        d = partial_derivative(sig, name, g)
        if d:
            total = total + series_mul(sig, GradedSeries.var(sig, name), d).scale(w)
    # x d/dx maps each monomial to a multiple of itself, so the coset is preserved
    return total.retag(f.truncation) if f.truncation is not None else total


def is_homogeneous(sig: WeightSignature, f: GradedSeries, r: int) -> bool:
    return euler_apply(sig, f) == f.scale(r)


@dataclass(frozen=True)
class Derivation:
    """A derivation stored by its values on the generators.

    Every image term has weight ``weight(v) + self.weight``; parity is the
    weight mod 2.
    """

    sig: WeightSignature
    images: dict
    weight: int

    @property
    def parity(self) -> int:
        return self.weight % 2

    def image(self, name) -> GradedSeries:
        return self.images.get(name) or GradedSeries.zero(self.sig)

    def __call__(self, f):
        return derivation_apply(self, f)

    @classmethod
    def euler(cls, sig):
        return cls(sig, {n: GradedSeries.var(sig, n).scale(w) for n, w in sig.graded_vars}, 0)

    @classmethod
    def partial(cls, sig, name):
        return cls(sig, {name: GradedSeries.constant(sig, 1)}, -sig.weight_of(name))


def derivation_new(sig: WeightSignature, images: dict, w: int) -> Derivation:
    clean = {}
    for name, img in images.items():
        target = sig.weight_of(name) + w
        if img.sig != sig:
            raise SignatureMismatch(f"image of {name!r} is over a different signature")
        for m in img.terms:
            got = _dot(sig.weights, m)
            if got != target:
                raise WeightError(
                    f"image of {name!r}: term {m} has weight {got}, expected {target}")
        if img:
            clean[name] = img
    return Derivation(sig, clean, int(w))


def _apply_tag(d: Derivation, f: GradedSeries):
    """Truncation tag for d(f) when f is a truncated coset."""
    image_tags = [img.truncation for img in d.images.values()]
    if f.truncation is None:
        return meet_truncations(*image_tags)
    flavor, p = f.truncation
    for t in image_tags:
        if t is not None and t.flavor != flavor:
            raise FlavorMismatch("derivation images and argument use different flavors")
    # v -> d(v) can lower the order of a monomial by at most order(v) - order(d(v))
    ow = d.sig.order_weights[flavor]
    drop = 0
    for name, img in d.images.items():
        low = series_order(d.sig, img, flavor)
        drop = max(drop, ow[d.sig.index[name]] - low)
    return meet_truncations(Truncation(flavor, max(p - drop, 0)), *image_tags)


def derivation_apply(d: Derivation, f: GradedSeries) -> GradedSeries:
    """Extend ``d`` from generators by the graded Leibniz rule: ``d = sum_v d(v) d/dv``."""
    if f.sig != d.sig:
        raise SignatureMismatch("series is over a different signature")
    sig = d.sig
    g = f.untagged()
    total = GradedSeries.zero(sig)
    for name, img in d.images.items():
        dv = partial_derivative(sig, name, g)
        if dv:
            total = total + series_mul(sig, img.untagged(), dv)
    tag = _apply_tag(d, f)
    return total.retag(tag) if tag is not None else total


def commutator(d1: Derivation, d2: Derivation) -> Derivation:
    """[d1, d2] = d1 d2 - (-1)^{p(d1) p(d2)} d2 d1, evaluated on generators."""
    if d1.sig != d2.sig:
        raise SignatureMismatch("derivations over different signatures")
    sig = d1.sig
    sign = -1 if d1.parity and d2.parity else 1
    images = {}
    for name in sig.names:
        a = derivation_apply(d1, d2.image(name))
        b = derivation_apply(d2, d1.image(name))
        images[name] = a - b.scale(sign)
    return derivation_new(sig, images, d1.weight + d2.weight)


def homogeneous_degree(sig: WeightSignature, f: GradedSeries):
    """The common weight of all terms, ``None`` if there is none (zero or mixed)."""
    ws = {_dot(sig.weights, m) for m in f.terms}
    return ws.pop() if len(ws) == 1 else None

