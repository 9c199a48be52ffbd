"""Graded morphisms given by pullbacks of generators, and jet prolongation.

A morphism ``phi: source -> target`` is stored as the pullback of every
target variable, a series over the source.  Zero-weight targets split into a
base part (a polynomial in the source's zero-weight variables, the base map)
and a nilpotent part in the augmentation ideal.  Substitution into the
zero-weight slots goes through the Taylor expansion of the coefficients:
``x -> base(x)`` and ``dx -> nilpotent(x)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Optional

from .core import (
    GradedSeries,
    Truncation,
    WeightSignature,
    _dot,
    as_truncation,
    meet_truncations,
    series_mul,
)
from .errors import GradedError, SignatureError, SignatureMismatch, WeightError


def split_base(sig: WeightSignature, f: GradedSeries):
    """(base, nilpotent): terms free of graded variables vs. the rest."""
    nz = len(sig.zero_vars)
    base, nil = {}, {}
    for m, c in f.terms.items():
        (nil if any(m[nz:]) else base)[m] = c
    return GradedSeries(sig, base, f.truncation), GradedSeries(sig, nil, f.truncation)


@dataclass(frozen=True)
class GradedMorphism:
    source: WeightSignature
    target: WeightSignature
    images: dict  # target variable name -> series over source
    truncation: Optional[Truncation] = None

    def base_map(self) -> dict:
        """Base parts of the zero-weight images."""
        return {x: split_base(self.source, self.images[x])[0] for x in self.target.zero_vars}

    def __call__(self, f):
        return morphism_apply(self, f)


def morphism_new(src_sig: WeightSignature, tgt_sig: WeightSignature, pullback_images: dict,
                 trunc=None) -> GradedMorphism:
    trunc = as_truncation(trunc)
    missing = [u for u in tgt_sig.names if u not in pullback_images]
    extra = [u for u in pullback_images if u not in tgt_sig.index]
    if missing or extra:
        raise GradedError(f"need one image per target variable (missing {missing}, unknown {extra})")
    images = {}
    for u in tgt_sig.names:
        img = pullback_images[u]
        if img.sig != src_sig:
            raise SignatureMismatch(f"image of {u!r} is not over the source signature")
        wu = tgt_sig.weight_of(u)
        if wu != 0:
            base, _ = split_base(src_sig, img)
            if base:
                raise WeightError(
                    f"image of graded variable {u!r} has a base term; it must vanish on the zero section")
        for m in img.terms:
            got = _dot(src_sig.weights, m)
            if got != wu:
                raise WeightError(f"image of {u!r}: term {m} has weight {got}, expected {wu}")
        tag = meet_truncations(trunc, img.truncation)
        images[u] = img.retag(tag) if tag is not None else img
    return GradedMorphism(src_sig, tgt_sig, images, trunc)


def identity_morphism(sig: WeightSignature, trunc=None) -> GradedMorphism:
    return morphism_new(sig, sig, {n: GradedSeries.var(sig, n) for n in sig.names}, trunc)


def increment_names(sig: WeightSignature) -> tuple:
    names = tuple("d" + x for x in sig.zero_vars)
    clash = set(names) & set(sig.names)
    if clash:
        raise SignatureError(f"increment variable names clash with {sorted(clash)}")
    return names


def jet_signature(sig: WeightSignature) -> WeightSignature:
    return WeightSignature(sig.zero_vars + increment_names(sig), sig.graded_vars)


def jet_prolong(sig: WeightSignature, f: GradedSeries, order: int) -> GradedSeries:
    """Taylor expansion of the zero-weight dependence of ``f``.

    Each ``x^a`` becomes ``sum_k binom(a, k) x^(a-k) dx^k`` over multi-indices
    with ``|k| <= order``.  The result lives over :func:`jet_signature`.
    """
    if f.sig != sig:
        raise SignatureMismatch("series is over a different signature")
    if order < 0:
        raise GradedError("jet order must be nonnegative")
    jsig = jet_signature(sig)
    nz = len(sig.zero_vars)
    out = {}
    for m, c in f.terms.items():
        xa, rest = m[:nz], m[nz:]
        for ks in _multi_indices(xa, order):
            coeff = c
            for a, k in zip(xa, ks):
                coeff *= comb(a, k)
            jm = tuple(a - k for a, k in zip(xa, ks)) + tuple(ks) + rest
            out[jm] = out.get(jm, 0) + coeff
    return GradedSeries(jsig, out, f.truncation)


def _multi_indices(bounds, total):
    """All k with 0 <= k_i <= bounds_i and sum(k) <= total."""
    if not bounds:
        yield ()
        return
    for k in range(min(bounds[0], total) + 1):
        for rest in _multi_indices(bounds[1:], total - k):
            yield (k,) + rest


class _PowerCache:
    def __init__(self, sig, series, tag):
        self.sig = sig
        self.powers = [GradedSeries.constant(sig, 1, tag), series]

    def get(self, e):
        while len(self.powers) <= e:
            self.powers.append(series_mul(self.sig, self.powers[-1], self.powers[1]))
        return self.powers[e]


def _substitute(f: GradedSeries, images: list, src: WeightSignature, tag) -> GradedSeries:
    """Evaluate ``f`` at ``images`` (one series per variable of ``f``, in canonical order)."""
    caches = [_PowerCache(src, img.retag(tag) if tag else img, tag) for img in images]
    total = GradedSeries.zero(src, tag)
    for m, c in f.terms.items():
        term = GradedSeries.constant(src, c, tag)
        for cache, e in zip(caches, m):
            if e:
                term = series_mul(src, term, cache.get(e))
                if not term:
                    break
        if term:
            total = total + term
    return total


def morphism_apply(phi: GradedMorphism, f: GradedSeries) -> GradedSeries:
    """Pull ``f`` back along ``phi``.

    Graded variables are replaced by their images; each zero-weight variable
    ``x`` is replaced by its base part after prolonging ``f`` to jets, with the
    increment ``dx`` replaced by the nilpotent part.  Nilpotent parts have
    order >= 1 in both filtrations, so at truncation order ``p`` jets of order
    ``p - 1`` suffice.
    """
    if f.sig != phi.target:
        raise SignatureMismatch("series is not over the morphism's target signature")
    tag = meet_truncations(phi.truncation, f.truncation)
    tgt, src = phi.target, phi.source
    nz = len(tgt.zero_vars)
    if tag is not None:
        order = max(tag.order - 1, 0)
    else:
        order = max((sum(m[:nz]) for m in f.terms), default=0)
    jet = jet_prolong(tgt, f.untagged(), order)
    bases, nils = [], []
    for x in tgt.zero_vars:
        b, n = split_base(src, phi.images[x])
        bases.append(b)
        nils.append(n)
    graded = [phi.images[u] for u, _ in tgt.graded_vars]
    return _substitute(jet, bases + nils + graded, src, tag)


def morphism_compose(phi: GradedMorphism, psi: GradedMorphism) -> GradedMorphism:
    """``psi o phi`` for ``phi: A -> B`` and ``psi: B -> C``; pullbacks compose as phi* psi*."""
    if phi.target != psi.source:
        raise SignatureMismatch("middle signatures of the composition differ")
    tag = meet_truncations(phi.truncation, psi.truncation)
    images = {u: morphism_apply(phi, psi.images[u]) for u in psi.target.names}
    return morphism_new(phi.source, psi.target, images, tag)
