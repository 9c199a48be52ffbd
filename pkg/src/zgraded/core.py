"""Weighted supercommutative monomials and truncated series with exact coefficients.

A monomial is a tuple of exponents aligned with the signature's canonical
variable order (zero-weight variables first, then graded variables, each in
declaration order).  Odd variables (odd weight) carry exponent 0 or 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Mapping, NamedTuple, Optional, Sequence

from .errors import (
    FlavorMismatch,
    GradedError,
    SignatureError,
    SignatureMismatch,
    UnknownVariable,
)

Monomial = tuple  # tuple[int, ...] aligned with WeightSignature.names


class Flavor(str, Enum):
    F = "F"    # weight filtration: ideal generated by weight >= p
    UF = "UF"  # order filtration: powers of the augmentation ideal

    def __str__(self):
        return self.value


class Truncation(NamedTuple):
    flavor: Flavor
    order: int

    def __str__(self):
        return f"{self.flavor}:{self.order}"


def as_truncation(t) -> Optional[Truncation]:
    if t is None:
        return None
    flavor, order = t
    try:
        flavor = Flavor(flavor)
    except ValueError:
        raise GradedError(f"unknown filtration flavor {flavor!r}") from None
    if int(order) != order or order < 0:
        raise GradedError(f"truncation order must be a nonnegative integer, got {order!r}")
    return Truncation(flavor, int(order))


def meet_truncations(*tags) -> Optional[Truncation]:
    """Coarsest of several truncation tags; ``None`` stands for no truncation."""
    result = None
    for t in tags:
        if t is None:
            continue
        if result is None:
            result = t
        elif result.flavor != t.flavor:
            raise FlavorMismatch(f"cannot combine {result.flavor} and {t.flavor} truncations")
        elif t.order < result.order:
            result = t
    return result


@dataclass(frozen=True)
class WeightSignature:
    zero_vars: tuple = ()
    graded_vars: tuple = ()  # ((name, weight), ...)

    names: tuple = field(init=False, repr=False, compare=False)
    weights: tuple = field(init=False, repr=False, compare=False)
    index: dict = field(init=False, repr=False, compare=False)
    odd_indices: tuple = field(init=False, repr=False, compare=False)
    pos_indices: tuple = field(init=False, repr=False, compare=False)
    neg_indices: tuple = field(init=False, repr=False, compare=False)
    order_weights: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        zero = tuple(self.zero_vars)
        graded = tuple((str(n), int(w)) for n, w in self.graded_vars)
        object.__setattr__(self, "zero_vars", zero)
        object.__setattr__(self, "graded_vars", graded)
        names = zero + tuple(n for n, _ in graded)
        seen = set()
        for n in names:
            if n in seen:
                raise SignatureError(f"duplicate variable name {n!r}")
            seen.add(n)
        for n, w in graded:
            if w == 0:
                raise SignatureError(f"graded variable {n!r} has zero weight")
        weights = (0,) * len(zero) + tuple(w for _, w in graded)
        set_ = lambda k, v: object.__setattr__(self, k, v)
        set_("names", names)
        set_("weights", weights)
        set_("index", {n: i for i, n in enumerate(names)})
        set_("odd_indices", tuple(i for i, w in enumerate(weights) if w % 2))
        set_("pos_indices", tuple(i for i, w in enumerate(weights) if w > 0))
        set_("neg_indices", tuple(i for i, w in enumerate(weights) if w < 0))
        set_("order_weights", {
            Flavor.F: tuple(w if w > 0 else 0 for w in weights),
            Flavor.UF: tuple(1 if w else 0 for w in weights),
        })

    def __len__(self):
        return len(self.names)

    @property
    def alpha(self) -> tuple:
        return tuple(self.weights[i] for i in self.pos_indices)

    @property
    def beta(self) -> tuple:
        return tuple(-self.weights[i] for i in self.neg_indices)

    @property
    def alpha_min(self):
        return min(self.alpha, default=None)

    @property
    def alpha_max(self):
        return max(self.alpha, default=None)

    @property
    def beta_min(self):
        return min(self.beta, default=None)

    @property
    def beta_max(self):
        return max(self.beta, default=None)

    @property
    def kappa(self):
        if not self.alpha or not self.beta:
            return None
        return min(self.alpha_min, self.beta_min)

    def weight_of(self, name: str) -> int:
        return self.weights[self.position(name)]

    def parity_of(self, name: str) -> int:
        return self.weight_of(name) % 2

    def position(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise UnknownVariable(name) from None

    @property
    def one(self) -> Monomial:
        return (0,) * len(self.names)

    def monomial(self, exponents: Mapping[str, int] = (), **kw) -> Monomial:
        """Build a canonical monomial from a name -> exponent mapping."""
        exps = [0] * len(self.names)
        for name, e in dict(exponents, **kw).items():
            exps[self.position(name)] += e
        return self.check_monomial(tuple(exps))

    def check_monomial(self, m) -> Monomial:
        m = tuple(m)
        if len(m) != len(self.names):
            raise SignatureMismatch(
                f"monomial has {len(m)} exponents, signature has {len(self.names)} variables")
        if any(e < 0 for e in m):
            raise GradedError(f"negative exponent in monomial {m}")
        for i in self.odd_indices:
            if m[i] > 1:
                raise GradedError(f"odd variable {self.names[i]!r} has exponent {m[i]} > 1")
        return m

    def extended(self, zero_vars=(), graded_vars=()) -> "WeightSignature":
        return WeightSignature(self.zero_vars + tuple(zero_vars), self.graded_vars + tuple(graded_vars))


def signature_new(zero_vars: Sequence[str] = (), graded_vars: Sequence = ()) -> WeightSignature:
    return WeightSignature(tuple(zero_vars), tuple(graded_vars))


def mono_weight(sig: WeightSignature, m: Monomial) -> int:
    if len(m) != len(sig.weights):
        raise SignatureMismatch("monomial does not match signature")
    return sum(e * w for e, w in zip(m, sig.weights))


def mono_mul(sig: WeightSignature, m1: Monomial, m2: Monomial):
    """Product of two monomials as ``(sign, monomial)``, or ``None`` when it vanishes.

    The sign counts the odd-odd transpositions needed to bring the
    concatenation ``m1 m2`` into canonical order.
    """
    if len(m1) != len(sig.weights) or len(m2) != len(sig.weights):
        raise SignatureMismatch("monomial does not match signature")
    return _mono_mul(sig.odd_indices, m1, m2)


def _mono_mul(odd, m1, m2):
    swaps = 0
    passed = 0  # odd factors of m1 at positions > current, scanned right to left
    for i in reversed(odd):
        if m2[i]:
            if m1[i]:
                return None
            swaps += passed
        if m1[i]:
            passed += 1
    prod = tuple(a + b for a, b in zip(m1, m2))
    return (-1 if swaps & 1 else 1), prod


class GradedSeries:
    """Finite sum of monomials with nonzero rational coefficients.

    With a truncation tag ``(flavor, p)`` the series stands for a coset modulo
    the p-th filtration ideal; the stored terms form the normal representative
    (every monomial has order < p).
    """

    __slots__ = ("sig", "terms", "truncation")

    def __init__(self, sig: WeightSignature, terms: Mapping = None, truncation=None):
        self.sig = sig
        self.truncation = as_truncation(truncation)
        clean = {}
        if terms:
            if self.truncation is not None:
                ow = sig.order_weights[self.truncation.flavor]
                cut = self.truncation.order
            for m, c in terms.items():
                c = Fraction(c)
                if not c:
                    continue
                m = sig.check_monomial(m)
                if self.truncation is not None and _dot(ow, m) >= cut:
                    continue
                clean[m] = clean.get(m, 0) + c
                if not clean[m]:
                    del clean[m]
        self.terms = clean

    @classmethod
    def _raw(cls, sig, terms, truncation):
        # terms already canonical, nonzero and below the truncation
        obj = cls.__new__(cls)
        obj.sig = sig
        obj.terms = terms
        obj.truncation = truncation
        return obj

    @classmethod
    def zero(cls, sig, truncation=None):
        return cls(sig, {}, truncation)

    @classmethod
    def constant(cls, sig, c, truncation=None):
        return cls(sig, {sig.one: c}, truncation)

    @classmethod
    def var(cls, sig, name, truncation=None):
        return cls(sig, {sig.monomial({name: 1}): 1}, truncation)

    @classmethod
    def from_monomial(cls, sig, m, c=1, truncation=None):
        return cls(sig, {m: c}, truncation)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def items(self):
        return self.terms.items()

    def untagged(self) -> "GradedSeries":
        return GradedSeries._raw(self.sig, self.terms, None)

    def retag(self, truncation) -> "GradedSeries":
        """Re-truncate at ``truncation`` (``None`` drops the tag, keeping terms)."""
        return GradedSeries(self.sig, self.terms, truncation)

    def scale(self, c) -> "GradedSeries":
        c = Fraction(c)
        if not c:
            return GradedSeries.zero(self.sig, self.truncation)
        return GradedSeries._raw(self.sig, {m: c * v for m, v in self.terms.items()}, self.truncation)

    def __eq__(self, other):
        if not isinstance(other, GradedSeries):
            return NotImplemented
        return (self.sig == other.sig and self.truncation == other.truncation
                and self.terms == other.terms)

    __hash__ = None

    def __neg__(self):
        return self.scale(-1)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return series_linear(1, self, 1, other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return series_linear(1, self, -1, other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return series_linear(1, other, -1, self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, GradedSeries):
            return NotImplemented
        return series_mul(self.sig, self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise GradedError("series powers need a nonnegative integer exponent")
        result = GradedSeries.constant(self.sig, 1, self.truncation)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def _coerce(self, other):
        if isinstance(other, GradedSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return GradedSeries.constant(self.sig, other)
        return NotImplemented

    def __repr__(self):
        from .parsing import format_expr
        return f"GradedSeries({format_expr(self.sig, self)!r})"


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _check_same(sig, *series):
    for s in series:
        if s.sig != sig:
            raise SignatureMismatch("series are over different signatures")


def series_linear(a, f: GradedSeries, b, g: GradedSeries) -> GradedSeries:
    """``a*f + b*g`` truncated to the coarser of the two tags."""
    _check_same(f.sig, g)
    tag = meet_truncations(f.truncation, g.truncation)
    a, b = Fraction(a), Fraction(b)
    out = {}
    for s, c in ((f, a), (g, b)):
        if not c:
            continue
        for m, v in s.terms.items():
            out[m] = out.get(m, 0) + c * v
    out = {m: v for m, v in out.items() if v}
    if tag is not None:
        ow = f.sig.order_weights[tag.flavor]
        out = {m: v for m, v in out.items() if _dot(ow, m) < tag.order}
    return GradedSeries._raw(f.sig, out, tag)


def series_mul(sig: WeightSignature, f: GradedSeries, g: GradedSeries) -> GradedSeries:
    _check_same(sig, f, g)
    tag = meet_truncations(f.truncation, g.truncation)
    odd = sig.odd_indices
    out = {}
    if tag is not None:
        ow = sig.order_weights[tag.flavor]
        cut = tag.order
        gterms = [(m, c, _dot(ow, m)) for m, c in g.terms.items()]
    else:
        gterms = [(m, c, 0) for m, c in g.terms.items()]
    for m1, c1 in f.terms.items():
        o1 = _dot(ow, m1) if tag is not None else 0
        for m2, c2, o2 in gterms:
            if tag is not None and o1 + o2 >= cut:
                continue
            prod = _mono_mul(odd, m1, m2)
            if prod is None:
                continue
            sign, m = prod
            out[m] = out.get(m, 0) + sign * c1 * c2
    out = {m: v for m, v in out.items() if v}
    return GradedSeries._raw(sig, out, tag)


def weight_component(sig: WeightSignature, f: GradedSeries, r: int) -> GradedSeries:
    _check_same(sig, f)
    w = sig.weights
    return GradedSeries._raw(
        sig, {m: c for m, c in f.terms.items() if _dot(w, m) == r}, f.truncation)


def weights_present(f: GradedSeries) -> list:
    w = f.sig.weights
    return sorted({_dot(w, m) for m in f.terms})


def partial_derivative(sig: WeightSignature, v: str, f: GradedSeries) -> GradedSeries:
    """Graded left partial derivative with respect to ``v``.

    The variable is first commuted to the front of each monomial, picking up
    a sign for every odd factor it passes when ``v`` is itself odd.
    """
    _check_same(sig, f)
    i = sig.position(v)
    odd_v = sig.weights[i] % 2 == 1
    before = [j for j in sig.odd_indices if j < i]
    out = {}
    for m, c in f.terms.items():
        e = m[i]
        if not e:
            continue
        coeff = c * e
        if odd_v and sum(m[j] for j in before) % 2:
            coeff = -coeff
        dm = m[:i] + (e - 1,) + m[i + 1:]
        out[dm] = coeff
    tag = f.truncation
    if tag is not None:
        drop = sig.order_weights[tag.flavor][i]
        tag = Truncation(tag.flavor, max(tag.order - drop, 0))
    return GradedSeries(sig, out, tag)
