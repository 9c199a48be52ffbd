"""Nonnegative solutions of ``alpha.p - beta.q = r`` and the weight-0 normal form.

Solution vectors are split into the positive-weight part ``p`` and the
negative-weight part ``q``.  Minimal solutions are found by a defect-directed
completion: starting from the zero vector, a ``p`` coordinate is raised while
the value is below ``r`` and a ``q`` coordinate while it is above, one total
degree at a time, discarding vectors that dominate a solution already found.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from typing import NamedTuple, Optional

from .core import GradedSeries, Truncation, WeightSignature, _dot, _mono_mul
from .errors import GradedError, NotHomogeneous, SignatureMismatch


class SolutionVector(NamedTuple):
    p: tuple
    q: tuple

    def __str__(self):
        return f"p=({','.join(map(str, self.p))}) q=({','.join(map(str, self.q))})"

    @property
    def flat(self) -> tuple:
        return self.p + self.q

    def value(self, alpha, beta) -> int:
        return _dot(alpha, self.p) - _dot(beta, self.q)


def canonical_order(vectors) -> list:
    """Stable listing order: descending lexicographic on ``p + q``."""
    return sorted(vectors, key=lambda v: v.flat, reverse=True)


def _check_weights(alpha, beta):
    alpha, beta = tuple(int(a) for a in alpha), tuple(int(b) for b in beta)
    if any(a <= 0 for a in alpha + beta):
        raise GradedError("alpha and beta entries must be positive integers")
    return alpha, beta


def _dominates(u, v):
    return all(a >= b for a, b in zip(u, v))


@lru_cache(maxsize=4096)
def _complete(alpha, beta, r, nonzero):
    n, m = len(alpha), len(beta)
    zero = (0,) * (n + m)
    if r == 0 and not nonzero:
        return (zero,)
    w = alpha + tuple(-b for b in beta)
    # along a path to a minimal solution the defect never repeats
    max_level = abs(r) + max(alpha, default=0) + max(beta, default=0) + 1
    found = []
    frontier = {zero}
    for _ in range(max_level):
        nxt = set()
        for v in frontier:
            d = _dot(w, v) - r
            if d < 0:
                steps = range(n)
            elif d > 0:
                steps = range(n, n + m)
            else:
                steps = range(n + m)  # only the zero vector in the homogeneous case
            for i in steps:
                u = v[:i] + (v[i] + 1,) + v[i + 1:]
                if not any(_dominates(u, s) for s in found):
                    nxt.add(u)
        level_solutions = [u for u in nxt if _dot(w, u) == r]
        found.extend(level_solutions)
        frontier = nxt.difference(level_solutions)
        if not frontier:
            break
    return tuple(found)


def _to_vectors(flat, n):
    return canonical_order(SolutionVector(v[:n], v[n:]) for v in flat)


def hilbert_basis(alpha, beta) -> list:
    """Componentwise-minimal nonzero solutions of ``alpha.p = beta.q``."""
    alpha, beta = _check_weights(alpha, beta)
    return _to_vectors(_complete(alpha, beta, 0, nonzero=True), len(alpha))


def minimal_solutions(alpha, beta, r: int) -> list:
    """Componentwise-minimal solutions of ``alpha.p - beta.q = r`` (``[0]`` for ``r = 0``)."""
    alpha, beta = _check_weights(alpha, beta)
    return _to_vectors(_complete(alpha, beta, int(r), nonzero=False), len(alpha))


@dataclass(frozen=True)
class MinimalSolutionSet:
    alpha: tuple
    beta: tuple
    r: int
    particular: tuple = field(init=False)
    homogeneous_basis: tuple = field(init=False)

    def __post_init__(self):
        alpha, beta = _check_weights(self.alpha, self.beta)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "particular", tuple(minimal_solutions(alpha, beta, self.r)))
        object.__setattr__(self, "homogeneous_basis", tuple(hilbert_basis(alpha, beta)))


def decompose_solution(sol, basis: MinimalSolutionSet):
    """Split ``sol`` into a minimal particular solution plus basis elements.

    Returns ``(particular, multiplicities)`` with the multiplicity vector over
    ``basis.homogeneous_basis`` lexicographically largest.  That choice is a
    greedy pass: take each basis element as often as it fits.  What remains
    is a solution lying above no basis element, hence (by completeness of the
    basis) a minimal particular solution.
    """
    sol = SolutionVector(tuple(sol[0]), tuple(sol[1]))
    if len(sol.p) != len(basis.alpha) or len(sol.q) != len(basis.beta):
        raise GradedError("solution vector has the wrong shape")
    if any(x < 0 for x in sol.flat):
        raise GradedError("solution vector has a negative entry")
    if sol.value(basis.alpha, basis.beta) != basis.r:
        raise GradedError(f"{sol} does not solve the equation for r={basis.r}")
    parts = {v.flat: v for v in basis.particular}
    rest = sol.flat
    counts = []
    for g in basis.homogeneous_basis:
        c = min((a // b for a, b in zip(rest, g.flat) if b), default=0)
        if c:
            rest = tuple(a - c * b for a, b in zip(rest, g.flat))
        counts.append(c)
    if rest not in parts:
        raise GradedError(f"remainder {rest} of {sol} is not minimal")  # contradicts completeness
    return parts[rest], tuple(counts)


@dataclass(frozen=True)
class BorelNormalForm:
    """``f = sum_{(p,q)} h_pq(x, z) xi^p eta^q`` with ``z_k = xi^p_k eta^q_k``.

    ``coefficients`` maps each particular solution to a series over
    ``coeff_sig`` (zero-weight variables of the source plus one z-variable per
    Hilbert basis element, in basis order).
    """

    sig: WeightSignature
    weight: int
    basis: tuple
    particular: tuple
    coeff_sig: WeightSignature
    coefficients: dict
    truncation: Optional[Truncation] = None

    @property
    def z_names(self) -> tuple:
        return self.coeff_sig.zero_vars[len(self.sig.zero_vars):]


def z_variable_names(sig: WeightSignature, count: int) -> tuple:
    prefix = "z"
    taken = set(sig.names)
    while any(f"{prefix}{k}" in taken for k in range(1, count + 1)):
        prefix = "_" + prefix
    return tuple(f"{prefix}{k}" for k in range(1, count + 1))


def _split(sig, m):
    zero = m[:len(sig.zero_vars)]
    p = tuple(m[i] for i in sig.pos_indices)
    q = tuple(m[i] for i in sig.neg_indices)
    return zero, p, q


def _graded_monomial(sig, vec):
    exps = [0] * len(sig.names)
    for i, e in zip(sig.pos_indices, vec.p):
        exps[i] = e
    for i, e in zip(sig.neg_indices, vec.q):
        exps[i] = e
    return tuple(exps)


def _expand_term(sig, xpart, zpowers, basis_monos, part_mono):
    """Ordered product x^a * prod_k (basis_k)^{c_k} * xi^p eta^q as (sign, monomial) or None."""
    odd = sig.odd_indices
    acc = (1, xpart + (0,) * (len(sig.names) - len(xpart)))
    factors = []
    for c, bm in zip(zpowers, basis_monos):
        factors += [bm] * c
    factors.append(part_mono)
    for fm in factors:
        prod = _mono_mul(odd, acc[1], fm)
        if prod is None:
            return None
        acc = (acc[0] * prod[0], prod[1])
    return acc


def borel_normal_form(sig: WeightSignature, f: GradedSeries, r: int) -> BorelNormalForm:
    if f.sig != sig:
        raise SignatureMismatch("series is over a different signature")
    w = sig.weights
    for m in f.terms:
        if _dot(w, m) != r:
            raise NotHomogeneous(f"term {m} has weight {_dot(w, m)}, expected {r}")
    mss = MinimalSolutionSet(sig.alpha, sig.beta, r)
    basis = mss.homogeneous_basis
    znames = z_variable_names(sig, len(basis))
    coeff_sig = WeightSignature(sig.zero_vars + znames, ())
    basis_monos = [_graded_monomial(sig, b) for b in basis]
    nz = len(sig.zero_vars)
    buckets = {v: {} for v in mss.particular}
    for m, c in f.terms.items():
        xpart, p, q = _split(sig, m)
        part, counts = decompose_solution((p, q), mss)
        prod = _expand_term(sig, xpart, counts, basis_monos, _graded_monomial(sig, part))
        if prod is None or prod[1] != m:
            raise AssertionError(f"normal form rewrite failed on {m}")
        key = xpart + counts
        bucket = buckets[part]
        bucket[key] = bucket.get(key, 0) + prod[0] * c
    coefficients = {v: GradedSeries(coeff_sig, buckets[v]) for v in mss.particular}
    assert len(coeff_sig.names) == nz + len(basis)
    return BorelNormalForm(sig, r, basis, mss.particular, coeff_sig, coefficients, f.truncation)


def expand_normal_form(sig: WeightSignature, nf: BorelNormalForm) -> GradedSeries:
    if nf.sig != sig:
        raise SignatureMismatch("normal form is over a different signature")
    nz = len(sig.zero_vars)
    basis_monos = [_graded_monomial(sig, b) for b in nf.basis]
    out = {}
    for part, h in nf.coefficients.items():
        if h.sig != nf.coeff_sig:
            raise SignatureMismatch("coefficient series over the wrong signature")
        if part not in nf.particular:
            raise GradedError(f"{part} is not a minimal particular solution")
        part_mono = _graded_monomial(sig, part)
        for hm, c in h.terms.items():
            prod = _expand_term(sig, hm[:nz], hm[nz:], basis_monos, part_mono)
            if prod is None:
                continue
            sign, m = prod
            out[m] = out.get(m, 0) + sign * Fraction(c)
    return GradedSeries(sig, out, nf.truncation)
