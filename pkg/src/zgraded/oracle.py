"""Deliberately naive reference computations.

These decide questions straight from the definitions and must not call the
code they are used to check (filtration orders, the completion search,
morphism substitution).
"""

from __future__ import annotations

import itertools

from .core import GradedSeries, WeightSignature, meet_truncations, series_mul


def _factors(sig: WeightSignature, m):
    """The nonzero-weight factors of ``m`` as a flat list of weights."""
    out = []
    for (name, w) in sig.graded_vars:
        out += [w] * m[sig.names.index(name)]
    return out


def oracle_ideal_membership(sig: WeightSignature, m, flavor, p: int) -> bool:
    flavor = str(flavor)
    factors = _factors(sig, m)
    if flavor == "UF":
        return len(factors) >= p
    if flavor != "F":
        raise ValueError(f"unknown flavor {flavor!r}")
    # m lies in the ideal iff some divisor is homogeneous of weight >= p
    for mask in itertools.product((0, 1), repeat=len(factors)):
        if sum(w for w, take in zip(factors, mask) if take) >= p:
            return True
    return False


def oracle_membership_thresholds(sig: WeightSignature, box: int, zero_box: int = 0):
    """Yield ``(m, top_F, top_UF)`` for every legal monomial with exponents <= ``box``.

    ``top_F`` is the largest weight of a sub-multiset of the nonzero-weight
    factors, so ``m`` is in the F-ideal of index ``p`` iff ``p <= top_F``;
    ``top_UF`` is the number of nonzero-weight factors.  Sub-multiset weights
    are enumerated as bitsets, extending one variable at a time, so that
    monomials sharing a prefix share the work.  Zero-weight variables range
    up to ``zero_box``.
    """
    weights = [0] * len(sig.zero_vars) + [w for _, w in sig.graded_vars]
    caps = []
    for w in weights:
        if w == 0:
            caps.append(zero_box)
        elif w % 2:
            caps.append(min(box, 1))
        else:
            caps.append(box)
    offset = sum(-w * c for w, c in zip(weights, caps) if w < 0)
    n = len(weights)
    exps = [0] * n

    def walk(i, sums, count):
        if i == n:
            yield tuple(exps), sums.bit_length() - 1 - offset, count
            return
        w = weights[i]
        shifted = sums
        reach = sums
        for e in range(caps[i] + 1):
            exps[i] = e
            yield from walk(i + 1, reach, count + (e if w else 0))
            if w > 0:
                shifted <<= w
            elif w < 0:
                shifted >>= -w
            reach |= shifted
        exps[i] = 0

    yield from walk(0, 1 << offset, 0)


def oracle_minimal_solutions(alpha, beta, r: int, box: int) -> set:
    """Minimal nonnegative solutions of ``alpha.p - beta.q = r`` inside ``[0, box]^(n+m)``.

    Returns a set of ``(p, q)`` tuples; the zero vector is excluded when ``r == 0``.
    """
    n = len(alpha)
    sols = []
    for v in itertools.product(range(box + 1), repeat=n + len(beta)):
        if sum(a * x for a, x in zip(alpha, v[:n])) - sum(b * y for b, y in zip(beta, v[n:])) != r:
            continue
        if r == 0 and not any(v):
            continue
        sols.append(v)
    minimal = set()
    for v in sols:
        if not any(u != v and all(a <= b for a, b in zip(u, v)) for u in sols):
            minimal.add((v[:n], v[n:]))
    return minimal


def oracle_minimal_solutions_grid(alpha, beta, rs, box: int) -> dict:
    """Vectorized version of :func:`oracle_minimal_solutions` for up to 32 values of ``r``.

    On the full grid ``[0, box]^(n+m)`` a vector is minimal for ``r`` iff it
    solves the equation and no solution for ``r`` lies strictly below it.
    "Some solution for r lies weakly below" is a prefix-OR of per-cell bit
    masks along every axis.
    """
    import numpy as np

    rs = sorted(set(rs))
    if len(rs) > 32:
        raise ValueError("at most 32 right-hand sides per call")
    n, m = len(alpha), len(beta)
    dims = n + m
    result = {r: set() for r in rs}
    if dims == 0:
        return result  # only the zero vector, never minimal among nonzero solutions
    lo, hi = rs[0], rs[-1]
    axis = np.arange(box + 1, dtype=np.int32)
    value = np.zeros((1,) * dims, dtype=np.int32)
    for k, c in enumerate(list(alpha) + [-b for b in beta]):
        shape = [1] * dims
        shape[k] = box + 1
        value = value + c * axis.reshape(shape)
    wanted = np.zeros(hi - lo + 1, dtype=np.uint32)
    for i, r in enumerate(rs):
        wanted[r - lo] = np.uint32(1) << np.uint32(i)
    inside = (value >= lo) & (value <= hi)
    mask = np.where(inside, wanted[np.clip(value - lo, 0, hi - lo)], np.uint32(0))
    if 0 in rs:
        mask[(0,) * dims] &= ~wanted[0 - lo]
    below = mask
    for k in range(dims):
        below = np.bitwise_or.accumulate(below, axis=k)
    strictly = np.zeros_like(mask)
    for k in range(dims):
        dst = [slice(None)] * dims
        src = [slice(None)] * dims
        dst[k] = slice(1, None)
        src[k] = slice(None, -1)
        strictly[tuple(dst)] |= below[tuple(src)]
    minimal = mask & ~strictly
    for cell in zip(*np.nonzero(minimal)):
        bits = int(minimal[cell])
        vec = tuple(int(x) for x in cell)
        for i, r in enumerate(rs):
            if bits >> i & 1:
                result[r].add((vec[:n], vec[n:]))
    return result


def oracle_substitute(phi, f: GradedSeries) -> GradedSeries:
    """Replace every variable of ``f`` by its full pullback image and multiply out."""
    if f.sig != phi.target:
        raise ValueError("series is not over the morphism's target signature")
    src = phi.source
    total = GradedSeries.zero(src)
    for m, c in f.terms.items():
        term = GradedSeries.constant(src, c)
        for name, e in zip(f.sig.names, m):
            for _ in range(e):
                term = series_mul(src, term, phi.images[name].untagged())
        total = total + term
    tag = meet_truncations(phi.truncation, f.truncation)
    return total.retag(tag) if tag is not None else total
