"""Brute-force reference computations, independent of the library's LR code."""

from __future__ import annotations

from collections import Counter
from itertools import combinations, product


def ssyt(shape, k):
    """All semistandard fillings of ``shape`` with entries 1..k, as flat lists."""
    cells = [(i, j) for i, row in enumerate(shape) for j in range(row)]
    out = []

    def rec(pos, filling):
        if pos == len(cells):
            out.append(dict(filling))
            return
        i, j = cells[pos]
        lo = 1
        if j > 0:
            lo = max(lo, filling[(i, j - 1)])
        if i > 0:
            lo = max(lo, filling[(i - 1, j)] + 1)
        for v in range(lo, k + 1):
            filling[(i, j)] = v
            rec(pos + 1, filling)
            del filling[(i, j)]

    rec(0, {})
    return out


def schur_poly(shape, k) -> Counter:
    """s_shape(x_1..x_k) as a Counter exponent-tuple -> coefficient."""
    poly = Counter()
    if len(shape) > k:
        return poly
    for t in ssyt(shape, k):
        exps = [0] * k
        for v in t.values():
            exps[v - 1] += 1
        poly[tuple(exps)] += 1
    return poly


def poly_mul(a: Counter, b: Counter) -> Counter:
    out = Counter()
    for ea, ca in a.items():
        for eb, cb in b.items():
            out[tuple(x + y for x, y in zip(ea, eb))] += ca * cb
    return out


def schur_decompose(poly: Counter, k: int) -> dict:
    """Expand a symmetric polynomial in k variables in the Schur basis by peeling
    off lex-leading monomials."""
    poly = Counter({e: c for e, c in poly.items() if c})
    out = {}
    while poly:
        lead = max(poly)
        c = poly[lead]
        assert list(lead) == sorted(lead, reverse=True), "leading exponent must be a partition"
        nu = tuple(x for x in lead if x)
        out[nu] = c
        for e, d in schur_poly(nu, k).items():
            poly[e] -= c * d
            if poly[e] == 0:
                del poly[e]
    return out


def oracle_product(lambdas, k) -> dict:
    poly = Counter({(0,) * k: 1})
    for lam in lambdas:
        poly = poly_mul(poly, schur_poly(lam, k))
    return schur_decompose(poly, k)


def oracle_lr_truncated(lam, mu, rows, cols) -> dict:
    """Schur expansion of s_lam s_mu restricted to the rows x cols box."""
    full = oracle_product([lam, mu], rows)
    return {nu: c for nu, c in full.items() if not nu or nu[0] <= cols}


def partitions_in_box(rows, cols):
    def rec(r, top):
        if r == 0:
            yield ()
            return
        for first in range(top, -1, -1):
            for rest in rec(r - 1, first):
                yield (first,) + rest

    for p in rec(rows, cols):
        yield tuple(x for x in p if x)


def lam_of(subset):
    t = len(subset)
    return tuple(x for x in (subset[t - 1 - k] - (t - k) for k in range(t)) if x)


def brute_point_class_sequences(n, t, m):
    """R^n_t(m) by exhaustive search with the monomial oracle; no degree pruning."""
    subsets = list(combinations(range(1, n + 1), t))
    rect = tuple([n - t] * t) if n > t else ()
    out = []
    cache = {}
    for seq in product(subsets, repeat=m):
        key = tuple(sorted(lam_of(s) for s in seq))
        if key not in cache:
            exp = oracle_product(key, t)
            exp = {nu: c for nu, c in exp.items() if not nu or nu[0] <= n - t}
            cache[key] = exp
        if cache[key].get(rect, 0) == 1 and sum(map(sum, key)) == t * (n - t):
            out.append(seq)
    return out
