"""Enumeration of point-class index sequences and assembly of inequality systems.

For a problem of size (n, m, r) the system consists of

* the ordering rows  alpha_i(s) - alpha_{i+1}(s) >= 0,
* one "major" row  sum_s sum_{i in I(s)} alpha_i(s) >= 0  per sequence in R^n(m),
* one "rank" row   sum_s sum_{p in P(s)} alpha_{n+1-p}(s) <= 0  per sequence
  in R^{n-r}(m).

Rank rows keep their P-subsets in the ambient [n-r]; the n+1-p reindexing is
applied only when a coefficient vector is materialized.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Iterator, Sequence

from .schur import SchubertIndex, is_nonzero_product, is_point_class

MAJOR = "major"
RANK = "rank"
DAGGER = "dagger"

MAX_N = 8
DEFAULT_MAX_CANDIDATES = 10**7
ENV_MAX_CANDIDATES = "SPECTRAL_HORN_MAX_CANDIDATES"

Sequence_ = tuple[SchubertIndex, ...]


class GuardrailError(ValueError):
    """Raised when an enumeration would exceed the desk-scale limits."""


@dataclass(frozen=True)
class HornInequality:
    kind: str
    t: int
    subsets: Sequence_
    n: int
    m: int
    r: int

    def __post_init__(self) -> None:
        if self.kind not in (MAJOR, RANK):
            raise ValueError(f"unknown inequality kind {self.kind!r}")
        ambient = self.n if self.kind == MAJOR else self.n - self.r
        if len(self.subsets) != self.m:
            raise ValueError("need one subset per factor")
        for sub in self.subsets:
            if sub.ambient_n != ambient or sub.t != self.t:
                raise ValueError(f"subset {sub} incompatible with {self.kind} row of size t={self.t} in [{ambient}]")

    @property
    def ambient(self) -> int:
        return self.n if self.kind == MAJOR else self.n - self.r

    def sort_key(self) -> tuple:
        return (self.t, tuple(s.elements for s in self.subsets))

    def positions(self) -> list[tuple[int, int]]:
        """(s, i) entries of alpha that appear in the row, 1-based."""
        out = []
        for s, sub in enumerate(self.subsets, start=1):
            for p in sub.elements:
                out.append((s, p) if self.kind == MAJOR else (s, self.n + 1 - p))
        return out

    def __str__(self) -> str:
        letter = "I" if self.kind == MAJOR else "P"
        parts = " ".join(f"{letter}{s}={sub}" for s, sub in enumerate(self.subsets, start=1))
        return f"{self.kind} t={self.t} {parts}"


@dataclass(frozen=True)
class Row:
    """One linear constraint coeffs . alpha >= 0 over the flattened m*n variables."""

    id: str
    kind: str
    coeffs: tuple[Fraction, ...]
    source: object = None


def flat(s: int, i: int, n: int) -> int:
    return (s - 1) * n + (i - 1)


def coefficient_vector(ineq, n: int | None = None, m: int | None = None) -> tuple[Fraction, ...]:
    """Coefficient vector of a row, oriented so the constraint reads c . alpha >= 0.

    ``ineq`` is a HornInequality or a dagger position ``(s, i)``; the latter
    needs ``n`` and ``m``.
    """
    if isinstance(ineq, HornInequality):
        n, m = ineq.n, ineq.m
        vec = [Fraction(0)] * (m * n)
        sign = 1 if ineq.kind == MAJOR else -1
        for s, i in ineq.positions():
            vec[flat(s, i, n)] += sign
        return tuple(vec)
    s, i = ineq
    if n is None or m is None:
        raise ValueError("dagger rows need n and m")
    if not (1 <= s <= m and 1 <= i < n):
        raise ValueError(f"no dagger row ({s}, {i}) for n={n}, m={m}")
    vec = [Fraction(0)] * (m * n)
    vec[flat(s, i, n)] = Fraction(1)
    vec[flat(s, i + 1, n)] = Fraction(-1)
    return tuple(vec)


@dataclass
class InequalitySystem:
    n: int
    m: int
    r: int
    dagger_rows: list[tuple[int, int]]
    majors: list[HornInequality]
    rank_bounds: list[HornInequality]
    extra_rows: list[Row] = field(default_factory=list)

    def rows(self, include_dagger: bool = True) -> list[Row]:
        out = []
        if include_dagger:
            for s, i in self.dagger_rows:
                out.append(Row(f"dagger:{s}:{i}", DAGGER, coefficient_vector((s, i), self.n, self.m), (s, i)))
        for k, ineq in enumerate(self.majors, start=1):
            out.append(Row(f"major:{k}", MAJOR, coefficient_vector(ineq), ineq))
        for k, ineq in enumerate(self.rank_bounds, start=1):
            out.append(Row(f"rank:{k}", RANK, coefficient_vector(ineq), ineq))
        out.extend(self.extra_rows)
        return out

    def row(self, row_id: str) -> Row:
        for row in self.rows():
            if row.id == row_id:
                return row
        raise KeyError(row_id)

    def inequalities(self) -> list[HornInequality]:
        return self.majors + self.rank_bounds


def dagger_positions(n: int, m: int) -> list[tuple[int, int]]:
    return [(s, i) for s in range(1, m + 1) for i in range(1, n)]


def max_candidates() -> int:
    value = os.environ.get(ENV_MAX_CANDIDATES)
    return int(value) if value else DEFAULT_MAX_CANDIDATES


def _check_range(n: int, t: int, m: int) -> None:
    if n < 1 or not 1 <= t <= n or m < 1:
        raise ValueError(f"invalid range n={n}, t={t}, m={m}")


def _guard(n: int, t: int, m: int, allow_large: bool) -> None:
    if allow_large:
        return
    if n > MAX_N:
        raise GuardrailError(f"n={n} exceeds desk-scale limit {MAX_N}; pass allow_large=True to override")
    limit = max_candidates()
    if comb(n, t) ** m > limit:
        raise GuardrailError(
            f"C({n},{t})^{m} candidates exceed {limit}; set {ENV_MAX_CANDIDATES} or pass allow_large=True"
        )


def _sequences(n: int, t: int, m: int, exact: bool) -> Iterator[Sequence_]:
    """Subset sequences in lexicographic order whose total Schubert degree is
    exactly (or at most) t(n-t)."""
    subsets = [SchubertIndex(n, c) for c in combinations(range(1, n + 1), t)]
    base = t * (t + 1) // 2
    degree = {sub: sum(sub.elements) - base for sub in subsets}
    top = t * (n - t)

    def rec(prefix: list[SchubertIndex], used: int) -> Iterator[Sequence_]:
        remaining = m - len(prefix)
        if remaining == 0:
            if not exact or used == top:
                yield tuple(prefix)
            return
        for sub in subsets:
            d = used + degree[sub]
            if d > top:
                continue
            if exact and d + (remaining - 1) * top < top:
                continue
            prefix.append(sub)
            yield from rec(prefix, d)
            prefix.pop()

    yield from rec([], 0)


@lru_cache(maxsize=None)
def _enumerate_R(n: int, t: int, m: int) -> tuple[Sequence_, ...]:
    return tuple(seq for seq in _sequences(n, t, m, exact=True) if is_point_class(seq))


@lru_cache(maxsize=None)
def _enumerate_S(n: int, t: int, m: int) -> tuple[Sequence_, ...]:
    return tuple(seq for seq in _sequences(n, t, m, exact=False) if is_nonzero_product(seq))


def enumerate_R(n: int, t: int, m: int, allow_large: bool = False) -> list[Sequence_]:
    """Sequences (I(1), ..., I(m)) of t-subsets of [n] whose Schubert product is the point class."""
    _check_range(n, t, m)
    _guard(n, t, m, allow_large)
    return list(_enumerate_R(n, t, m))


def enumerate_S(n: int, t: int, m: int, allow_large: bool = False) -> list[Sequence_]:
    """Sequences whose Schubert product is nonzero on Gr(t, n)."""
    _check_range(n, t, m)
    _guard(n, t, m, allow_large)
    return list(_enumerate_S(n, t, m))


def build_system(n: int, m: int, r: int, allow_large: bool = False) -> InequalitySystem:
    if n < 1 or m < 1 or not 0 <= r <= n:
        raise ValueError(f"invalid problem size n={n}, m={m}, r={r}")
    majors = [
        HornInequality(MAJOR, t, seq, n, m, r)
        for t in range(1, n + 1)
        for seq in enumerate_R(n, t, m, allow_large)
    ]
    rank_bounds = [
        HornInequality(RANK, t, seq, n, m, r)
        for t in range(1, n - r + 1)
        for seq in enumerate_R(n - r, t, m, allow_large)
    ]
    return InequalitySystem(n, m, r, dagger_positions(n, m), majors, rank_bounds)


def extended_system(n: int, m: int, r: int, allow_large: bool = False) -> InequalitySystem:
    """The larger system indexed by S^n(m) and S^{n-r}(m) instead of R."""
    if n < 1 or m < 1 or not 0 <= r <= n:
        raise ValueError(f"invalid problem size n={n}, m={m}, r={r}")
    majors = [
        HornInequality(MAJOR, t, seq, n, m, r)
        for t in range(1, n + 1)
        for seq in enumerate_S(n, t, m, allow_large)
    ]
    rank_bounds = [
        HornInequality(RANK, t, seq, n, m, r)
        for t in range(1, n - r + 1)
        for seq in enumerate_S(n - r, t, m, allow_large)
    ]
    return InequalitySystem(n, m, r, dagger_positions(n, m), majors, rank_bounds)


def weyl_system(n: int, r: int) -> InequalitySystem:
    """Two-matrix system: alpha_i(1) + alpha_j(2) >= 0 for i+j = n+1 and <= 0 for i+j = n+r+1."""
    if n < 1 or not 0 <= r <= n:
        raise ValueError(f"invalid problem size n={n}, r={r}")
    majors = [
        HornInequality(MAJOR, 1, (SchubertIndex(n, (i,)), SchubertIndex(n, (n + 1 - i,))), n, 2, r)
        for i in range(1, n + 1)
    ]
    k = n - r
    # alpha_i(1) + alpha_j(2) with i + j = n + r + 1 is P = {n+1-i}, Q = {k+1-(n+1-i)}
    rank_bounds = [
        HornInequality(RANK, 1, (SchubertIndex(k, (p,)), SchubertIndex(k, (k + 1 - p,))), n, 2, r)
        for p in range(1, k + 1)
    ]
    majors.sort(key=HornInequality.sort_key)
    rank_bounds.sort(key=HornInequality.sort_key)
    return InequalitySystem(n, 2, r, dagger_positions(n, 2), majors, rank_bounds)


@dataclass
class NegatedTailPairing:
    n: int
    m: int
    r: int
    pairs: list[tuple[HornInequality, HornInequality]]


def negated_tail_pullback(vec: Sequence[Fraction], n: int, m: int, r: int) -> tuple[Fraction, ...]:
    """Pull a row on (n-r)-tuples back along alpha -> (-alpha_n, ..., -alpha_{r+1})."""
    k = n - r
    out = [Fraction(0)] * (m * n)
    for s in range(1, m + 1):
        for p in range(1, k + 1):
            out[flat(s, n + 1 - p, n)] -= vec[flat(s, p, k)]
    return tuple(out)


def corollary3_pairing(n: int, m: int, r: int) -> NegatedTailPairing:
    """Pair each rank row of (n, m, r) with the major row of size n-r it becomes
    under the negated-tail map; raise if the correspondence is not a bijection."""
    if not 0 <= r < n:
        raise ValueError(f"need 0 <= r < n, got r={r}, n={n}")
    system = build_system(n, m, r)
    small = build_system(n - r, m, 0)
    by_vec = {}
    for ineq in small.majors:
        by_vec.setdefault(negated_tail_pullback(coefficient_vector(ineq), n, m, r), []).append(ineq)
    pairs = []
    seen = set()
    for ineq in system.rank_bounds:
        matches = by_vec.get(coefficient_vector(ineq), [])
        match = next((mj for mj in matches if mj.subsets == ineq.subsets), None)
        if match is None:
            raise AssertionError(f"rank row {ineq} has no major partner in size {n - r}")
        if match in seen:
            raise AssertionError(f"major row {match} paired twice")
        seen.add(match)
        pairs.append((ineq, match))
    if len(seen) != len(small.majors):
        unpaired = [mj for mj in small.majors if mj not in seen]
        raise AssertionError(f"unpaired major rows: {[str(u) for u in unpaired]}")
    return NegatedTailPairing(n, m, r, pairs)
