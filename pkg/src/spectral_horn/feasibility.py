"""Exact rational evaluation of inequality systems on eigenvalue tuples."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .horn import (
    DAGGER,
    HornInequality,
    InequalitySystem,
    Row,
    build_system,
    coefficient_vector,
    extended_system,
)


def to_rational(value) -> Fraction:
    """Exact conversion of ints, Fractions and decimal / "p/q" strings.

    Floats are converted through their shortest decimal repr, never through
    their binary expansion.
    """
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        value = repr(value)
    if not isinstance(value, str):
        raise ValueError(f"cannot read {value!r} as a rational")
    try:
        return Fraction(value.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed rational {value!r}") from exc


@dataclass(frozen=True)
class SpectrumInstance:
    n: int
    m: int
    r: int
    alpha: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        alpha = tuple(tuple(to_rational(x) for x in row) for row in self.alpha)
        object.__setattr__(self, "alpha", alpha)
        if self.n < 1 or self.m < 1:
            raise ValueError("need n >= 1 and m >= 1")
        if not 0 <= self.r <= self.n:
            raise ValueError(f"rank bound r={self.r} outside [0, {self.n}]")
        if len(alpha) != self.m or any(len(row) != self.n for row in alpha):
            raise ValueError(f"alpha must be {self.m} tuples of length {self.n}")

    @classmethod
    def from_lists(cls, alpha: Sequence[Sequence], r: int) -> "SpectrumInstance":
        return cls(len(alpha[0]), len(alpha), r, tuple(tuple(row) for row in alpha))

    def flat(self) -> tuple[Fraction, ...]:
        return tuple(x for row in self.alpha for x in row)

    def scaled(self, c) -> "SpectrumInstance":
        c = to_rational(c)
        return SpectrumInstance(self.n, self.m, self.r, tuple(tuple(c * x for x in row) for row in self.alpha))

    def with_rank(self, r: int) -> "SpectrumInstance":
        return SpectrumInstance(self.n, self.m, r, self.alpha)

    def permuted(self, order: Sequence[int]) -> "SpectrumInstance":
        return SpectrumInstance(self.n, self.m, self.r, tuple(self.alpha[k] for k in order))

    def negated_tail(self) -> "SpectrumInstance":
        """The (n-r)-tuples (-alpha_n(s), ..., -alpha_{r+1}(s)), with rank bound 0."""
        k = self.n - self.r
        if k < 1:
            raise ValueError("negated tail needs r < n")
        tails = tuple(tuple(-row[self.n - p] for p in range(1, k + 1)) for row in self.alpha)
        return SpectrumInstance(k, self.m, 0, tails)


@dataclass
class Verdict:
    feasible: bool
    dagger_violations: list[tuple[int, int]]
    tight: list[str]
    violated: list[str]
    margins: dict[str, Fraction] = field(default_factory=dict)


def check_dagger(inst: SpectrumInstance) -> list[tuple[int, int]]:
    return [
        (s, i)
        for s, row in enumerate(inst.alpha, start=1)
        for i in range(1, inst.n)
        if row[i - 1] < row[i]
    ]


def _dot(vec: Sequence[Fraction], x: Sequence[Fraction]) -> Fraction:
    return sum((a * b for a, b in zip(vec, x) if a), Fraction(0))


def evaluate(ineq: HornInequality, inst: SpectrumInstance) -> Fraction:
    """Signed slack of ``ineq`` at ``inst``; nonnegative means satisfied."""
    if (ineq.n, ineq.m) != (inst.n, inst.m):
        raise ValueError(f"inequality for n={ineq.n}, m={ineq.m} applied to n={inst.n}, m={inst.m}")
    if ineq.kind != "major" and ineq.r != inst.r:
        raise ValueError(f"rank row for r={ineq.r} applied to r={inst.r}")
    return _dot(coefficient_vector(ineq), inst.flat())


def evaluate_rows(rows: Iterable[Row], inst: SpectrumInstance) -> dict[str, Fraction]:
    x = inst.flat()
    out = {}
    for row in rows:
        if len(row.coeffs) != len(x):
            raise ValueError(f"row {row.id} has {len(row.coeffs)} coefficients, instance has {len(x)}")
        out[row.id] = _dot(row.coeffs, x)
    return out


def verdict_from_rows(rows: Iterable[Row], inst: SpectrumInstance) -> Verdict:
    margins = evaluate_rows([row for row in rows if row.kind != DAGGER], inst)
    dagger = check_dagger(inst)
    tight = [k for k, v in margins.items() if v == 0]
    violated = [k for k, v in margins.items() if v < 0]
    return Verdict(not dagger and not violated, dagger, tight, violated, margins)


@lru_cache(maxsize=None)
def cached_system(n: int, m: int, r: int) -> InequalitySystem:
    return build_system(n, m, r)


@lru_cache(maxsize=None)
def cached_extended_system(n: int, m: int, r: int) -> InequalitySystem:
    return extended_system(n, m, r)


def check(inst: SpectrumInstance, system: InequalitySystem | None = None) -> Verdict:
    """Decide whether the spectra admit Hermitian matrices with PSD sum of rank <= r."""
    if system is None:
        system = cached_system(inst.n, inst.m, inst.r)
    elif (system.n, system.m, system.r) != (inst.n, inst.m, inst.r):
        raise ValueError("system and instance sizes differ")
    return verdict_from_rows(system.rows(), inst)


def check_extended(inst: SpectrumInstance) -> Verdict:
    """Evaluate the S-indexed rows; a cross-check only, never the primary verdict."""
    return verdict_from_rows(cached_extended_system(inst.n, inst.m, inst.r).rows(), inst)


def check_majors(inst: SpectrumInstance) -> Verdict:
    """Ordering plus major rows only: PSD sum with no rank restriction."""
    system = cached_system(inst.n, inst.m, inst.n)
    return verdict_from_rows(system.rows(), inst.with_rank(inst.n))


def corollary3_split(inst: SpectrumInstance) -> tuple[Verdict, Verdict]:
    """(PSD-sum verdict on alpha, PSD-sum verdict on the negated tails).

    The rank rows of alpha are exactly the major rows of the negated tails,
    so both components feasible iff ``check(inst)`` is feasible.
    """
    if inst.r >= inst.n:
        raise ValueError("split needs r < n")
    return check_majors(inst), check_majors(inst.negated_tail())
