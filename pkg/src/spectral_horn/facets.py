"""Facet certificates for the inequality systems.

A row is certified when (a) some point makes it tight while every other row
is strictly satisfied (``facet_witness``) and (b) some point violates it
while satisfying all the others (``irredundancy``).  Both are found by exact
rational LP.  ``dagger_witness``, ``major_tight_witness`` and
``rank_tight_witness`` build tight points by explicit constructions instead
and audit them exactly.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .feasibility import SpectrumInstance, cached_system, evaluate_rows
from .horn import DAGGER, MAJOR, RANK, InequalitySystem, Row
from .simplex import OPTIMAL, LinearProgram, simplex_solve

log = logging.getLogger(__name__)

LP_SEARCH = "LpSearch"
CONSTRUCTION = "PaperConstruction"
MAX_REFINEMENTS = 60


class FacetError(RuntimeError):
    pass


@dataclass
class FacetReport:
    row_id: str
    witness: SpectrumInstance | None
    tight_verified: bool
    all_others_strict: bool
    method: str
    delta: Fraction | None = None

    @property
    def certified(self) -> bool:
        return self.tight_verified and self.all_others_strict


@dataclass
class RowCertificate:
    row_id: str
    facet: FacetReport
    irredundant: bool
    violation_point: SpectrumInstance | None

    @property
    def certified(self) -> bool:
        return self.facet.certified and self.irredundant


def _rows_of(system) -> list[Row]:
    return system.rows() if isinstance(system, InequalitySystem) else list(system)


def _instance(point: Sequence[Fraction], n: int, m: int, r: int) -> SpectrumInstance:
    return SpectrumInstance(n, m, r, tuple(tuple(point[s * n:(s + 1) * n]) for s in range(m)))


def audit(rows: Sequence[Row], inst: SpectrumInstance, tight_ids: set[str]) -> tuple[bool, bool]:
    """(every row in ``tight_ids`` has slack exactly 0, every other row has slack > 0)."""
    slacks = evaluate_rows(rows, inst)
    tight = all(slacks[k] == 0 for k in tight_ids)
    strict = all(v > 0 for k, v in slacks.items() if k not in tight_ids)
    return tight, strict


def max_min_slack(rows: Sequence[Row], tight_ids: set[str], nvars: int) -> tuple[Fraction, tuple[Fraction, ...]]:
    """maximize delta s.t. rows in ``tight_ids`` are equalities, all other slacks >= delta,
    |x_k| <= 1 and 0 <= delta <= 1."""
    lp = LinearProgram(
        [0] * nvars + [1],
        lower=[-1] * nvars + [0],
        upper=[1] * nvars + [1],
    )
    for row in rows:
        if row.id in tight_ids:
            lp.add(list(row.coeffs) + [0], "==", 0)
        else:
            lp.add(list(row.coeffs) + [-1], ">=", 0)
    res = simplex_solve(lp)
    if res.status != OPTIMAL:
        raise FacetError(f"max-min-slack LP ended {res.status}")
    return res.value, res.point[:nvars]


def facet_witness(system: InequalitySystem, target_id: str) -> FacetReport:
    """LP search for a point where ``target_id`` is tight and every other row strict.

    Facet-ness is only expected for r >= 1 and m >= 3; other sizes are computed
    the same way and reported as found.
    """
    rows = _rows_of(system)
    if target_id not in {row.id for row in rows}:
        raise KeyError(target_id)
    n, m = system.n, system.m
    delta, point = max_min_slack(rows, {target_id}, n * m)
    inst = _instance(point, n, m, system.r)
    tight, strict = audit(rows, inst, {target_id})
    return FacetReport(target_id, inst, tight, strict and delta > 0, LP_SEARCH, delta)


def irredundancy(system: InequalitySystem, target_id: str) -> tuple[bool, SpectrumInstance | None]:
    """Is ``target_id`` independent of the other rows?  Returns a point violating
    it (slack <= -1) while all other rows have slack >= 1, if one exists."""
    rows = _rows_of(system)
    if target_id not in {row.id for row in rows}:
        raise KeyError(target_id)
    n, m = system.n, system.m
    lp = LinearProgram([0] * (n * m))
    for row in rows:
        if row.id == target_id:
            lp.add(row.coeffs, "<=", -1)
        else:
            lp.add(row.coeffs, ">=", 1)
    res = simplex_solve(lp)
    if res.status != OPTIMAL:
        return False, None
    return True, _instance(res.point, n, m, system.r)


def certify_row(system: InequalitySystem, row_id: str) -> RowCertificate:
    report = facet_witness(system, row_id)
    independent, point = irredundancy(system, row_id)
    return RowCertificate(row_id, report, independent, point)


def certify_system(system: InequalitySystem) -> list[RowCertificate]:
    return [certify_row(system, row.id) for row in system.rows()]


# --- explicit constructions -------------------------------------------------


def staircase(n: int) -> list[Fraction]:
    """(n-1, n-3, ..., 3-n, 1-n)."""
    return [Fraction(n + 1 - 2 * k) for k in range(1, n + 1)]


def dagger_witness(n: int, m: int, r: int, s0: int, i0: int) -> SpectrumInstance:
    """Point with alpha_{i0}(s0) = alpha_{i0+1}(s0) at which every major and rank row is strict.

    Factor s0 is the staircase with entries i0, i0+1 both replaced by n - 2 i0;
    every other factor is the staircase with its top entry raised to n.
    """
    if m < 3 or r < 1 or not 1 <= i0 <= n - 1 or not 1 <= s0 <= m or r > n:
        raise ValueError(f"dagger witness needs m >= 3, 1 <= r <= n, 1 <= i0 < n (got n={n}, m={m}, r={r}, i0={i0})")
    tied = staircase(n)
    tied[i0 - 1] = tied[i0] = Fraction(n - 2 * i0)
    other = staircase(n)
    other[0] = Fraction(n)
    alpha = tuple(tuple(tied) if s == s0 else tuple(other) for s in range(1, m + 1))
    inst = SpectrumInstance(n, m, r, alpha)
    rows = [row for row in cached_system(n, m, r).rows() if row.kind != DAGGER]
    _, strict = audit(rows, inst, set())
    if not strict:
        raise FacetError(f"dagger construction not strict for n={n}, m={m}, r={r}, i0={i0}")
    return inst


def dagger_report(system: InequalitySystem, s0: int, i0: int) -> FacetReport:
    inst = dagger_witness(system.n, system.m, system.r, s0, i0)
    tight, strict = audit(system.rows(), inst, {f"dagger:{s0}:{i0}"})
    return FacetReport(f"dagger:{s0}:{i0}", inst, tight, strict, CONSTRUCTION)


def _trace_row_id(system: InequalitySystem) -> str:
    for k, ineq in enumerate(system.majors, start=1):
        if ineq.t == system.n:
            return f"major:{k}"
    raise FacetError("system has no trace row")


def _zero_sum_witness(k: int, m: int, subsets) -> tuple[list[list[Fraction]], Fraction]:
    """Strictly decreasing k-tuples with zero total trace, tight at the major row for
    ``subsets`` and strict at every other major row of size k."""
    small = cached_system(k, m, 0)
    rows = [row for row in small.rows() if row.kind != RANK]
    target = next((row.id for row in rows if row.kind == MAJOR and row.source.subsets == tuple(subsets)), None)
    if target is None:
        raise FacetError(f"no major row {subsets} in size {k}")
    tight_ids = {target, _trace_row_id(small)}
    delta, point = max_min_slack(rows, tight_ids, k * m)
    if delta <= 0:
        raise FacetError(f"no zero-sum witness for {[str(s) for s in subsets]} (delta={delta})")
    return [list(point[s * k:(s + 1) * k]) for s in range(m)], delta


def major_tight_witness(system: InequalitySystem, target_id: str) -> FacetReport:
    """Zero-sum point tight at a major row (LP), then alpha_{i0}(1) raised by eps, i0 not in I(1)."""
    row = system.row(target_id)
    if row.kind != MAJOR:
        raise ValueError(f"{target_id} is not a major row")
    n, m, r = system.n, system.m, system.r
    ineq = row.source
    alpha, _ = _zero_sum_witness(n, m, ineq.subsets)
    rows = system.rows()
    bump = next((i for i in range(1, n + 1) if i not in ineq.subsets[0].elements), None)
    eps = Fraction(1)
    for _ in range(MAX_REFINEMENTS):
        trial = [list(a) for a in alpha]
        if bump is not None:
            trial[0][bump - 1] += eps
        inst = SpectrumInstance(n, m, r, tuple(map(tuple, trial)))
        tight, strict = audit(rows, inst, {target_id})
        if tight and strict:
            return FacetReport(target_id, inst, True, True, CONSTRUCTION)
        eps /= 2
    raise FacetError(f"eps refinement failed for {target_id}")


def rank_tight_witness(system: InequalitySystem, target_id: str, N: Fraction | None = None) -> FacetReport:
    """alpha(s) = (N+r, ..., N+1, -beta_{n-r}(s), ..., -beta_1(s)) from a zero-sum
    (n-r)-witness beta tight at the target's P-sequence.

    N is doubled until every major row is strict; when the target is not the
    full-trace rank row, alpha_{n+1-p0}(1) is then lowered by eps (p0 not in
    P(1)), halving eps until the exact audit passes.
    """
    row = system.row(target_id)
    if row.kind != RANK:
        raise ValueError(f"{target_id} is not a rank row")
    n, m, r = system.n, system.m, system.r
    k = n - r
    ineq = row.source
    beta, _ = _zero_sum_witness(k, m, ineq.subsets)
    if N is None:
        N = 1 + m * n * (1 + max(abs(b) for bs in beta for b in bs))
    N = Fraction(N)
    rows = system.rows()
    full_trace = next(
        (f"rank:{j}" for j, rb in enumerate(system.rank_bounds, start=1) if rb.t == k), None
    )
    lowered = None
    if ineq.t != k:
        lowered = next(p for p in range(1, k + 1) if p not in ineq.subsets[0].elements)
    base_tight = {target_id} | ({full_trace} if lowered is not None else set())

    def assemble(N: Fraction, eps: Fraction) -> SpectrumInstance:
        alpha = []
        for s in range(m):
            head = [N + r - j for j in range(r)]
            tail = [-beta[s][k - 1 - j] for j in range(k)]
            alpha.append(head + tail)
        if lowered is not None:
            alpha[0][n - lowered] -= eps
        return SpectrumInstance(n, m, r, tuple(map(tuple, alpha)))

    for _ in range(MAX_REFINEMENTS):
        tight, strict = audit(rows, assemble(N, Fraction(0)), base_tight)
        if not tight:
            raise FacetError(f"construction for {target_id} is not tight")
        if strict:
            break
        N *= 2
    else:
        raise FacetError(f"N doubling failed for {target_id}")
    if lowered is None:
        return FacetReport(target_id, assemble(N, Fraction(0)), True, True, CONSTRUCTION)
    eps = Fraction(1)
    for _ in range(MAX_REFINEMENTS):
        inst = assemble(N, eps)
        tight, strict = audit(rows, inst, {target_id})
        if tight and strict:
            return FacetReport(target_id, inst, True, True, CONSTRUCTION)
        eps /= 2
    raise FacetError(f"eps refinement failed for {target_id}")
