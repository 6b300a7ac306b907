"""Exact rational two-phase simplex with Bland's anti-cycling rule."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

MAX_ROWS = 200
MAX_VARIABLES = 60

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"

SENSES = (">=", "<=", "==")


class LPSizeError(ValueError):
    pass


@dataclass
class Constraint:
    coeffs: tuple[Fraction, ...]
    sense: str
    rhs: Fraction

    def __post_init__(self) -> None:
        if self.sense not in SENSES:
            raise ValueError(f"unknown constraint sense {self.sense!r}")
        self.coeffs = tuple(Fraction(c) for c in self.coeffs)
        self.rhs = Fraction(self.rhs)


@dataclass
class LinearProgram:
    """maximize objective . x  subject to constraints and lower <= x <= upper.

    ``None`` bounds are infinite; by default every variable is free.
    """

    objective: tuple[Fraction, ...]
    constraints: list[Constraint] = field(default_factory=list)
    lower: list[Fraction | None] | None = None
    upper: list[Fraction | None] | None = None

    def __post_init__(self) -> None:
        self.objective = tuple(Fraction(c) for c in self.objective)
        k = len(self.objective)
        self.lower = [None] * k if self.lower is None else [None if b is None else Fraction(b) for b in self.lower]
        self.upper = [None] * k if self.upper is None else [None if b is None else Fraction(b) for b in self.upper]
        if len(self.lower) != k or len(self.upper) != k:
            raise ValueError("bounds must match the number of variables")
        for con in self.constraints:
            if len(con.coeffs) != k:
                raise ValueError("constraint length does not match the number of variables")

    @property
    def num_variables(self) -> int:
        return len(self.objective)

    def add(self, coeffs: Sequence, sense: str, rhs) -> None:
        if len(coeffs) != self.num_variables:
            raise ValueError("constraint length does not match the number of variables")
        self.constraints.append(Constraint(tuple(coeffs), sense, rhs))


@dataclass
class LPResult:
    status: str
    value: Fraction | None = None
    point: tuple[Fraction, ...] | None = None


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], basis: list[int]):
        self.rows = rows
        self.basis = basis

    def pivot(self, r: int, col: int, extra: list[list[Fraction]]) -> None:
        prow = self.rows[r]
        piv = prow[col]
        if piv != 1:
            prow = [v / piv for v in prow]
            self.rows[r] = prow
        nz = [(j, v) for j, v in enumerate(prow) if v]
        for i, row in enumerate(self.rows):
            if i != r:
                _eliminate(row, col, nz)
        for row in extra:
            _eliminate(row, col, nz)
        self.basis[r] = col

    def run(self, cost_row: list[Fraction], allowed: int) -> str:
        """Maximize with reduced costs ``cost_row`` over columns < ``allowed``."""
        while True:
            col = next((j for j in range(allowed) if cost_row[j] > 0), None)
            if col is None:
                return OPTIMAL
            best = None
            for i, row in enumerate(self.rows):
                a = row[col]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], col, [cost_row])


def _eliminate(row: list[Fraction], col: int, nz: list[tuple[int, Fraction]]) -> None:
    f = row[col]
    if f:
        for j, v in nz:
            row[j] -= f * v


def _reduced_costs(cost: list[Fraction], tab: _Tableau) -> list[Fraction]:
    d = list(cost) + [Fraction(0)]
    for i, row in enumerate(tab.rows):
        cb = cost[tab.basis[i]]
        if cb:
            for j, v in enumerate(row):
                if v:
                    d[j] -= cb * v
    return d


def simplex_solve(lp: LinearProgram) -> LPResult:
    if len(lp.constraints) > MAX_ROWS or lp.num_variables > MAX_VARIABLES:
        raise LPSizeError(
            f"LP with {len(lp.constraints)} rows and {lp.num_variables} variables exceeds "
            f"{MAX_ROWS} x {MAX_VARIABLES}"
        )
    zero = Fraction(0)

    # x_j = offset_j + sum_k sub[j][k] * y_k with y >= 0
    offsets: list[Fraction] = []
    subs: list[list[tuple[int, int]]] = []
    extra_rows: list[tuple[dict[int, Fraction], str, Fraction]] = []
    ny = 0
    for lo, hi in zip(lp.lower, lp.upper):
        if lo is not None:
            offsets.append(lo)
            subs.append([(ny, 1)])
            if hi is not None:
                if hi < lo:
                    return LPResult(INFEASIBLE)
                extra_rows.append(({ny: Fraction(1)}, "<=", hi - lo))
            ny += 1
        elif hi is not None:
            offsets.append(hi)
            subs.append([(ny, -1)])
            ny += 1
        else:
            offsets.append(zero)
            subs.append([(ny, 1), (ny + 1, -1)])
            ny += 2

    def transform(coeffs: Sequence[Fraction]) -> tuple[dict[int, Fraction], Fraction]:
        out: dict[int, Fraction] = {}
        shift = zero
        for j, a in enumerate(coeffs):
            if a:
                shift += a * offsets[j]
                for k, sgn in subs[j]:
                    out[k] = out.get(k, zero) + sgn * a
        return out, shift

    std: list[tuple[dict[int, Fraction], str, Fraction]] = []
    for con in lp.constraints:
        coeffs, shift = transform(con.coeffs)
        std.append((coeffs, con.sense, con.rhs - shift))
    std.extend(extra_rows)

    # normalize to nonnegative right-hand sides
    flip = {">=": "<=", "<=": ">=", "==": "=="}
    normalized = []
    for coeffs, sense, rhs in std:
        if rhs < 0:
            coeffs = {k: -v for k, v in coeffs.items()}
            sense, rhs = flip[sense], -rhs
        normalized.append((coeffs, sense, rhs))

    n_slack = sum(1 for _, sense, _ in normalized if sense != "==")
    n_art = sum(1 for _, sense, _ in normalized if sense != "<=")
    width = ny + n_slack + n_art
    rows: list[list[Fraction]] = []
    basis: list[int] = []
    slack_col, art_col = ny, ny + n_slack
    for coeffs, sense, rhs in normalized:
        row = [zero] * (width + 1)
        for k, v in coeffs.items():
            row[k] = v
        row[-1] = rhs
        if sense == "<=":
            row[slack_col] = Fraction(1)
            basis.append(slack_col)
            slack_col += 1
        else:
            if sense == ">=":
                row[slack_col] = Fraction(-1)
                slack_col += 1
            row[art_col] = Fraction(1)
            basis.append(art_col)
            art_col += 1
        rows.append(row)

    tab = _Tableau(rows, basis)
    first_art = ny + n_slack
    if n_art:
        cost1 = [zero] * first_art + [Fraction(-1)] * n_art
        d1 = _reduced_costs(cost1, tab)
        tab.run(d1, width)
        if d1[-1] != 0:  # -d1[-1] is the phase-one objective, i.e. minus the artificial sum
            return LPResult(INFEASIBLE)
        # drive zero-level artificials out of the basis
        keep = []
        for i in range(len(tab.rows)):
            if tab.basis[i] >= first_art:
                col = next((j for j in range(first_art) if tab.rows[i][j] != 0), None)
                if col is None:
                    continue
                tab.pivot(i, col, [])
            keep.append(i)
        tab.rows = [tab.rows[i][:first_art] + [tab.rows[i][-1]] for i in keep]
        tab.basis = [tab.basis[i] for i in keep]

    cost = [zero] * first_art
    for j, c in enumerate(lp.objective):
        if c:
            for k, sgn in subs[j]:
                cost[k] += sgn * c
    d = _reduced_costs(cost, tab)
    status = tab.run(d, first_art)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)

    y = [zero] * first_art
    for i, b in enumerate(tab.basis):
        y[b] = tab.rows[i][-1]
    point = tuple(offsets[j] + sum((sgn * y[k] for k, sgn in subs[j]), zero) for j in range(lp.num_variables))
    value = sum((c * x for c, x in zip(lp.objective, point)), zero)
    return LPResult(OPTIMAL, value, point)
