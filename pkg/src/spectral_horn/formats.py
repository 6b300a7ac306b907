"""Text and JSON formats for instances, inequality systems and reports.

Rationals are always written as strings ("p/q" or integers) so files stay exact.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

import numpy as np

from . import __version__
from .facets import RowCertificate
from .feasibility import SpectrumInstance, Verdict, to_rational
from .horn import DAGGER, MAJOR, RANK, HornInequality, InequalitySystem, Row, coefficient_vector, dagger_positions
from .realize import RealizationResult, VerificationReport
from .schur import SchubertIndex

GENERATOR = f"spectral-horn {__version__}"


class FormatError(ValueError):
    pass


def rational_str(x: Fraction) -> str:
    return str(Fraction(x))


# --- instances --------------------------------------------------------------


def instance_to_dict(inst: SpectrumInstance) -> dict[str, Any]:
    return {
        "n": inst.n,
        "m": inst.m,
        "r": inst.r,
        "alpha": [[rational_str(x) for x in row] for row in inst.alpha],
    }


def instance_from_dict(data: dict[str, Any]) -> SpectrumInstance:
    try:
        n, m, r, alpha = int(data["n"]), int(data["m"]), int(data["r"]), data["alpha"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"instance needs integer n, m, r and an alpha array: {exc}") from exc
    if not isinstance(alpha, list) or not all(isinstance(row, list) for row in alpha):
        raise FormatError("alpha must be a list of lists")
    for row in alpha:
        for x in row:
            if isinstance(x, float):
                raise FormatError(f"write rationals as strings, not floats: {x!r}")
    try:
        return SpectrumInstance(n, m, r, tuple(tuple(to_rational(x) for x in row) for row in alpha))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def dumps_instance(inst: SpectrumInstance) -> str:
    return json.dumps(instance_to_dict(inst), indent=2) + "\n"


def loads_instance(text: str) -> SpectrumInstance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"instance is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise FormatError("instance must be a JSON object")
    return instance_from_dict(data)


def read_instance(path: str) -> SpectrumInstance:
    with open(path, encoding="utf-8") as fh:
        return loads_instance(fh.read())


# --- systems ----------------------------------------------------------------

_ROW_RE = re.compile(r"^(major|rank)\s+t=(\d+)\s+(.*)$")
_SUBSET_RE = re.compile(r"^([IP])(\d+)=\{([\d,\s]*)\}$")
_DAGGER_RE = re.compile(r"^dagger\s+s=(\d+)\s+i=(\d+)$")
_HEADER_RE = re.compile(r"^#\s*system\s+n=(\d+)\s+m=(\d+)\s+r=(\d+)")


def dagger_line(s: int, i: int) -> str:
    return f"dagger s={s} i={i}"


def parse_row(line: str, n: int, m: int, r: int):
    """Parse one text row into a HornInequality or a dagger position (s, i)."""
    line = line.strip()
    d = _DAGGER_RE.match(line)
    if d:
        s, i = int(d.group(1)), int(d.group(2))
        if not (1 <= s <= m and 1 <= i < n):
            raise FormatError(f"dagger row out of range: {line}")
        return (s, i)
    mt = _ROW_RE.match(line)
    if not mt:
        raise FormatError(f"unrecognized row: {line!r}")
    kind, t, rest = mt.group(1), int(mt.group(2)), mt.group(3).split()
    letter = "I" if kind == MAJOR else "P"
    ambient = n if kind == MAJOR else n - r
    subsets = []
    for k, token in enumerate(rest, start=1):
        sm = _SUBSET_RE.match(token)
        if not sm or sm.group(1) != letter or int(sm.group(2)) != k:
            raise FormatError(f"bad subset token {token!r} in {line!r}")
        els = tuple(int(x) for x in sm.group(3).split(",") if x.strip())
        try:
            subsets.append(SchubertIndex(ambient, els))
        except ValueError as exc:
            raise FormatError(f"{token}: {exc}") from exc
    try:
        return HornInequality(kind, t, tuple(subsets), n, m, r)
    except ValueError as exc:
        raise FormatError(f"{line!r}: {exc}") from exc


def system_to_text(system: InequalitySystem, include_dagger: bool = False) -> str:
    lines = [f"# system n={system.n} m={system.m} r={system.r} generator={GENERATOR}"]
    if include_dagger:
        lines += [dagger_line(s, i) for s, i in system.dagger_rows]
    lines += [str(ineq) for ineq in system.majors]
    lines += [str(ineq) for ineq in system.rank_bounds]
    return "\n".join(lines) + "\n"


def _row_dict(ineq) -> dict[str, Any]:
    if isinstance(ineq, HornInequality):
        return {"kind": ineq.kind, "t": ineq.t, "subsets": [list(s.elements) for s in ineq.subsets]}
    s, i = ineq
    return {"kind": DAGGER, "s": s, "i": i}


def system_to_json(system: InequalitySystem, include_dagger: bool = False) -> str:
    rows = [_row_dict(d) for d in system.dagger_rows] if include_dagger else []
    rows += [_row_dict(x) for x in system.majors + system.rank_bounds]
    data = {"n": system.n, "m": system.m, "r": system.r, "generator": GENERATOR, "rows": rows}
    return json.dumps(data, indent=2) + "\n"


def _assemble_system(n: int, m: int, r: int, parsed: list) -> InequalitySystem:
    majors = [p for p in parsed if isinstance(p, HornInequality) and p.kind == MAJOR]
    ranks = [p for p in parsed if isinstance(p, HornInequality) and p.kind == RANK]
    # ordering rows are determined by (n, m); explicit dagger lines are validated only
    return InequalitySystem(n, m, r, dagger_positions(n, m), majors, ranks)


def system_from_text(text: str) -> InequalitySystem:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty system file")
    header = _HEADER_RE.match(lines[0])
    if not header:
        raise FormatError("missing '# system n=.. m=.. r=..' header")
    n, m, r = (int(g) for g in header.groups())
    parsed = [parse_row(ln, n, m, r) for ln in lines[1:] if not ln.startswith("#")]
    return _assemble_system(n, m, r, parsed)


def system_from_json(text: str) -> InequalitySystem:
    data = json.loads(text)
    n, m, r = data["n"], data["m"], data["r"]
    parsed = []
    for row in data["rows"]:
        if row["kind"] == DAGGER:
            parsed.append(parse_row(dagger_line(row["s"], row["i"]), n, m, r))
            continue
        ambient = n if row["kind"] == MAJOR else n - r
        subsets = tuple(SchubertIndex(ambient, tuple(s)) for s in row["subsets"])
        parsed.append(HornInequality(row["kind"], row["t"], subsets, n, m, r))
    return _assemble_system(n, m, r, parsed)


def extra_row(system: InequalitySystem, line: str, index: int) -> Row:
    parsed = parse_row(line, system.n, system.m, system.r)
    if isinstance(parsed, HornInequality):
        coeffs = coefficient_vector(parsed)
    else:
        coeffs = coefficient_vector(parsed, system.n, system.m)
    kind = DAGGER if isinstance(parsed, tuple) else parsed.kind
    return Row(f"extra:{index}", f"extra-{kind}", coeffs, parsed)


# --- reports ----------------------------------------------------------------


def row_label(system: InequalitySystem, row_id: str) -> str:
    row = system.row(row_id)
    if isinstance(row.source, HornInequality):
        return str(row.source)
    return dagger_line(*row.source)


def verdict_to_dict(system: InequalitySystem, inst: SpectrumInstance, verdict: Verdict) -> dict[str, Any]:
    return {
        "feasible": verdict.feasible,
        "n": inst.n,
        "m": inst.m,
        "r": inst.r,
        "dagger_violations": [{"s": s, "i": i} for s, i in verdict.dagger_violations],
        "tight": [{"id": k, "row": row_label(system, k)} for k in verdict.tight],
        "violated": [
            {"id": k, "row": row_label(system, k), "slack": rational_str(verdict.margins[k])}
            for k in verdict.violated
        ],
        "margins": {k: rational_str(v) for k, v in verdict.margins.items()},
    }


def verdict_to_text(system: InequalitySystem, inst: SpectrumInstance, verdict: Verdict) -> str:
    out = [f"n={inst.n} m={inst.m} r={inst.r}: {'FEASIBLE' if verdict.feasible else 'INFEASIBLE'}"]
    for s, i in verdict.dagger_violations:
        out.append(f"  ordering violated: alpha_{i}({s}) < alpha_{i + 1}({s})")
    for k in verdict.violated:
        out.append(f"  violated {k}: {row_label(system, k)}  slack={rational_str(verdict.margins[k])}")
    for k in verdict.tight:
        out.append(f"  tight    {k}: {row_label(system, k)}")
    return "\n".join(out) + "\n"


def _matrix_pairs(M: np.ndarray) -> list[list[list[float]]]:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(M, dtype=complex)]


def realization_to_dict(result: RealizationResult, report: VerificationReport | None) -> dict[str, Any]:
    data = {
        "found": result.success,
        "residual": result.residual,
        "iterations": result.iterations,
        "restarts_used": result.restarts_used,
        "restart_index": result.restart_index,
        "sum_eigenvalues": [float(x) for x in result.sum_eigenvalues],
        "matrices": [_matrix_pairs(M) for M in result.matrices],
    }
    if report is not None:
        data["verification"] = {
            "passed": report.passed,
            "spectrum_ok": report.spectrum_ok,
            "psd_ok": report.psd_ok,
            "rank_ok": report.rank_ok,
            "spectrum_deviation": report.spectrum_deviation,
            "min_eigenvalue": report.min_eigenvalue,
            "excess_eigenvalue": None if report.excess_eigenvalue == float("-inf") else report.excess_eigenvalue,
        }
    return data


def matrices_from_pairs(data) -> list[np.ndarray]:
    return [np.array([[complex(re, im) for re, im in row] for row in M]) for M in data]


def certificates_to_dict(system: InequalitySystem, certs: list[RowCertificate]) -> dict[str, Any]:
    rows = []
    for c in certs:
        rows.append({
            "id": c.row_id,
            "row": row_label(system, c.row_id),
            "certified": c.certified,
            "facet_delta": None if c.facet.delta is None else rational_str(c.facet.delta),
            "tight_verified": c.facet.tight_verified,
            "all_others_strict": c.facet.all_others_strict,
            "irredundant": c.irredundant,
            "method": c.facet.method,
            "witness": None if c.facet.witness is None else instance_to_dict(c.facet.witness)["alpha"],
        })
    return {"n": system.n, "m": system.m, "r": system.r, "all_certified": all(c.certified for c in certs), "rows": rows}


def certificates_to_text(system: InequalitySystem, certs: list[RowCertificate]) -> str:
    out = [f"{'id':<12} {'delta':>8} {'tight':>5} {'strict':>6} {'irred':>5}  row"]
    for c in certs:
        delta = "-" if c.facet.delta is None else rational_str(c.facet.delta)
        out.append(
            f"{c.row_id:<12} {delta:>8} {str(c.facet.tight_verified)[0]:>5} "
            f"{str(c.facet.all_others_strict)[0]:>6} {str(c.irredundant)[0]:>5}  {row_label(system, c.row_id)}"
        )
    ok = sum(c.certified for c in certs)
    out.append(f"{ok}/{len(certs)} rows certified as facets")
    return "\n".join(out) + "\n"
