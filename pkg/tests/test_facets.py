from fractions import Fraction

import pytest

from spectral_horn.facets import (
    certify_row,
    certify_system,
    dagger_report,
    dagger_witness,
    facet_witness,
    irredundancy,
    major_tight_witness,
    rank_tight_witness,
    max_min_slack,
    staircase,
)
from spectral_horn.feasibility import SpectrumInstance, check, evaluate_rows
from spectral_horn.formats import extra_row
from spectral_horn.horn import DAGGER, Row, build_system, weyl_system
from spectral_horn.realize import OptimizerConfig, realize

F = Fraction


def rows_of(alpha):
    return [list(map(F, row)) for row in alpha]


class TestDaggerWitness:
    def test_n2(self):
        inst = dagger_witness(2, 3, 1, 1, 1)
        assert rows_of(inst.alpha) == [[0, 0], [2, -1], [2, -1]]

    def test_n3(self):
        inst = dagger_witness(3, 3, 1, 1, 1)
        assert rows_of(inst.alpha) == [[1, 1, -2], [3, 0, -2], [3, 0, -2]]

    @pytest.mark.parametrize("n,r", [(2, 1), (2, 2), (3, 1), (3, 2), (3, 3), (4, 1), (4, 3)])
    def test_exactly_one_tie_and_nothing_else_tight(self, n, r):
        system = build_system(n, 3, r)
        for s0 in range(1, 4):
            for i0 in range(1, n):
                inst = dagger_witness(n, 3, r, s0, i0)
                verdict = check(inst, system)
                assert verdict.feasible and verdict.tight == []
                ties = [(s, i) for s, row in enumerate(inst.alpha, 1) for i in range(1, n) if row[i - 1] == row[i]]
                assert ties == [(s0, i0)]
                assert dagger_report(system, s0, i0).certified

    def test_requires_three_factors(self):
        with pytest.raises(ValueError):
            dagger_witness(3, 2, 1, 1, 1)

    @pytest.mark.parametrize("n", range(3, 6))
    def test_staircase_strict(self, n):
        # the degree identity makes each row equal to t(n-t)(m-2), which is >= 2 once n >= 3
        inst = SpectrumInstance(n, 3, n, tuple(tuple(staircase(n)) for _ in range(3)))
        system = build_system(n, 3, n)
        values = evaluate_rows(system.rows(include_dagger=False), inst)
        for row in system.rows(include_dagger=False):
            t = row.source.t
            assert values[row.id] == t * (n - t)
            if t < n:
                assert values[row.id] >= 2


class TestConstructions:
    @pytest.mark.parametrize(
        "nmr", [(2, 3, 1), (3, 3, 1), (3, 3, 2), pytest.param((4, 3, 1), marks=pytest.mark.slow), pytest.param((4, 3, 2), marks=pytest.mark.slow)]
    )
    def test_major_rows(self, nmr):
        system = build_system(*nmr)
        for k in range(1, len(system.majors) + 1):
            rep = major_tight_witness(system, f"major:{k}")
            assert rep.certified
            assert check(rep.witness, system).tight == [f"major:{k}"]

    @pytest.mark.parametrize("nmr", [(2, 3, 1), (3, 3, 1), (3, 3, 2), (4, 3, 1), (4, 3, 2), (4, 3, 3)])
    def test_rank_rows(self, nmr):
        system = build_system(*nmr)
        for k in range(1, len(system.rank_bounds) + 1):
            rep = rank_tight_witness(system, f"rank:{k}")
            assert rep.certified
            assert check(rep.witness, system).tight == [f"rank:{k}"]

    def test_wrong_kind(self):
        system = build_system(2, 3, 1)
        with pytest.raises(ValueError):
            major_tight_witness(system, "rank:1")
        with pytest.raises(ValueError):
            rank_tight_witness(system, "major:1")


class TestCertification:
    @pytest.mark.parametrize("nmr", [(2, 3, 1), (3, 3, 1), (3, 3, 2)])
    def test_every_row_is_a_facet(self, nmr):
        certs = certify_system(build_system(*nmr))
        assert all(c.certified for c in certs)
        assert all(c.facet.delta > 0 for c in certs)

    @pytest.mark.slow
    def test_four_by_three_rank_one(self):
        assert all(c.certified for c in certify_system(build_system(4, 3, 1)))

    def test_witness_is_tight_at_target_only(self):
        system = build_system(3, 3, 1)
        for row in system.rows():
            rep = facet_witness(system, row.id)
            values = evaluate_rows(system.rows(), rep.witness)
            assert values[row.id] == 0
            assert all(v >= rep.delta for k, v in values.items() if k != row.id)

    def test_duplicated_row_is_not_certified(self):
        system = build_system(2, 3, 1)
        system.extra_rows.append(extra_row(system, str(system.majors[0]), 1))
        cert = certify_row(system, "extra:1")
        assert not cert.certified
        assert cert.facet.delta == 0 and not cert.irredundant
        assert not certify_row(system, "major:1").irredundant

    def test_implied_row_is_redundant(self):
        # sum of two rows is valid but neither tight-only nor irredundant
        system = build_system(2, 3, 1)
        a, b = system.rows(include_dagger=False)[:2]
        system.extra_rows.append(Row("extra:1", "extra", tuple(x + y for x, y in zip(a.coeffs, b.coeffs)), None))
        assert not certify_row(system, "extra:1").certified

    def test_violation_point_violates_only_target(self):
        system = build_system(3, 3, 2)
        for target in ("rank:1", "major:5", "dagger:2:1"):
            ok, point = irredundancy(system, target)
            assert ok
            values = evaluate_rows(system.rows(), point)
            assert values[target] < 0
            assert all(v > 0 for k, v in values.items() if k != target)

    def test_unknown_row(self):
        with pytest.raises(KeyError):
            facet_witness(build_system(2, 3, 1), "major:99")


class TestWeylContrast:
    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_rank_one_ordering_rows_are_redundant(self, n):
        system = weyl_system(n, 1)
        for row in system.rows():
            ok, _ = irredundancy(system, row.id)
            assert ok == (row.kind != DAGGER), row.id

    @pytest.mark.parametrize("n,r", [(2, 2), (3, 2), (4, 2), (4, 3)])
    def test_higher_rank_everything_irredundant(self, n, r):
        system = weyl_system(n, r)
        assert all(irredundancy(system, row.id)[0] for row in system.rows())


@pytest.mark.parametrize("nmr", [(2, 3, 1), (3, 3, 1), (3, 3, 2)])
def test_witnesses_are_realizable(nmr):
    # halfway between each facet witness and the system's max-min-slack point
    n, m, r = nmr
    system = build_system(*nmr)
    _, center = max_min_slack(system.rows(), set(), n * m)
    for row in system.rows():
        flat = facet_witness(system, row.id).witness.flat()
        mid = [(a + b) / 2 for a, b in zip(flat, center)]
        inst = SpectrumInstance(n, m, r, tuple(tuple(mid[s * n:(s + 1) * n]) for s in range(m)))
        assert check(inst, system).feasible
        res = realize(inst, OptimizerConfig(seed=0, tolerance=1e-7))
        assert res.success and res.residual < 1e-6, row.id
