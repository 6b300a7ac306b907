from itertools import combinations, product

import pytest
from hypothesis import given, strategies as st

from oracles import oracle_lr_truncated, oracle_product, partitions_in_box
from spectral_horn.schur import (
    RectangleBound,
    SchubertIndex,
    complement_index,
    conjugate,
    dual_index,
    index_of_partition,
    is_nonzero_product,
    is_point_class,
    lr_coefficient,
    lr_expand,
    make_partition,
    partition_of_index,
    point_index,
    product_coefficient,
    unit_index,
)


def idx(n, *els):
    return SchubertIndex(n, els)


def all_indices(n, t):
    return [SchubertIndex(n, c) for c in combinations(range(1, n + 1), t)]


class TestPartitions:
    def test_canonical_form_strips_zeros(self):
        assert make_partition([3, 1, 0, 0]) == (3, 1)

    @pytest.mark.parametrize("bad", [[1, 2], [2, -1]])
    def test_rejects_invalid(self, bad):
        with pytest.raises(ValueError):
            make_partition(bad)

    def test_partition_of_index(self):
        assert partition_of_index(idx(5, 2, 5)) == (3, 1)
        assert partition_of_index(unit_index(3, 6)) == ()
        assert partition_of_index(idx(4, 3, 4)) == (2, 2)

    def test_index_of_partition(self):
        assert index_of_partition((3, 1), 2, 5) == idx(5, 2, 5)
        assert index_of_partition((), 2, 4) == idx(4, 1, 2)
        assert index_of_partition((2, 2), 2, 4) == idx(4, 3, 4)

    def test_index_of_partition_rejects_overflow(self):
        with pytest.raises(ValueError):
            index_of_partition((3,), 2, 4)

    @pytest.mark.parametrize("n", range(1, 8))
    def test_index_roundtrip_exhaustive(self, n):
        for t in range(1, n + 1):
            for index in all_indices(n, t):
                lam = partition_of_index(index)
                assert RectangleBound(t, n - t).fits(lam)
                assert index_of_partition(lam, t, n) == index

    def test_conjugate(self):
        assert conjugate((3, 1)) == (2, 1, 1)
        assert conjugate(()) == ()
        assert conjugate((2, 2)) == (2, 2)

    @given(st.lists(st.integers(0, 6), max_size=6))
    def test_conjugate_is_involution(self, parts):
        lam = make_partition(sorted(parts, reverse=True))
        assert conjugate(conjugate(lam)) == lam
        assert sum(conjugate(lam)) == sum(lam)

    def test_invalid_index(self):
        with pytest.raises(ValueError):
            SchubertIndex(3, (2, 2))
        with pytest.raises(ValueError):
            SchubertIndex(3, (0, 1))
        with pytest.raises(ValueError):
            SchubertIndex(3, (4,))


class TestIndexMaps:
    def test_complement_examples(self):
        assert complement_index(idx(4, 2, 4)) == idx(4, 2, 4)
        assert complement_index(unit_index(2, 5)) == unit_index(3, 5)
        assert complement_index(idx(5, 5)) == idx(5, 2, 3, 4, 5)

    def test_complement_of_full_set_rejected(self):
        with pytest.raises(ValueError):
            complement_index(unit_index(3, 3))

    @pytest.mark.parametrize("n", range(2, 8))
    def test_complement_partition_is_conjugate(self, n):
        for t in range(1, n):
            for index in all_indices(n, t):
                assert partition_of_index(complement_index(index)) == conjugate(partition_of_index(index))

    def test_dual_examples(self):
        assert dual_index(idx(4, 1, 3)) == idx(4, 2, 4)
        assert dual_index(point_index(2, 5)) == unit_index(2, 5)
        assert dual_index(idx(2, 2)) == idx(2, 1)

    @given(st.integers(1, 8).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.integers(1, n), min_size=1))))
    def test_dual_is_involution(self, data):
        n, els = data
        index = SchubertIndex(n, tuple(sorted(els)))
        assert dual_index(dual_index(index)) == index


class TestLittlewoodRichardson:
    def test_pieri_example(self):
        assert lr_expand((1,), (1,), RectangleBound(2, 2)) == {(2,): 1, (1, 1): 1}

    def test_unit(self):
        assert lr_expand((), (2, 1), RectangleBound(3, 3)) == {(2, 1): 1}

    def test_21_squared(self):
        out = lr_expand((2, 1), (2, 1), RectangleBound(3, 3))
        assert out[(2, 2, 2)] == 1
        assert out[(3, 2, 1)] == 2

    def test_rejects_non_fitting(self):
        with pytest.raises(ValueError):
            lr_expand((3,), (1,), RectangleBound(2, 2))

    def test_agrees_with_monomial_oracle_untruncated(self):
        box = list(partitions_in_box(2, 2))
        for lam, mu in product(box, repeat=2):
            expected = oracle_product([lam, mu], 4)
            for nu, c in expected.items():
                assert lr_coefficient(lam, mu, nu) == c
            got = lr_expand(lam, mu, RectangleBound(4, 4))
            assert got == expected

    @pytest.mark.parametrize("rows,cols", [(2, 2), (3, 3)])
    def test_commutative_and_graded(self, rows, cols):
        bound = RectangleBound(rows, cols)
        box = list(partitions_in_box(rows, cols))
        for lam, mu in product(box, repeat=2):
            out = lr_expand(lam, mu, bound)
            assert out == lr_expand(mu, lam, bound)
            assert all(sum(nu) == sum(lam) + sum(mu) for nu in out)

    def test_conjugation_symmetry(self):
        bound = RectangleBound(3, 3)
        box = list(partitions_in_box(3, 3))
        for lam, mu in product(box, repeat=2):
            out = lr_expand(lam, mu, bound)
            conj = lr_expand(conjugate(lam), conjugate(mu), bound)
            assert conj == {conjugate(nu): c for nu, c in out.items()}

    def test_truncated_matches_oracle_sample(self):
        assert lr_expand((2, 1), (1, 1), RectangleBound(3, 2)) == oracle_lr_truncated((2, 1), (1, 1), 3, 2)


class TestProducts:
    def test_iterated_pieri(self):
        assert product_coefficient([(1,), (1,), (2,)], RectangleBound(2, 2), (2, 2)) == 1

    def test_empty_product(self):
        assert product_coefficient([(), ()], RectangleBound(2, 2), ()) == 1
        assert product_coefficient([], RectangleBound(2, 2), ()) == 1

    def test_degree_mismatch(self):
        assert product_coefficient([(1,), (1,)], RectangleBound(1, 1), (1,)) == 0

    def test_point_class_examples(self):
        assert is_point_class([idx(2, 2), idx(2, 1), idx(2, 1)])
        assert not is_point_class([idx(2, 1), idx(2, 1), idx(2, 1)])
        assert is_point_class([idx(4, 1, 3), idx(4, 1, 3), idx(4, 1, 4)])

    def test_mixed_shapes_rejected(self):
        with pytest.raises(ValueError):
            is_point_class([idx(3, 1), idx(4, 1)])
        with pytest.raises(ValueError):
            is_nonzero_product([idx(4, 1), idx(4, 1, 2)])

    def test_nonzero_examples(self):
        assert not is_nonzero_product([idx(2, 2), idx(2, 2)])
        assert is_nonzero_product([unit_index(2, 5)] * 4)
        assert is_nonzero_product([idx(3, 2), idx(3, 2)])

    @pytest.mark.parametrize("n", range(1, 7))
    def test_two_factor_point_class_is_duality(self, n):
        for t in range(1, n + 1):
            indices = all_indices(n, t)
            for I, J in product(indices, repeat=2):
                assert is_point_class([I, J]) == (J == dual_index(I))


def _picked(I, P):
    return SchubertIndex(I.ambient_n, I.pick(P.elements))


def _shrunk(index, n):
    return SchubertIndex(n, index.elements)


@pytest.mark.parametrize("n", range(1, 6))
def test_picked_index_closure(n):
    """Picking I(s)_{P(s)} from a nonzero product and a nonzero product on [t-r]
    gives a nonzero product on [n-r]."""
    m = 3
    for t in range(1, n + 1):
        nonzero_I = [seq for seq in product(all_indices(n, t), repeat=m) if is_nonzero_product(seq)]
        for r in range(0, t):
            for x in range(1, t - r + 1):
                nonzero_P = [seq for seq in product(all_indices(t - r, x), repeat=m) if is_nonzero_product(seq)]
                for Is in nonzero_I:
                    for Ps in nonzero_P:
                        picked = [_picked(I, P) for I, P in zip(Is, Ps)]
                        if any(p.elements[-1] > n - r for p in picked):
                            pytest.fail(f"picked subsets {picked} leave [n-r]")
                        assert is_nonzero_product([_shrunk(p, n - r) for p in picked])
