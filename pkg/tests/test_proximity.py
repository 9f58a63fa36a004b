import numpy as np
import pytest

from motifembed import CoOccurrence, DEFAULT_CATALOG, erdos_renyi
from motifembed.motifs import MotifInstance, enumerate_instances


def make_instances(*vertex_tuples):
    """Wrap vertex tuples as instances; the type only matters via its arity."""
    out = []
    for vs in vertex_tuples:
        code = "M32" if len(vs) == 3 else "M46"
        out.append(MotifInstance(tuple(vs), DEFAULT_CATALOG.by_code[code]))
    return out


class TestBuild:
    def test_single_triangle(self):
        co = CoOccurrence.build(make_instances((0, 1, 2)), 3)
        assert co.weight(0, 1) == co.weight(0, 2) == co.weight(1, 2) == 1
        assert co.participation.tolist() == [1, 1, 1]

    def test_two_overlapping_triangles(self):
        co = CoOccurrence.build(make_instances((0, 1, 2), (0, 1, 3)), 4)
        assert co.weight(0, 1) == 2
        assert co.weight(0, 2) == co.weight(1, 2) == 1
        assert co.weight(0, 3) == co.weight(1, 3) == 1
        assert co.weight(2, 3) == 0
        assert co.participation.tolist() == [2, 2, 1, 1]

    def test_empty_instance_list(self):
        co = CoOccurrence.build([], 4)
        assert not co.participation.any()
        assert all(not row for row in co.rows)

    def test_out_of_range_instance_rejected(self):
        with pytest.raises(ValueError):
            CoOccurrence.build(make_instances((0, 1, 5)), 3)

    def test_symmetric_with_zero_diagonal(self):
        g = erdos_renyi(12, 0.4, seed=0)
        inst = list(enumerate_instances(g, 3)) + list(enumerate_instances(g, 4))
        co = CoOccurrence.build(inst, g.n)
        for i in range(g.n):
            assert i not in co.rows[i]
            for j, w in co.rows[i].items():
                assert co.weight(j, i) == w

    def test_pair_sum_identity(self):
        # Each 3-vertex instance contributes 3 pair increments, each 4-vertex 6.
        g = erdos_renyi(11, 0.45, seed=4)
        triples = list(enumerate_instances(g, 3))
        quads = list(enumerate_instances(g, 4))
        co = CoOccurrence.build(triples + quads, g.n)
        total = sum(w for i in range(g.n) for j, w in co.rows[i].items() if i < j)
        assert total == 3 * len(triples) + 6 * len(quads)

    def test_order_independence(self):
        g = erdos_renyi(10, 0.5, seed=7)
        inst = list(enumerate_instances(g, 4))
        a = CoOccurrence.build(inst, g.n)
        b = CoOccurrence.build(list(reversed(inst)), g.n)
        assert a.rows == b.rows
        assert np.array_equal(a.participation, b.participation)


class TestInputVector:
    def test_triangle_row(self):
        co = CoOccurrence.build(make_instances((0, 1, 2)), 3)
        assert co.input_vector(0) == {1: 1, 2: 1}

    def test_motif_isolated_vertex_has_zero_row(self):
        co = CoOccurrence.build(make_instances((0, 1, 2)), 5)
        assert co.input_vector(3) == {}
        assert co.motif_isolated() == [3, 4]

    def test_overlapping_triangles_row(self):
        co = CoOccurrence.build(make_instances((0, 1, 2), (0, 1, 3)), 4)
        assert co.input_vector(0) == {1: 2, 2: 1, 3: 1}

    def test_identical_instance_sets_give_matching_rows(self):
        # 0 and 1 sit in exactly the same instances, so their rows agree
        # everywhere except on each other's coordinate.
        co = CoOccurrence.build(make_instances((0, 1, 2), (0, 1, 3), (2, 3, 4)), 5)
        row0, row1 = co.input_vector(0), co.input_vector(1)
        for j in range(5):
            if j in (0, 1):
                continue
            assert row0.get(j, 0) == row1.get(j, 0)

    def test_input_vector_is_a_copy(self):
        co = CoOccurrence.build(make_instances((0, 1, 2)), 3)
        co.input_vector(0)[1] = 99
        assert co.weight(0, 1) == 1


class TestDenseRows:
    def test_matches_sparse_rows(self):
        g = erdos_renyi(9, 0.5, seed=2)
        co = CoOccurrence.build(list(enumerate_instances(g, 3)), g.n)
        dense = co.dense_rows(range(g.n))
        for i in range(g.n):
            for j in range(g.n):
                assert dense[i, j] == co.weight(i, j)

    def test_subset_and_dtype(self):
        co = CoOccurrence.build(make_instances((0, 1, 2)), 4)
        rows = co.dense_rows([3, 0])
        assert rows.shape == (2, 4)
        assert rows.dtype == np.float64
        assert rows[0].tolist() == [0, 0, 0, 0]
        assert rows[1].tolist() == [0, 1, 1, 0]


def test_coordinate_dump_sorted():
    co = CoOccurrence.build(make_instances((0, 1, 3), (0, 1, 2)), 4)
    lines = co.coordinate_text().splitlines()
    assert lines == ["0 1 2", "0 2 1", "0 3 1", "1 2 1", "1 3 1"]
    keys = [tuple(map(int, line.split()[:2])) for line in lines]
    assert keys == sorted(keys)
