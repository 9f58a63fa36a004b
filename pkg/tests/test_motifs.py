from itertools import combinations, permutations

import pytest

from motifembed import (
    DEFAULT_CATALOG,
    Graph,
    MotifCatalog,
    census,
    classify,
    enumerate_instances,
    erdos_renyi,
    instances_of_type,
    sample_instances,
)
from motifembed.motifs import MOTIF_CODES, format_instance

from conftest import (
    ORACLE_SHAPES,
    oracle_connected,
    oracle_instances,
    path_graph,
    star_graph,
)


def mtype(code):
    return DEFAULT_CATALOG.by_code[code]


class TestCatalog:
    def test_eight_types_with_expected_orders(self):
        orders = [t.order for t in DEFAULT_CATALOG.types]
        assert orders.count(3) == 2
        assert orders.count(4) == 6
        assert [t.code for t in DEFAULT_CATALOG.types] == list(MOTIF_CODES)

    def test_every_canonical_mask_is_connected(self):
        from motifembed.motifs import PAIR_BITS

        for t in DEFAULT_CATALOG.types:
            edges = [
                pair for pair, i in PAIR_BITS[t.order].items() if t.edge_mask >> i & 1
            ]
            assert oracle_connected(t.order, edges)

    def test_override_reassigns_codes(self):
        swapped = MotifCatalog({"M43": "tailed_triangle", "M44": "cycle4"})
        square = Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
        assert classify(square, (0, 1, 2, 3), swapped).code == "M44"
        assert classify(square, (0, 1, 2, 3)).code == "M43"

    def test_invalid_overrides_rejected(self):
        with pytest.raises(ValueError):
            MotifCatalog({"M43": "triangle"})  # wrong order
        with pytest.raises(ValueError):
            MotifCatalog({"M43": "star4", "M44": "star4"})  # not a bijection
        with pytest.raises(ValueError):
            MotifCatalog({"M99": "cycle4"})


class TestClassify:
    def test_spec_shapes(self, k3, k4, path4):
        assert classify(k3, (0, 1, 2)).code == "M32"
        assert classify(path_graph(3), (0, 1, 2)).code == "M31"
        assert classify(k4, (0, 1, 2, 3)).code == "M46"
        assert classify(path4, (0, 1, 2, 3)).code == "M41"

    def test_disconnected_returns_none(self, path4):
        assert classify(path4, (0, 1, 3)) is None

    def test_duplicate_ids_rejected(self, k4):
        with pytest.raises(ValueError):
            classify(k4, (0, 1, 1))

    def test_out_of_range_rejected(self, k3):
        with pytest.raises(ValueError):
            classify(k3, (0, 1, 5))

    def test_permutation_invariance(self, k4):
        g = Graph(5, [(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (4, 0)])
        for vs in combinations(range(5), 4):
            expected = classify(g, vs)
            for perm in permutations(vs):
                assert classify(g, perm) == expected

    def test_all_156_permuted_canonical_shapes_recovered(self):
        # Every relabeling of every canonical shape classifies to its code.
        checked = 0
        for order, shapes in ORACLE_SHAPES.items():
            for code, edges in shapes.items():
                for perm in permutations(range(order)):
                    host = Graph(order, [(perm[a], perm[b]) for a, b in edges])
                    got = classify(host, tuple(range(order)))
                    assert got is not None and got.code == code
                    checked += 1
        assert checked == 2 * 6 + 6 * 24

    def test_matches_oracle_on_random_graphs(self):
        for seed in range(5):
            g = erdos_renyi(12, 0.3, seed=seed)
            for order in (3, 4):
                oracle = oracle_instances(g, order)
                for vs in combinations(range(g.n), order):
                    got = classify(g, vs)
                    assert (got.code if got else None) == oracle.get(vs)


class TestEnumerate:
    def test_triangle(self, k3):
        found = list(enumerate_instances(k3, 3))
        assert len(found) == 1
        assert found[0].vertices == (0, 1, 2)
        assert found[0].mtype.code == "M32"

    def test_k4_triples_are_all_triangles(self, k4):
        found = list(enumerate_instances(k4, 3))
        assert sorted(i.vertices for i in found) == sorted(combinations(range(4), 3))
        assert all(i.mtype.code == "M32" for i in found)

    def test_star_examples(self):
        star = star_graph(3)
        triples = list(enumerate_instances(star, 3))
        assert len(triples) == 3
        assert all(i.mtype.code == "M31" for i in triples)
        quads = list(enumerate_instances(star, 4))
        assert len(quads) == 1
        assert quads[0].mtype.code == "M42"

    def test_no_duplicate_tuples(self):
        g = erdos_renyi(15, 0.4, seed=3)
        for order in (3, 4):
            tuples = [i.vertices for i in enumerate_instances(g, order)]
            assert len(tuples) == len(set(tuples))

    def test_matches_brute_force_on_random_graphs(self):
        for seed in range(8):
            g = erdos_renyi(6 + 2 * seed, 0.25, seed=seed)
            for order in (3, 4):
                got = {i.vertices: i.mtype.code for i in enumerate_instances(g, order)}
                assert got == oracle_instances(g, order)

    def test_deterministic_emission_order(self):
        g = erdos_renyi(12, 0.4, seed=1)
        a = list(enumerate_instances(g, 4))
        b = list(enumerate_instances(g, 4))
        assert a == b
        roots = [i.vertices[0] for i in a]
        assert roots == sorted(roots)

    def test_rejects_bad_order(self, k4):
        with pytest.raises(ValueError):
            list(enumerate_instances(k4, 5))


class TestCensus:
    def test_k4(self, k4):
        c = census(k4)
        nonzero = {k: v for k, v in c.per_type_count.items() if v}
        assert nonzero == {"M32": 4, "M46": 1}
        assert c.avg_participation("M32") == pytest.approx(3.0)
        assert c.avg_participation("M46") == pytest.approx(1.0)

    def test_path4(self, path4):
        c = census(path4)
        nonzero = {k: v for k, v in c.per_type_count.items() if v}
        assert nonzero == {"M31": 2, "M41": 1}
        assert c.avg_participation("M31") == pytest.approx(1.5)

    def test_edgeless_graph_all_zero(self):
        c = census(Graph(5, []))
        assert all(v == 0 for v in c.per_type_count.values())
        assert not c.participation.any()

    @pytest.mark.parametrize("seed", range(4))
    def test_participation_identity(self, seed):
        # sum over vertices of participation[:, t] == order(t) * count(t)
        g = erdos_renyi(14, 0.3, seed=seed)
        c = census(g)
        for t in DEFAULT_CATALOG.types:
            col = DEFAULT_CATALOG.index[t.code]
            assert c.participation[:, col].sum() == t.order * c.per_type_count[t.code]

    def test_rows_cover_all_types_in_order(self, k4):
        rows = census(k4).rows()
        assert [r[0] for r in rows] == list(MOTIF_CODES)


class TestSampleInstances:
    def test_population_smaller_than_k_returns_all(self, k4):
        got = sample_instances(k4, mtype("M46"), 10, seed=0)
        assert got == [((0, 1, 2, 3), mtype("M46"))]

    def test_absent_type_returns_empty(self, k4):
        assert sample_instances(k4, mtype("M31"), 5, seed=0) == []

    def test_large_k_equals_full_enumeration(self):
        g = erdos_renyi(12, 0.35, seed=2)
        code = "M31"
        full = sorted(instances_of_type(g, mtype(code)))
        assert sample_instances(g, mtype(code), 10_000, seed=9) == full

    def test_deterministic(self):
        g = erdos_renyi(14, 0.3, seed=5)
        a = sample_instances(g, mtype("M31"), 5, seed=77)
        assert a == sample_instances(g, mtype("M31"), 5, seed=77)
        assert len(a) == 5

    def test_uniformity_over_seeds(self):
        # star with 4 leaves has exactly C(4,2) = 6 wedges; draw k=2 from 6.
        g = star_graph(4)
        wedges = instances_of_type(g, mtype("M31"))
        assert len(wedges) == 6
        counts = {w.vertices: 0 for w in wedges}
        trials = 10_000
        for seed in range(trials):
            for inst in sample_instances(g, mtype("M31"), 2, seed=seed):
                counts[inst.vertices] += 1
        expected = trials * 2 / 6
        sigma = (trials * (2 / 6) * (4 / 6)) ** 0.5
        for c in counts.values():
            assert abs(c - expected) < 5 * sigma

    def test_negative_k_rejected(self, k4):
        with pytest.raises(ValueError):
            sample_instances(k4, mtype("M46"), -1, seed=0)


def test_format_instance(k4):
    inst = next(iter(enumerate_instances(k4, 4)))
    assert format_instance(inst) == "M46 0 1 2 3"
