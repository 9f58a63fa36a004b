import pytest

from motifembed import erdos_renyi, stochastic_block_model


class TestErdosRenyi:
    def test_deterministic(self):
        a = erdos_renyi(20, 0.3, seed=1)
        b = erdos_renyi(20, 0.3, seed=1)
        assert a == b
        assert a != erdos_renyi(20, 0.3, seed=2)

    def test_extreme_probabilities(self):
        assert erdos_renyi(10, 0.0, seed=0).m == 0
        assert erdos_renyi(10, 1.0, seed=0).m == 45

    def test_rejects_bad_probability(self):
        with pytest.raises(ValueError):
            erdos_renyi(5, 1.5, seed=0)


class TestStochasticBlockModel:
    def test_deterministic(self):
        a = stochastic_block_model((10, 10), 0.5, 0.05, seed=3)
        b = stochastic_block_model((10, 10), 0.5, 0.05, seed=3)
        assert a == b

    def test_block_structure_dominates(self):
        g = stochastic_block_model((20, 20), 0.5, 0.05, seed=0)
        intra = sum(1 for u, v in g.edges() if (u < 20) == (v < 20))
        inter = g.m - intra
        # 190 expected intra-block per block-pair budget vs 20 inter
        assert intra > 5 * inter

    def test_unbalanced_blocks(self):
        g = stochastic_block_model((3, 7), 1.0, 0.0, seed=0)
        assert g.m == 3 + 21
        assert all(not g.has_edge(u, v) for u in range(3) for v in range(3, 10))

    def test_rejects_bad_probability(self):
        with pytest.raises(ValueError):
            stochastic_block_model((4, 4), 0.5, -0.1, seed=0)
