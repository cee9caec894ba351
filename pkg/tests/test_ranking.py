import numpy as np
import pytest

from citescope.errors import EmptyGraph, NoConvergence
from citescope.grouping import WeightedGraph
from citescope.ranking import centrality, centrality_from_matrix


def eigen_oracle(sim, damping):
    """Stationary distribution via a dense eigen-solve, independent of the
    power iteration."""
    n = sim.shape[0]
    row_sums = sim.sum(axis=1)
    b = np.empty_like(sim, dtype=float)
    for i in range(n):
        b[i] = sim[i] / row_sums[i] if row_sums[i] > 0 else 1.0 / n
    a = damping / n + (1.0 - damping) * b
    vals, vecs = np.linalg.eig(a.T)
    idx = int(np.argmax(vals.real))
    p = vecs[:, idx].real
    return p / p.sum()


class TestCentralityMatrix:
    def test_single_node(self):
        p, iters, residual = centrality_from_matrix(np.zeros((1, 1)))
        assert p.tolist() == [1.0]
        assert iters == 0

    def test_empty_raises(self):
        with pytest.raises(EmptyGraph):
            centrality_from_matrix(np.zeros((0, 0)))

    def test_two_node_symmetric(self):
        sim = np.array([[0.0, 1.0], [1.0, 0.0]])
        p, _, _ = centrality_from_matrix(sim)
        assert p == pytest.approx([0.5, 0.5], abs=1e-8)

    def test_three_node_path(self):
        # a - b - c: middle node most central, ends equal
        sim = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=float)
        p, _, _ = centrality_from_matrix(sim, damping=0.1)
        assert p[1] > p[0]
        assert p[0] == pytest.approx(p[2], abs=1e-8)
        assert p == pytest.approx(eigen_oracle(sim, 0.1), abs=1e-6)

    def test_matches_dense_eigen_solve(self):
        rng = np.random.default_rng(123)
        for _ in range(40):
            n = int(rng.integers(2, 13))
            sim = rng.random((n, n)) * (rng.random((n, n)) < 0.6)
            np.fill_diagonal(sim, 0.0)
            sim = (sim + sim.T) / 2
            damping = float(rng.choice([0.1, 0.15, 0.5]))
            p, _, _ = centrality_from_matrix(sim, damping=damping)
            expected = eigen_oracle(sim, damping)
            assert np.max(np.abs(p - expected)) < 1e-6

    def test_zero_rows_get_uniform(self):
        # isolated node: fed by damping + uniform replacement rows only
        sim = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 0]], dtype=float)
        p, _, _ = centrality_from_matrix(sim, damping=0.1)
        assert p == pytest.approx(eigen_oracle(sim, 0.1), abs=1e-6)
        assert p.sum() == pytest.approx(1.0, abs=1e-12)

    def test_mass_is_one(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            n = int(rng.integers(2, 10))
            sim = rng.random((n, n))
            np.fill_diagonal(sim, 0.0)
            p, _, _ = centrality_from_matrix(sim)
            assert p.sum() == pytest.approx(1.0, abs=1e-12)
            assert (p >= 0).all()

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(77)
        sim = rng.random((6, 6))
        np.fill_diagonal(sim, 0.0)
        sim = (sim + sim.T) / 2
        perm = rng.permutation(6)
        p, _, _ = centrality_from_matrix(sim)
        pp, _, _ = centrality_from_matrix(sim[np.ix_(perm, perm)])
        assert pp == pytest.approx(p[perm], abs=1e-7)

    def test_no_convergence(self):
        rng = np.random.default_rng(0)
        sim = rng.random((8, 8))
        np.fill_diagonal(sim, 0.0)
        with pytest.raises(NoConvergence) as exc:
            centrality_from_matrix(sim, max_iter=2, tol=1e-15)
        assert exc.value.iterations == 2
        assert exc.value.residual > 0

    def test_invalid_damping(self):
        with pytest.raises(ValueError):
            centrality_from_matrix(np.zeros((2, 2)), damping=1.0)


class TestCentralityGraph:
    def test_star_hub_most_central(self):
        g = WeightedGraph(["hub", "s1", "s2", "s3"])
        for s in ("s1", "s2", "s3"):
            g.add_edge("hub", s, 1.0)
        scores = centrality(g)
        assert scores.score["hub"] > scores.score["s1"]
        assert scores.score["s1"] == pytest.approx(scores.score["s2"], abs=1e-8)
        assert sum(scores.score.values()) == pytest.approx(1.0, abs=1e-10)

    def test_matches_matrix_form(self):
        g = WeightedGraph([0, 1, 2])
        g.add_edge(0, 1, 0.4)
        g.add_edge(1, 2, 0.9)
        sim = np.array([[0, 0.4, 0], [0.4, 0, 0.9], [0, 0.9, 0]])
        p, _, _ = centrality_from_matrix(sim)
        scores = centrality(g)
        for i in range(3):
            assert scores.score[i] == pytest.approx(p[i], abs=1e-12)

    def test_empty_graph(self):
        with pytest.raises(EmptyGraph):
            centrality(WeightedGraph([]))

    def test_residual_reported_below_tol(self):
        g = WeightedGraph([0, 1])
        g.add_edge(0, 1, 1.0)
        scores = centrality(g, tol=1e-8)
        assert scores.residual <= 1e-8
        assert scores.iterations >= 1
