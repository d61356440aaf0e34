import math

import numpy as np
import pytest

from typexp import (
    Distribution,
    HypothesisSet,
    SymbolSequence,
    TypeVector,
    ValidationError,
    build_robust_model,
    count_ops,
    dgl_decide,
    enumerate_types,
    kl_divergence,
    map_decide,
    nn_decide,
    robust_decide,
    sample_sequence,
    tilted,
    type_of,
    uniform,
)
from conftest import nominal_dists, random_distribution


def dist(values):
    return Distribution(np.array(values))


class TestHypothesisSet:
    def test_needs_two_hypotheses(self):
        with pytest.raises(ValidationError):
            HypothesisSet([uniform(3)])

    def test_uniform_priors_by_default(self, ref_hypotheses):
        assert ref_hypotheses.priors.tolist() == [0.2] * 5

    def test_rejects_zero_priors(self):
        with pytest.raises(ValidationError):
            HypothesisSet([uniform(3), uniform(3)], [1.0, 0.0])

    def test_rejects_unnormalized_priors(self):
        with pytest.raises(ValidationError):
            HypothesisSet([uniform(3), uniform(3)], [0.7, 0.7])

    def test_rejects_mixed_alphabets(self):
        with pytest.raises(Exception):
            HypothesisSet([uniform(3), uniform(4)])


class TestNnDecide:
    def test_zero_divergence_type(self, ref_hypotheses):
        t = TypeVector((1, 8, 1), 10)  # matches the first reference source
        decision = nn_decide(ref_hypotheses, t)
        assert decision.index == 1
        assert decision.scores[0] == 0.0

    def test_exact_tie_breaks_low(self):
        h = HypothesisSet([dist([0.2, 0.8]), dist([0.8, 0.2])])
        decision = nn_decide(h, TypeVector((5, 5), 10))
        assert decision.scores[0] == decision.scores[1]
        assert decision.index == 1

    def test_all_infinite_scores_return_first(self):
        h = HypothesisSet([dist([1.0, 0.0, 0.0]), dist([0.0, 1.0, 0.0])])
        decision = nn_decide(h, TypeVector((0, 0, 4), 4))
        assert decision.scores == (math.inf, math.inf)
        assert decision.index == 1

    def test_monte_carlo_recovery(self, ref_dists, ref_hypotheses):
        hits = 0
        for seed in range(1000):
            rng = np.random.default_rng(seed)
            x = sample_sequence(ref_dists[2], 500, rng)
            hits += nn_decide(ref_hypotheses, type_of(x)).index == 3
        assert hits / 1000 > 0.95

    def test_scores_are_divergences(self, ref_hypotheses):
        t = TypeVector((4, 3, 3), 10)
        decision = nn_decide(ref_hypotheses, t)
        t_hat = t.as_distribution()
        for score, d in zip(decision.scores, ref_hypotheses.distributions):
            assert score == kl_divergence(t_hat, d)

    def test_argmin_invariant_under_monotone_transform(self, ref_hypotheses):
        rng = np.random.default_rng(3)
        for _ in range(50):
            counts = rng.multinomial(30, rng.dirichlet(np.ones(3)))
            t = TypeVector(tuple(int(c) for c in counts), 30)
            decision = nn_decide(ref_hypotheses, t)
            transformed = [math.atan(s) + 2.0 for s in decision.scores]
            assert int(np.argmin(transformed)) + 1 == decision.index


class TestMapDecide:
    def test_uniform_priors_reduce_to_max_likelihood(self):
        rng = np.random.default_rng(17)
        for _ in range(100):
            dists = [random_distribution(rng, 3, min_mass=1e-3) for _ in range(4)]
            h = HypothesisSet(dists)
            x = SymbolSequence(rng.integers(0, 3, size=12), 3)
            # Independent oracle: plain likelihood products.
            likes = [float(np.prod([d.probs[s] for s in x.symbols])) for d in dists]
            assert map_decide(h, x).index == int(np.argmax(likes)) + 1

    def test_overwhelming_prior_dominates(self, ref_dists):
        h = HypothesisSet(ref_dists, [1 - 1e-9] + [2.5e-10] * 4)
        rng = np.random.default_rng(5)
        x = sample_sequence(ref_dists[2], 4, rng)
        assert map_decide(h, x).index == 1

    def test_matches_bayes_oracle(self):
        rng = np.random.default_rng(23)
        for _ in range(100):
            dists = [random_distribution(rng, 3, min_mass=1e-3) for _ in range(3)]
            priors = rng.dirichlet(np.ones(3) * 5)
            h = HypothesisSet(dists, priors)
            x = SymbolSequence(rng.integers(0, 3, size=20), 3)
            posts = [
                prior * float(np.prod([d.probs[s] for s in x.symbols]))
                for prior, d in zip(priors, dists)
            ]
            assert map_decide(h, x).index == int(np.argmax(posts)) + 1


class TestRobustDecide:
    def test_zero_radius_equals_nn_on_all_types(self, ref_dists, ref_hypotheses):
        model = build_robust_model(ref_dists, [0.0] * 5)
        for t in enumerate_types(20, 3):
            assert robust_decide(model, t).index == nn_decide(ref_hypotheses, t).index

    def test_exact_uniform_limit_ties_to_first(self):
        model = build_robust_model([uniform(3)] * 4, [10.0] * 4)
        decision = robust_decide(model, TypeVector((7, 2, 1), 10))
        assert len(set(decision.scores)) == 1
        assert decision.index == 1

    def test_monte_carlo_recovery_with_nominals(self, ref_dists):
        model = build_robust_model(nominal_dists(0.005), [0.005] * 5)
        hits = 0
        for seed in range(500):
            rng = np.random.default_rng(seed)
            x = sample_sequence(ref_dists[1], 500, rng)
            hits += robust_decide(model, type_of(x)).index == 2
        assert hits / 500 > 0.9


class TestDglDecide:
    def test_monte_carlo_two_way(self):
        qs = nominal_dists(0.005)[:2]
        hits = 0
        for seed in range(1000):
            rng = np.random.default_rng(seed)
            x = sample_sequence(qs[0], 500, rng)
            hits += dgl_decide(qs, x).index == 1
        assert hits / 1000 > 0.95

    def test_identical_nominals_tie_to_first(self):
        q = dist([0.4, 0.6])
        x = SymbolSequence(np.array([0, 1, 1, 0]), 2)
        decision = dgl_decide([q, q], x)
        assert decision.index == 1
        assert decision.scores == (1, 0)

    def test_depends_only_on_type(self):
        qs = nominal_dists(0.03)
        rng = np.random.default_rng(8)
        symbols = rng.integers(0, 3, size=200)
        baseline = dgl_decide(qs, SymbolSequence(symbols, 3))
        for _ in range(10):
            shuffled = rng.permutation(symbols)
            assert dgl_decide(qs, SymbolSequence(shuffled, 3)) == baseline

    def test_win_counts_sum_to_pair_count(self):
        qs = nominal_dists(0.1)
        x = SymbolSequence(np.arange(30) % 3, 3)
        decision = dgl_decide(qs, x)
        assert sum(decision.scores) == 5 * 4 // 2


class TestOperationComplexity:
    def make_hypotheses(self, m, rng):
        return [random_distribution(rng, 3, min_mass=1e-3) for _ in range(m)]

    def test_nn_linear_and_dgl_quadratic_in_m(self):
        rng = np.random.default_rng(31)
        n = 60
        x = SymbolSequence(rng.integers(0, 3, size=n), 3)
        t = type_of(x)
        totals = {}
        for m in (5, 10):
            dists = self.make_hypotheses(m, rng)
            h = HypothesisSet(dists)
            with count_ops() as nn_ops:
                nn_decide(h, t)
            with count_ops() as dgl_ops:
                dgl_decide(dists, x)
            totals[m] = (nn_ops.total, dgl_ops.total)
        nn_ratio = totals[10][0] / totals[5][0]
        dgl_ratio = (totals[10][1] - 60) / (totals[5][1] - 60)  # net of the type pass
        assert nn_ratio == pytest.approx(2.0, rel=0.1)
        assert dgl_ratio == pytest.approx(4.0, rel=0.15)

    def test_robust_ops_match_nn_shape(self, ref_dists, ref_hypotheses):
        model = build_robust_model(ref_dists, [0.01] * 5)
        t = TypeVector((5, 10, 5), 20)
        with count_ops() as nn_ops:
            nn_decide(ref_hypotheses, t)
        with count_ops() as robust_ops:
            robust_decide(model, t)
        assert nn_ops.total == robust_ops.total


class TestTieConstruction:
    def test_equidistant_type_from_tilted_midpoint(self, ref_dists):
        # A type rounded from the optimal geometric mixture sits nearly
        # equidistant; the decision must still be deterministic and stable.
        from typexp import chernoff_information

        p, q = ref_dists[0], ref_dists[1]
        _, lam = chernoff_information(p, q)
        mid = tilted(p, q, lam)
        n = 400
        counts = np.floor(mid.probs * n).astype(int)
        counts[-1] += n - counts.sum()
        h = HypothesisSet([p, q])
        t = TypeVector(tuple(int(c) for c in counts), n)
        first = nn_decide(h, t)
        second = nn_decide(h, t)
        assert first == second
        assert abs(first.scores[0] - first.scores[1]) < 0.01
