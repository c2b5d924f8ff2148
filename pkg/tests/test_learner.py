"""Greedy neighborhood selection, pruning, symmetrization, and Chow-Liu."""

import numpy as np
import pytest

from greedymrf.entropy import EmpiricalSource, ExactSource
from greedymrf.generators import ModelSpec, WeightRule, build
from greedymrf.learner import (
    LearnerConfig,
    chow_liu,
    greedy_neighborhood,
    learn_structure,
    prune_neighborhood,
    prune_result,
)
from greedymrf.models import IsingModel, MarkovGraph, exact_joint
from greedymrf.theory import model_gap

from _oracle import greedy_first_pick, ising_table, mutual_information_bits


def exact_source(spec):
    model = build(spec)
    return model, ExactSource(exact_joint(model))


def uniform_source(p):
    m = IsingModel(MarkovGraph(p, []), {})
    return ExactSource(exact_joint(m))


def random_tree_model(rng, p, lo=0.3, hi=0.6):
    """Uniform random labeled tree via a random attachment order."""
    order = rng.permutation(p).tolist()
    edges = []
    for k in range(1, p):
        edges.append((order[k], order[int(rng.integers(0, k))]))
    g = MarkovGraph(p, edges)
    theta = {e: float(lo + (hi - lo) * rng.random()) for e in g.sorted_edges()}
    return IsingModel(g, theta)


class TestGreedyNeighborhood:
    def test_independent_variables_pick_nothing(self):
        src = uniform_source(4)
        tr = greedy_neighborhood(src, 0, LearnerConfig(epsilon=0.05))
        assert tr.picked == ()
        assert tr.stop_reason == "threshold"

    def test_chain3_node0_picks_only_its_neighbor(self):
        _, src = exact_source(ModelSpec.chain(3, WeightRule.constant(0.5)))
        tr = greedy_neighborhood(src, 0, LearnerConfig(epsilon=0.05))
        assert tr.picked == (1,)
        table = ising_table(3, {(0, 1): 0.5, (1, 2): 0.5})
        assert greedy_first_pick(table, 0, 3) == 1

    def test_counterexample_first_pick_crosses_to_far_hub(self):
        # scan upward until the hub wins the first argmin
        thresh = None
        for degree in range(1, 9):
            _, src = exact_source(ModelSpec.counterexample(degree, WeightRule.constant(0.9)))
            tr = greedy_neighborhood(src, 0, LearnerConfig(epsilon=1e-4, max_neighborhood=1))
            if tr.picked[0] == degree + 1:
                thresh = degree
                break
        assert thresh is not None and thresh <= 16
        # well below the threshold the first pick is a true neighbor
        _, src = exact_source(ModelSpec.counterexample(1, WeightRule.constant(0.9)))
        tr = greedy_neighborhood(src, 0, LearnerConfig(epsilon=1e-4, max_neighborhood=1))
        assert tr.picked[0] in (1,)

    def test_trace_gains_exceed_half_epsilon(self):
        _, src = exact_source(ModelSpec.grid(3, WeightRule.constant(0.5)))
        cfg = LearnerConfig(epsilon=0.04)
        for i in range(9):
            tr = greedy_neighborhood(src, i, cfg)
            for p in tr.picks:
                assert p.entropy_before - p.entropy_after > cfg.epsilon / 2
            befores = [p.entropy_before for p in tr.picks]
            assert befores == sorted(befores, reverse=True)

    def test_cap_stops_and_reports(self):
        _, src = exact_source(ModelSpec.grid(3, WeightRule.constant(0.5)))
        tr = greedy_neighborhood(src, 4, LearnerConfig(epsilon=0.01, max_neighborhood=2))
        assert len(tr.picked) == 2
        assert tr.stop_reason == "cap"

    def test_determinism(self):
        _, src = exact_source(ModelSpec.grid(3, WeightRule.constant(0.5)))
        cfg = LearnerConfig(epsilon=0.04)
        assert greedy_neighborhood(src, 4, cfg) == greedy_neighborhood(src, 4, cfg)

    def test_bad_config_rejected(self):
        with pytest.raises(ValueError):
            LearnerConfig(epsilon=0.0)
        with pytest.raises(ValueError):
            LearnerConfig(epsilon=0.1, max_neighborhood=0)
        with pytest.raises(ValueError):
            LearnerConfig(epsilon=0.1, symmetrization="XOR")


class TestLearnStructure:
    def test_independent_variables_give_empty_graph(self):
        res = learn_structure(uniform_source(4), LearnerConfig(epsilon=0.05))
        assert res.graph.edges == frozenset()
        assert res.asymmetric_pairs == ()

    def test_chain3_and_rule(self):
        _, src = exact_source(ModelSpec.chain(3, WeightRule.constant(0.5)))
        res = learn_structure(src, LearnerConfig(epsilon=0.05))
        assert res.graph.edges == frozenset({(0, 1), (1, 2)})

    def test_grid3_exact_recovery(self):
        model, src = exact_source(ModelSpec.grid(3, WeightRule.constant(0.5)))
        gap = model_gap(exact_joint(model), model.graph)
        res = learn_structure(src, LearnerConfig(epsilon=0.9 * gap))
        assert res.graph == model.graph

    def test_or_rule_keeps_one_sided_picks(self):
        neigh = [(1,), (), ()]
        from greedymrf.learner import symmetrize

        g_and, asym = symmetrize(neigh, 3, "AND")
        g_or, _ = symmetrize(neigh, 3, "OR")
        assert g_and.edges == frozenset()
        assert g_or.edges == frozenset({(0, 1)})
        assert asym == ((0, 1),)

    def test_result_to_dict_round_trips_edges(self):
        _, src = exact_source(ModelSpec.chain(3, WeightRule.constant(0.5)))
        res = learn_structure(src, LearnerConfig(epsilon=0.05))
        doc = res.to_dict()
        assert doc["edges"] == [[0, 1], [1, 2]]
        assert doc["config"]["epsilon"] == 0.05
        assert {t["node"] for t in doc["traces"]} == {0, 1, 2}


class TestPrune:
    def test_true_neighborhood_survives(self):
        model, src = exact_source(ModelSpec.chain(5, WeightRule.constant(0.5)))
        cfg = LearnerConfig(epsilon=0.05)
        for i in range(5):
            nbrs = model.graph.neighbors(i)
            assert prune_neighborhood(src, i, nbrs, cfg) == tuple(sorted(nbrs))

    def test_distant_vertex_removed(self):
        model, src = exact_source(ModelSpec.chain(5, WeightRule.constant(0.5)))
        cfg = LearnerConfig(epsilon=0.05)
        kept = prune_neighborhood(src, 0, (1, 4), cfg)
        assert kept == (1,)

    def test_empty_set(self):
        _, src = exact_source(ModelSpec.chain(3, WeightRule.constant(0.5)))
        assert prune_neighborhood(src, 0, (), LearnerConfig(epsilon=0.05)) == ()

    def test_prune_result_restores_counterexample(self):
        degree = 4
        model, src = exact_source(ModelSpec.counterexample(degree, WeightRule.constant(0.9)))
        res = learn_structure(src, LearnerConfig(epsilon=1e-5))
        hub_edge = (0, degree + 1)
        assert hub_edge in res.graph.edges  # the spurious pick is mutual here
        pruned = prune_result(src, res)
        assert pruned.graph == model.graph


class TestChowLiu:
    def test_chain4_recovered(self):
        model, src = exact_source(ModelSpec.chain(4, WeightRule.constant(0.5)))
        assert chow_liu(src) == model.graph

    def test_star_recovered(self):
        model, src = exact_source(ModelSpec.complete_dary_tree(4, 1, WeightRule.constant(0.5)))
        assert chow_liu(src) == model.graph

    def test_two_variables_single_edge(self):
        src = uniform_source(2)
        assert chow_liu(src).edges == frozenset({(0, 1)})

    def test_matches_oracle_mst_on_random_tree(self):
        rng = np.random.default_rng(31)
        model = random_tree_model(rng, 6)
        src = ExactSource(exact_joint(model))
        table = ising_table(model.p, dict(model.theta))
        # oracle: greedy Kruskal over brute-force MI weights
        scored = sorted(
            (-mutual_information_bits(table, u, v), u, v)
            for u in range(6)
            for v in range(u + 1, 6)
        )
        parent = list(range(6))

        def find(u):
            while parent[u] != u:
                parent[u] = parent[parent[u]]
                u = parent[u]
            return u

        edges = set()
        for _, u, v in scored:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                edges.add((u, v))
        assert chow_liu(src).edges == frozenset(edges)

    def test_greedy_equals_chow_liu_on_exact_trees(self):
        rng = np.random.default_rng(29)
        for _ in range(5):
            p = int(rng.integers(4, 9))
            model = random_tree_model(rng, p)
            joint = exact_joint(model)
            src = ExactSource(joint)
            gap = model_gap(joint, model.graph)
            res = learn_structure(src, LearnerConfig(epsilon=0.9 * gap, symmetrization="AND"))
            assert res.graph == chow_liu(src)
            assert res.graph == model.graph


class TestSuperNeighborhood:
    def test_exact_sources_pick_supersets(self):
        specs = [
            ModelSpec.chain(5, WeightRule.constant(0.5)),
            ModelSpec.cycle(6, WeightRule.constant(0.5)),
            ModelSpec.grid(3, WeightRule.constant(0.5)),
        ]
        for spec in specs:
            model, src = exact_source(spec)
            gap = model_gap(exact_joint(model), model.graph)
            cfg = LearnerConfig(epsilon=0.9 * gap)
            for i in range(model.p):
                tr = greedy_neighborhood(src, i, cfg)
                assert set(model.graph.neighbors(i)) <= set(tr.picked)

    def test_true_neighbors_picked_while_any_remain(self):
        # while the true neighborhood is incomplete, every accepted pick is a
        # true neighbor on these small exact models
        for spec in (
            ModelSpec.grid(3, WeightRule.constant(0.5)),
            ModelSpec.complete_dary_tree(2, 3, WeightRule.constant(0.5)),
        ):
            model, src = exact_source(spec)
            gap = model_gap(exact_joint(model), model.graph)
            cfg = LearnerConfig(epsilon=0.9 * gap)
            for i in range(model.p):
                nbrs = set(model.graph.neighbors(i))
                undiscovered = set(nbrs)
                for pick in greedy_neighborhood(src, i, cfg).picks:
                    if undiscovered:
                        assert pick.vertex in nbrs
                        undiscovered.discard(pick.vertex)


class TestEmpiricalLearning:
    def test_chain3_from_samples(self):
        from greedymrf.models import exact_sample

        model = build(ModelSpec.chain(3, WeightRule.constant(0.5)))
        joint = exact_joint(model)
        for seed in (0, 1, 2):
            ds = exact_sample(joint, 20000, seed=seed)
            res = learn_structure(EmpiricalSource(ds), LearnerConfig(epsilon=0.05))
            assert res.graph == model.graph
