import random
from collections import Counter
from itertools import combinations_with_replacement

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.exceptions import AuditFailure, UncoveredEdgeError
from core.ilp.forms import compute_delta
from core.modelers.set_cover import cover_from_solution, set_cover_to_ilp
from core.modelers.vertex_cover import (
    VcWitnessSet,
    extract_cover,
    formulation_audit,
    vc_2approx,
    wvc_to_binary_ilp,
    wvc_to_milp,
)
from core.oracles.deciders import decide_exact
from core.oracles.instances import SetCoverInstance, SimpleGraph, WvcInstance
from core.solvers.brute_force import brute_force_feasibility
from core.solvers.milp import milp_feasibility


@st.composite
def weighted_graphs(draw):
    n = draw(st.integers(1, 6))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    weights = tuple(draw(st.lists(st.integers(0, 3), min_size=n, max_size=n)))
    budget = draw(st.integers(0, 8))
    return WvcInstance(SimpleGraph(n, tuple(edges)), weights, budget)


class TestSetCover:
    def test_shape(self):
        inst = SetCoverInstance(2, ((0,), (1,), (0, 1)), 1)
        p = set_cover_to_ilp(inst)
        assert (p.num_constraints, p.num_vars) == (3, 3)
        assert p.dense() == [[-1, 0, -1], [0, -1, -1], [1, 1, 1]]
        assert p.rhs == (-1, -1, 1)
        assert compute_delta(p).delta_A == 1

    def test_budget_one_picks_the_union_set(self):
        inst = SetCoverInstance(2, ((0,), (1,), (0, 1)), 1)
        result = brute_force_feasibility(set_cover_to_ilp(inst), box=1)
        assert cover_from_solution(inst, result.certificate) == (2,)

    @pytest.mark.parametrize(
        "x, message",
        [((1, 0), "2 entries for 3 sets"), ((1, 0, 0), "miss element 1"), ((1, 1, 0), "budget is 1")],
    )
    def test_cover_from_solution_rejects_bad_solutions(self, x, message):
        inst = SetCoverInstance(2, ((0,), (1,), (0, 1)), 1)
        with pytest.raises(AuditFailure, match=message):
            cover_from_solution(inst, x)

    def test_zero_budget_with_nonempty_universe(self):
        inst = SetCoverInstance(2, ((0,), (1,), (0, 1)), 0)
        assert not brute_force_feasibility(set_cover_to_ilp(inst), box=1).feasible

    def test_binary_variant_bounds(self):
        p = set_cover_to_ilp(SetCoverInstance(1, ((0,),), 1), binary=True)
        assert p.is_binary


class TestTwoApproximation:
    def test_single_edge(self):
        assert vc_2approx(SimpleGraph(2, ((0, 1),))).vertices == (0, 1)

    def test_empty_graph(self):
        assert vc_2approx(SimpleGraph(5)).vertices == ()

    def test_petersen(self):
        graph = SimpleGraph.from_networkx(nx.petersen_graph())
        cover = vc_2approx(graph)
        assert VcWitnessSet.of(graph, cover.vertices).is_cover
        assert len(cover.vertices) <= 12

    def test_witness_set_detects_non_cover(self, triangle):
        assert not VcWitnessSet.of(triangle, [2, 2]).is_cover
        assert VcWitnessSet.of(triangle, [2, 0]).vertices == (0, 2)


class TestWeightedVertexCover:
    @pytest.mark.parametrize("budget, expected", [(3, (1, 2, 3)), (2, None)])
    def test_heavy_star_center(self, star3, budget, expected):
        inst = WvcInstance(star3, (5, 1, 1, 1), budget)
        result = milp_feasibility(wvc_to_milp(inst, vc_2approx(star3)))
        if expected is None:
            assert not result.feasible
        else:
            assert extract_cover(inst, result.certificate) == expected

    def test_path_skips_heavy_middle(self):
        graph = SimpleGraph(3, ((0, 1), (1, 2)))
        inst = WvcInstance(graph, (1, 10, 1), 2)
        result = milp_feasibility(wvc_to_milp(inst, vc_2approx(graph)))
        assert extract_cover(inst, result.certificate) == (0, 2)

    def test_isolated_vertices_stay_continuous(self):
        graph = SimpleGraph(3, ((0, 1),))
        inst = WvcInstance(graph, (1, 1, 1), 1)
        cover = vc_2approx(graph)
        p = wvc_to_milp(inst, cover)
        assert p.integral == (True, True, False)
        result = milp_feasibility(p)
        assert extract_cover(inst, result.certificate) in ((0,), (1,))

    def test_cover_must_cover(self, triangle):
        inst = WvcInstance(triangle, (1, 1, 1), 2)
        with pytest.raises(UncoveredEdgeError, match=r"\(1, 2\)"):
            wvc_to_milp(inst, VcWitnessSet.of(triangle, [0]))

    def test_formulation_audit(self, triangle):
        inst = WvcInstance(triangle, (1, 1, 1), 2)
        cover = vc_2approx(triangle)
        report = formulation_audit(inst, cover, wvc_to_milp(inst, cover))
        assert report == {
            "delta": 2,
            "max_weight": 1,
            "n": 3,
            "constraints": 3,
            "integral_vars": 2,
            "cover_size": 2,
        }
        binary = formulation_audit(inst, cover, wvc_to_binary_ilp(inst, cover))
        assert binary["integral_vars"] == 3

    def test_extract_cover_checks_the_result(self, triangle):
        inst = WvcInstance(triangle, (1, 1, 1), 2)
        with pytest.raises(AuditFailure, match="misses edge"):
            extract_cover(inst, (1, 0, 0))
        with pytest.raises(AuditFailure, match="budget"):
            extract_cover(inst, (1, 1, 1))

    @given(weighted_graphs())
    @settings(max_examples=100, deadline=None)
    def test_milp_agrees_with_binary_enumeration(self, inst):
        cover = vc_2approx(inst.graph)
        milp = milp_feasibility(wvc_to_milp(inst, cover))
        binary = brute_force_feasibility(wvc_to_binary_ilp(inst, cover), box=1)
        assert milp.feasible == binary.feasible
        if milp.feasible:
            extract_cover(inst, milp.certificate)


def set_families(universe_size, max_sets):
    subsets = [tuple(e for e in range(universe_size) if mask >> e & 1) for mask in range(1 << universe_size)]
    for count in range(1, max_sets + 1):
        yield from combinations_with_replacement(subsets, count)


def set_cover_verdicts(inst):
    plain = brute_force_feasibility(set_cover_to_ilp(inst), box=1)
    binary = brute_force_feasibility(set_cover_to_ilp(inst, binary=True), box=1)
    assert plain.feasible == binary.feasible == decide_exact(inst), inst
    if plain.feasible:
        cover_from_solution(inst, plain.certificate)
    return plain.feasible


def weighted_instances(graph, rng, weight_draws):
    for _ in range(weight_draws):
        weights = tuple(rng.randint(1, 3) for _ in range(graph.n))
        for budget in range(sum(weights) + 1):
            yield WvcInstance(graph, weights, budget)


def wvc_verdicts(inst):
    cover = vc_2approx(inst.graph)
    milp = milp_feasibility(wvc_to_milp(inst, cover))
    binary = brute_force_feasibility(wvc_to_binary_ilp(inst, cover), box=1)
    assert milp.feasible == binary.feasible == decide_exact(inst), inst
    if milp.feasible:
        extract_cover(inst, milp.certificate)
    return milp.feasible


@pytest.mark.slow
class TestAgainstExactDeciders:
    def test_every_small_set_family(self):
        verdicts = Counter()
        for u in range(0, 5):
            for sets in set_families(u, 3):
                for budget in range(len(sets) + 1):
                    verdicts[set_cover_verdicts(SetCoverInstance(u, sets, budget))] += 1
        assert verdicts[True] and verdicts[False]

    def test_seeded_families_of_six(self):
        rng = random.Random(31)
        for _ in range(300):
            u = rng.randint(1, 5)
            sets = tuple(tuple(e for e in range(u) if rng.random() < 0.4) for _ in range(rng.randint(1, 6)))
            for budget in range(len(sets) + 1):
                set_cover_verdicts(SetCoverInstance(u, sets, budget))

    def test_every_graph_on_five_vertices(self):
        rng = random.Random(37)
        graphs = [g for g in nx.graph_atlas_g() if 1 <= g.number_of_nodes() <= 5]
        verdicts = Counter()
        for g in graphs:
            for inst in weighted_instances(SimpleGraph.from_networkx(g), rng, weight_draws=2):
                verdicts[wvc_verdicts(inst)] += 1
        assert len(graphs) == 52
        assert verdicts[True] and verdicts[False]

    def test_random_graphs_on_six_and_seven_vertices(self):
        rng = random.Random(41)
        for seed in range(50):
            g = nx.gnp_random_graph(rng.choice((6, 7)), 0.4, seed=seed)
            for inst in weighted_instances(SimpleGraph.from_networkx(g), rng, weight_draws=1):
                wvc_verdicts(inst)
