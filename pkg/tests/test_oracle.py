import math
import random

import pytest

from necksplit import (
    INFEASIBLE,
    adversarial_necklace,
    brute_force_min_cuts,
    build_flow_network,
    build_neighborhood_tree,
    exact_min_node_max_flow,
    offline_split,
    solve_tree_flow,
)
from necksplit.errors import TooLargeError, ZeroBatchError

from conftest import make_random_two_color


class TestBruteForceMinCuts:
    def test_two_blocks_two_agents(self):
        assert brute_force_min_cuts("RRBB", 2) == 2

    def test_single_agent_needs_no_cuts(self):
        assert brute_force_min_cuts("RBRBRB", 1) == 0

    def test_adversarial_matches_formula(self):
        assert brute_force_min_cuts(adversarial_necklace(2, 8), 2) == 2

    def test_infeasible_returns_sentinel(self):
        assert brute_force_min_cuts("RRB", 2) is INFEASIBLE
        assert math.isinf(brute_force_min_cuts("RRB", 2))

    def test_size_cap(self):
        with pytest.raises(TooLargeError):
            brute_force_min_cuts("RB" * 11, 2)

    def test_never_exceeds_offline(self):
        rng = random.Random(2)
        for _ in range(15):
            k = rng.choice([2, 3])
            neck = make_random_two_color(rng, k=k, max_m=18)
            cuts = offline_split(neck).cuts
            assert brute_force_min_cuts(neck.colors(), k) <= cuts


class TestExactMinNodeMaxFlow:
    def test_nested_blocks_flow_needs_six_nodes(self, nested_blocks_fixture):
        tree = build_neighborhood_tree(nested_blocks_fixture)
        network = build_flow_network(tree, {0: -1, 4: -1, 2: 1, 5: 1})
        assert exact_min_node_max_flow(network) == 6

    def test_adjacent_source_sink(self):
        tree = build_neighborhood_tree(_two_agent_split())
        network = build_flow_network(tree, {0: -1, 1: 1})
        assert exact_min_node_max_flow(network) == 2

    def test_tree_solver_within_twice_optimum(self):
        rng = random.Random(9)
        checked = 0
        while checked < 60:
            k = rng.randint(2, 8)
            neck = make_random_two_color(rng, k=k, max_m=40)
            offline_split(neck)
            tree = build_neighborhood_tree(neck)
            delta = _random_delta(rng, k)
            if delta is None:
                continue
            try:
                network = build_flow_network(tree, delta)
            except ZeroBatchError:
                continue
            solved = solve_tree_flow(network)
            assert len(solved.active) <= 2 * exact_min_node_max_flow(network)
            checked += 1


def _two_agent_split():
    from necksplit import build_necklace

    neck = build_necklace("RRBB", k=2)
    offline_split(neck)
    return neck


def _random_delta(rng, k):
    agents = list(range(k))
    rng.shuffle(agents)
    n_src = rng.randint(1, max(1, k // 2))
    sources = agents[:n_src]
    sinks = agents[n_src : 2 * n_src]
    if not sinks:
        return None
    delta = {}
    total = 0
    for s in sources:
        amt = rng.randint(1, 3)
        delta[s] = -amt
        total += amt
    base = total // len(sinks)
    for i, t in enumerate(sinks):
        delta[t] = base + (1 if i < total % len(sinks) else 0)
    return delta
