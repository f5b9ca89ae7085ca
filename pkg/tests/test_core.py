import random

import pytest

from necksplit import (
    build_necklace,
    build_neighborhood_graph,
    colors_from_string,
    derive_cuts,
    is_peelable,
    offline_split,
    partial_rebuild,
    peel_order,
    verify_fair,
)
from necksplit.errors import (
    DivisibilityError,
    EmptyInputError,
    OutOfRangeError,
    UnassignedBeadError,
)

from conftest import make_random_two_color


class TestBuildNecklace:
    def test_worked_example_counts(self):
        neck = build_necklace("RRBRRBBBRBRB", k=3)
        assert neck.m == 12
        assert neck.color_counts == [6, 6]
        assert neck.n == 2

    def test_single_bead(self):
        neck = build_necklace("R", k=1)
        assert neck.m == 1
        assert neck.n == 1

    def test_divisibility_enforced_in_exact_mode(self):
        with pytest.raises(DivisibilityError):
            build_necklace("RRB", k=2)

    def test_approx_mode_allows_uneven_counts(self):
        neck = build_necklace("RRB", k=2, mode="approx")
        assert neck.color_counts == [2, 1]

    def test_empty_input(self):
        with pytest.raises(EmptyInputError):
            build_necklace("", k=1)

    def test_colors_from_string_first_appearance(self):
        assert colors_from_string("BRRG") == [0, 1, 1, 2]


class TestArena:
    def test_handles_stable_across_relinks(self):
        neck = build_necklace("RBRB", k=2)
        h = neck.at(2)
        neck.move_after(h, neck.at(4))
        assert neck.color_of(h) == 1
        assert neck.position_of(h) == 4
        neck.check_integrity()

    def test_positions_follow_list_order(self):
        neck = build_necklace("RRBB", k=2)
        order = neck.order()
        assert [neck.position_of(h) for h in order] == [1, 2, 3, 4]
        neck.move_before(order[3], order[0])
        assert neck.colors() == [1, 0, 0, 1]

    def test_insert_and_remove_update_counts(self):
        neck = build_necklace("RB", k=1)
        h = neck.insert_bead(1, after=neck.tail)
        assert neck.m == 3
        assert neck.color_counts == [1, 2]
        assert neck.remove_bead(h) == 1
        assert neck.m == 2
        neck.check_integrity()

    def test_at_out_of_range(self):
        neck = build_necklace("RB", k=1)
        with pytest.raises(OutOfRangeError):
            neck.at(3)

    def test_owner_chains_partition_beads(self, worked_example):
        neck = worked_example
        seen = []
        for agent in range(neck.k):
            seen.extend(neck.agent_beads(agent))
        assert sorted(seen) == sorted(neck.order())
        neck.check_integrity()

    def test_clone_is_independent(self, worked_example):
        copy = worked_example.clone()
        copy.set_owner(copy.at(1), 0)
        assert worked_example.owner_of(worked_example.at(1)) == 1


class TestDeriveCuts:
    def test_worked_example_boundaries(self, worked_example):
        cuts = derive_cuts(worked_example)
        assert cuts.positions == [2, 6, 8]
        # each boundary filed under its adjacent owner pair
        assert cuts.pair_map == {(0, 1): [2, 6], (1, 2): [8]}

    def test_single_owner_no_cuts(self):
        neck = build_necklace("RBRB", k=1)
        offline_split(neck)
        assert derive_cuts(neck).size == 0

    def test_matches_independent_owner_change_scan(self):
        rng = random.Random(7)
        for _ in range(25):
            neck = build_necklace([rng.randint(0, 1) for _ in range(10)], k=3, mode="approx")
            owners = [rng.randrange(3) for _ in range(10)]
            for pos, a in enumerate(owners, start=1):
                neck.set_owner(neck.at(pos), a)
            expected = sum(1 for i in range(1, 10) if owners[i] != owners[i - 1])
            assert derive_cuts(neck).size == expected

    def test_unassigned_bead_rejected(self):
        neck = build_necklace("RB", k=2, mode="approx")
        with pytest.raises(UnassignedBeadError):
            derive_cuts(neck)


class TestVerifyFair:
    def test_worked_example_fair(self, worked_example):
        report = verify_fair(worked_example)
        assert report.is_fair
        assert all(row == [2, 2] for row in report.counts)

    def test_single_agent_always_fair(self):
        neck = build_necklace("RRBBBR", k=1)
        offline_split(neck)
        assert verify_fair(neck).is_fair

    def test_reassignment_shows_deficit_and_surplus(self, worked_example):
        neck = worked_example
        neck.set_owner(neck.at(1), 2)  # bead 1 is red, owned by agent 1
        report = verify_fair(neck)
        assert not report.is_fair
        assert report.deviation(1, 0) == -1
        assert report.deviation(2, 0) == 1


class TestNeighborhoodGraph:
    def test_worked_example_is_a_path(self, worked_example):
        graph = build_neighborhood_graph(worked_example)
        assert graph.edges() == {frozenset((0, 1)), frozenset((1, 2))}

    def test_block_pairs_give_linear_graph(self):
        k = 8
        neck = build_necklace("RB" * k, k=k)
        for pos in range(1, 2 * k + 1):
            neck.set_owner(neck.at(pos), (pos - 1) // 2)
        graph = build_neighborhood_graph(neck)
        assert graph.edges() == {frozenset((a, a + 1)) for a in range(k - 1)}

    def test_single_agent_has_no_edges(self):
        neck = build_necklace("RB", k=1)
        offline_split(neck)
        graph = build_neighborhood_graph(neck)
        assert graph.edge_count == 0

    def test_edge_count_never_exceeds_cut_count(self):
        rng = random.Random(3)
        for _ in range(20):
            neck = make_random_two_color(rng, k=rng.randint(2, 5))
            offline_split(neck)
            graph = build_neighborhood_graph(neck)
            assert graph.edge_count <= derive_cuts(neck).size

    def test_partial_rebuild_matches_full_build(self):
        rng = random.Random(11)
        for _ in range(20):
            neck = make_random_two_color(rng, k=4)
            offline_split(neck)
            graph = build_neighborhood_graph(neck)
            # perturb two agents' beads, then repair only their edges
            beads0 = neck.agent_beads(0)
            beads1 = neck.agent_beads(1)
            for h in beads0[: len(beads0) // 2]:
                neck.set_owner(h, 1)
            for h in beads1[: len(beads1) // 2]:
                neck.set_owner(h, 0)
            partial_rebuild(graph, neck, {0, 1})
            assert graph.edges() == build_neighborhood_graph(neck).edges()


class TestPeeling:
    def test_worked_example_peels_in_id_order(self, worked_example):
        assert peel_order(worked_example) == [0, 1, 2]

    def test_offline_outputs_are_peelable(self):
        rng = random.Random(5)
        for _ in range(30):
            neck = make_random_two_color(rng, k=rng.randint(1, 5))
            offline_split(neck)
            assert is_peelable(neck)

    def test_alternating_pair_is_not_peelable(self):
        neck = build_necklace("RBRB", k=2)
        for pos, a in enumerate([0, 1, 0, 1], start=1):
            neck.set_owner(neck.at(pos), a)
        assert not is_peelable(neck)

    def test_requires_owners(self):
        neck = build_necklace("RB", k=2, mode="approx")
        with pytest.raises(UnassignedBeadError):
            is_peelable(neck)
