import random

import pytest

from necksplit import (
    adversarial_necklace,
    brute_force_min_cuts,
    build_necklace,
    derive_cuts,
    is_peelable,
    offline_split,
    offline_split_range,
    swap,
    verify_fair,
)
from necksplit.errors import (
    DivisibilityError,
    NotTwoColorsError,
    QuotaMismatchError,
)

from conftest import make_random_two_color


class TestOfflineSplit:
    def test_worked_example_allocation(self):
        neck = build_necklace("RRBRRBBBRBRB", k=3)
        result = offline_split(neck)
        assert result.cuts == 3
        # first window goes to agent 0, agent 1 takes beads 1,2,7,8
        assert neck.owners() == [1, 1, 0, 0, 0, 0, 1, 1, 2, 2, 2, 2]

    def test_single_agent_single_interval(self):
        neck = build_necklace("RRBBRB", k=1)
        assert offline_split(neck).cuts == 0

    def test_adversarial_needs_full_budget(self):
        # frozen from the exhaustive oracle: 4 cuts for k=3 on the split string
        neck = build_necklace("RRRRRRBBBBBB", k=3)
        assert offline_split(neck).cuts == 4
        assert brute_force_min_cuts("RRRRRRBBBBBB", 3) == 4

    def test_rejects_more_than_two_colors(self):
        neck = build_necklace("RGB", k=1)
        with pytest.raises(NotTwoColorsError):
            offline_split(neck)

    def test_random_necklaces_fair_bounded_peelable(self):
        rng = random.Random(17)
        for _ in range(200):
            k = rng.choice([2, 3, 4, 5])
            neck = make_random_two_color(rng, k=k)
            result = offline_split(neck)
            assert result.cuts <= 2 * (k - 1)
            assert verify_fair(neck).is_fair
            assert is_peelable(neck)


class TestOfflineSplitRange:
    def test_single_agent_keeps_beads(self, worked_example):
        before = worked_example.owners()
        result = offline_split_range(worked_example, [0])
        assert worked_example.owners() == before
        assert result.internal_cuts == 0

    def test_rerun_after_swap_on_two_agents(self, worked_example):
        neck = worked_example
        # exchange beads 8 and 9 (different colors, agents 1 and 2)
        u, v = neck.at(8), neck.at(9)
        neck.move_after(u, v)
        result = offline_split_range(neck, [1, 2])
        assert verify_fair(neck).is_fair
        assert result.internal_cuts <= 2
        assert result.cuts <= 4

    def test_windowed_subsequence_semantics(self):
        # the leftmost balanced window of RBBR starts at bead 1, so the
        # first agent may not simply collect the two end beads
        neck = build_necklace("RBBR", k=2)
        offline_split(neck)
        assert neck.owners() == [0, 0, 1, 1]
        assert verify_fair(neck).is_fair
        from necksplit import derive_cuts

        assert derive_cuts(neck).size == 1

    def test_quota_mismatch_leaves_state_untouched(self, worked_example):
        neck = worked_example
        neck.set_owner(neck.at(1), 0)  # agent 0 now holds an extra red
        before = neck.owners()
        with pytest.raises(QuotaMismatchError):
            offline_split_range(neck, [0, 2])
        assert neck.owners() == before


class TestAdversarialNecklace:
    def test_construction(self):
        neck = adversarial_necklace(3, 12)
        assert neck.colors() == [0] * 6 + [1] * 6

    def test_minimal_case(self):
        neck = adversarial_necklace(1, 2)
        assert neck.colors() == [0, 1]

    def test_matches_exhaustive_minimum(self):
        neck = adversarial_necklace(2, 8)
        assert offline_split(neck).cuts == 2
        assert brute_force_min_cuts(neck, 2) == 2

    def test_divisibility(self):
        with pytest.raises(DivisibilityError):
            adversarial_necklace(3, 10)


def test_swap_walk_keeps_offline_bound():
    rng = random.Random(23)
    neck = build_necklace([0, 1] * 24, k=4)
    offline_split(neck)
    for _ in range(100):
        swap(neck, rng.randrange(1, neck.m))
        assert derive_cuts(neck).size <= 6
