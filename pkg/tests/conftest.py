import random

import pytest

from necksplit import build_necklace, offline_split


def make_random_two_color(rng: random.Random, k: int, max_m: int = 60):
    """Random balanced-ish two-color necklace with counts divisible by k."""
    reds = k * rng.randint(1, max(1, max_m // (2 * k)))
    blues = k * rng.randint(1, max(1, max_m // (2 * k)))
    colors = [0] * reds + [1] * blues
    rng.shuffle(colors)
    return build_necklace(colors, k)


def make_shuffled(rng: random.Random, reds: int, blues: int, k: int):
    colors = [0] * reds + [1] * blues
    rng.shuffle(colors)
    return build_necklace(colors, k)


@pytest.fixture
def worked_example():
    """Twelve beads, three agents; the allocation used throughout the docs."""
    neck = build_necklace("RRBRRBBBRBRB", k=3)
    offline_split(neck)
    return neck


@pytest.fixture
def nested_blocks_fixture():
    """Eight agents with two nesting groups side by side.

    Block layout (1-based positions):
      A5:1-2  A4:3-4  A1:5-8  A2:9-12  A4:13  A3:14-17  A4:18  A5:19-20
      A8:21-22  A6:23-26  A7:27-30  A8:31-32
    Levels: A1,A2,A3 -> 3; A4,A6,A7 -> 2; A5,A8 -> 1.
    """
    owners = (
        [4, 4] + [3, 3] + [0] * 4 + [1] * 4 + [3] + [2] * 4 + [3] + [4, 4]
        + [7, 7] + [5] * 4 + [6] * 4 + [7, 7]
    )
    colors = []
    seen = {}
    for a in owners:
        i = seen.get(a, 0)
        colors.append(0 if i % 2 == 0 else 1)
        seen[a] = i + 1
    neck = build_necklace(colors, k=8)
    for pos, a in enumerate(owners, start=1):
        neck.set_owner(neck.at(pos), a)
    return neck
