"""Randomized approximate splitting for two colors.

The splitter never scans the whole necklace at query time.  A maintained
order-statistic index answers per-color rank and select; each round draws a
uniform sample of the still-unallocated beads of each color, runs a single
balanced-window selection on the merged sample, and converts the chosen
sample window into a necklace interval fenced by at most two cuts.  With
samples sized by ``epsilon_sample_size`` the per-agent color counts stay
within (1 +/- epsilon) of the exact quota with high probability.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .core import Necklace
from .errors import (
    IndexDesyncError,
    NotTwoColorsError,
    OutOfRangeError,
    PopulationTooSmallError,
)
from .ordertree import OrderStatTree


@dataclass
class ApproxConfig:
    epsilon: float
    sample_constant: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie strictly inside (0, 1)")
        if self.sample_constant <= 0:
            raise ValueError("sample constant must be positive")


def epsilon_sample_size(k: int, j: int, epsilon: float, m: int, c: float = 1.0) -> int:
    """Sample cardinality for round j of k: c (k-j+1)^2 4^k eps^-2 ln(2km)."""
    if not 1 <= j <= k:
        raise ValueError(f"round {j} outside [1, {k}]")
    raw = c * (k - j + 1) ** 2 * 4**k * epsilon**-2 * math.log(2 * k * m)
    return math.ceil(raw)


class OrderIndex:
    """Per-color rank/select over the necklace, maintained under updates.

    One color-count-augmented tree answers both global and per-color
    queries; logical per-color sizes always sum to the total bead count.
    """

    def __init__(self, tree: OrderStatTree | None = None):
        self.tree = tree if tree is not None else OrderStatTree()

    @classmethod
    def from_necklace(cls, necklace: Necklace) -> "OrderIndex":
        if necklace.n != 2:
            raise NotTwoColorsError("order index covers two-color necklaces")
        return cls(OrderStatTree.from_colors(necklace.colors()))

    @classmethod
    def from_colors(cls, colors) -> "OrderIndex":
        return cls(OrderStatTree.from_colors(colors))

    @property
    def m(self) -> int:
        return len(self.tree)

    def color_total(self, color: int) -> int:
        return self.tree.total(color)

    def insert(self, pos: int, color: int) -> None:
        if not 1 <= pos <= self.m + 1:
            raise OutOfRangeError(f"insert position {pos} outside [1, {self.m + 1}]")
        self.tree.insert(pos, color)

    def delete(self, pos: int) -> int:
        if not 1 <= pos <= self.m:
            raise OutOfRangeError(f"delete position {pos} outside [1, {self.m}]")
        return self.tree.delete(pos)

    def relocate(self, j1: int, j2: int) -> None:
        """A relocation is a deletion followed by an insertion."""
        if not 1 <= j1 <= self.m or not 1 <= j2 <= self.m:
            raise OutOfRangeError("relocation positions outside the sequence")
        color = self.delete(j1)
        self.insert(j2, color)

    def count_in_range(self, lo: int, hi: int, color: int) -> int:
        """Beads of ``color`` at positions lo..hi inclusive."""
        if lo > hi:
            return 0
        return self.tree.prefix_count(hi, color) - self.tree.prefix_count(lo - 1, color)

    def select_color(self, rank: int, color: int) -> int:
        return self.tree.select_color(rank, color)

    def check_sync(self, necklace: Necklace) -> None:
        if self.m != necklace.m:
            raise IndexDesyncError(f"index holds {self.m} beads, necklace {necklace.m}")
        for c in (0, 1):
            if self.color_total(c) != necklace.color_counts[c]:
                raise IndexDesyncError(f"color {c} count mismatch")


def approx_maintain(index: OrderIndex, update: tuple) -> OrderIndex:
    """Apply ('insert', pos, color) / ('delete', pos) / ('relocate', j1, j2)."""
    kind = update[0]
    if kind == "insert":
        index.insert(update[1], update[2])
    elif kind == "delete":
        index.delete(update[1])
    elif kind == "relocate":
        index.relocate(update[1], update[2])
    else:
        raise ValueError(f"unknown update {kind!r}")
    return index


class ExclusionSet:
    """Disjoint sorted intervals of already-allocated necklace positions."""

    def __init__(self) -> None:
        self.intervals: list[tuple[int, int]] = []

    def add(self, lo: int, hi: int) -> None:
        merged = []
        for a, b in self.intervals:
            if b < lo - 1 or a > hi + 1:
                merged.append((a, b))
            else:
                lo, hi = min(lo, a), max(hi, b)
        merged.append((lo, hi))
        merged.sort()
        self.intervals = merged

    def excluded_count(self, index: OrderIndex, color: int) -> int:
        return sum(index.count_in_range(a, b, color) for a, b in self.intervals)

    def covers(self, pos: int) -> bool:
        return any(a <= pos <= b for a, b in self.intervals)


def sample_complement(
    index: OrderIndex,
    color: int,
    excluded: ExclusionSet,
    count: int,
    rng: random.Random,
) -> list[int]:
    """Uniform without-replacement sample of ``color`` positions outside the
    excluded intervals, via rank-space subtraction.

    The excluded intervals split the color's rank space into gaps; a uniform
    rank in the complement maps back through the cumulative gap offsets and
    one select per draw.  Returned positions are sorted.
    """
    total = index.color_total(color)
    # gaps of free color-ranks between consecutive excluded intervals
    gaps: list[tuple[int, int]] = []  # (start_rank, length) over color ranks
    cursor = 0  # color-rank consumed so far (prefix of population)
    free_before: list[int] = []
    free_total = 0
    prev_hi_rank = 0
    for a, b in excluded.intervals:
        lo_rank = index.tree.prefix_count(a - 1, color)
        hi_rank = index.tree.prefix_count(b, color)
        gap = lo_rank - prev_hi_rank
        if gap > 0:
            gaps.append((prev_hi_rank, gap))
            free_total += gap
        prev_hi_rank = hi_rank
    tail = total - prev_hi_rank
    if tail > 0:
        gaps.append((prev_hi_rank, tail))
        free_total += tail

    if count > free_total:
        raise PopulationTooSmallError(
            f"requested {count} of {free_total} free beads of color {color}"
        )
    if count == 0:
        return []
    offsets = []
    acc = 0
    for start, length in gaps:
        offsets.append((acc, start, length))
        acc += length
    picks = sorted(rng.sample(range(free_total), count))
    out = []
    gi = 0
    for r in picks:
        while gi + 1 < len(offsets) and offsets[gi + 1][0] <= r:
            gi += 1
        base, start, _ = offsets[gi]
        rank = start + (r - base) + 1
        out.append(index.select_color(rank, color))
    return out


@dataclass
class ApproxResult:
    cuts: list[int]
    owners: list[int]
    intervals: list[tuple[int, int]]
    counts: list[list[int]] = field(default_factory=list)

    @property
    def cut_count(self) -> int:
        return len(self.cuts)


def approx_static(
    necklace: Necklace, config: ApproxConfig, index: OrderIndex | None = None
) -> ApproxResult:
    """Approximate fair split with at most 2(k-1) cuts.

    Round j samples both colors from the unallocated remainder, runs one
    balanced-window selection with k-j+1 shares on the merged sample, and
    fences the matching necklace interval with cuts just outside its first
    and last sampled beads.
    """
    if necklace.n != 2:
        raise NotTwoColorsError("approximate splitting covers two colors")
    k = necklace.k
    m = necklace.m
    if index is None:
        index = OrderIndex.from_necklace(necklace)
    rng = random.Random(config.seed)
    excluded = ExclusionSet()
    cuts: set[int] = set()
    chosen: list[tuple[int, int]] = []

    for j in range(1, k):
        remaining = k - j + 1
        samples: list[tuple[int, int]] = []  # (position, color)
        sizes = []
        for color in (0, 1):
            population = index.color_total(color) - excluded.excluded_count(index, color)
            want = min(
                epsilon_sample_size(k, j, config.epsilon, m, config.sample_constant),
                population,
            )
            sizes.append(want)
            for pos in sample_complement(index, color, excluded, want, rng):
                samples.append((pos, color))
        samples.sort()
        if not samples:
            chosen.append((0, -1))
            continue
        red_target = sizes[0] // remaining
        blue_target = sizes[1] // remaining
        window = red_target + blue_target
        start = _best_window(samples, window, red_target)
        lo = samples[start][0]
        hi = samples[start + window - 1][0] if window > 0 else lo
        excluded.add(lo, hi)
        chosen.append((lo, hi))
        if lo > 1:
            cuts.add(lo - 1)
        if hi < m:
            cuts.add(hi)

    owners = _owners_from_intervals(necklace, chosen, k)
    counts = [[0, 0] for _ in range(k)]
    for color, owner in zip(necklace.colors(), owners):
        counts[owner][color] += 1
    return ApproxResult(
        cuts=sorted(cuts), owners=owners, intervals=chosen, counts=counts
    )


def _best_window(samples: list[tuple[int, int]], window: int, red_target: int) -> int:
    """Smallest start index whose window is closest to the red target."""
    if window <= 0:
        return 0
    reds = 0
    for pos, color in samples[:window]:
        reds += 1 if color == 0 else 0
    best_start = 0
    best_err = abs(reds - red_target)
    for start in range(1, len(samples) - window + 1):
        reds += (1 if samples[start + window - 1][1] == 0 else 0) - (
            1 if samples[start - 1][1] == 0 else 0
        )
        err = abs(reds - red_target)
        if err < best_err:
            best_err = err
            best_start = start
            if err == 0:
                break
    return best_start


def _owners_from_intervals(
    necklace: Necklace, chosen: list[tuple[int, int]], k: int
) -> list[int]:
    owners = [k - 1] * necklace.m
    claimed = [False] * (necklace.m + 1)
    for agent, (lo, hi) in enumerate(chosen):
        if hi < lo:
            continue
        for pos in range(lo, hi + 1):
            if not claimed[pos]:
                claimed[pos] = True
                owners[pos - 1] = agent
    return owners


def approx_cuts(
    index: OrderIndex, necklace: Necklace, config: ApproxConfig
) -> ApproxResult:
    """Run the approximate splitter against the maintained index."""
    index.check_sync(necklace)
    return approx_static(necklace, config, index=index)
