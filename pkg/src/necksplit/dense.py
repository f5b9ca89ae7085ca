"""High cut-density regime: m = nk, one bead of every color per agent.

Allocations here carry an explicit cut set of exactly n(k-1) boundaries,
some possibly redundant (both sides owned by the same agent).  The working
invariant: a boundary without a cut always sits immediately left of the
first occurrence of a color, so there are exactly n-1 of them.  Swaps and
relocations shuffle beads while keeping the cut count constant, repairing
the one-bead-per-color quotas by exchanging whole intervals between the two
affected agents.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from itertools import combinations

from .core import NIL, Necklace
from .errors import NotDenseError, OutOfRangeError


@dataclass
class DenseIndex:
    """Bookkeeping for dense allocations.

    ``cells[agent][color]`` is the handle of that agent's unique bead of the
    color; ``orders[color]`` lists the color's handles in necklace order;
    ``cuts`` holds the explicit boundary ids (boundary p separates positions
    p and p+1).  ``canonical`` records whether the cut pattern is the one
    with non-cuts exactly before non-initial first-of-color beads.
    """

    cells: list[list[int]]
    orders: list[list[int]]
    cuts: set[int]
    canonical: bool = True
    exchange_log: list[int] = field(default_factory=list)

    def refresh(self, necklace: Necklace) -> None:
        n, k = necklace.n, necklace.k
        self.cells = [[NIL] * n for _ in range(k)]
        self.orders = [[] for _ in range(n)]
        for h in necklace.handles():
            c = necklace.color_of(h)
            a = necklace.owner_of(h)
            self.orders[c].append(h)
            if self.cells[a][c] != NIL:
                raise NotDenseError(f"agent {a} owns two beads of color {c}")
            self.cells[a][c] = h

    def first_of(self, color: int) -> int:
        return self.orders[color][0]

    def has_cut(self, necklace: Necklace, boundary: int) -> bool:
        """Boundary ids 0 and m stand for the necklace ends, always 'cut'."""
        if boundary <= 0 or boundary >= necklace.m:
            return True
        return boundary in self.cuts

    def validate(self, necklace: Necklace) -> None:
        n, k, m = necklace.n, necklace.k, necklace.m
        assert m == n * k, "dense regime requires m = nk"
        assert len(self.cuts) == n * (k - 1), "cut count must stay n(k-1)"
        seen_colors: set[int] = set()
        order = necklace.order()
        for idx in range(1, m):
            boundary = idx
            left, right = order[boundary - 1], order[boundary]
            if boundary not in self.cuts:
                c = necklace.color_of(right)
                first = min(
                    (h for h in order if necklace.color_of(h) == c),
                    key=necklace.position_of,
                )
                assert right == first, "non-cut boundary must precede a first-of-color"
                assert necklace.owner_of(left) == necklace.owner_of(right), (
                    "interval spans a non-cut boundary, owners must match"
                )
        for a in range(k):
            for c in range(n):
                h = self.cells[a][c]
                assert h != NIL and necklace.owner_of(h) == a
                assert necklace.color_of(h) == c
                seen_colors.add((a, c))
        assert len(seen_colors) == n * k
        for c in range(n):
            positions = [necklace.position_of(h) for h in self.orders[c]]
            assert positions == sorted(positions)
            assert len(positions) == k


@dataclass
class DenseResult:
    case: str
    exchanges: int


def _first_handle(necklace: Necklace, color: int) -> int:
    for h in necklace.handles():
        if necklace.color_of(h) == color:
            return h
    raise AssertionError("color must be present")


def _interval_span(index: DenseIndex, necklace: Necklace, pos: int) -> tuple[int, int]:
    start = pos
    while start > 1 and (start - 1) not in index.cuts:
        start -= 1
    end = pos
    while end < necklace.m and end not in index.cuts:
        end += 1
    return start, end


def _interval_handles(necklace: Necklace, start: int, end: int) -> list[int]:
    order = necklace.order()
    return order[start - 1 : end]


# ----------------------------------------------------------------------
# initializer


def dense_offline_split(necklace: Necklace) -> DenseIndex:
    """Fair allocation with exactly n(k-1) cuts.

    Non-cut boundaries go immediately left of every non-initial first
    occurrence of a color; the resulting intervals hold at most one bead per
    color and are grouped into per-agent rainbows by backtracking.  Falls
    back to searching other cut patterns if the canonical one cannot be
    grouped (not expected to happen).
    """
    n, k, m = necklace.n, necklace.k, necklace.m
    if m != n * k:
        raise NotDenseError(f"m={m} but n*k={n * k}")
    for c, cnt in enumerate(necklace.color_counts):
        if cnt != k:
            raise NotDenseError(f"color {c} appears {cnt} times, expected {k}")

    order = necklace.order()
    firsts: dict[int, int] = {}
    for pos, h in enumerate(order, start=1):
        c = necklace.color_of(h)
        if c not in firsts:
            firsts[c] = pos
    non_cuts = {pos - 1 for pos in firsts.values() if pos > 1}
    cuts = set(range(1, m)) - non_cuts
    assignment = _assign_intervals(necklace, cuts)
    canonical = True
    if assignment is None:
        warnings.warn(
            "canonical dense cut pattern admits no grouping; searching others",
            stacklevel=2,
        )
        canonical = False
        cuts, assignment = _fallback_pattern(necklace)

    for h, a in assignment.items():
        necklace.set_owner(h, a)
    index = DenseIndex(cells=[], orders=[], cuts=cuts, canonical=canonical)
    index.refresh(necklace)
    return index


def _assign_intervals(necklace: Necklace, cuts: set[int]) -> dict[int, int] | None:
    n, k, m = necklace.n, necklace.k, necklace.m
    order = necklace.order()
    bounds = [0, *sorted(cuts), m]
    intervals = []
    for i in range(len(bounds) - 1):
        handles = order[bounds[i] : bounds[i + 1]]
        mask = 0
        for h in handles:
            bit = 1 << necklace.color_of(h)
            if mask & bit:
                return None  # interval holds two beads of one color
            mask |= bit
        intervals.append((mask, handles))
    intervals.sort(key=lambda t: (-bin(t[0]).count("1"), necklace.position_of(t[1][0])))

    used = [0] * k
    owner_of_interval = [NIL] * len(intervals)

    def rec(i: int, opened: int) -> bool:
        if i == len(intervals):
            return True
        mask = intervals[i][0]
        for a in range(min(k, opened + 1)):
            if used[a] & mask:
                continue
            used[a] |= mask
            owner_of_interval[i] = a
            if rec(i + 1, max(opened, a + 1)):
                return True
            used[a] &= ~mask
        return False

    if not rec(0, 0):
        return None
    out: dict[int, int] = {}
    for (mask, handles), a in zip(intervals, owner_of_interval):
        for h in handles:
            out[h] = a
    return out


def _fallback_pattern(necklace: Necklace) -> tuple[set[int], dict[int, int]]:
    n, m = necklace.n, necklace.m
    for non_cuts in combinations(range(1, m), n - 1):
        cuts = set(range(1, m)) - set(non_cuts)
        assignment = _assign_intervals(necklace, cuts)
        if assignment is not None:
            return cuts, assignment
    raise NotDenseError("no fair allocation with n(k-1) cuts exists")


# ----------------------------------------------------------------------
# quota repair between two agents


def _color_counts_of(necklace: Necklace, agent: int) -> list[int]:
    counts = [0] * necklace.n
    for h in necklace.agent_beads(agent):
        counts[necklace.color_of(h)] += 1
    return counts


def _repair_pair(necklace: Necklace, index: DenseIndex, x: int, y: int) -> int:
    """Exchange whole intervals between x and y until both hold one bead of
    every color.  Each step hands over the interval started by the donor's
    non-first bead of the smallest imbalanced color."""
    exchanges = 0
    cap = 4 * necklace.n + 4
    while True:
        counts_x = _color_counts_of(necklace, x)
        color = donor = None
        for c in range(necklace.n):
            if counts_x[c] == 0:
                color, donor, receiver = c, y, x
                break
            if counts_x[c] == 2:
                color, donor, receiver = c, x, y
                break
            assert counts_x[c] == 1 or color is not None
        if color is None:
            break
        beads = [h for h in necklace.agent_beads(donor) if necklace.color_of(h) == color]
        assert len(beads) == 2, "donor holds exactly two beads of the color"
        first = _first_handle(necklace, color)
        non_first = [h for h in beads if h != first]
        donor_bead = min(non_first, key=necklace.position_of)
        start, end = _interval_span(index, necklace, necklace.position_of(donor_bead))
        assert necklace.position_of(donor_bead) == start, (
            "a non-first bead has a cut on its left and starts its interval"
        )
        for h in _interval_handles(necklace, start, end):
            assert necklace.owner_of(h) == donor
            necklace.set_owner(h, receiver)
        exchanges += 1
        if exchanges > cap:
            raise AssertionError("interval exchange cascade failed to settle")
    return exchanges


# ----------------------------------------------------------------------
# adjacent swap


def dense_swap(necklace: Necklace, j: int, index: DenseIndex) -> DenseResult:
    """Swap beads at positions j and j+1, keeping exactly n(k-1) cuts."""
    if not 1 <= j < necklace.m:
        raise OutOfRangeError(f"swap position {j} outside [1, {necklace.m - 1}]")
    if necklace.m != necklace.n * necklace.k:
        raise NotDenseError("necklace is not in the dense regime")
    u = necklace.at(j)
    v = necklace.next_of(u)
    if necklace.color_of(u) == necklace.color_of(v):
        return DenseResult(case="same-color", exchanges=0)
    a1, a2 = necklace.owner_of(u), necklace.owner_of(v)
    if a1 == a2:
        # still a color-sequence change: route through the relocation logic,
        # which knows how to carry cuts past non-cut boundaries
        result = dense_jump(necklace, j, j + 1, index)
        return DenseResult(case="same-owner", exchanges=result.exchanges)

    left_cut = index.has_cut(necklace, j - 1)
    right_cut = index.has_cut(necklace, j + 1)
    assert j in index.cuts, "owner change without a cut breaks the invariant"
    necklace.move_after(u, v)

    exchanges = 0
    if left_cut and right_cut:
        case = "1"
    elif left_cut:
        case = "2"
        # u joined the interval [j+1 .. end]; its remainder flips to u's owner
        _, end = _interval_span(index, necklace, j + 1)
        for h in _interval_handles(necklace, j + 2, end):
            assert necklace.owner_of(h) == a2
            necklace.set_owner(h, a1)
        if end >= j + 2:
            exchanges += 1
        exchanges += _repair_pair(necklace, index, a1, a2)
    else:
        case = "3"
        index.cuts.discard(j)
        index.cuts.add(j - 1)
        necklace.set_owner(u, a2)
        exchanges += _repair_pair(necklace, index, a1, a2)

    index.refresh(necklace)
    return DenseResult(case=case, exchanges=exchanges)


# ----------------------------------------------------------------------
# arbitrary relocation


def _shift_cuts_after_removal(cuts: set[int], pos: int, merged_cut: bool) -> set[int]:
    """Boundary ids after removing the bead at ``pos``; the two boundaries
    around it collapse into one that takes ``merged_cut``."""
    out = set()
    for c in cuts:
        if c < pos - 1:
            out.add(c)
        elif c > pos:
            out.add(c - 1)
    if merged_cut and pos - 1 >= 1:
        out.add(pos - 1)
    return out


def _shift_cuts_after_insert(
    cuts: set[int], pos: int, left_cut: bool, right_cut: bool, m_new: int
) -> set[int]:
    """Boundary ids after inserting a bead at ``pos``: its left boundary
    becomes ``left_cut`` and its right boundary ``right_cut``."""
    out = set()
    for c in cuts:
        if c <= pos - 2:
            out.add(c)
        else:
            out.add(c + 1)
    out.discard(pos - 1)
    out.discard(pos)
    if left_cut and pos - 1 >= 1:
        out.add(pos - 1)
    if right_cut and pos <= m_new - 1:
        out.add(pos)
    return out


def _hop(
    necklace: Necklace, index: DenseIndex, src: int, dst: int, expect_first: bool
) -> int:
    """One remove-and-reinsert step landing the bead at position ``dst``.

    Removal closes the gap with the right-hand boundary's status and banks a
    cut when the bead had one on its left; insertion spends the bank on the
    bead's left boundary and hands its right boundary the slot's old status.
    Repairs run pairwise after the bead is back in place, so callers must
    route merge-producing hops to a slot where the bead lands alone (the
    wrapper below appends to the tail first).
    """
    m = necklace.m
    bead = necklace.at(src)
    x = necklace.owner_of(bead)
    color = necklace.color_of(bead)
    exchanges = 0

    if src == 1:
        bank = 1 if (m > 1 and 1 in index.cuts) else 0
        merged_cut = False
    elif src == m:
        bank = 1 if (src - 1) in index.cuts else 0
        merged_cut = False
    else:
        bank = 1 if (src - 1) in index.cuts else 0
        merged_cut = src in index.cuts

    # a bead that headed a multi-bead interval leaves its tail to merge left
    merge_tail: list[int] = []
    merge_left_owner = None
    if 1 < src < m and (src - 1) in index.cuts and src not in index.cuts:
        _, end_old = _interval_span(index, necklace, src)
        merge_tail = _interval_handles(necklace, src + 1, end_old)
        merge_left_owner = necklace.owner_of(necklace.at(src - 1))

    index.cuts = _shift_cuts_after_removal(index.cuts, src, merged_cut)
    necklace.remove_bead(bead)

    mid_m = necklace.m  # m - 1
    assert 1 <= dst <= mid_m + 1
    if not expect_first:
        assert bank == 1, "a non-first bead always carries its left cut"

    if dst == mid_m + 1:
        new_h = necklace.insert_bead(color, after=necklace.tail, owner=x)
        index.cuts = _shift_cuts_after_insert(
            index.cuts, dst, left_cut=bank == 1, right_cut=False, m_new=mid_m + 1
        )
        glued_left = bank == 0
        glued_right = False
    elif dst == 1:
        new_h = necklace.insert_bead(color, before=necklace.at(1), owner=x)
        index.cuts = _shift_cuts_after_insert(
            index.cuts, dst, left_cut=False, right_cut=bank == 1, m_new=mid_m + 1
        )
        glued_left = False
        glued_right = bank == 0
    else:
        old_status_cut = (dst - 1) in index.cuts
        new_h = necklace.insert_bead(color, before=necklace.at(dst), owner=x)
        index.cuts = _shift_cuts_after_insert(
            index.cuts, dst, left_cut=bank == 1, right_cut=old_status_cut, m_new=mid_m + 1
        )
        glued_left = bank == 0
        glued_right = not old_status_cut

    if merge_tail and merge_left_owner is not None and merge_left_owner != x:
        for h in merge_tail:
            assert necklace.owner_of(h) == x
            necklace.set_owner(h, merge_left_owner)
        exchanges += 1
        exchanges += _repair_pair(necklace, index, merge_left_owner, x)

    host_owner = None
    if glued_left:
        host_owner = necklace.owner_of(necklace.at(dst - 1))
    elif glued_right:
        host_owner = necklace.owner_of(necklace.at(dst + 1))
    if host_owner is not None and host_owner != necklace.owner_of(new_h):
        x_now = necklace.owner_of(new_h)
        start, end = _interval_span(index, necklace, necklace.position_of(new_h))
        others = [h for h in _interval_handles(necklace, start, end) if h != new_h]
        if others:
            for h in others:
                assert necklace.owner_of(h) == host_owner
                necklace.set_owner(h, x_now)
            exchanges += 1
            exchanges += _repair_pair(necklace, index, x_now, host_owner)
    return exchanges


def _dense_move(
    necklace: Necklace, index: DenseIndex, src: int, dst: int, expect_first: bool
) -> int:
    """Land the bead at position ``dst``, keeping repairs strictly pairwise.

    A bead that heads a multi-bead interval first hops to the necklace end,
    where it sits alone while the orphaned tail merges into the interval on
    its left; the second hop then inserts it at the real target.
    """
    exchanges = 0
    heads_interval = (
        1 < src < necklace.m
        and (src - 1) in index.cuts
        and src not in index.cuts
    )
    if heads_interval:
        exchanges += _hop(necklace, index, src, necklace.m, expect_first=True)
        if dst == necklace.m:
            return exchanges
        src = necklace.m
    exchanges += _hop(necklace, index, src, dst, expect_first=expect_first)
    return exchanges


def dense_jump(necklace: Necklace, j1: int, j2: int, index: DenseIndex) -> DenseResult:
    """Relocate the bead at j1 to position j2 in the dense regime.

    Dispatch on whether the bead is the first of its color before and after
    the move; mixed cases route through an intermediate hop next to the
    color's other boundary occurrence so that cut counts stay balanced.
    """
    m = necklace.m
    if necklace.m != necklace.n * necklace.k:
        raise NotDenseError("necklace is not in the dense regime")
    if j1 == j2:
        raise OutOfRangeError("source and destination must differ")
    if not 1 <= j1 <= m or not 1 <= j2 <= m:
        raise OutOfRangeError(f"positions outside [1, {m}]")

    bead = necklace.at(j1)
    color = necklace.color_of(bead)
    occurrences = index.orders[color]
    first_before = occurrences[0] == bead
    if len(occurrences) == 1:
        first_after = True
    else:
        other_first = occurrences[1] if first_before else occurrences[0]
        p = necklace.position_of(other_first)
        p_mid = p - 1 if j1 < p else p
        p_new = p_mid + (1 if j2 <= p_mid else 0)
        first_after = j2 < p_new

    exchanges = 0
    if first_before and first_after:
        case = "1"
        exchanges += _dense_move(necklace, index, j1, j2, expect_first=True)
    elif not first_before and not first_after:
        case = "2"
        exchanges += _dense_move(necklace, index, j1, j2, expect_first=False)
    elif first_before:
        case = "3"
        second = occurrences[1]
        t1 = necklace.position_of(second) - 1  # bead sits just left of it
        if j1 != t1:
            exchanges += _dense_move(necklace, index, j1, t1, expect_first=True)
        index.refresh(necklace)
        src = necklace.position_of(second)
        if src != j2:
            exchanges += _dense_move(necklace, index, src, j2, expect_first=False)
    else:
        case = "4"
        first = occurrences[0]
        t1 = necklace.position_of(first) + 1
        if j1 < necklace.position_of(first):
            raise AssertionError("non-first bead sits after the first occurrence")
        if j1 != t1:
            exchanges += _dense_move(necklace, index, j1, t1, expect_first=False)
        index.refresh(necklace)
        src = necklace.position_of(first)
        if src != j2:
            exchanges += _dense_move(necklace, index, src, j2, expect_first=True)

    index.refresh(necklace)
    return DenseResult(case=case, exchanges=exchanges)
