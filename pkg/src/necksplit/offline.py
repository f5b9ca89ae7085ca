"""Two-color splitter built on a sliding balanced-window scan.

The full split walks the bead list once, repeatedly taking the leftmost
window of length m/k that holds exactly its share of each color.  The same
scan runs on any subsequence whose color counts match a group of agents'
quotas, which is how every dynamic update repairs fairness locally.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Sequence

from .core import Necklace, build_necklace, derive_cuts
from .errors import DivisibilityError, NotTwoColorsError, QuotaMismatchError

NIL = -1


@dataclass
class SplitResult:
    cuts: int
    internal_cuts: int = 0


def _window_assign(colors: Sequence[int], k: int) -> list[int]:
    """Assign each position to a slot in [0, k) via the balanced-window scan.

    Both colors must be divisible by k.  Slot s receives the window selected
    in round s; the final round takes whatever remains.
    """
    m = len(colors)
    w = m // k
    is_red = [1 if c == 0 else 0 for c in colors]
    total_red = sum(is_red)
    target = total_red // k

    if k == 1:
        return [0] * m

    nxt = list(range(1, m)) + [NIL]
    prv = [NIL] + list(range(m - 1))
    first_live = 0
    alive = [True] * m
    owners = [NIL] * m

    # window red-counts for complete windows only
    window = [0] * m
    running = 0
    for j in range(m):
        running += is_red[j]
        if j >= w:
            running -= is_red[j - w]
        if j >= w - 1:
            window[j - w + 1] = running
    valid_limit = m - w  # last index with a complete window, initially

    in_h: set[int] = set()
    heap: list[int] = []

    def h_add(j: int) -> None:
        if j not in in_h:
            in_h.add(j)
            heapq.heappush(heap, j)

    for j in range(valid_limit + 1):
        if window[j] == target:
            h_add(j)

    live_count = m
    for slot in range(k):
        while True:
            assert heap, "a balanced window always exists"
            j = heapq.heappop(heap)
            if j in in_h:
                in_h.discard(j)
                break
        # take the window starting at j
        block = [j]
        x = j
        for _ in range(w - 1):
            x = nxt[x]
            block.append(x)
        for b in block:
            owners[b] = slot
            alive[b] = False
            in_h.discard(b)
        p, q = prv[j], nxt[block[-1]]
        if p != NIL:
            nxt[p] = q
        else:
            first_live = q
        if q != NIL:
            prv[q] = p
        live_count -= w
        if slot == k - 1:
            break

        # the only windows that changed start at the <= w-1 live predecessors
        preds = []
        x = p
        while x != NIL and len(preds) < w - 1:
            preds.append(x)
            x = prv[x]
        if not preds:
            continue
        # live beads available from the nearest predecessor onward
        suffix1 = 0
        x = preds[0]
        while x != NIL and suffix1 < w:
            suffix1 += 1
            x = nxt[x]
        for i, pj in enumerate(preds):
            if i + suffix1 < w:  # window no longer complete
                in_h.discard(pj)
        far = None
        for i in range(len(preds) - 1, -1, -1):
            if i + suffix1 >= w:
                far = i
                break
        if far is None:
            continue
        # recompute the farthest valid window by walking, then slide right
        start = preds[far]
        count = 0
        x = start
        end = start
        for _ in range(w):
            count += is_red[x]
            end = x
            x = nxt[x]
        idx = far
        while True:
            pj = preds[idx]
            window[pj] = count
            if count == target:
                h_add(pj)
            else:
                in_h.discard(pj)
            if idx == 0:
                break
            # slide one step right: drop pj, extend past `end`
            count -= is_red[pj]
            end = nxt[end]
            count += is_red[end]
            idx -= 1

    return owners


def offline_split(necklace: Necklace) -> SplitResult:
    """Assign all beads to agents with at most 2(k-1) owner changes."""
    if necklace.n != 2:
        raise NotTwoColorsError(f"offline split needs 2 colors, got {necklace.n}")
    for c, cnt in enumerate(necklace.color_counts):
        if cnt % necklace.k != 0:
            raise DivisibilityError(f"color {c}: {cnt} beads, k={necklace.k}")
    owners = _window_assign(necklace.colors(), necklace.k)
    necklace.assign_in_order(owners)
    necklace.dirty = False
    return SplitResult(cuts=derive_cuts(necklace).size)


def offline_split_range(necklace: Necklace, agents: Sequence[int]) -> SplitResult:
    """Reallocate the named agents' beads fairly among themselves.

    The agents' beads, taken in necklace order, form the working subsequence;
    everyone else is untouched.  Checks quotas before mutating, so a failed
    call leaves the necklace unchanged.
    """
    agents = list(agents)
    if len(set(agents)) != len(agents):
        raise ValueError("agents must be distinct")
    if necklace.n != 2:
        raise NotTwoColorsError(f"range split needs 2 colors, got {necklace.n}")
    kp = len(agents)
    handles: list[int] = []
    for a in agents:
        handles.extend(necklace.agent_beads(a))
    handles.sort(key=necklace.position_of)
    colors = [necklace.color_of(h) for h in handles]
    for c in range(necklace.n):
        quota = necklace.color_counts[c] // necklace.k
        if necklace.color_counts[c] % necklace.k != 0:
            raise QuotaMismatchError(f"color {c} count not divisible by k")
        have = sum(1 for x in colors if x == c)
        if have != kp * quota:
            raise QuotaMismatchError(
                f"subsequence holds {have} beads of color {c}, needs {kp * quota}"
            )
    slots = _window_assign(colors, kp)
    internal = sum(1 for i in range(1, len(handles)) if slots[i] != slots[i - 1])
    for h, s in zip(handles, slots):
        necklace.set_owner(h, agents[s])
    return SplitResult(cuts=derive_cuts(necklace).size, internal_cuts=internal)


def adversarial_necklace(k: int, m: int) -> Necklace:
    """All of one color, then all of the other: forces 2(k-1) cuts."""
    if m % (2 * k) != 0:
        raise DivisibilityError(f"2k={2 * k} must divide m={m}")
    colors = [0] * (m // 2) + [1] * (m // 2)
    return build_necklace(colors, k)
