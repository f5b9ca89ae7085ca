"""Single-bead updates for two-color necklaces.

Three update families, all restoring fairness and the 2(k-1) cut bound:

* ``swap``: exchange adjacent beads, re-splitting the two owners' beads when
  colors and owners both differ.
* ``relocate_path``: move a bead anywhere, then re-split the agents on a
  shortest path between the two owners in the neighborhood graph.
* ``relocate_colorpath``: same, but hand single beads across zero-weight
  edges of a colored digraph and re-split only the stretches of weight-one
  edges.

``relocate_fence`` trades structure for speed: it keeps the moved bead with
its owner, fencing it with extra cuts, and re-splits from scratch once a cut
budget is exhausted.  After a fence move, the other updates refuse to run
until that rebuild.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .core import (
    NIL,
    Necklace,
    build_neighborhood_graph,
    derive_cuts,
)
from .errors import DirtyStateError, OutOfRangeError, UnassignedBeadError
from .offline import offline_split, offline_split_range

RED = 0  # conventional name for color id 0 in two-color necklaces


@dataclass
class UpdateResult:
    cuts: int
    path: list[int] = field(default_factory=list)
    reran: bool = False
    path_weight: int = 0
    transfers: int = 0
    reruns: int = 0


def _check_clean(necklace: Necklace) -> None:
    if necklace.dirty:
        raise DirtyStateError("run a full re-split before structure-preserving updates")


def _bfs_path(graph, start: int, goal: int) -> list[int]:
    """Shortest path by breadth-first search; neighbors visited in id order."""
    if start == goal:
        return [start]
    parent = {start: start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for v in graph.neighbors(u):
            if v not in parent:
                parent[v] = u
                if v == goal:
                    path = [v]
                    while path[-1] != start:
                        path.append(parent[path[-1]])
                    path.reverse()
                    return path
                queue.append(v)
    raise AssertionError("neighborhood graph is connected for full allocations")


def swap(necklace: Necklace, j: int) -> UpdateResult:
    """Exchange the beads at positions j and j+1."""
    _check_clean(necklace)
    if not 1 <= j < necklace.m:
        raise OutOfRangeError(f"swap position {j} outside [1, {necklace.m - 1}]")
    u = necklace.at(j)
    v = necklace.next_of(u)
    a1, a2 = necklace.owner_of(u), necklace.owner_of(v)
    necklace.move_after(u, v)
    if necklace.color_of(u) == necklace.color_of(v):
        # same color: beads are interchangeable, keep the owner layout
        necklace.set_owner(u, a2)
        necklace.set_owner(v, a1)
        return UpdateResult(cuts=derive_cuts(necklace).size)
    if a1 == a2:
        return UpdateResult(cuts=derive_cuts(necklace).size)
    result = offline_split_range(necklace, sorted((a1, a2)))
    return UpdateResult(cuts=result.cuts, path=sorted((a1, a2)), reran=True)


def _resolve_move(necklace: Necklace, j1: int, j2: int) -> tuple[int, int, bool]:
    """Source handle, destination anchor, and insert-before flag for a move
    that leaves the bead at position j2 afterwards."""
    if j1 == j2:
        raise OutOfRangeError("source and destination positions must differ")
    if not 1 <= j1 <= necklace.m or not 1 <= j2 <= necklace.m:
        raise OutOfRangeError(f"positions outside [1, {necklace.m}]")
    return necklace.at(j1), necklace.at(j2), j2 < j1


def relocate_path(necklace: Necklace, j1: int, j2: int) -> UpdateResult:
    """Move the bead at j1 to position j2 and re-split along a shortest path.

    The path is found in the neighborhood graph of the state before the
    move: those agents had consecutive turns in the nested block structure,
    which is what lets the re-split preserve it.
    """
    _check_clean(necklace)
    bead, anchor, before = _resolve_move(necklace, j1, j2)
    a1, a2 = necklace.owner_of(bead), necklace.owner_of(anchor)
    if a1 != a2:
        graph = build_neighborhood_graph(necklace)
        path = _bfs_path(graph, a1, a2)
    if before:
        necklace.move_before(bead, anchor)
    else:
        necklace.move_after(bead, anchor)
    if a1 == a2:
        return UpdateResult(cuts=derive_cuts(necklace).size, path=[a1])
    result = offline_split_range(necklace, sorted(path))
    return UpdateResult(cuts=result.cuts, path=path, reran=True, reruns=1)


class ColoredDigraph:
    """Directed agent adjacency with 0/1 weights for one bead color.

    Edge u -> v exists when u and v own adjacent beads; its weight is 0 when
    some such adjacent pair has a bead of the chosen color on u's side.
    """

    def __init__(self, k: int):
        self.k = k
        self.weight: dict[tuple[int, int], int] = {}

    def add(self, u: int, v: int, good: bool) -> None:
        key = (u, v)
        if good:
            self.weight[key] = 0
        else:
            self.weight.setdefault(key, 1)

    def neighbors(self, u: int) -> list[tuple[int, int]]:
        return sorted(
            (v, w) for (a, v), w in self.weight.items() if a == u
        )

    @property
    def edge_count(self) -> int:
        return len(self.weight)


def build_colored_digraph(necklace: Necklace, color: int) -> ColoredDigraph:
    graph = ColoredDigraph(necklace.k)
    prev_h = NIL
    for h in necklace.handles():
        if necklace.owner_of(h) < 0:
            raise UnassignedBeadError("digraph needs every bead owned")
        if prev_h != NIL:
            a, b = necklace.owner_of(prev_h), necklace.owner_of(h)
            if a != b:
                graph.add(a, b, necklace.color_of(prev_h) == color)
                graph.add(b, a, necklace.color_of(h) == color)
        prev_h = h
    return graph


def _zero_one_path(graph: ColoredDigraph, start: int, goal: int) -> tuple[list[int], int]:
    """Deque-based shortest path on 0/1 weights; id-order tie-breaks."""
    dist = {start: 0}
    parent = {start: start}
    done = set()
    queue: deque[int] = deque([start])
    while queue:
        u = queue.popleft()
        if u in done:
            continue
        done.add(u)
        if u == goal:
            break
        for v, w in graph.neighbors(u):
            nd = dist[u] + w
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                parent[v] = u
                if w == 0:
                    queue.appendleft(v)
                else:
                    queue.append(v)
    if goal not in parent:
        raise AssertionError("colored digraph is connected for full allocations")
    path = [goal]
    while path[-1] != start:
        path.append(parent[path[-1]])
    path.reverse()
    return path, dist[goal]


def relocate_colorpath(necklace: Necklace, j1: int, j2: int) -> UpdateResult:
    """Move the bead at j1 to j2; repair quotas by handing same-colored beads
    across zero-weight edges and re-splitting maximal weight-one stretches.

    The destination agent absorbs the bead as soon as it lands, so the
    colored digraph built afterwards reflects only genuine block
    adjacencies.  Hand-overs then walk the surplus from the absorbing agent
    back toward the source owner, processing the path from its source end:
    a hand-over only takes beads from agents earlier on the path, so later
    certificates stay intact.
    """
    _check_clean(necklace)
    bead, anchor, before = _resolve_move(necklace, j1, j2)
    color = necklace.color_of(bead)
    a1, a2 = necklace.owner_of(bead), necklace.owner_of(anchor)
    if before:
        necklace.move_before(bead, anchor)
    else:
        necklace.move_after(bead, anchor)
    if a1 == a2:
        return UpdateResult(cuts=derive_cuts(necklace).size, path=[a1])
    necklace.set_owner(bead, a2)
    digraph = build_colored_digraph(necklace, color)
    path, weight = _zero_one_path(digraph, a2, a1)

    transfers = 0
    edges = list(zip(path, path[1:]))
    for u, v in edges:
        if digraph.weight[(u, v)] != 0:
            continue
        moved = _hand_over(necklace, u, v, color)
        assert moved, "zero-weight edge always has a qualifying boundary bead"
        transfers += 1

    reruns = 0
    i = 0
    while i < len(edges):
        if digraph.weight[edges[i]] == 0:
            i += 1
            continue
        start = i
        while i < len(edges) and digraph.weight[edges[i]] == 1:
            i += 1
        stretch = path[start : i + 1]
        offline_split_range(necklace, sorted(stretch))
        reruns += 1

    return UpdateResult(
        cuts=derive_cuts(necklace).size,
        path=path,
        reran=reruns > 0,
        path_weight=weight,
        transfers=transfers,
        reruns=reruns,
    )


def _hand_over(necklace: Necklace, u: int, v: int, color: int) -> bool:
    """Flip the leftmost bead of ``color`` owned by u that sits against a bead
    of v; this moves one bead of that color from u to v across their cut."""
    prev_h = NIL
    for h in necklace.handles():
        if prev_h != NIL:
            a, b = necklace.owner_of(prev_h), necklace.owner_of(h)
            if a == u and b == v and necklace.color_of(prev_h) == color:
                necklace.set_owner(prev_h, v)
                return True
            if a == v and b == u and necklace.color_of(h) == color:
                necklace.set_owner(h, v)
                return True
        prev_h = h
    return False


# ----------------------------------------------------------------------
# fence


@dataclass
class FencePolicy:
    """Extra-cut budget between full re-splits."""

    extra_cut_budget: int
    extra_cuts_used: int = 0
    dirty: bool = False

    @classmethod
    def for_necklace(cls, necklace: Necklace) -> "FencePolicy":
        return cls(extra_cut_budget=default_fence_budget(necklace.n, necklace.k))

    def reset(self) -> None:
        self.extra_cuts_used = 0
        self.dirty = False


def default_fence_budget(n: int, k: int) -> int:
    return 2 * k if n == 2 else 2 * k * n


@dataclass
class FenceResult:
    cuts: int
    added: int
    rebuilt: bool


def baseline_split(necklace: Necklace) -> int:
    """Round-robin per color: trivially fair, one cut per owner change."""
    counters = [0] * necklace.n
    for h in necklace.handles():
        c = necklace.color_of(h)
        necklace.set_owner(h, counters[c] % necklace.k)
        counters[c] += 1
    necklace.dirty = False
    return derive_cuts(necklace).size


def relocate_fence(
    necklace: Necklace, j1: int, j2: int, policy: FencePolicy
) -> FenceResult:
    """Move the bead at j1 to j2, keeping its owner, fenced by new cuts.

    Increments the policy's counter by the cuts actually added; once the
    budget would be exceeded, the whole necklace is re-split from scratch
    and the counter resets.
    """
    bead, anchor, before = _resolve_move(necklace, j1, j2)
    cuts_before = derive_cuts(necklace).size
    if before:
        necklace.move_before(bead, anchor)
    else:
        necklace.move_after(bead, anchor)
    cuts_after = derive_cuts(necklace).size
    added = max(0, cuts_after - cuts_before)
    policy.extra_cuts_used += added
    policy.dirty = True
    necklace.dirty = True
    if policy.extra_cuts_used > policy.extra_cut_budget:
        if necklace.n == 2:
            cuts_after = offline_split(necklace).cuts
        else:
            cuts_after = baseline_split(necklace)
        policy.reset()
        return FenceResult(cuts=cuts_after, added=added, rebuilt=True)
    return FenceResult(cuts=cuts_after, added=added, rebuilt=False)
