"""Bead-sequence data model.

A necklace is an arena-backed doubly linked list of colored beads.  Handles
(arena indices) stay valid for the life of a bead, across relinks.  Bead
positions are 1-based and recomputed on demand rather than stored, so moving
a bead never triggers a renumbering pass.  Same-owner chains, positions and
agent block lists are rebuilt lazily in one scan after mutations.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import (
    DivisibilityError,
    EmptyInputError,
    OutOfRangeError,
    UnassignedBeadError,
)

NIL = -1
UNASSIGNED = -1


@dataclass(frozen=True)
class Bead:
    """Read-only view of one arena slot."""

    handle: int
    color: int
    owner: int
    prev: int
    next: int
    next_same_owner: int


class Necklace:
    """Doubly linked bead sequence with per-bead color and owner.

    ``mode`` is ``"exact"`` (every color count divisible by ``k``) or
    ``"approx"`` (no divisibility requirement).  ``dirty`` is set once a
    fence-style relocation has broken the laminar block structure; the
    structure-preserving update algorithms refuse to run until a full
    re-split clears it.
    """

    def __init__(self, colors: Iterable[int], k: int, mode: str = "exact"):
        colors = list(colors)
        if not colors:
            raise EmptyInputError("necklace needs at least one bead")
        if k < 1:
            raise ValueError("k must be positive")
        if mode not in ("exact", "approx"):
            raise ValueError(f"unknown mode {mode!r}")
        if min(colors) < 0:
            raise ValueError("color ids must be non-negative")

        self.k = k
        self.mode = mode
        self.n = max(colors) + 1
        self.color_counts = [0] * self.n
        for c in colors:
            self.color_counts[c] += 1
        if mode == "exact":
            for c, cnt in enumerate(self.color_counts):
                if cnt % k != 0:
                    raise DivisibilityError(
                        f"color {c} has {cnt} beads, not divisible by k={k}"
                    )

        self.m = len(colors)
        self._color = list(colors)
        self._owner = [UNASSIGNED] * self.m
        self._prev = [i - 1 for i in range(self.m)]
        self._next = [i + 1 for i in range(self.m)]
        self._next[-1] = NIL
        self.head = 0
        self.tail = self.m - 1
        self._free: list[int] = []
        self.dirty = False

        self._stale = True
        self._order: list[int] = []
        self._pos: list[int] = []
        self._chain_next: list[int] = []
        self._chain_first: list[int] = []
        self._chain_last: list[int] = []

    # ------------------------------------------------------------------
    # accessors

    def __len__(self) -> int:
        return self.m

    def color_of(self, h: int) -> int:
        return self._color[h]

    def owner_of(self, h: int) -> int:
        return self._owner[h]

    def prev_of(self, h: int) -> int:
        return self._prev[h]

    def next_of(self, h: int) -> int:
        return self._next[h]

    def handles(self) -> Iterator[int]:
        h = self.head
        while h != NIL:
            yield h
            h = self._next[h]

    def colors(self) -> list[int]:
        return [self._color[h] for h in self.handles()]

    def owners(self) -> list[int]:
        return [self._owner[h] for h in self.handles()]

    def bead(self, h: int) -> Bead:
        self._ensure_index()
        return Bead(
            handle=h,
            color=self._color[h],
            owner=self._owner[h],
            prev=self._prev[h],
            next=self._next[h],
            next_same_owner=self._chain_next[h],
        )

    def at(self, pos: int) -> int:
        """Handle of the bead at 1-based position ``pos``."""
        if not 1 <= pos <= self.m:
            raise OutOfRangeError(f"position {pos} outside [1, {self.m}]")
        self._ensure_index()
        return self._order[pos - 1]

    def position_of(self, h: int) -> int:
        self._ensure_index()
        return self._pos[h]

    def order(self) -> list[int]:
        self._ensure_index()
        return list(self._order)

    def next_same_owner(self, h: int) -> int:
        self._ensure_index()
        return self._chain_next[h]

    def first_bead_of(self, agent: int) -> int:
        self._ensure_index()
        return self._chain_first[agent]

    def agent_beads(self, agent: int) -> list[int]:
        """Handles owned by ``agent`` in necklace order, via the owner chain."""
        self._ensure_index()
        out = []
        h = self._chain_first[agent]
        while h != NIL:
            out.append(h)
            h = self._chain_next[h]
        return out

    def quota(self, color: int) -> Fraction:
        return Fraction(self.color_counts[color], self.k)

    def all_assigned(self) -> bool:
        return all(self._owner[h] != UNASSIGNED for h in self.handles())

    # ------------------------------------------------------------------
    # mutation

    def set_owner(self, h: int, agent: int) -> None:
        if not 0 <= agent < self.k:
            raise ValueError(f"agent {agent} outside [0, {self.k})")
        self._owner[h] = agent
        self._stale = True

    def assign_in_order(self, owners: Sequence[int]) -> None:
        """Assign owners positionally in one pass."""
        if len(owners) != self.m:
            raise ValueError("owner sequence length mismatch")
        for h, a in zip(self.handles(), owners):
            self._owner[h] = a
        self._stale = True

    def detach(self, h: int) -> None:
        p, q = self._prev[h], self._next[h]
        if p != NIL:
            self._next[p] = q
        else:
            self.head = q
        if q != NIL:
            self._prev[q] = p
        else:
            self.tail = p
        self._prev[h] = NIL
        self._next[h] = NIL
        self._stale = True

    def _attach_before(self, h: int, anchor: int) -> None:
        p = self._prev[anchor]
        self._prev[h] = p
        self._next[h] = anchor
        self._prev[anchor] = h
        if p != NIL:
            self._next[p] = h
        else:
            self.head = h

    def _attach_after(self, h: int, anchor: int) -> None:
        q = self._next[anchor]
        self._next[h] = q
        self._prev[h] = anchor
        self._next[anchor] = h
        if q != NIL:
            self._prev[q] = h
        else:
            self.tail = h

    def move_before(self, h: int, anchor: int) -> None:
        if h == anchor:
            raise ValueError("cannot move a bead relative to itself")
        self.detach(h)
        self._attach_before(h, anchor)

    def move_after(self, h: int, anchor: int) -> None:
        if h == anchor:
            raise ValueError("cannot move a bead relative to itself")
        self.detach(h)
        self._attach_after(h, anchor)

    def insert_bead(
        self,
        color: int,
        *,
        before: int | None = None,
        after: int | None = None,
        owner: int = UNASSIGNED,
    ) -> int:
        """Create a bead; exactly one of ``before``/``after`` selects the slot."""
        if (before is None) == (after is None):
            raise ValueError("specify exactly one of before/after")
        if self._free:
            h = self._free.pop()
            self._color[h] = color
            self._owner[h] = owner
        else:
            h = len(self._color)
            self._color.append(color)
            self._owner.append(owner)
            self._prev.append(NIL)
            self._next.append(NIL)
        if color >= self.n:
            self.color_counts.extend([0] * (color + 1 - self.n))
            self.n = color + 1
        self.color_counts[color] += 1
        self.m += 1
        if before is not None:
            self._attach_before(h, before)
        else:
            self._attach_after(h, after)
        self._stale = True
        return h

    def remove_bead(self, h: int) -> int:
        """Detach and free a bead; returns its color."""
        color = self._color[h]
        self.detach(h)
        self._free.append(h)
        self._owner[h] = UNASSIGNED
        self.color_counts[color] -= 1
        self.m -= 1
        self._stale = True
        return color

    def clone(self) -> "Necklace":
        copy = Necklace.__new__(Necklace)
        copy.k = self.k
        copy.mode = self.mode
        copy.n = self.n
        copy.color_counts = list(self.color_counts)
        copy.m = self.m
        copy._color = list(self._color)
        copy._owner = list(self._owner)
        copy._prev = list(self._prev)
        copy._next = list(self._next)
        copy.head = self.head
        copy.tail = self.tail
        copy._free = list(self._free)
        copy.dirty = self.dirty
        copy._stale = True
        copy._order = []
        copy._pos = []
        copy._chain_next = []
        copy._chain_first = []
        copy._chain_last = []
        return copy

    # ------------------------------------------------------------------
    # lazy index: positions + same-owner chains

    def _ensure_index(self) -> None:
        if not self._stale:
            return
        size = len(self._color)
        self._order = []
        self._pos = [0] * size
        self._chain_next = [NIL] * size
        self._chain_first = [NIL] * self.k
        self._chain_last = [NIL] * self.k
        pos = 0
        h = self.head
        while h != NIL:
            pos += 1
            self._pos[h] = pos
            self._order.append(h)
            a = self._owner[h]
            if a != UNASSIGNED:
                if self._chain_first[a] == NIL:
                    self._chain_first[a] = h
                else:
                    self._chain_next[self._chain_last[a]] = h
                self._chain_last[a] = h
            h = self._next[h]
        self._stale = False

    # ------------------------------------------------------------------
    # integrity (used by tests)

    def check_integrity(self) -> None:
        seen = 0
        prev = NIL
        h = self.head
        while h != NIL:
            assert self._prev[h] == prev
            prev = h
            seen += 1
            assert seen <= self.m, "cycle in bead links"
            h = self._next[h]
        assert prev == self.tail
        assert seen == self.m
        counts = [0] * self.n
        for h in self.handles():
            counts[self._color[h]] += 1
        assert counts == self.color_counts
        if self.all_assigned():
            self._ensure_index()
            chained = 0
            for a in range(self.k):
                h = self._chain_first[a]
                last_pos = 0
                while h != NIL:
                    assert self._owner[h] == a
                    assert self._pos[h] > last_pos
                    last_pos = self._pos[h]
                    chained += 1
                    h = self._chain_next[h]
            assert chained == self.m, "owner chains must partition the beads"


def build_necklace(colors: Iterable[int] | str, k: int, mode: str = "exact") -> Necklace:
    """Build an unassigned necklace from color ids or a symbol string."""
    if isinstance(colors, str):
        colors = colors_from_string(colors)
    return Necklace(colors, k, mode)


def colors_from_string(text: str) -> list[int]:
    """Map symbols to color ids in order of first appearance."""
    ids: dict[str, int] = {}
    out = []
    for ch in text:
        if ch not in ids:
            ids[ch] = len(ids)
        out.append(ids[ch])
    return out


# ----------------------------------------------------------------------
# cuts


@dataclass
class CutSet:
    """Owner-change boundaries.  Boundary ``p`` sits between beads p and p+1."""

    positions: list[int]
    pair_map: dict[tuple[int, int], list[int]] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.positions)


def derive_cuts(necklace: Necklace) -> CutSet:
    """One-pass scan for boundaries where the owner changes."""
    positions: list[int] = []
    pair_map: dict[tuple[int, int], list[int]] = {}
    pos = 0
    prev_h = NIL
    for h in necklace.handles():
        if necklace.owner_of(h) == UNASSIGNED:
            raise UnassignedBeadError("cuts are defined only for owned beads")
        pos += 1
        if prev_h != NIL:
            a, b = necklace.owner_of(prev_h), necklace.owner_of(h)
            if a != b:
                positions.append(pos - 1)
                key = (a, b) if a < b else (b, a)
                pair_map.setdefault(key, []).append(pos - 1)
        prev_h = h
    return CutSet(positions=positions, pair_map=pair_map)


# ----------------------------------------------------------------------
# fairness


@dataclass
class FairnessReport:
    """Per-agent per-color deviation from the exact quota m_i/k."""

    counts: list[list[int]]  # [agent][color]
    deviations: dict[tuple[int, int], Fraction]
    is_fair: bool

    def deviation(self, agent: int, color: int) -> Fraction:
        return self.deviations.get((agent, color), Fraction(0))


def verify_fair(necklace: Necklace) -> FairnessReport:
    counts = [[0] * necklace.n for _ in range(necklace.k)]
    for h in necklace.handles():
        a = necklace.owner_of(h)
        if a == UNASSIGNED:
            raise UnassignedBeadError("fairness needs every bead owned")
        counts[a][necklace.color_of(h)] += 1
    deviations: dict[tuple[int, int], Fraction] = {}
    for a in range(necklace.k):
        for c in range(necklace.n):
            dev = counts[a][c] - necklace.quota(c)
            if dev != 0:
                deviations[(a, c)] = dev
    return FairnessReport(counts=counts, deviations=deviations, is_fair=not deviations)


# ----------------------------------------------------------------------
# neighborhood graph


class NeighborhoodGraph:
    """Agents as vertices; an edge where two agents own adjacent beads."""

    def __init__(self, k: int):
        self.k = k
        self.adj: dict[int, set[int]] = {a: set() for a in range(k)}

    def add_edge(self, a: int, b: int) -> None:
        if a != b:
            self.adj[a].add(b)
            self.adj[b].add(a)

    def has_edge(self, a: int, b: int) -> bool:
        return b in self.adj[a]

    def neighbors(self, a: int) -> list[int]:
        return sorted(self.adj[a])

    def edges(self) -> set[frozenset[int]]:
        return {frozenset((a, b)) for a in self.adj for b in self.adj[a]}

    @property
    def edge_count(self) -> int:
        return len(self.edges())

    def is_connected(self) -> bool:
        start = 0
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for v in self.adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == self.k


def build_neighborhood_graph(necklace: Necklace) -> NeighborhoodGraph:
    graph = NeighborhoodGraph(necklace.k)
    prev_h = NIL
    for h in necklace.handles():
        if necklace.owner_of(h) == UNASSIGNED:
            raise UnassignedBeadError("graph needs every bead owned")
        if prev_h != NIL:
            graph.add_edge(necklace.owner_of(prev_h), necklace.owner_of(h))
        prev_h = h
    return graph


def partial_rebuild(graph: NeighborhoodGraph, necklace: Necklace, agents: set[int]) -> None:
    """Re-derive all edges incident to ``agents`` by scanning only their beads."""
    for a in agents:
        for b in list(graph.adj[a]):
            graph.adj[a].discard(b)
            graph.adj[b].discard(a)
    for a in agents:
        for h in necklace.agent_beads(a):
            for nb in (necklace.prev_of(h), necklace.next_of(h)):
                if nb != NIL:
                    graph.add_edge(a, necklace.owner_of(nb))


# ----------------------------------------------------------------------
# laminar block structure (peeling)


def peel_order(necklace: Necklace) -> list[int] | None:
    """Order in which agents can be removed, each contiguous in the contracted
    necklace at its turn; ``None`` if no such order exists.

    Works on the compressed run sequence: an agent is removable exactly when
    it owns a single run.  Removing a run may merge its two neighbors, which
    can make another agent removable.  Ties break toward the lowest agent id.
    """
    if not necklace.all_assigned():
        raise UnassignedBeadError("peeling needs every bead owned")

    run_owner: list[int] = []
    for h in necklace.handles():
        a = necklace.owner_of(h)
        if not run_owner or run_owner[-1] != a:
            run_owner.append(a)

    k = necklace.k
    nruns = len(run_owner)
    run_prev = [i - 1 for i in range(nruns)]
    run_next = [i + 1 for i in range(nruns)]
    run_next[-1] = NIL
    alive = [True] * nruns
    count = [0] * k
    runs_of: list[list[int]] = [[] for _ in range(k)]
    for i, a in enumerate(run_owner):
        count[a] += 1
        runs_of[a].append(i)
    if any(c == 0 for c in count):
        return None

    heap = [a for a in range(k) if count[a] == 1]
    heapq.heapify(heap)
    peeled = [False] * k
    order: list[int] = []

    def drop_run(r: int) -> None:
        alive[r] = False
        p, q = run_prev[r], run_next[r]
        if p != NIL:
            run_next[p] = q
        if q != NIL:
            run_prev[q] = p
        if p != NIL and q != NIL and run_owner[p] == run_owner[q]:
            # merge q into p
            alive[q] = False
            run_next[p] = run_next[q]
            if run_next[q] != NIL:
                run_prev[run_next[q]] = p
            a = run_owner[p]
            count[a] -= 1
            runs_of[a].remove(q)
            if count[a] == 1 and not peeled[a]:
                heapq.heappush(heap, a)

    while heap:
        a = heapq.heappop(heap)
        if peeled[a] or count[a] != 1:
            continue
        peeled[a] = True
        order.append(a)
        (r,) = [r for r in runs_of[a] if alive[r]]
        drop_run(r)

    return order if len(order) == k else None


def is_peelable(necklace: Necklace) -> bool:
    """True when the allocation decomposes into nested and side-by-side blocks."""
    return peel_order(necklace) is not None
