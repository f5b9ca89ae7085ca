"""Batch relocation, insertion and deletion for two-color necklaces.

A batch of same-colored moves changes several agents' bead counts at once.
Rather than repairing each move separately, we compute the per-agent demand
imbalance, route it as a flow on a leveled spanning tree of the neighborhood
graph, and re-split only the agents the flow passes through ("active"
nodes).  Insertion and deletion reduce to the same pipeline: newly inserted
beads join the interval they land in, deleted beads leave their owners
short, and the flow repair brings everyone back to quota.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .core import (
    NIL,
    Necklace,
    NeighborhoodGraph,
    build_neighborhood_graph,
    derive_cuts,
    peel_order,
)
from .errors import (
    BatchCountError,
    ColorMismatchError,
    DirtyStateError,
    InfeasibleError,
    NotPeelableError,
    NotTwoColorsError,
    OutOfRangeError,
    ZeroBatchError,
)
from .offline import offline_split_range


# ----------------------------------------------------------------------
# leveled spanning tree


@dataclass
class NeighborhoodTree:
    """Spanning tree of the neighborhood graph from the block nesting order.

    Agents removable early in the peeling order were allocated early; an
    agent's level is one plus the number of later blocks whose span encloses
    it.  Every non-level-1 node hangs off its tightest enclosing block, and
    level-1 nodes form a left-to-right path.
    """

    k: int
    levels: list[int]
    parent: list[int]  # NIL for level-1 nodes
    level1: list[int]  # level-1 agents in necklace order

    def edges(self) -> set[frozenset[int]]:
        out = {
            frozenset((u, self.parent[u]))
            for u in range(self.k)
            if self.parent[u] != NIL
        }
        out |= {
            frozenset(pair) for pair in zip(self.level1, self.level1[1:])
        }
        return out

    def adjacency(self) -> set[frozenset[int]]:
        return self.edges()

    def is_spanning(self) -> bool:
        edges = self.edges()
        if len(edges) != self.k - 1:
            return False
        adj: dict[int, set[int]] = {u: set() for u in range(self.k)}
        for e in edges:
            u, v = tuple(e)
            adj[u].add(v)
            adj[v].add(u)
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == self.k


def build_neighborhood_tree(necklace: Necklace) -> NeighborhoodTree:
    """Levels and parents from the block nesting structure.

    The selection order is reconstructed by peeling; the spans of the blocks
    form a laminar family, so each enclosed agent has a unique tightest
    encloser one level down.
    """
    order = peel_order(necklace)
    if order is None:
        raise NotPeelableError("allocation lacks the nested block structure")
    k = necklace.k
    spans: dict[int, tuple[int, int]] = {}
    for a in order:
        beads = necklace.agent_beads(a)
        spans[a] = (necklace.position_of(beads[0]), necklace.position_of(beads[-1]))

    levels = [1] * k
    parent = [NIL] * k
    tightest: dict[int, tuple[int, int] | None] = {a: None for a in order}
    for i, a in enumerate(order):
        lo, hi = spans[a]
        for e in order[:i]:
            elo, ehi = spans[e]
            if lo < elo and ehi < hi:
                levels[e] += 1
                best = tightest[e]
                if best is None or (hi - lo) < (spans[best][1] - spans[best][0]):
                    tightest[e] = a
    for a in order:
        t = tightest[a]
        if t is not None:
            parent[a] = t

    level1 = sorted((a for a in order if parent[a] == NIL), key=lambda a: spans[a][0])
    tree = NeighborhoodTree(k=k, levels=levels, parent=parent, level1=level1)
    for u in range(k):
        if parent[u] != NIL and levels[parent[u]] != levels[u] - 1:
            raise AssertionError("tightest encloser must sit one level down")
    return tree


# ----------------------------------------------------------------------
# flow network


@dataclass
class FlowNetwork:
    """Demand-balancing network over the agents.

    ``delta`` maps each agent to its signed bead-count change; agents with
    negative delta hang off the source, positive off the sink, and interior
    edges (from the graph or tree) have unbounded capacity.
    """

    nodes: list[int]
    delta: dict[int, int]
    interior_edges: set[frozenset[int]]
    tree: NeighborhoodTree | None = None

    @property
    def total_imbalance(self) -> int:
        return sum(d for d in self.delta.values() if d > 0)

    def source_capacities(self) -> dict[int, int]:
        return {u: -d for u, d in self.delta.items() if d < 0}

    def sink_capacities(self) -> dict[int, int]:
        return {u: d for u, d in self.delta.items() if d > 0}

    def adjacency(self) -> set[frozenset[int]]:
        return self.interior_edges


def build_flow_network(
    structure: NeighborhoodTree | NeighborhoodGraph, delta: Mapping[int, int]
) -> FlowNetwork:
    if isinstance(structure, NeighborhoodTree):
        nodes = list(range(structure.k))
        edges = structure.edges()
        tree = structure
    else:
        nodes = sorted(structure.adj)
        edges = structure.edges()
        tree = None
    full = {u: int(delta.get(u, 0)) for u in nodes}
    if sum(full.values()) != 0:
        raise InfeasibleError("demands must balance to zero")
    if all(d == 0 for d in full.values()):
        raise ZeroBatchError("every agent keeps its bead counts")
    return FlowNetwork(nodes=nodes, delta=full, interior_edges=edges, tree=tree)


@dataclass
class TreeFlowResult:
    flow: dict[tuple[int, int], int]
    active: set[int]
    value: int

    def throughput(self, delta: Mapping[int, int]) -> dict[int, tuple[int, int]]:
        """Per-node (inflow, outflow) including the source/sink edges."""
        inflow = {u: 0 for u in delta}
        outflow = {u: 0 for u in delta}
        for (u, v), f in self.flow.items():
            outflow[u] += f
            inflow[v] += f
        for u, d in delta.items():
            if d < 0:
                inflow[u] += -d
            elif d > 0:
                outflow[u] += d
        return {u: (inflow[u], outflow[u]) for u in delta}


def solve_tree_flow(network: FlowNetwork) -> TreeFlowResult:
    """Max flow on the tree network in two sweeps.

    Sweep one drains every imbalance downward level by level, each node
    pushing its excess along its unique edge to the level below.  Sweep two
    walks the level-1 path left to right, carrying the running excess.
    """
    tree = network.tree
    if tree is None:
        raise ValueError("tree solver needs a network built on a NeighborhoodTree")
    pending = {u: -network.delta[u] for u in network.nodes}
    flow: dict[tuple[int, int], int] = {}

    def add_flow(u: int, v: int, amount: int) -> None:
        if amount > 0:
            flow[(u, v)] = flow.get((u, v), 0) + amount
        elif amount < 0:
            flow[(v, u)] = flow.get((v, u), 0) - amount

    by_level: dict[int, list[int]] = {}
    for u in network.nodes:
        by_level.setdefault(tree.levels[u], []).append(u)
    for level in sorted(by_level, reverse=True):
        if level == 1:
            continue
        for u in sorted(by_level[level]):
            amount = pending[u]
            if amount == 0:
                continue
            p = tree.parent[u]
            add_flow(u, p, amount)
            pending[p] += amount
            pending[u] = 0

    carry = 0
    path = tree.level1
    for i in range(len(path) - 1):
        carry += pending[path[i]]
        pending[path[i]] = 0
        add_flow(path[i], path[i + 1], carry)
    if path:
        carry += pending[path[-1]]
        pending[path[-1]] = 0
    if carry != 0:
        raise InfeasibleError("excess must cancel on a balanced tree")

    value = network.total_imbalance
    result = TreeFlowResult(flow=flow, active=set(), value=value)
    result.active = _active_nodes(result, network.delta)
    return result


def _active_nodes(result: TreeFlowResult, delta: Mapping[int, int]) -> set[int]:
    io = result.throughput(delta)
    return {u for u, (i, o) in io.items() if i > 0 and o > 0}


def prune_active(
    graph: NeighborhoodGraph, network: FlowNetwork, result: TreeFlowResult
) -> TreeFlowResult:
    """Drop relay nodes whose flow can reroute among their upper neighbors.

    A relay qualifies when it is not a source or sink and every edge carrying
    its flow leads one level up to nodes that induce a connected subgraph of
    the neighborhood graph; the through-flow then redistributes inside that
    subgraph.  Never increases the active count.
    """
    tree = network.tree
    if tree is None:
        raise ValueError("pruning needs the tree levels")
    flow = dict(result.flow)

    for u in sorted(result.active):
        if network.delta[u] != 0:
            continue
        touching = {}
        for (a, b), f in flow.items():
            if f <= 0:
                continue
            if a == u:
                touching[b] = touching.get(b, 0) - f
            elif b == u:
                touching[a] = touching.get(a, 0) + f
        if not touching:
            continue
        if any(tree.levels[v] != tree.levels[u] + 1 for v in touching):
            continue
        members = sorted(touching)
        if not _connected_in(graph, members):
            continue
        # reroute: push each neighbor's imbalance along a spanning path of
        # the induced subgraph (positive = used to send into u)
        tree_edges = _spanning_tree(graph, members)
        order, parent_of = _dfs_order(tree_edges, members[0])
        excess = dict(touching)
        for v in reversed(order):
            if v == members[0]:
                continue
            p = parent_of[v]
            amount = excess[v]
            if amount > 0:
                flow[(v, p)] = flow.get((v, p), 0) + amount
            elif amount < 0:
                flow[(p, v)] = flow.get((p, v), 0) - amount
            excess[p] = excess.get(p, 0) + amount
            excess[v] = 0
        if excess[members[0]] != 0:
            raise AssertionError("relay through-flow must balance")
        for v in list(touching):
            flow.pop((u, v), None)
            flow.pop((v, u), None)

    flow = {e: f for e, f in flow.items() if f > 0}
    pruned = TreeFlowResult(flow=flow, active=set(), value=result.value)
    pruned.active = _active_nodes(pruned, network.delta)
    return pruned


def _connected_in(graph: NeighborhoodGraph, members: list[int]) -> bool:
    if len(members) <= 1:
        return True
    member_set = set(members)
    seen = {members[0]}
    stack = [members[0]]
    while stack:
        x = stack.pop()
        for y in graph.adj[x]:
            if y in member_set and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(members)


def _spanning_tree(graph: NeighborhoodGraph, members: list[int]) -> dict[int, set[int]]:
    member_set = set(members)
    adj: dict[int, set[int]] = {v: set() for v in members}
    seen = {members[0]}
    stack = [members[0]]
    while stack:
        x = stack.pop()
        for y in sorted(graph.adj[x]):
            if y in member_set and y not in seen:
                seen.add(y)
                adj[x].add(y)
                adj[y].add(x)
                stack.append(y)
    return adj

def _dfs_order(adj: dict[int, set[int]], root: int) -> tuple[list[int], dict[int, int]]:
    order = [root]
    parent = {root: root}
    stack = [root]
    while stack:
        x = stack.pop()
        for y in sorted(adj[x]):
            if y not in parent:
                parent[y] = x
                order.append(y)
                stack.append(y)
    return order, parent


# ----------------------------------------------------------------------
# batch operations


@dataclass
class MoveBatch:
    """Validated same-color batch: per-agent deltas and netted agent sets."""

    moves: list[tuple[int, int]]
    color: int
    delta: dict[int, int]

    @property
    def m_prime(self) -> int:
        return len(self.moves)

    @property
    def m_imbalance(self) -> int:
        return sum(d for d in self.delta.values() if d > 0)

    @property
    def givers(self) -> set[int]:
        return {u for u, d in self.delta.items() if d < 0}

    @property
    def takers(self) -> set[int]:
        return {u for u, d in self.delta.items() if d > 0}

    @property
    def k_imbalance(self) -> int:
        return len(self.givers) + len(self.takers)


def build_move_batch(necklace: Necklace, moves: Sequence[tuple[int, int]]) -> MoveBatch:
    if not moves:
        raise OutOfRangeError("empty batch")
    sources = [j1 for j1, _ in moves]
    if len(set(sources)) != len(sources):
        raise OutOfRangeError("duplicate source positions in batch")
    color = necklace.color_of(necklace.at(sources[0]))
    delta: dict[int, int] = {a: 0 for a in range(necklace.k)}
    src_handles = set()
    for j1, j2 in moves:
        h = necklace.at(j1)
        if necklace.color_of(h) != color:
            raise ColorMismatchError("batch beads must share one color")
        src_handles.add(h)
        delta[necklace.owner_of(h)] -= 1
    for j1, j2 in moves:
        anchor = necklace.at(j2)
        if anchor in src_handles:
            raise OutOfRangeError("destination may not be another moved bead")
        delta[necklace.owner_of(anchor)] += 1
    return MoveBatch(moves=list(moves), color=color, delta=delta)


@dataclass
class BatchResult:
    cuts: int
    k_imbalance: int
    flow_value: int
    active: set[int]
    reran: bool


def _repair_by_flow(
    necklace: Necklace, tree: NeighborhoodTree, delta: Mapping[int, int], prune: bool
) -> tuple[int, set[int]]:
    network = build_flow_network(tree, delta)
    solved = solve_tree_flow(network)
    if prune:
        graph = build_neighborhood_graph(necklace)
        solved = prune_active(graph, network, solved)
    # distinct flow components balance independently; re-splitting them as
    # one merged subsequence would interleave unrelated agents' blocks
    for component in _flow_components(solved):
        offline_split_range(necklace, component)
    return solved.value, set(solved.active)


def _flow_components(solved: "TreeFlowResult") -> list[list[int]]:
    adj: dict[int, set[int]] = {u: set() for u in solved.active}
    for (u, v), f in solved.flow.items():
        if f > 0 and u in adj and v in adj:
            adj[u].add(v)
            adj[v].add(u)
    seen: set[int] = set()
    components: list[list[int]] = []
    for start in sorted(solved.active):
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        stack = [start]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    comp.append(v)
                    stack.append(v)
        components.append(sorted(comp))
    return components


def batch_relocate(
    necklace: Necklace, moves: Sequence[tuple[int, int]], *, prune: bool = True
) -> BatchResult:
    """Move several same-colored beads at once and repair fairness with a
    single flow-guided re-split."""
    if necklace.dirty:
        raise DirtyStateError("run a full re-split before batch updates")
    if necklace.n != 2:
        raise NotTwoColorsError("batch relocation needs 2 colors")
    batch = build_move_batch(necklace, moves)
    tree = (
        build_neighborhood_tree(necklace)
        if any(d != 0 for d in batch.delta.values())
        else None
    )

    # resolve to handles before mutating, then apply all moves
    plan = []
    for j1, j2 in batch.moves:
        h = necklace.at(j1)
        anchor = necklace.at(j2)
        plan.append((h, anchor, j2 < j1))
    for h, anchor, before in plan:
        if before:
            necklace.move_before(h, anchor)
        else:
            necklace.move_after(h, anchor)
        necklace.set_owner(h, necklace.owner_of(anchor))

    if tree is None:
        return BatchResult(
            cuts=derive_cuts(necklace).size,
            k_imbalance=0,
            flow_value=0,
            active=set(),
            reran=False,
        )
    value, active = _repair_by_flow(necklace, tree, batch.delta, prune)
    return BatchResult(
        cuts=derive_cuts(necklace).size,
        k_imbalance=batch.k_imbalance,
        flow_value=value,
        active=active,
        reran=True,
    )


def insert_batch(
    necklace: Necklace, color: int, positions: Sequence[int], *, prune: bool = True
) -> BatchResult:
    """Insert len(positions) beads of one color, a multiple of k of them.

    Each position names the bead the new one lands in front of, in the
    pre-insertion numbering (m+1 appends).  New beads join the interval they
    land in; the flow repair then restores the enlarged quotas.
    """
    if necklace.dirty:
        raise DirtyStateError("run a full re-split before batch updates")
    if necklace.n != 2:
        raise NotTwoColorsError("insertion repair needs 2 colors")
    if len(positions) == 0 or len(positions) % necklace.k != 0:
        raise BatchCountError(
            f"{len(positions)} insertions is not a positive multiple of k={necklace.k}"
        )
    alpha = len(positions) // necklace.k
    m = necklace.m
    if any(not 1 <= p <= m + 1 for p in positions):
        raise OutOfRangeError(f"insert positions must lie in [1, {m + 1}]")

    # owner of the interval each bead lands in: its left neighbor's owner,
    # or the old head's owner when inserting at the front
    delta = {a: -alpha for a in range(necklace.k)}
    anchors = []
    for p in positions:
        if p == 1:
            owner = necklace.owner_of(necklace.at(1))
        else:
            owner = necklace.owner_of(necklace.at(p - 1))
        anchors.append((p, owner))
        delta[owner] += 1
    k_imb = sum(1 for d in delta.values() if d != 0)

    tree = build_neighborhood_tree(necklace)

    for p, owner in sorted(anchors, key=lambda t: t[0], reverse=True):
        if p == m + 1:
            necklace.insert_bead(color, after=necklace.tail, owner=owner)
        else:
            necklace.insert_bead(color, before=necklace.at(p), owner=owner)

    if all(d == 0 for d in delta.values()):
        return BatchResult(
            cuts=derive_cuts(necklace).size,
            k_imbalance=0,
            flow_value=0,
            active=set(),
            reran=False,
        )
    value, active = _repair_by_flow(necklace, tree, delta, prune)
    return BatchResult(
        cuts=derive_cuts(necklace).size,
        k_imbalance=k_imb,
        flow_value=value,
        active=active,
        reran=True,
    )


def delete_batch(
    necklace: Necklace, positions: Sequence[int], *, prune: bool = True
) -> BatchResult:
    """Delete the beads at the given positions (one color, a multiple of k)."""
    if necklace.dirty:
        raise DirtyStateError("run a full re-split before batch updates")
    if necklace.n != 2:
        raise NotTwoColorsError("deletion repair needs 2 colors")
    if len(positions) == 0 or len(positions) % necklace.k != 0:
        raise BatchCountError(
            f"{len(positions)} deletions is not a positive multiple of k={necklace.k}"
        )
    if len(set(positions)) != len(positions):
        raise OutOfRangeError("duplicate delete positions")
    alpha = len(positions) // necklace.k
    handles = [necklace.at(p) for p in positions]
    color = necklace.color_of(handles[0])
    if any(necklace.color_of(h) != color for h in handles):
        raise ColorMismatchError("deleted beads must share one color")

    delta = {a: alpha for a in range(necklace.k)}
    for h in handles:
        delta[necklace.owner_of(h)] -= 1
    k_imb = sum(1 for d in delta.values() if d != 0)

    tree = build_neighborhood_tree(necklace)
    for h in handles:
        necklace.remove_bead(h)

    if all(d == 0 for d in delta.values()):
        return BatchResult(
            cuts=derive_cuts(necklace).size,
            k_imbalance=0,
            flow_value=0,
            active=set(),
            reran=False,
        )
    value, active = _repair_by_flow(necklace, tree, delta, prune)
    return BatchResult(
        cuts=derive_cuts(necklace).size,
        k_imbalance=k_imb,
        flow_value=value,
        active=active,
        reran=True,
    )
