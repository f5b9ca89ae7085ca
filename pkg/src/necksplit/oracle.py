"""Exhaustive reference solvers, independent of the production algorithms.

Both oracles brute-force small instances and exist only to check the fast
paths: minimum owner-change count over all fair allocations, and the minimum
number of active nodes among maximum flows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .core import Necklace, colors_from_string
from .errors import TooLargeError

INFEASIBLE = math.inf


@dataclass
class StatReport:
    """Outcome of a repeated statistical trial against a threshold."""

    trials: int
    successes: int
    threshold: float
    values: list[float] = field(default_factory=list)

    @property
    def rate(self) -> float:
        return self.successes / self.trials if self.trials else 0.0


def brute_force_min_cuts(necklace: Necklace | Sequence[int], k: int) -> float:
    """Exact minimum number of cuts over all fair allocations.

    Enumerates boundary subsets in increasing size and checks whether the
    resulting intervals can be grouped into k exact per-color quotas.
    Returns ``math.inf`` when no fair allocation exists.
    """
    if isinstance(necklace, Necklace):
        colors = list(necklace.colors())
    elif isinstance(necklace, str):
        colors = colors_from_string(necklace)
    else:
        colors = list(necklace)
    m = len(colors)
    if m > 20:
        raise TooLargeError(f"exhaustive search capped at 20 beads, got {m}")
    n = max(colors) + 1
    totals = [colors.count(c) for c in range(n)]
    if any(t % k for t in totals):
        return INFEASIBLE
    quotas = [t // k for t in totals]

    prefix = [[0] * (m + 1) for _ in range(n)]
    for i, c in enumerate(colors):
        for cc in range(n):
            prefix[cc][i + 1] = prefix[cc][i] + (1 if c == cc else 0)

    def interval_counts(lo: int, hi: int) -> tuple[int, ...]:
        return tuple(prefix[c][hi] - prefix[c][lo] for c in range(n))

    def assignable(parts: list[tuple[int, ...]]) -> bool:
        # exact-cover backtracking; agents are interchangeable, so a new
        # interval may only open the lowest untouched agent
        remaining = [tuple(quotas) for _ in range(k)]
        used = 0

        def rec(i: int, used: int) -> bool:
            if i == len(parts):
                return True
            part = parts[i]
            limit = min(k, used + 1)
            for a in range(limit):
                rem = remaining[a]
                if all(rem[c] >= part[c] for c in range(n)):
                    remaining[a] = tuple(rem[c] - part[c] for c in range(n))
                    if rec(i + 1, max(used, a + 1)):
                        return True
                    remaining[a] = rem
            return False

        return rec(0, 0)

    for ncuts in range(0, m):
        for cuts in combinations(range(1, m), ncuts):
            bounds = [0, *cuts, m]
            parts = [interval_counts(bounds[i], bounds[i + 1]) for i in range(len(bounds) - 1)]
            if any(any(p[c] > quotas[c] for c in range(n)) for p in parts):
                continue
            parts.sort(reverse=True)
            if assignable(parts):
                return ncuts
    return INFEASIBLE


def _max_flow(nodes: set[int], arcs: dict[tuple[int, int], float], s: int, t: int) -> float:
    """Plain breadth-first augmenting max flow on a tiny digraph."""
    residual: dict[int, dict[int, float]] = {u: {} for u in nodes | {s, t}}
    for (u, v), cap in arcs.items():
        residual[u][v] = residual[u].get(v, 0) + cap
        residual[v].setdefault(u, 0)
    total = 0.0
    while True:
        parent = {s: s}
        queue = [s]
        while queue and t not in parent:
            u = queue.pop(0)
            for v, cap in residual[u].items():
                if cap > 0 and v not in parent:
                    parent[v] = u
                    queue.append(v)
        if t not in parent:
            return total
        bottleneck = math.inf
        v = t
        while v != s:
            u = parent[v]
            bottleneck = min(bottleneck, residual[u][v])
            v = u
        v = t
        while v != s:
            u = parent[v]
            residual[u][v] -= bottleneck
            residual[v][u] += bottleneck
            v = u
        total += bottleneck


def exact_min_node_max_flow(network) -> int:
    """Minimum count of active nodes among max flows, by subset enumeration.

    ``network`` is any object with ``nodes`` (iterable of ids), ``delta``
    (node -> signed demand) and ``adjacency()`` (undirected interior edges as
    frozensets).  Nodes with nonzero demand are active in every max flow, so
    only relay subsets are enumerated, smallest first.
    """
    nodes = sorted(network.nodes)
    if len(nodes) > 12:
        raise TooLargeError("exact solver capped at 12 interior nodes")
    delta = dict(network.delta)
    forced = [u for u in nodes if delta[u] != 0]
    relays = [u for u in nodes if delta[u] == 0]
    need = float(sum(d for d in delta.values() if d > 0))
    if need == 0:
        return 0
    edges = network.adjacency()
    s, t = -2, -3

    def feasible(active: set[int]) -> bool:
        arcs: dict[tuple[int, int], float] = {}
        for u in active:
            if delta[u] < 0:
                arcs[(s, u)] = -delta[u]
            elif delta[u] > 0:
                arcs[(u, t)] = delta[u]
        for e in edges:
            u, v = tuple(e)
            if u in active and v in active:
                arcs[(u, v)] = math.inf
                arcs[(v, u)] = math.inf
        return _max_flow(set(active), arcs, s, t) >= need

    for size in range(len(relays) + 1):
        for extra in combinations(relays, size):
            active = set(forced) | set(extra)
            if feasible(active):
                return len(active)
    raise AssertionError("full node set must always be feasible")
