"""Brute-force oracle: enumerate all spanning trees, take the best.

Enumeration is the classic include/exclude recursion on a fixed edge order:
including an edge freezes out every edge that would now close a cycle,
excluding an edge forces the bridges of what remains.  Each spanning tree is
emitted exactly once, in an order determined entirely by the sorted edge list.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

from .errors import BudgetExceededError
from .graph import (
    CongestionReport,
    DoubleWeightedGraph,
    Edge,
    Graph,
    SpanningTree,
    congestion_report,
    edge_key,
    require_connected,
)

DEFAULT_MAX_TREES = 2_000_000
DEFAULT_MAX_MILLIS = 120_000


@dataclass(frozen=True)
class EnumerationBudget:
    max_trees: int = DEFAULT_MAX_TREES
    max_millis: int = DEFAULT_MAX_MILLIS


def _bridges(n: int, adj: dict[int, set[int]]) -> set[Edge]:
    """Bridges via lowpoint DFS; tolerates a disconnected adjacency."""
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    out: set[Edge] = set()
    clock = [0]

    def dfs(v: int, parent: int):
        disc[v] = low[v] = clock[0]
        clock[0] += 1
        for u in adj[v]:
            if u == parent:
                continue
            if u in disc:
                low[v] = min(low[v], disc[u])
            else:
                dfs(u, v)
                low[v] = min(low[v], low[u])
                if low[u] > disc[v]:
                    out.add(edge_key(v, u))

    for root in adj:
        if root not in disc:
            dfs(root, -1)
    return out


def enumerate_spanning_trees(G: Graph, budget: EnumerationBudget | None = None):
    """Yield every spanning tree edge set (frozenset) of a connected graph.

    Raises BudgetExceededError (with .emitted) when either cap is hit.
    """
    require_connected(G)
    budget = budget or EnumerationBudget()
    deadline = time.monotonic() + budget.max_millis / 1000.0
    n = G.n
    emitted = 0

    def check(now_trees: int):
        if now_trees >= budget.max_trees:
            raise BudgetExceededError(
                f"tree cap {budget.max_trees} reached", emitted=now_trees
            )
        if time.monotonic() > deadline:
            raise BudgetExceededError(
                f"time cap {budget.max_millis} ms reached", emitted=now_trees
            )

    def components(part: frozenset[Edge]) -> list[int]:
        comp = list(range(n))

        def find(x):
            while comp[x] != x:
                comp[x] = comp[comp[x]]
                x = comp[x]
            return x

        for u, v in part:
            comp[find(u)] = find(v)
        return [find(v) for v in range(n)]

    def adj_of(edges) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {v: set() for v in range(n)}
        for u, v in edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    initial = frozenset(G.edges)
    forced = frozenset(_bridges(n, adj_of(initial)))
    stack = [(initial, forced)]
    while stack:
        check(emitted)
        avail, part = stack.pop()
        if len(part) == n - 1:
            emitted += 1
            yield part
            continue
        if avail == part:
            continue
        e = min(avail - part)
        # exclude e: the bridges of the remaining graph become forced
        rest = avail - {e}
        new_forced = _bridges(n, adj_of(rest)) | part
        stack.append((rest, frozenset(new_forced)))
        # include e: edges joining vertices already connected are frozen out
        part2 = part | {e}
        comp = components(part2)
        closing = {f for f in avail - part2 if comp[f[0]] == comp[f[1]]}
        stack.append((avail - closing, part2))


def count_spanning_trees(G: Graph, budget: EnumerationBudget | None = None) -> int:
    return sum(1 for _ in enumerate_spanning_trees(G, budget))


def _fast_max_congestion(base: Graph, wt1, wt2, tree: frozenset[Edge]) -> int:
    """Max congestion only, lean arrays, for the enumeration inner loop."""
    n = base.n
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in tree:
        adj[u].append(v)
        adj[v].append(u)
    parent = [-1] * n
    depth = [0] * n
    order = [0]
    parent[0] = 0
    for v in order:
        for u in adj[v]:
            if parent[u] == -1:
                parent[u] = v
                depth[u] = depth[v] + 1
                order.append(u)
    parent[0] = -1
    diff = [0] * n
    for e in base.edges:
        if e in tree:
            continue
        a, b = e
        w = wt1[e]
        x, y = a, b
        while x != y:
            if depth[x] < depth[y]:
                x, y = y, x
            x = parent[x]
        diff[a] += w
        diff[b] += w
        diff[x] -= 2 * w
    best = 0
    for v in reversed(order):
        p = parent[v]
        if p >= 0:
            diff[p] += diff[v]
            c = diff[v] + wt2[edge_key(v, p)]
            if c > best:
                best = c
    return best


def stc_exact(G, budget: EnumerationBudget | None = None) -> tuple[int, SpanningTree]:
    """Exact spanning tree congestion by full enumeration.

    Ties break toward the first optimal tree in enumeration order.  Accepts a
    Graph or a DoubleWeightedGraph.
    """
    if isinstance(G, DoubleWeightedGraph):
        base, wt1, wt2 = G.base, G.wt1, G.wt2
    else:
        base = G
        wt1 = wt2 = {e: 1 for e in base.edges}
    require_connected(base)
    best: tuple[int, frozenset[Edge]] | None = None
    for tree in enumerate_spanning_trees(base, budget):
        c = _fast_max_congestion(base, wt1, wt2, tree)
        if best is None or c < best[0]:
            best = (c, tree)
    assert best is not None
    return best[0], SpanningTree(base, best[1])


def oracle_report(G, tree_edges) -> CongestionReport:
    """Evaluate an explicit tree under the same weight conventions."""
    return congestion_report(G, tree_edges)
