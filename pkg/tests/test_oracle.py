from __future__ import annotations

import random

import numpy as np
import pytest

from conftest import (
    complete_graph,
    cycle_graph,
    grid_graph,
    path_graph,
    random_connected_graph,
    star_graph,
)
from stc.errors import BudgetExceededError, DisconnectedGraphError
from stc.graph import DoubleWeightedGraph, Graph, congestion_report
from stc.oracle import (
    EnumerationBudget,
    count_spanning_trees,
    enumerate_spanning_trees,
    stc_exact,
)


def kirchhoff_count(G: Graph) -> int:
    """Independent tree count: determinant of a Laplacian minor."""
    if G.n == 1:
        return 1
    L = np.zeros((G.n, G.n))
    for u, v in G.edges:
        L[u, u] += 1
        L[v, v] += 1
        L[u, v] -= 1
        L[v, u] -= 1
    return round(np.linalg.det(L[1:, 1:]))


def test_counts_small():
    assert count_spanning_trees(cycle_graph(4)) == 4
    assert count_spanning_trees(complete_graph(4)) == 16
    assert count_spanning_trees(grid_graph(2)) == 4
    assert count_spanning_trees(path_graph(6)) == 1
    assert count_spanning_trees(Graph(1, frozenset())) == 1


def test_counts_match_kirchhoff_random():
    rng = random.Random(811)
    for _ in range(40):
        n = rng.randint(2, 8)
        G = random_connected_graph(rng, n, rng.randint(n - 1, n * (n - 1) // 2))
        assert count_spanning_trees(G) == kirchhoff_count(G)


def test_enumeration_distinct_and_valid():
    G = complete_graph(5)
    seen = set()
    for t in enumerate_spanning_trees(G):
        assert t not in seen
        seen.add(t)
        assert len(t) == 4
    assert len(seen) == kirchhoff_count(G) == 125


def test_enumeration_deterministic():
    G = grid_graph(3)
    first = list(enumerate_spanning_trees(G))
    second = list(enumerate_spanning_trees(G))
    assert first == second


def test_budget_trees():
    G = complete_graph(6)
    budget = EnumerationBudget(max_trees=10, max_millis=60_000)
    got = []
    with pytest.raises(BudgetExceededError) as exc:
        for t in enumerate_spanning_trees(G, budget):
            got.append(t)
    assert exc.value.emitted == 10
    assert len(got) == 10


def test_budget_time():
    G = complete_graph(9)
    budget = EnumerationBudget(max_trees=10**9, max_millis=0)
    with pytest.raises(BudgetExceededError):
        list(enumerate_spanning_trees(G, budget))


def test_rejects_disconnected():
    G = Graph.from_edges(4, [(0, 1), (2, 3)])
    with pytest.raises(DisconnectedGraphError):
        list(enumerate_spanning_trees(G))
    with pytest.raises(DisconnectedGraphError):
        stc_exact(G)


def test_stc_values():
    assert stc_exact(path_graph(5))[0] == 1
    assert stc_exact(star_graph(6))[0] == 1
    assert stc_exact(cycle_graph(7))[0] == 2
    assert stc_exact(complete_graph(4))[0] == 3
    assert stc_exact(complete_graph(5))[0] == 4
    assert stc_exact(grid_graph(3))[0] == 3


def test_stc_tree_is_certified():
    G = grid_graph(3)
    k, T = stc_exact(G)
    assert congestion_report(G, T).max_congestion == k


def test_stc_tiebreak_deterministic():
    G = complete_graph(4)
    assert stc_exact(G)[1].edges == stc_exact(G)[1].edges
    t1 = stc_exact(G)[1].sorted_edges()
    t2 = stc_exact(G)[1].sorted_edges()
    assert t1 == t2


def test_weighted_oracle_cycle_value():
    # every tree of a cycle keeps all edges but one; the dropped edge's wt1
    # rides every kept edge, so the optimum is min over drops of that load
    G = cycle_graph(4)
    wt = {e: 1 for e in G.edges}
    wt[(0, 1)] = 10
    Gw = DoubleWeightedGraph.single(G, wt)
    k, _ = stc_exact(Gw)
    assert k == 10 + 1


def test_weighted_oracle_distinguishes_wt2():
    # triangle where edge (0,1) is cheap to ride over but dear to keep
    G = complete_graph(3)
    Gw = DoubleWeightedGraph(
        G,
        {(0, 1): 1, (0, 2): 3, (1, 2): 3},
        {(0, 1): 9, (0, 2): 3, (1, 2): 3},
    )
    k, T = stc_exact(Gw)
    assert (0, 1) not in T.edges
    assert k == 4  # wt2 = 3 plus the ridden wt1 = 1


def test_subdivision_invariance_small():
    rng = random.Random(812)
    for _ in range(10):
        n = rng.randint(4, 7)
        G = random_connected_graph(rng, n, rng.randint(n, min(12, n * (n - 1) // 2)))
        base, _ = stc_exact(G)
        # subdivide one non-bridge edge and re-solve
        e = sorted(G.edges)[rng.randrange(G.m)]
        edges = [x for x in G.edges if x != e]
        w = G.n
        edges += [(e[0], w), (e[1], w)]
        H = Graph.from_edges(G.n + 1, edges)
        sub, _ = stc_exact(H)
        assert sub == base
