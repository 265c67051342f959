from __future__ import annotations

import random
from fractions import Fraction

import pytest

from conftest import (
    complete_bipartite,
    complete_graph,
    cycle_graph,
    path_graph,
    random_connected_graph,
    star_graph,
)
from stc.errors import GraphError
from stc.graph import Graph, congestion_report
from stc.oracle import stc_exact
from stc.structural import (
    Signature,
    dtc_bound_tree,
    dtc_congestion_bound,
    enumerate_types,
    fes_value,
    ilp_minimize_max,
    lift_tree,
    reconstruct,
    reduce_graph,
    small_case_threshold,
    solve_dtc,
    solve_fes,
    solve_vi,
    tree_from_signature,
    vertex_integrity_set,
)


def theta_graph(*lengths: int) -> Graph:
    """Two hubs joined by internally disjoint paths of the given edge counts."""
    edges = []
    nxt = 2
    for L in lengths:
        prev = 0
        for _ in range(L - 1):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
        edges.append((prev, 1))
    return Graph.from_edges(nxt, edges)


# -- feedback edge set --------------------------------------------------------


def test_reduce_tree_collapses_to_vertex():
    G = star_graph(6)
    core, trace = reduce_graph(G)
    assert trace.kind == "tree"
    assert core.n == 1 and core.m == 0
    k, T = solve_fes(G)
    assert k == 1 and congestion_report(G, T).max_congestion == 1


def test_reduce_cycle_flagged():
    G = cycle_graph(7)
    core, trace = reduce_graph(G)
    assert trace.kind == "cycle"
    k, T = solve_fes(G)
    assert k == 2


def test_reduce_theta_shape():
    # three length-2 paths: one becomes the direct edge, two stay as paths
    G = theta_graph(2, 2, 2)
    core, trace = reduce_graph(G)
    assert trace.kind == "kernel"
    assert core.n == 4 and core.m == 5
    degs = sorted(core.degree(v) for v in range(core.n))
    assert degs == [2, 2, 3, 3]
    k, T = solve_fes(G)
    assert k == stc_exact(G)[0] == 3


def test_reduce_reconstructs_host():
    rng = random.Random(7)
    for _ in range(30):
        G = random_connected_graph(rng, rng.randint(2, 14), rng.randint(1, 16))
        core, trace = reduce_graph(G)
        assert reconstruct(core, trace) == G


def test_reduce_bounds_hold():
    rng = random.Random(8)
    for _ in range(40):
        n = rng.randint(3, 40)
        G = random_connected_graph(rng, n, n - 1 + rng.randint(0, 4))
        fes = fes_value(G)
        core, trace = reduce_graph(G)
        assert fes_value(core) == fes
        if trace.kind == "kernel":
            big = [v for v in range(core.n) if core.degree(v) >= 3]
            assert len(big) < 2 * fes
            assert sum(core.degree(v) for v in big) < 6 * fes
            assert core.m < 9 * fes


def test_fes_matches_oracle_and_lifts():
    rng = random.Random(9)
    for _ in range(25):
        n = rng.randint(3, 12)
        G = random_connected_graph(rng, n, n - 1 + rng.randint(0, 3))
        want, _ = stc_exact(G)
        got, T = solve_fes(G)
        assert got == want
        assert congestion_report(G, T).max_congestion == got


def test_reduce_preserves_stc_on_larger_hosts():
    # hosts beyond easy enumeration still yield kernels the oracle can take
    rng = random.Random(10)
    for _ in range(10):
        n = rng.randint(20, 40)
        G = random_connected_graph(rng, n, n - 1 + rng.randint(1, 4))
        core, trace = reduce_graph(G)
        kk, core_tree = stc_exact(core)
        lifted = lift_tree(trace, core_tree.edges)
        assert congestion_report(G, lifted).max_congestion == kk


def test_single_extra_edge_gives_two():
    G = Graph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 2)])
    k, T = solve_fes(G)
    assert k == 2


# -- distance to clique -------------------------------------------------------


def test_dtc_threshold_formula():
    assert small_case_threshold(1) == 6
    assert small_case_threshold(2) == 24
    assert small_case_threshold(3) == 66


def test_dtc_complete_graph_empty_modulator():
    G = complete_graph(6)
    k, T = solve_dtc(G, frozenset())
    assert k == 5
    assert congestion_report(G, T).max_congestion == 5


def test_dtc_small_case_equals_oracle():
    G = Graph.from_edges(
        6, [(i, j) for i in range(5) for j in range(i + 1, 5)] + [(0, 5)]
    )
    k, T = solve_dtc(G, frozenset({5}))
    assert k == stc_exact(G)[0] == 4


def test_dtc_rejects_non_clique_remainder():
    with pytest.raises(GraphError):
        solve_dtc(path_graph(5), frozenset({0}))


def test_dtc_big_case_equals_oracle():
    rng = random.Random(12)
    done = 0
    while done < 4:
        # q = 1, N = 7 sits just above the small-case threshold of 6
        edges = [(i, j) for i in range(7) for j in range(i + 1, 7)]
        attach = rng.sample(range(7), rng.randint(1, 4))
        edges += [(a, 7) for a in attach]
        G = Graph.from_edges(8, edges)
        want, _ = stc_exact(G)
        got, T = solve_dtc(G, frozenset({7}))
        assert got == want
        assert congestion_report(G, T).max_congestion == got
        done += 1


def test_dtc_universal_modulators_make_bigger_clique():
    # two adjacent universal modulator vertices: the graph is K_27
    edges = [(i, j) for i in range(27) for j in range(i + 1, 27)]
    G = Graph.from_edges(27, edges)
    k, T = solve_dtc(G, frozenset({25, 26}))
    assert k == 26


def test_bound_tree_pendant_modulator():
    edges = [(i, j) for i in range(9) for j in range(i + 1, 9)] + [(0, 9)]
    G = Graph.from_edges(10, edges)
    T = dtc_bound_tree(G, frozenset({9}))
    rep = congestion_report(G, T)
    assert rep.max_congestion < dtc_congestion_bound(9, 1) == 11


def test_bound_tree_single_universal_modulator():
    edges = [(i, j) for i in range(20) for j in range(i + 1, 20)]
    edges += [(i, 20) for i in range(20)]
    G = Graph.from_edges(21, edges)
    T = dtc_bound_tree(G, frozenset({20}))
    got = congestion_report(G, T).max_congestion
    assert got < dtc_congestion_bound(20, 1) == 22


def test_bound_tree_q3_random_attachments():
    rng = random.Random(13)
    N, q = 30, 3
    edges = [(i, j) for i in range(N) for j in range(i + 1, N)]
    for s in range(N, N + q):
        for c in rng.sample(range(N), rng.randint(5, N)):
            edges.append((c, s))
    edges.append((N, N + 1))
    G = Graph.from_edges(N + q, edges)
    T = dtc_bound_tree(G, frozenset(range(N, N + q)))
    got = congestion_report(G, T).max_congestion
    assert got < dtc_congestion_bound(N, q)


def test_bound_tree_large_clique_two_modulators():
    rng = random.Random(14)
    N, q = 100, 2
    edges = [(i, j) for i in range(N) for j in range(i + 1, N)]
    for s in (N, N + 1):
        for c in rng.sample(range(N), rng.randint(10, 60)):
            edges.append((c, s))
    edges.append((N, N + 1))
    G = Graph.from_edges(N + q, edges)
    T = dtc_bound_tree(G, frozenset({N, N + 1}))
    got = congestion_report(G, T).max_congestion
    bound = dtc_congestion_bound(N, q)
    assert bound == Fraction(158)
    assert got < bound


# -- vertex integrity ---------------------------------------------------------


def test_vertex_integrity_star():
    assert vertex_integrity_set(star_graph(5), 3) == frozenset({0})


def test_vertex_integrity_path9():
    S = vertex_integrity_set(path_graph(9), 6)
    assert S == frozenset({4})
    # |S| + largest remaining component: 1 + 4; no smaller cap admits a witness
    assert vertex_integrity_set(path_graph(9), 4) is None


def test_vertex_integrity_k5():
    assert vertex_integrity_set(complete_graph(5), 3) is None
    assert vertex_integrity_set(complete_graph(5), 5) == frozenset()


def test_enumerate_types_twin_singletons():
    # two isolated vertices with the same S-neighborhood: one class of two
    G = Graph.from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    classes, forests = enumerate_types(G, frozenset({2, 3}))
    assert len(classes) == 1
    assert len(classes[0].members) == 2


def test_enumerate_types_single_vertex_patterns():
    # one vertex adjacent to s1 and s2: attach via either (leaf) or both
    G = Graph.from_edges(3, [(0, 1), (0, 2), (1, 2)])
    classes, forests = enumerate_types(G, frozenset({1, 2}))
    assert len(classes) == 1
    pats = forests[0]
    assert len(pats) == 3
    assert sorted(p.leaf for p in pats) == [False, True, True]


def test_enumerate_types_asymmetric_components_split():
    # an edge component and two singleton components get distinct classes
    G = Graph.from_edges(5, [(0, 4), (1, 4), (0, 1), (2, 4), (3, 4)])
    classes, _ = enumerate_types(G, frozenset({4}))
    sizes = sorted(len(c.members) for c in classes)
    assert sizes == [1, 2]


def test_ilp_balanced_split():
    # two types feeding two edges one-sidedly: best is the 2/2 split
    z, x = ilp_minimize_max([(4, [0, 1])], [0, 0], [[1, 0], [0, 1]])
    assert z == 2 and x == (2, 2)


def test_ilp_empty_objective():
    z, x = ilp_minimize_max([(3, [0])], [], [[]])
    assert z == 0 and x == (3,)


def test_ilp_forced_and_infeasible():
    z, x = ilp_minimize_max([(5, [0])], [1], [[2]])
    assert z == 11 and x == (5,)
    with pytest.raises(ValueError):
        ilp_minimize_max([(1, [])], [0], [])


def test_vi_path_is_tree():
    k, T = solve_vi(path_graph(6), frozenset({2}))
    assert k == 1


def test_vi_cycle():
    k, T = solve_vi(cycle_graph(6), frozenset({0, 3}))
    assert k == 2


def test_vi_random_equals_oracle():
    rng = random.Random(15)
    done = 0
    while done < 15:
        n = rng.randint(4, 9)
        G = random_connected_graph(rng, n, rng.randint(n - 1, n + 4))
        S = vertex_integrity_set(G, 4)
        if S is None:
            continue
        want, _ = stc_exact(G)
        got, T = solve_vi(G, S)
        assert got == want
        assert congestion_report(G, T).max_congestion == got
        done += 1


def bipartite_plus_bridge(t: int) -> Graph:
    """K_{2,t} plus the edge between the two high-degree vertices."""
    edges = [(0, 1)] + [(0, 2 + i) for i in range(t)] + [(1, 2 + i) for i in range(t)]
    return Graph.from_edges(t + 2, edges)


def test_vi_signature_path_matches_oracle():
    # stc = t + 1 = 9 reaches k^2 with k = 3, so the precheck hands over to
    # the type/ILP machinery
    G = bipartite_plus_bridge(8)
    S = vertex_integrity_set(G, 3)
    assert S == frozenset({0, 1})
    want, _ = stc_exact(G)
    got, T = solve_vi(G, S)
    assert got == want == 9
    assert congestion_report(G, T).max_congestion == 9


def test_vi_signature_path_larger_instance():
    G = bipartite_plus_bridge(16)
    got, T = solve_vi(G, frozenset({0, 1}))
    assert got == 17
    assert congestion_report(G, T).max_congestion == 17


def test_vi_nonleaf_components_bounded():
    G = bipartite_plus_bridge(8)
    S = frozenset({0, 1})
    _, T = solve_vi(G, S)
    nonleaf = 0
    for comp in _components(G, S):
        out = sum(1 for e in T.edges if (e[0] in comp) != (e[1] in comp))
        if out >= 2:
            nonleaf += 1
    assert nonleaf <= len(S) - 1


def _components(G: Graph, S: frozenset[int]):
    from stc.graph import connected_components

    return [set(c) for c in connected_components(G, skip=S)]


def test_signature_sufficiency_two_orderings():
    # one optimal signature, two member orderings: distinct trees, equal cost
    G = bipartite_plus_bridge(8)
    S = frozenset({0, 1})
    classes, forests = enumerate_types(G, S)
    assert len(classes) == 1
    pats = forests[0]
    via = {}
    for j, p in enumerate(pats):
        if p.leaf:
            (edge,) = p.edges
            s = edge[0] if edge[0] in S else edge[1]
            via[s] = j
    sig = Signature(frozenset({(0, 1)}), ((0, via[0], 4), (0, via[1], 4)))
    T1 = tree_from_signature(G, classes, forests, sig)
    T2 = tree_from_signature(G, classes, forests, sig, reverse_members=True)
    assert T1.edges != T2.edges
    c1 = congestion_report(G, T1).max_congestion
    c2 = congestion_report(G, T2).max_congestion
    assert c1 == c2 == 9
