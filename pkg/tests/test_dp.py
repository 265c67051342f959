"""Treewidth DP: exact solver, approximation scheme, win/win wrapper."""
import math
import random
from fractions import Fraction

import pytest

from stc.dp import (
    EMPTY_STATE,
    _canonical,
    _decode,
    _run_dp,
    _simplify,
    ExactArith,
    check_approx_invariant,
    default_nice_decomposition,
    solve_approx_tw,
    solve_cw_winwin,
    solve_exact_tw,
    solve_stc_tw,
)
from stc.errors import InvalidDecompositionError
from stc.graph import Graph, SpanningTree, congestion_report
from stc.oracle import stc_exact

from conftest import (
    complete_bipartite,
    complete_graph,
    cycle_graph,
    grid_graph,
    path_graph,
    random_connected_graph,
    star_graph,
)


def test_named_graph_values():
    assert solve_stc_tw(path_graph(5))[0] == 1
    assert solve_stc_tw(star_graph(6))[0] == 1
    assert solve_stc_tw(cycle_graph(7))[0] == 2
    assert solve_stc_tw(complete_graph(4))[0] == 3
    assert solve_stc_tw(complete_graph(5))[0] == 4
    assert solve_stc_tw(grid_graph(3))[0] == 3


def test_single_vertex():
    g = Graph.from_edges(1, [])
    k, T = solve_stc_tw(g)
    assert k == 0 and T.edges == frozenset()


def test_trees_give_congestion_one():
    rng = random.Random(830)
    for _ in range(10):
        n = rng.randrange(2, 10)
        g = random_connected_graph(rng, n, n - 1)
        k, T = solve_stc_tw(g)
        assert k == 1
        assert T.edges == g.edges


def test_decision_threshold_on_cycle():
    g = cycle_graph(4)
    assert solve_exact_tw(g, 1) is None
    T = solve_exact_tw(g, 2)
    assert T is not None
    assert congestion_report(g, T).max_congestion == 2


def test_matches_oracle_on_random_graphs():
    rng = random.Random(831)
    for _ in range(50):
        n = rng.randrange(3, 9)
        m = rng.randrange(n - 1, min(n * (n - 1) // 2, n + 6) + 1)
        g = random_connected_graph(rng, n, m)
        k_oracle, _ = stc_exact(g)
        k_dp, T = solve_stc_tw(g)
        assert k_dp == k_oracle
        assert congestion_report(g, T).max_congestion == k_dp


def test_matches_oracle_on_petersen():
    g = Graph.from_edges(
        10,
        [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4),
         (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
         (5, 7), (7, 9), (9, 6), (6, 8), (8, 5)],
    )
    assert solve_stc_tw(g)[0] == stc_exact(g)[0] == 5


def test_join_nodes_are_exercised():
    # spider of three 2-edge legs: its decomposition tree branches at the hub
    g = Graph.from_edges(
        7, [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]
    )
    ntd = default_nice_decomposition(g)
    assert any(nd.kind == "join" for nd in ntd.nodes)
    assert solve_stc_tw(g, ntd)[0] == 1
    g2 = Graph.from_edges(
        7, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0), (0, 5), (5, 6), (6, 0)]
    )
    ntd2 = default_nice_decomposition(g2)
    assert any(nd.kind == "join" for nd in ntd2.nodes)
    assert solve_stc_tw(g2, ntd2)[0] == stc_exact(g2)[0] == 2


def test_mismatched_decomposition_rejected():
    ntd = default_nice_decomposition(path_graph(4))
    with pytest.raises(InvalidDecompositionError):
        solve_exact_tw(cycle_graph(4), 2, ntd)


def test_bad_k_rejected():
    with pytest.raises(ValueError):
        solve_exact_tw(path_graph(3), 0)


def test_consistency_validator_accepts_real_runs():
    for g, k in [
        (cycle_graph(4), 2),
        (complete_graph(4), 3),
        (Graph.from_edges(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]), 2),
    ]:
        assert solve_exact_tw(g, k, validate=True) is not None
        if k > 1:
            assert solve_exact_tw(g, k - 1, validate=True) is None


def test_simplify_prunes_and_contracts():
    # anonymous path -1 .. -2 between bag vertices 0,1 contracts to one edge
    adj = {
        0: {-1: (1, 2)},
        -1: {0: (1, 2), -2: (1, 5)},
        -2: {-1: (1, 5), 1: (1, 3)},
        1: {-2: (1, 3)},
    }
    vlab = {0: 0, 1: 0, -1: 1, -2: 1}
    _simplify(adj, vlab)
    assert set(adj) == {0, 1}
    assert adj[0][1] == (1, 5)  # max of the merged counters survives
    # dangling anonymous leaf chain disappears entirely
    adj = {0: {-1: (-1, 1)}, -1: {0: (-1, 1), -2: (-1, 0)}, -2: {-1: (-1, 0)}}
    vlab = {0: 0, -1: -1, -2: -1}
    _simplify(adj, vlab)
    assert set(adj) == {0} and adj[0] == {}


def test_canonical_ignores_anonymous_naming():
    def enc(a_id, b_id):
        adj = {
            0: {a_id: (1, 1)},
            1: {a_id: (1, 2)},
            2: {b_id: (1, 1)},
            3: {b_id: (1, 1)},
            a_id: {0: (1, 1), 1: (1, 2), b_id: (1, 0)},
            b_id: {2: (1, 1), 3: (1, 1), a_id: (1, 0)},
        }
        vlab = {0: 0, 1: 0, 2: 0, 3: 0, a_id: 1, b_id: 1}
        return _canonical(adj, vlab)

    assert enc(-1, -2) == enc(-2, -1)
    state = enc(-1, -2)
    adj, vlab = _decode(state, frozenset({0, 1, 2, 3}))
    assert sorted(vlab.values()) == [0, 0, 0, 0, 1, 1]


def test_skeleton_size_stays_bounded():
    g = grid_graph(3)
    ntd = default_nice_decomposition(g)
    run = _run_dp(g, ntd, ExactArith(3), keep_tables=True)
    assert run.forest is not None
    for i, table in run.tables.items():
        bag = ntd.nodes[i].bag
        for state in table:
            edges, anon_labels = state
            assert len(bag) + len(anon_labels) <= 2 * len(bag) + 1


def test_approx_within_guarantee():
    rng = random.Random(832)
    for _ in range(20):
        n = rng.randrange(3, 8)
        m = rng.randrange(n - 1, min(n * (n - 1) // 2, n + 5) + 1)
        g = random_connected_graph(rng, n, m)
        k, _ = stc_exact(g)
        for eps in (0.1, 0.5, 1.0):
            ka, T = solve_approx_tw(g, eps)
            assert congestion_report(g, T).max_congestion == ka
            assert k <= ka <= math.ceil((1 + Fraction(str(eps))) * k)


def test_approx_rejects_bad_eps():
    with pytest.raises(ValueError):
        solve_approx_tw(cycle_graph(4), 0)
    with pytest.raises(ValueError):
        solve_approx_tw(cycle_graph(4), -0.5)


def test_approx_rounding_invariants_hold_nodewise():
    rng = random.Random(833)
    graphs = [cycle_graph(5), complete_graph(4), grid_graph(2, 3)]
    for _ in range(3):
        n = rng.randrange(4, 8)
        graphs.append(random_connected_graph(rng, n, rng.randrange(n - 1, n + 4)))
    for g in graphs:
        for eps in (0.5, 1.0):
            check_approx_invariant(g, eps)


def test_winwin_k55_is_no_for_any_w():
    g = complete_bipartite(5, 5)
    for w in (1, 2, 10):
        res = solve_cw_winwin(g, 4, w)
        assert res.decision in ("no", "no-by-biclique")
        assert res.tree is None


def test_winwin_biclique_certificate_route():
    g = complete_bipartite(15, 15)
    res = solve_cw_winwin(g, 1, 1)
    assert res.decision == "no-by-biclique"
    assert res.width > res.threshold
    A, B = res.biclique
    assert len(A) == len(B) == 2
    for a in A:
        for b in B:
            assert g.has_edge(a, b)


def test_winwin_yes_carries_tree():
    res = solve_cw_winwin(cycle_graph(4), 2, 1)
    assert res.decision == "yes"
    assert congestion_report(cycle_graph(4), res.tree).max_congestion <= 2


def test_winwin_matches_dp_on_random_graphs():
    rng = random.Random(834)
    for _ in range(10):
        n = rng.randrange(3, 8)
        g = random_connected_graph(rng, n, rng.randrange(n - 1, n + 5))
        k, _ = solve_stc_tw(g)
        assert solve_cw_winwin(g, k, n).decision == "yes"
        if k > 1:
            assert solve_cw_winwin(g, k - 1, n).decision in ("no", "no-by-biclique")


def test_winwin_validates_w():
    with pytest.raises(ValueError):
        solve_cw_winwin(cycle_graph(4), 2, 0)
