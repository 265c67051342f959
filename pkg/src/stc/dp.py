"""Spanning tree congestion DP over a nice tree decomposition.

States are skeletons: trees over the current bag plus anonymous vertices of
degree >= 3, every vertex and edge labeled past (-1), present (0) or future
(+1), with a congestion counter per edge.  A skeleton abstracts how some
spanning tree threads through the bag: contract everything outside the bag
with degree at most 2 and the residue is the skeleton.  Tables map canonical
states to one representative forest, so the root's empty state carries an
actual optimal tree out of the run.

Node rules: Leaf starts with the empty state.  Forget(v) refuses future edges
at v, routes every graph edge from v into the bag along its skeleton path
(incrementing the counters), then relabels v to past and simplifies away what
drops below degree 3.  Introduce(v) runs in reverse: rather than projecting
parent states down, each child state is grown by every placement of v (leaf
attachment, adoption of a future vertex, subdivision of a future edge, or
subdivision plus a fresh branch vertex) whose projection is that child state.
Join matches states with isomorphic skeletons whose labels complement each
other off the bag and whose counters sum within budget.

The same engine runs the approximation scheme: counters live on a geometric
grid of exact rationals (powers of 1 + eps/2h) and additions round up, which
multiplies the answer by at most (1 + eps) while shrinking the counter range
to O(log k / eps) values per edge.
"""
from __future__ import annotations

import itertools
import math
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction

from .decomposition import (
    NiceTreeDecomposition,
    decompose,
    make_nice,
    validate_nice,
)
from .errors import InvalidDecompositionError
from .graph import (
    Edge,
    Graph,
    SpanningTree,
    congestion_report,
    edge_key,
    find_biclique,
    require_connected,
)

# state: (edges, anon_labels); edges is a sorted tuple of (u, v, label, c)
# with bag vertices >= 0 and anonymous vertices -1, -2, ... in canonical
# order; anon_labels[i] is the +-1 label of vertex -(i+1)
State = tuple[tuple[tuple[int, int, int, int], ...], tuple[int, ...]]
EMPTY_STATE: State = ((), ())


class ExactArith:
    """Plain integer congestion counters capped at k."""

    def __init__(self, k: int):
        self.k = k

    zero = 0

    def add_int(self, val: int, r: int) -> int | None:
        v = val + r
        return v if v <= self.k else None

    def join(self, a: int, b: int) -> int | None:
        v = a + b
        return v if v <= self.k else None

    def upper(self, val: int) -> int:
        return val


class RoundedArith:
    """Counters are indices into {0} u {(1+delta)^i <= (1+eps)k}.

    delta = eps/2h keeps the compounded rounding error of h tree levels
    below the advertised 1+eps; all comparisons are exact rationals.
    """

    def __init__(self, k: int, eps: Fraction, height: int):
        if eps <= 0:
            raise ValueError("eps must be positive")
        self.k = k
        self.eps = Fraction(eps)
        self.delta = self.eps / (2 * max(1, height))
        self.cap = (1 + self.eps) * k
        vals = [Fraction(0)]
        p = Fraction(1)
        while p <= self.cap:
            vals.append(p)
            p *= 1 + self.delta
        self.vals = vals

    zero = 0

    def _round_up(self, x: Fraction) -> int | None:
        j = bisect_left(self.vals, x)
        return j if j < len(self.vals) else None

    def add_int(self, idx: int, r: int) -> int | None:
        if r == 0:
            return idx
        return self._round_up(self.vals[idx] + r)

    def join(self, a: int, b: int) -> int | None:
        x = self.vals[a] + self.vals[b]
        if x > self.cap:
            return None
        return self._round_up(x)

    def upper(self, idx: int) -> int:
        return math.ceil(self.vals[idx])


# -- state plumbing ---------------------------------------------------------


def _decode(state: State, bag: frozenset[int]):
    """State to working form: adjacency {v: {u: (label, c)}} and vertex labels."""
    edges, anon_labels = state
    adj: dict[int, dict[int, tuple[int, int]]] = {v: {} for v in bag}
    vlab: dict[int, int] = {v: 0 for v in bag}
    for i, lbl in enumerate(anon_labels):
        a = -(i + 1)
        adj[a] = {}
        vlab[a] = lbl
    for u, v, lbl, c in edges:
        adj[u][v] = (lbl, c)
        adj[v][u] = (lbl, c)
    return adj, vlab


def _canonical(adj, vlab) -> State:
    """Rename anonymous vertices deterministically and freeze the state.

    Children are ordered by (payload, subtree signature); signatures never
    mention anonymous identities, so isomorphic namings collapse.
    """
    if not adj:
        return EMPTY_STATE
    root = min(v for v in adj if v >= 0)
    child_order: dict[int, list[int]] = {}

    def sig(v: int, parent: int):
        kids = []
        for u, pay in adj[v].items():
            if u == parent:
                continue
            kids.append((pay, sig(u, v), u))
        kids.sort(key=lambda t: (t[0], t[1]))
        child_order[v] = [u for _, _, u in kids]
        token = ("b", v) if v >= 0 else ("a", vlab[v])
        return (token, tuple((pay, s) for pay, s, _ in kids))

    sig(root, -10**9)
    names: dict[int, int] = {}
    counter = [0]

    def assign(v: int, parent: int):
        if v < 0:
            counter[0] += 1
            names[v] = -counter[0]
        for u in child_order[v]:
            assign(u, v)

    assign(root, -10**9)

    def nm(v: int) -> int:
        return names.get(v, v)

    edges = []
    for v in adj:
        for u, (lbl, c) in adj[v].items():
            a, b = nm(v), nm(u)
            if a < b:
                edges.append((a, b, lbl, c))
    anon_labels = tuple(
        vlab[x] for x in sorted(names, key=lambda t: -names[t])
    )
    return (tuple(sorted(edges)), anon_labels)


def _shape_key(adj, vlab):
    """Canonical encoding ignoring +-1 labels and counters (join bucketing)."""
    if not adj:
        return ()
    root = min(v for v in adj if v >= 0)

    def sig(v: int, parent: int):
        kids = []
        for u, (lbl, _c) in adj[v].items():
            if u == parent:
                continue
            kids.append((int(lbl == 0), sig(u, v)))
        kids.sort()
        token = ("b", v) if v >= 0 else ("a",)
        return (token, tuple(kids))

    return sig(root, -10**9)


def _simplify(adj, vlab) -> None:
    """Drop anonymous vertices below degree 3; contraction max-merges c."""
    work = [x for x in adj if x < 0]
    while work:
        x = work.pop()
        if x not in adj or len(adj[x]) > 2:
            continue
        if len(adj[x]) == 0:
            del adj[x], vlab[x]
        elif len(adj[x]) == 1:
            (u,) = adj[x]
            del adj[x], vlab[x]
            del adj[u][x]
            if u < 0:
                work.append(u)
        else:
            (a, (la, ca)), (b, (lb, cb)) = adj[x].items()
            lbl = vlab[x]
            assert la == lbl and lb == lbl, "edge labels at an anonymous vertex match it"
            del adj[x], vlab[x]
            del adj[a][x], adj[b][x]
            assert b not in adj[a], "contraction would close a cycle"
            pay = (lbl, max(ca, cb))
            adj[a][b] = pay
            adj[b][a] = pay
    assert all(len(adj[x]) >= 3 for x in adj if x < 0), "simplification incomplete"


def _copy(adj):
    return {v: dict(nb) for v, nb in adj.items()}


def _tree_path(adj, src: int, dst: int) -> list[tuple[int, int]]:
    """Edge list of the unique skeleton path src -> dst."""
    prev = {src: src}
    stack = [src]
    while stack:
        v = stack.pop()
        if v == dst:
            break
        for u in adj[v]:
            if u not in prev:
                prev[u] = v
                stack.append(u)
    path = []
    v = dst
    while v != src:
        path.append((prev[v], v))
        v = prev[v]
    return path


# -- node rules -------------------------------------------------------------


def _leaf_table():
    return {EMPTY_STATE: frozenset()}


def _insert(table, bag_size: int, adj, vlab, forest) -> None:
    assert len(adj) <= 2 * bag_size + 1, "skeleton exceeds the 2w+1 size bound"
    table.setdefault(_canonical(adj, vlab), forest)


def _introduce_table(G: Graph, nd, child_table):
    v = nd.vertex
    bag = nd.bag
    bag_old = bag - {v}
    vnbrs = G.neighbors(v)
    out: dict[State, frozenset[Edge]] = {}
    for state, F in child_table.items():
        adj, vlab = _decode(state, bag_old)
        if not adj:
            _insert(out, len(bag), {v: {}}, {v: 0}, F)
            continue
        future_edges = [
            (a, b)
            for a in adj
            for b in adj[a]
            if a < b and adj[a][b][0] == 1
        ]
        # leaf attachment to a present vertex or a future branch vertex
        for u in adj:
            opts = []
            if u >= 0:
                opts.append(1)
                if u in vnbrs:
                    opts.append(0)
            elif vlab[u] == 1:
                opts.append(1)
            for lbl in opts:
                adj2 = _copy(adj)
                vlab2 = dict(vlab)
                adj2[v] = {u: (lbl, 0)}
                adj2[u][v] = (lbl, 0)
                vlab2[v] = 0
                F2 = F | {edge_key(u, v)} if lbl == 0 else F
                _insert(out, len(bag), adj2, vlab2, F2)
        # adopt an anonymous future vertex as v
        for x in [x for x in adj if x < 0 and vlab[x] == 1]:
            upgradable = [u for u in adj[x] if u >= 0 and u in vnbrs]
            for r in range(len(upgradable) + 1):
                for chosen in itertools.combinations(upgradable, r):
                    adj2 = _copy(adj)
                    vlab2 = dict(vlab)
                    nb = adj2.pop(x)
                    del vlab2[x]
                    adj2[v] = {}
                    vlab2[v] = 0
                    zero_edges = set()
                    for u, (lbl, c) in nb.items():
                        del adj2[u][x]
                        if u in chosen:
                            lbl = 0
                            zero_edges.add(edge_key(u, v))
                        adj2[v][u] = (lbl, c)
                        adj2[u][v] = (lbl, c)
                    _insert(out, len(bag), adj2, vlab2, F | zero_edges)
        # subdivide a future edge with v, each half optionally realized now
        for a, b in future_edges:
            c_ab = adj[a][b][1]
            la_opts = [1] + ([0] if a >= 0 and a in vnbrs else [])
            lb_opts = [1] + ([0] if b >= 0 and b in vnbrs else [])
            for la in la_opts:
                for lb in lb_opts:
                    adj2 = _copy(adj)
                    vlab2 = dict(vlab)
                    del adj2[a][b], adj2[b][a]
                    adj2[v] = {a: (la, c_ab), b: (lb, c_ab)}
                    adj2[a][v] = (la, c_ab)
                    adj2[b][v] = (lb, c_ab)
                    vlab2[v] = 0
                    F2 = F
                    if la == 0:
                        F2 = F2 | {edge_key(a, v)}
                    if lb == 0:
                        F2 = F2 | {edge_key(b, v)}
                    _insert(out, len(bag), adj2, vlab2, F2)
        # subdivide a future edge with a fresh branch vertex carrying v
        for a, b in future_edges:
            c_ab = adj[a][b][1]
            adj2 = _copy(adj)
            vlab2 = dict(vlab)
            w = min(-1, min((x for x in adj2 if x < 0), default=0) - 1)
            del adj2[a][b], adj2[b][a]
            adj2[w] = {a: (1, c_ab), b: (1, c_ab), v: (1, 0)}
            adj2[a][w] = (1, c_ab)
            adj2[b][w] = (1, c_ab)
            adj2[v] = {w: (1, 0)}
            vlab2[w] = 1
            vlab2[v] = 0
            _insert(out, len(bag), adj2, vlab2, F)
    return out


def _forget_table(G: Graph, arith, nd, child_table):
    v = nd.vertex
    bag = nd.bag
    bag_old = bag | {v}
    nbrs = [u for u in G.neighbors(v) if u in bag]
    out: dict[State, frozenset[Edge]] = {}
    for state, F in child_table.items():
        adj, vlab = _decode(state, bag_old)
        if any(lbl == 1 for lbl, _ in adj[v].values()):
            continue  # a future edge at v can never be realized once v is gone
        incr: dict[tuple[int, int], int] = {}
        for u in nbrs:
            for x, y in _tree_path(adj, v, u):
                e = (x, y) if x < y else (y, x)
                incr[e] = incr.get(e, 0) + 1
        ok = True
        adj2 = _copy(adj)
        for (x, y), r in incr.items():
            lbl, c = adj2[x][y]
            c2 = arith.add_int(c, r)
            if c2 is None:
                ok = False
                break
            adj2[x][y] = (lbl, c2)
            adj2[y][x] = (lbl, c2)
        if not ok:
            continue
        # v leaves the bag: rename to a fresh anonymous id, past label,
        # its realized edges turning past with it
        vlab2 = dict(vlab)
        a = min((x for x in adj2 if x < 0), default=0) - 1
        nb = adj2.pop(v)
        del vlab2[v]
        adj2[a] = {}
        vlab2[a] = -1
        for u, (lbl, c) in nb.items():
            del adj2[u][v]
            if lbl == 0:
                lbl = -1
            adj2[a][u] = (lbl, c)
            adj2[u][a] = (lbl, c)
        _simplify(adj2, vlab2)
        out.setdefault(_canonical(adj2, vlab2), F)
    return out


def _isomorphisms(adjA, adjB):
    """Bijections of anonymous vertices mapping A onto B, bag ids fixed.

    Structure and the 0/non-0 edge distinction must be preserved; label signs
    and counters are left to the caller.
    """
    anonsA = sorted(x for x in adjA if x < 0)
    anonsB = sorted(x for x in adjB if x < 0)
    if len(anonsA) != len(anonsB):
        return
    edgesB = {}
    countB = 0
    for x in adjB:
        for y, (lbl, _c) in adjB[x].items():
            if x < y:
                edgesB[(x, y)] = int(lbl == 0)
                countB += 1
    for perm in itertools.permutations(anonsB):
        phi = dict(zip(anonsA, perm))
        count = 0
        ok = True
        for x in adjA:
            if not ok:
                break
            for y, (lbl, _c) in adjA[x].items():
                if x > y:
                    continue
                a, b = phi.get(x, x), phi.get(y, y)
                flag = edgesB.get((a, b) if a < b else (b, a))
                if flag is None or flag != int(lbl == 0):
                    ok = False
                    break
                count += 1
        if ok and count == countB:
            yield phi


def _join_table(arith, nd, t1, t2, bag):
    out: dict[State, frozenset[Edge]] = {}
    buckets: dict[tuple, list] = {}
    decoded2 = {}
    for s2, F2 in t2.items():
        adj2, vlab2 = _decode(s2, bag)
        decoded2[s2] = (adj2, vlab2)
        buckets.setdefault(_shape_key(adj2, vlab2), []).append((s2, F2))
    for s1, F1 in t1.items():
        adj1, vlab1 = _decode(s1, bag)
        key = _shape_key(adj1, vlab1)
        for s2, F2 in buckets.get(key, ()):
            adj2, vlab2 = decoded2[s2]
            for phi in _isomorphisms(adj1, adj2):
                # off-bag material must be past on at most one side
                okv = True
                for x, l1 in vlab1.items():
                    if x < 0:
                        l2 = vlab2[phi[x]]
                        if l1 == -1 and l2 == -1:
                            okv = False
                            break
                if not okv:
                    continue
                adjJ: dict[int, dict[int, tuple[int, int]]] = {
                    v: {} for v in adj1
                }
                vlabJ = {
                    x: (min(l, vlab2[phi[x]]) if x < 0 else 0)
                    for x, l in vlab1.items()
                }
                good = True
                for x in adj1:
                    if not good:
                        break
                    for y, (l1, c1) in adj1[x].items():
                        if x > y:
                            continue
                        a, b = phi.get(x, x), phi.get(y, y)
                        l2, c2 = adj2[a][b]
                        if l1 == -1 and l2 == -1:
                            good = False
                            break
                        c = arith.join(c1, c2)
                        if c is None:
                            good = False
                            break
                        pay = (min(l1, l2), c)
                        adjJ[x][y] = pay
                        adjJ[y][x] = pay
                if good:
                    _insert(out, len(bag), adjJ, vlabJ, F1 | F2)
    return out


# -- engine -----------------------------------------------------------------


@dataclass
class DPRun:
    forest: frozenset[Edge] | None
    tables: dict[int, dict[State, frozenset[Edge]]] | None


def _run_dp(
    G: Graph,
    ntd: NiceTreeDecomposition,
    arith,
    keep_tables: bool = False,
    validator=None,
) -> DPRun:
    nodes = ntd.nodes
    tables: dict[int, dict] = {}
    processed: dict[int, frozenset[int]] = {}
    for i in ntd.postorder():
        nd = nodes[i]
        if nd.kind == "leaf":
            tbl = _leaf_table()
            proc: frozenset[int] = frozenset()
        elif nd.kind == "introduce":
            tbl = _introduce_table(G, nd, tables[nd.children[0]])
            proc = processed[nd.children[0]] | {nd.vertex}
        elif nd.kind == "forget":
            tbl = _forget_table(G, arith, nd, tables[nd.children[0]])
            proc = processed[nd.children[0]]
        else:
            c1, c2 = nd.children
            tbl = _join_table(arith, nd, tables[c1], tables[c2], nd.bag)
            proc = processed[c1] | processed[c2]
        tables[i] = tbl
        processed[i] = proc
        if validator is not None:
            for state, F in tbl.items():
                msg = validator(nd.bag, proc, state, F)
                assert msg is None, f"node {i} ({nd.kind}): {msg}"
        if not keep_tables:
            for c in nd.children:
                del tables[c]
    forest = tables[ntd.root].get(EMPTY_STATE)
    return DPRun(forest, tables if keep_tables else None)


def default_nice_decomposition(G: Graph) -> NiceTreeDecomposition:
    td = decompose(G, "exact_small" if G.n <= 12 else "heuristic")
    return make_nice(td)


def _checked_ntd(G: Graph, ntd: NiceTreeDecomposition | None) -> NiceTreeDecomposition:
    if ntd is None:
        return default_nice_decomposition(G)
    msg = validate_nice(G, ntd)
    if msg is not None:
        raise InvalidDecompositionError(msg)
    return ntd


def solve_exact_tw(
    G: Graph,
    k: int,
    ntd: NiceTreeDecomposition | None = None,
    validate: bool = False,
) -> SpanningTree | None:
    """Spanning tree with congestion <= k, or None if none exists."""
    require_connected(G)
    if k < 1:
        raise ValueError("k must be >= 1")
    ntd = _checked_ntd(G, ntd)
    validator = _make_validator(G, k) if validate else None
    run = _run_dp(G, ntd, ExactArith(k), validator=validator)
    if run.forest is None:
        return None
    T = SpanningTree(G, run.forest)
    got = congestion_report(G, T).max_congestion
    assert got <= k, f"DP returned congestion {got} > {k}"
    return T


def solve_stc_tw(
    G: Graph, ntd: NiceTreeDecomposition | None = None
) -> tuple[int, SpanningTree]:
    """Exact spanning tree congestion: run the DP for ascending k."""
    require_connected(G)
    if G.n == 1:
        return 0, SpanningTree(G, frozenset())
    ntd = _checked_ntd(G, ntd)
    for k in range(1, G.m + 1):
        T = solve_exact_tw(G, k, ntd)
        if T is not None:
            return k, T
    raise AssertionError("some spanning tree always has congestion <= m")


def solve_approx_tw(
    G: Graph,
    eps,
    ntd: NiceTreeDecomposition | None = None,
) -> tuple[int, SpanningTree]:
    """(1+eps)-approximation; returns the tree's re-measured congestion."""
    require_connected(G)
    eps = _to_fraction(eps)
    if G.n == 1:
        return 0, SpanningTree(G, frozenset())
    ntd = _checked_ntd(G, ntd)
    h = ntd.height
    for k in range(1, G.m + 1):
        run = _run_dp(G, ntd, RoundedArith(k, eps, h))
        if run.forest is not None:
            T = SpanningTree(G, run.forest)
            return congestion_report(G, T).max_congestion, T
    raise AssertionError("unreachable for connected graphs")


def _to_fraction(eps) -> Fraction:
    if isinstance(eps, float):
        return Fraction(str(eps))
    return Fraction(eps)


@dataclass(frozen=True)
class WinWinResult:
    decision: str  # yes | no | no-by-biclique
    tree: SpanningTree | None = None
    biclique: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    width: int = -1
    threshold: int = -1


def solve_cw_winwin(G: Graph, k: int, w: int) -> WinWinResult:
    """Decide stc <= k given a clique-width style budget w.

    A decomposition within width 6(k+1)w + 1 feeds the DP; otherwise the
    graph is dense enough to hunt for a K_{k+1,k+1}, which certifies "no".
    If the heuristic width is large but no biclique shows up, the DP runs
    anyway (the heuristic may simply have been loose).
    """
    require_connected(G)
    if w < 1:
        raise ValueError("w must be >= 1")
    threshold = 6 * (k + 1) * w + 1
    td = decompose(G, "exact_small" if G.n <= 12 else "heuristic")
    if td.width > threshold:
        bic = find_biclique(G, k + 1)
        if bic is not None:
            return WinWinResult(
                "no-by-biclique", biclique=bic, width=td.width, threshold=threshold
            )
    T = solve_exact_tw(G, k, make_nice(td))
    if T is None:
        return WinWinResult("no", width=td.width, threshold=threshold)
    return WinWinResult("yes", tree=T, width=td.width, threshold=threshold)


# -- debug validation and approximation instrumentation ----------------------


def _make_validator(G: Graph, k: int):
    """Check the consistent-solution properties of every stored entry.

    Past anonymous vertices are existential branch points; the checker
    searches all embeddings into the processed region, so keep it to tiny
    inputs.
    """

    def validator(bag, proc, state, F):
        adj, vlab = _decode(state, bag)
        # property 1: forest inside the processed subgraph
        parent = {x: x for x in proc}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in F:
            if edge_key(u, v) not in G.edges or u not in proc or v not in proc:
                return f"forest edge ({u},{v}) outside G[T_t]"
            ru, rv = find(u), find(v)
            if ru == rv:
                return "forest has a cycle"
            parent[ru] = rv
        past = sorted(x for x in adj if x < 0 and vlab[x] == -1)
        candidates = sorted(set(proc) - set(bag))
        msg = "no embedding of past branch vertices fits"
        for emb in itertools.permutations(candidates, len(past)):
            eta = dict(zip(past, emb))
            msg = _check_embedding(G, bag, proc, adj, vlab, F, k, eta)
            if msg is None:
                return None
        return msg

    return validator


def _check_embedding(G, bag, proc, adj, vlab, F, k, eta):
    def real(x):
        return eta.get(x, x)

    # property 4: forest plus future edges forms a tree
    tnodes = set(proc)
    tedges = set(F)
    for x in adj:
        for y, (lbl, _c) in adj[x].items():
            if x < y and lbl == 1:
                tnodes.update((x, y))
                tedges.add((x, y))
    tadj: dict[int, list[int]] = {v: [] for v in tnodes}
    for u, v in tedges:
        tadj[u].append(v)
        tadj[v].append(u)
    if tnodes:
        start = next(iter(tnodes))
        seen = {start}
        stack = [start]
        while stack:
            a = stack.pop()
            for b in tadj[a]:
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
        if seen != tnodes or len(tedges) != len(tnodes) - 1:
            return "F plus future edges is not a tree"
    # detour crossings induced by processed edges outside the bag
    H = [
        e
        for e in G.edges
        if e[0] in proc and e[1] in proc and not (e[0] in bag and e[1] in bag)
    ]
    cross: dict[tuple[int, int], int] = {tuple(sorted(e)): 0 for e in tedges}
    for a, b in H:
        path = _path_in(tadj, a, b)
        if path is None:
            return f"processed edge ({a},{b}) has no detour"
        for e in path:
            cross[e] += 1
    # properties 2, 3, 5, 6
    fadj: dict[int, list[int]] = {v: [] for v in proc}
    for u, v in F:
        fadj[u].append(v)
        fadj[v].append(u)
    for x in adj:
        for y, (lbl, c) in adj[x].items():
            if x > y:
                continue
            if lbl == 0:
                if edge_key(x, y) not in F:
                    return f"present skeleton edge ({x},{y}) missing from F"
                if cross[edge_key(x, y)] != c:
                    return "counter mismatch on a present edge"
            elif lbl == 1:
                if cross[(x, y) if x < y else (y, x)] != c:
                    return "counter mismatch on a future edge"
            else:
                a, b = real(x), real(y)
                path = _path_in(fadj, a, b)
                if path is None:
                    return f"past skeleton edge ({x},{y}) has no F path"
                for u, v in path:
                    if u in bag and v in bag:
                        return "past path uses a bag-internal edge"
                    if cross[(u, v)] > c:
                        return "past path exceeds its counter"
    # property 7
    if any(val > k for val in cross.values()):
        return "an edge of F plus future exceeds k"
    return None


def _path_in(adjacency, a, b):
    if a not in adjacency or b not in adjacency:
        return None
    prev = {a: a}
    stack = [a]
    while stack:
        v = stack.pop()
        if v == b:
            break
        for u in adjacency[v]:
            if u not in prev:
                prev[u] = v
                stack.append(u)
    if b not in prev:
        return None
    path = []
    v = b
    while v != a:
        e = (v, prev[v]) if v < prev[v] else (prev[v], v)
        path.append(e)
        v = prev[v]
    return path


def _struct_key(adj, vlab):
    """Counter-free fingerprint, invariant under anonymous-vertex renaming.

    Key equality is necessary for one state to dominate another (bag ids are
    fixed, labels must match exactly), so candidate pairs can be bucketed.
    """
    bagpart = []
    for v in sorted(x for x in adj if x >= 0):
        real = tuple(sorted(
            (u, lbl) for u, (lbl, _c) in adj[v].items() if u >= 0
        ))
        anon = tuple(sorted(
            (lbl, vlab[u]) for u, (lbl, _c) in adj[v].items() if u < 0
        ))
        bagpart.append((v, vlab[v], real, anon))
    anonpart = sorted(
        (vlab[a], tuple(sorted(
            (lbl, (1, u) if u >= 0 else (0, vlab[u]))
            for u, (lbl, _c) in adj[a].items()
        )))
        for a in adj if a < 0
    )
    return tuple(bagpart), tuple(anonpart)


def check_approx_invariant(G: Graph, eps, ntd: NiceTreeDecomposition | None = None):
    """Assert the two-sided rounding invariant at every node (tiny inputs).

    For each exact state some approx state overestimates it by at most
    (1+delta)^height(t) per edge, and each approx state's counters upper
    bound some exact run's counters (at the relaxed cap floor((1+eps)k)).
    """
    require_connected(G)
    eps = _to_fraction(eps)
    ntd = _checked_ntd(G, ntd)
    k, _ = solve_stc_tw(G, ntd)
    if k == 0:
        return
    h = ntd.height
    arith = RoundedArith(k, eps, h)
    relaxed_cap = math.floor((1 + eps) * k)
    exact = _run_dp(G, ntd, ExactArith(k), keep_tables=True)
    approx = _run_dp(G, ntd, arith, keep_tables=True)
    exact_relaxed = _run_dp(G, ntd, ExactArith(relaxed_cap), keep_tables=True)
    heights = ntd.subtree_heights()

    def decoded(table, bag):
        out = []
        for s in table:
            adj, vlab = _decode(s, bag)
            out.append((adj, vlab, _struct_key(adj, vlab)))
        return out

    def dominates(adjA, vlabA, adjB, vlabB, cA_bound_fn):
        """Some isomorphism under which every counter pair obeys the bound."""
        for phi in _isomorphisms(adjA, adjB):
            if any(vlabB[phi[x]] != vlabA[x] for x in vlabA if x < 0):
                continue
            ok = True
            for x in adjA:
                for y, (lA, cA) in adjA[x].items():
                    if x > y:
                        continue
                    a, b = phi.get(x, x), phi.get(y, y)
                    lB, cB = adjB[a][b]
                    if lB != lA or not cA_bound_fn(cA, cB):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                return True
        return False

    def check(tableA, tableB, bag, bound, msg, i):
        buckets: dict = {}
        for adj, vlab, key in decoded(tableB, bag):
            buckets.setdefault(key, []).append((adj, vlab))
        for adjA, vlabA, key in decoded(tableA, bag):
            assert any(
                dominates(adjA, vlabA, adjB, vlabB, bound)
                for adjB, vlabB in buckets.get(key, ())
            ), f"node {i}: {msg}"

    for i in exact.tables:
        bag = ntd.nodes[i].bag
        factor = (1 + arith.delta) ** heights[i]
        check(
            exact.tables[i], approx.tables[i], bag,
            lambda cE, cA: arith.vals[cA] <= factor * cE,
            "exact state has no rounded shadow", i,
        )
        check(
            approx.tables[i], exact_relaxed.tables[i], bag,
            lambda cA, cE: cE <= math.ceil(arith.vals[cA]),
            "rounded state dominates no exact state", i,
        )
