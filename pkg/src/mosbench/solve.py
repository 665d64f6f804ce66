"""Exact and epsilon-approximate multi-objective shortest-path solvers.

The production solver is best-first label setting over a lexicographic
ordering of f = g + h, with the dimensionality-reduction dominance device:
because labels of one vertex leave the open list in lexicographic order,
their first f component is non-decreasing, so dominance among them only
needs the (d-1)-suffix of g.  For d = 2 that suffix is a single scalar per
vertex.  Heap keys are single big integers packing (f, vertex, insertion
sequence), which keeps comparisons cheap and memory flat.

Epsilon relaxes nothing inside the search: pruning always uses the exact
weak-dominance rules, and epsilon only filters which target arrivals are
admitted into the answer.  Relaxed internal pruning would compound factors
of (1 + eps) across path prefixes and could break the coverage contract;
admission-only filtering provably cannot.
"""
from __future__ import annotations

import heapq
from array import array
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from time import monotonic

from .core import Cost, Epsilon, MosGraph, Query, SolutionEntry, SolutionSet
from .errors import (
    DimensionMismatch,
    InstanceTooLarge,
    SearchTimeout,
    TargetOutOfRange,
)

INF = float("inf")

# Heap compaction threshold: when the open list grows past this, entries
# that are already pruned get dropped and the heap is rebuilt.
_COMPACT_START = 8_000_000

# Insertion-sequence field width; 2^44 pushes is out of reach in practice.
_SEQ_BITS = 44


def _check_vertex(graph: MosGraph, v: int, what: str) -> None:
    if not (1 <= v <= graph.num_vertices):
        raise TargetOutOfRange(f"{what} {v} outside 1..{graph.num_vertices}")


def dijkstra_bound(graph: MosGraph, target: int, objective: int) -> list[float]:
    """Single-objective shortest distances *to* target over reversed edges.

    Index 0 of the returned table is unused; unreachable vertices hold inf.
    """
    _check_vertex(graph, target, "target")
    if not (0 <= objective < graph.d):
        raise DimensionMismatch(
            f"objective index {objective} outside 0..{graph.d - 1}"
        )
    off, nbr, cols = graph.in_csr
    weight = cols[objective]
    dist: list[float] = [INF] * (graph.num_vertices + 1)
    dist[target] = 0
    heap: list[tuple[int, int]] = [(0, target)]
    pop = heapq.heappop
    push = heapq.heappush
    while heap:
        d_u, u = pop(heap)
        if d_u > dist[u]:
            continue
        for i in range(off[u], off[u + 1]):
            w = nbr[i]
            nd = d_u + weight[i]
            if nd < dist[w]:
                dist[w] = nd
                push(heap, (nd, w))
    return dist


@dataclass(frozen=True)
class HeuristicTable:
    """Componentwise lower bounds to one target (the ideal-point heuristic).

    vectors[v] is None when v cannot reach the target at all; otherwise it
    is a d-tuple with h_i(v) <= cost_i of every v-to-target path.
    """

    target: int
    vectors: tuple[Cost | None, ...]

    def bound(self, v: int) -> Cost | None:
        return self.vectors[v]


def ideal_point_heuristic(graph: MosGraph, target: int) -> HeuristicTable:
    """One reverse Dijkstra per objective, zipped into per-vertex vectors.

    Reachability of the target is a structural property, so either every
    component of a vertex is finite or none is.
    """
    tables = [dijkstra_bound(graph, target, k) for k in range(graph.d)]
    vectors: list[Cost | None] = [None]
    for v in range(1, graph.num_vertices + 1):
        if tables[0][v] == INF:
            vectors.append(None)
        else:
            vectors.append(tuple(int(t[v]) for t in tables))
    return HeuristicTable(target, tuple(vectors))


@dataclass(eq=False)
class SearchLabel:
    """A partial path in the reference search: vertex, g, f and parent link."""

    vertex: int
    g: Cost
    f: Cost
    parent: "SearchLabel | None" = None

    def path(self) -> tuple[int, ...]:
        out = []
        lab: SearchLabel | None = self
        while lab is not None:
            out.append(lab.vertex)
            lab = lab.parent
        return tuple(reversed(out))


def reference_label_search(graph: MosGraph, query: Query) -> list[tuple[Cost, tuple[int, ...]]]:
    """Plain label-setting without heuristic, packing or suffix tricks.

    Deliberately naive (full-vector dominance scans, object labels) so it
    can serve as an independent cross-check for the production solver.
    """
    _check_vertex(graph, query.source, "source")
    _check_vertex(graph, query.target, "target")
    d = graph.d
    zero = (0,) * d
    if query.source == query.target:
        return [(zero, (query.source,))]
    off, nbr, cols = graph.out_csr
    tgt = query.target
    counter = 0
    root = SearchLabel(query.source, zero, zero)
    heap: list[tuple[Cost, int, int, SearchLabel]] = [(zero, query.source, 0, root)]
    closed: list[list[Cost]] = [[] for _ in range(graph.num_vertices + 1)]
    sols: list[tuple[Cost, tuple[int, ...]]] = []

    def blocked(g: Cost, pool: list[Cost]) -> bool:
        return any(all(a <= b for a, b in zip(p, g)) for p in pool)

    while heap:
        _, v, _, lab = heapq.heappop(heap)
        g = lab.g
        if blocked(g, closed[v]) or blocked(g, [c for c, _ in sols]):
            continue
        if v == tgt:
            sols.append((g, lab.path()))
            continue
        closed[v].append(g)
        for i in range(off[v], off[v + 1]):
            w = nbr[i]
            ng = tuple(g[k] + cols[k][i] for k in range(d))
            if blocked(ng, closed[w]) or blocked(ng, [c for c, _ in sols]):
                continue
            counter += 1
            heapq.heappush(heap, (ng, w, counter, SearchLabel(w, ng, ng, lab)))
    return sols


def _eps_plan(eps: Epsilon) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Per-objective (numerator, denominator) of 1 + eps, or None when zero."""
    if eps.is_zero:
        return None
    ratios = eps.ratios()
    return tuple(r[0] for r in ratios), tuple(r[1] for r in ratios)


def _admit(cost: Cost, admitted: list[Cost], plan) -> bool:
    """True when no admitted cost epsilon-covers the candidate.

    Front members pop in lexicographic order and are pairwise distinct, so
    the all-components test cannot fire on an exactly equal vector and the
    strictness clause of epsilon-dominance is automatic.
    """
    if plan is None:
        return True
    nums, dens = plan
    for s in reversed(admitted):
        if all(s[k] * dens[k] <= nums[k] * cost[k] for k in range(len(cost))):
            return False
    return True


def _search_bi(
    graph: MosGraph,
    query: Query,
    heur: HeuristicTable,
    plan,
    deadline: float | None,
) -> list[tuple[Cost, tuple[int, ...]]]:
    """Specialized d=2 search; the per-vertex closed set is one scalar."""
    n = graph.num_vertices
    src, tgt = query.source, query.target
    off, nbr, cols = graph.out_csr
    ec1, ec2 = cols
    h1 = [-1] * (n + 1)
    h2 = [-1] * (n + 1)
    for v in range(1, n + 1):
        b = heur.vectors[v]
        if b is not None:
            h1[v], h2[v] = b
    if h1[src] < 0:
        return []

    f2_bits = (sum(ec2) + max(h2) + 1).bit_length() + 1
    v_bits = n.bit_length() + 1
    s_bits = _SEQ_BITS
    f2_mask = (1 << f2_bits) - 1
    v_mask = (1 << v_bits) - 1
    s_mask = (1 << s_bits) - 1
    big = 1 << 62

    g2min = [big] * (n + 1)
    tbound = big
    pparent = array("q", [-1])
    closed_v = array("q")
    closed_p = array("q")
    sols: list[tuple[Cost, int]] = []
    admitted: list[Cost] = []

    heap = [((((h1[src] << f2_bits) | h2[src]) << v_bits | src) << s_bits)]
    push = heapq.heappush
    pop = heapq.heappop
    pops = 0
    next_compact = _COMPACT_START

    while heap:
        key = pop(heap)
        pops += 1
        if deadline is not None and not (pops & 2047) and monotonic() > deadline:
            raise SearchTimeout(f"d=2 search past its deadline after {pops} pops")
        seq = key & s_mask
        rest = key >> s_bits
        v = rest & v_mask
        rest >>= v_bits
        f2 = rest & f2_mask
        g2 = f2 - h2[v]
        if v == tgt:
            if g2 >= tbound:
                continue
            tbound = g2
            cost = ((rest >> f2_bits) - h1[tgt], g2)
            if _admit(cost, admitted, plan):
                admitted.append(cost)
                sols.append((cost, pparent[seq]))
            continue
        if g2 >= g2min[v] or f2 >= tbound:
            continue
        g2min[v] = g2
        cid = len(closed_v)
        closed_v.append(v)
        closed_p.append(pparent[seq])
        g1 = (rest >> f2_bits) - h1[v]
        for i in range(off[v], off[v + 1]):
            w = nbr[i]
            hw2 = h2[w]
            if hw2 < 0:
                continue
            ng2 = g2 + ec2[i]
            if ng2 >= g2min[w]:
                continue
            nf2 = ng2 + hw2
            if nf2 >= tbound:
                continue
            s = len(pparent)
            pparent.append(cid)
            push(
                heap,
                ((((g1 + ec1[i] + h1[w]) << f2_bits | nf2) << v_bits | w) << s_bits) | s,
            )
        if len(heap) >= next_compact:
            kept = []
            for k in heap:
                r = k >> s_bits
                kv = r & v_mask
                kf2 = (r >> v_bits) & f2_mask
                if kf2 >= tbound:
                    continue
                if kv != tgt and kf2 - h2[kv] >= g2min[kv]:
                    continue
                kept.append(k)
            heapq.heapify(kept)
            heap = kept
            next_compact = max(_COMPACT_START, 2 * len(heap))

    return _materialize(sols, tgt, closed_v, closed_p)


class _SuffixStore:
    """Per-vertex non-dominated (d-1)-suffix sets for the general search.

    d=3 keeps two parallel lists per vertex (g2 ascending, g3 strictly
    descending) so checks and inserts are binary searches; other d fall
    back to a linear scan over stored suffix tuples.
    """

    __slots__ = ("dim", "a", "b", "flat")

    def __init__(self, n: int, suffix_dim: int):
        self.dim = suffix_dim
        if suffix_dim == 2:
            self.a: list[list[int] | None] = [None] * (n + 1)
            self.b: list[list[int] | None] = [None] * (n + 1)
        else:
            self.flat: list[list[tuple[int, ...]] | None] = [None] * (n + 1)

    def dominated(self, v: int, suffix: tuple[int, ...]) -> bool:
        if self.dim == 2:
            a = self.a[v]
            if a is None:
                return False
            i = bisect_right(a, suffix[0]) - 1
            return i >= 0 and self.b[v][i] <= suffix[1]
        pool = self.flat[v]
        if pool is None:
            return False
        return any(all(x <= y for x, y in zip(p, suffix)) for p in pool)

    def insert(self, v: int, suffix: tuple[int, ...]) -> None:
        # Caller guarantees the suffix is not dominated at v.
        if self.dim == 2:
            a = self.a[v]
            if a is None:
                a = self.a[v] = []
                self.b[v] = []
            b = self.b[v]
            g2, g3 = suffix
            pos = bisect_left(a, g2)
            j = pos
            while j < len(a) and b[j] >= g3:
                j += 1
            if j > pos:
                del a[pos:j]
                del b[pos:j]
            a.insert(pos, g2)
            b.insert(pos, g3)
            return
        pool = self.flat[v]
        if pool is None:
            self.flat[v] = [suffix]
            return
        pool[:] = [p for p in pool if not all(x >= y for x, y in zip(p, suffix))]
        pool.append(suffix)


def _search_multi(
    graph: MosGraph,
    query: Query,
    heur: HeuristicTable,
    plan,
    deadline: float | None,
) -> list[tuple[Cost, tuple[int, ...]]]:
    """General-d packed search; shares its contract with _search_bi."""
    n = graph.num_vertices
    d = graph.d
    src, tgt = query.source, query.target
    off, nbr, cols = graph.out_csr
    hcols = [[-1] * (n + 1) for _ in range(d)]
    for v in range(1, n + 1):
        b = heur.vectors[v]
        if b is not None:
            for k in range(d):
                hcols[k][v] = b[k]
    if hcols[0][src] < 0:
        return []

    f_bits = [
        (sum(cols[k]) + max(hcols[k]) + 1).bit_length() + 1 for k in range(d)
    ]
    v_bits = n.bit_length() + 1
    s_bits = _SEQ_BITS
    f_masks = [(1 << b) - 1 for b in f_bits]
    v_mask = (1 << v_bits) - 1
    s_mask = (1 << s_bits) - 1

    def pack(f: list[int], v: int, seq: int) -> int:
        key = f[0]
        for k in range(1, d):
            key = (key << f_bits[k]) | f[k]
        return ((key << v_bits | v) << s_bits) | seq

    def unpack_f(rest: int) -> list[int]:
        f = [0] * d
        for k in range(d - 1, 0, -1):
            f[k] = rest & f_masks[k]
            rest >>= f_bits[k]
        f[0] = rest
        return f

    store = _SuffixStore(n, d - 1)
    pparent = array("q", [-1])
    closed_v = array("q")
    closed_p = array("q")
    sols: list[tuple[Cost, int]] = []
    admitted: list[Cost] = []

    heap = [pack([hcols[k][src] for k in range(d)], src, 0)]
    pops = 0
    next_compact = _COMPACT_START

    while heap:
        key = heapq.heappop(heap)
        pops += 1
        if deadline is not None and not (pops & 1023) and monotonic() > deadline:
            raise SearchTimeout(f"search past its deadline after {pops} pops")
        seq = key & s_mask
        rest = key >> s_bits
        v = rest & v_mask
        f = unpack_f(rest >> v_bits)
        g = [f[k] - hcols[k][v] for k in range(d)]
        gsuf = tuple(g[1:])
        if v == tgt:
            if store.dominated(tgt, gsuf):
                continue
            store.insert(tgt, gsuf)
            cost = tuple(g)
            if _admit(cost, admitted, plan):
                admitted.append(cost)
                sols.append((cost, pparent[seq]))
            continue
        if store.dominated(v, gsuf) or store.dominated(tgt, tuple(f[1:])):
            continue
        store.insert(v, gsuf)
        cid = len(closed_v)
        closed_v.append(v)
        closed_p.append(pparent[seq])
        for i in range(off[v], off[v + 1]):
            w = nbr[i]
            if hcols[0][w] < 0:
                continue
            ng = [g[k] + cols[k][i] for k in range(d)]
            if store.dominated(w, tuple(ng[1:])):
                continue
            nf = [ng[k] + hcols[k][w] for k in range(d)]
            if store.dominated(tgt, tuple(nf[1:])):
                continue
            s = len(pparent)
            pparent.append(cid)
            heapq.heappush(heap, pack(nf, w, s))
        if len(heap) >= next_compact:
            kept = []
            for k in heap:
                r = k >> s_bits
                kv = r & v_mask
                kf = unpack_f(r >> v_bits)
                if store.dominated(tgt, tuple(kf[1:])):
                    continue
                if kv != tgt and store.dominated(
                    kv, tuple(kf[j] - hcols[j][kv] for j in range(1, d))
                ):
                    continue
                kept.append(k)
            heapq.heapify(kept)
            heap = kept
            next_compact = max(_COMPACT_START, 2 * len(heap))

    return _materialize(sols, tgt, closed_v, closed_p)


def _materialize(
    sols: list[tuple[Cost, int]],
    tgt: int,
    closed_v: array,
    closed_p: array,
) -> list[tuple[Cost, tuple[int, ...]]]:
    out = []
    for cost, cid in sols:
        path = [tgt]
        cur = cid
        while cur >= 0:
            path.append(closed_v[cur])
            cur = closed_p[cur]
        path.reverse()
        out.append((cost, tuple(path)))
    return out


def _solve(
    graph: MosGraph,
    query: Query,
    eps: Epsilon,
    heuristic: HeuristicTable | None,
    time_limit_ms: float | None,
) -> SolutionSet:
    _check_vertex(graph, query.source, "source")
    _check_vertex(graph, query.target, "target")
    if eps.d != graph.d:
        raise DimensionMismatch(
            f"epsilon has {eps.d} components, graph has {graph.d} objectives"
        )
    if heuristic is None:
        heuristic = ideal_point_heuristic(graph, query.target)
    elif heuristic.target != query.target:
        raise TargetOutOfRange(
            f"heuristic was built for target {heuristic.target}, query wants {query.target}"
        )
    d = graph.d
    if query.source == query.target:
        entries = (SolutionEntry((0,) * d, (query.source,)),)
        return SolutionSet(query, eps, entries)
    deadline = None if time_limit_ms is None else monotonic() + time_limit_ms / 1000.0
    plan = _eps_plan(eps)
    search = _search_bi if d == 2 else _search_multi
    found = search(graph, query, heuristic, plan, deadline)
    entries = tuple(SolutionEntry(cost, path) for cost, path in found)
    return SolutionSet(query, eps, entries)


def solve_exact(
    graph: MosGraph,
    query: Query,
    heuristic: HeuristicTable | None = None,
    *,
    time_limit_ms: float | None = None,
) -> SolutionSet:
    """The complete Pareto front of a query, with witness paths.

    Entries arrive already sorted lexicographically by cost (the order the
    search admits them).  A disconnected query gives an empty set.
    """
    return _solve(graph, query, Epsilon.zero(graph.d), heuristic, time_limit_ms)


def solve_approx(
    graph: MosGraph,
    query: Query,
    eps: Epsilon,
    heuristic: HeuristicTable | None = None,
    *,
    time_limit_ms: float | None = None,
) -> SolutionSet:
    """An epsilon-approximate front: every exact Pareto cost is epsilon
    dominated by (or equal to) some returned cost, and every returned cost
    is a true path cost.  With eps = 0 the output equals solve_exact."""
    return _solve(graph, query, eps, heuristic, time_limit_ms)


def brute_force_pareto(
    graph: MosGraph, query: Query, max_paths: int = 10**7
) -> SolutionSet:
    """Oracle: enumerate all simple source-to-target paths and filter.

    Sound for cost-vector fronts because removing a non-negative cycle never
    increases any component.  Counts complete paths and raises
    InstanceTooLarge past max_paths.  Witness per front cost is the first
    path found in DFS order (adjacency order, deterministic).
    """
    _check_vertex(graph, query.source, "source")
    _check_vertex(graph, query.target, "target")
    d = graph.d
    src, tgt = query.source, query.target
    if src == tgt:
        return SolutionSet(
            query, Epsilon.zero(d), (SolutionEntry((0,) * d, (src,)),)
        )
    off, nbr, cols = graph.out_csr
    found: dict[Cost, tuple[int, ...]] = {}
    count = 0
    path = [src]
    onpath = {src}
    acc: list[Cost] = [(0,) * d]
    stack: list = [iter(range(off[src], off[src + 1]))]
    while stack:
        advanced = False
        for i in stack[-1]:
            w = nbr[i]
            if w in onpath:
                continue
            cost = tuple(acc[-1][k] + cols[k][i] for k in range(d))
            if w == tgt:
                count += 1
                if count > max_paths:
                    raise InstanceTooLarge(
                        f"more than {max_paths} simple paths enumerated"
                    )
                if cost not in found:
                    found[cost] = tuple(path) + (tgt,)
                continue
            path.append(w)
            onpath.add(w)
            acc.append(cost)
            stack.append(iter(range(off[w], off[w + 1])))
            advanced = True
            break
        if not advanced:
            stack.pop()
            onpath.discard(path.pop())
            acc.pop()
    from .core import pareto_filter

    front = pareto_filter(found.keys())
    entries = tuple(SolutionEntry(c, found[c]) for c in front)
    return SolutionSet(query, Epsilon.zero(d), entries)
