"""Balanced vertex separators: cut(G) per the half-size component rule.

A set S is a cut set when every component of G - S has at most floor(|G|/2)
vertices (|G| counted before removal).  The exact solver is a best-first
branch and bound over in/out-of-separator decisions.  Certified lower bounds
come from a routing argument: unit demands are routed from seeded sources
along balanced shortest-path DAGs; any balanced separator must absorb every
demand unit that cannot stay inside a single half-size component, so the
smallest k whose k largest vertex loads cover that demand is a proven lower
bound.  Search budgets are counted in deterministic work units derived from
budget_ms, keeping anytime certificates reproducible across machines and
worker counts.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from heapq import heappop, heappush
from itertools import combinations
from typing import Sequence

from .errors import ResourceBudgetError
from .graphs import Graph, bfs_distances, induced_subgraph

BRUTE_MAX_VERTICES = 20

_UNDECIDED, _IN, _OUT = 0, 1, 2


def half_threshold(n: int) -> int:
    """Components larger than this are forbidden (strict 'more than n/2')."""
    return n // 2


def _largest_surviving(g: Graph, banned) -> int:
    """Largest component size of g minus a vertex set, with early exit once
    the half threshold is exceeded."""
    n = g.n
    limit = half_threshold(n)
    seen = bytearray(n)
    for v in banned:
        seen[v] = 1
    best = 0
    stack = []
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = 1
        stack.append(start)
        size = 0
        while stack:
            u = stack.pop()
            size += 1
            for w in g.adj[u]:
                if not seen[w]:
                    seen[w] = 1
                    stack.append(w)
        if size > best:
            best = size
            if best > limit:
                return best
    return best


def is_cut_set(g: Graph, separator: Sequence[int]) -> bool:
    """True iff every component of g minus the separator has <= floor(n/2)
    vertices."""
    if g.n == 0:
        raise ValueError("cut sets are undefined for the empty graph")
    return _largest_surviving(g, set(separator)) <= half_threshold(g.n)


@dataclass(frozen=True)
class SearchStats:
    nodes: int
    elapsed_ms: float


@dataclass(frozen=True)
class CutCertificate:
    """Either a verified separator (exact/upper) or a proven lower bound."""

    bound_kind: str  # "exact" | "upper" | "lower"
    value: int
    separator: tuple[int, ...] | None
    largest_component_size: int | None
    stats: SearchStats | None = None

    def verify(self, g: Graph) -> bool:
        if self.bound_kind in ("exact", "upper"):
            return (self.separator is not None
                    and len(self.separator) == self.value
                    and is_cut_set(g, self.separator))
        return self.separator is None


@dataclass(frozen=True)
class CutBounds:
    """Certified interval around cut(g); lower is upper when exact."""

    lower: CutCertificate
    upper: CutCertificate

    @property
    def exact(self) -> bool:
        return self.lower.value == self.upper.value

    @property
    def value_range(self) -> tuple[int, int]:
        return (self.lower.value, self.upper.value)


def _certificate_for(g: Graph, separator: Sequence[int], kind: str,
                     stats: SearchStats | None = None) -> CutCertificate:
    sep = tuple(sorted(separator))
    largest = _largest_surviving(g, set(sep))
    return CutCertificate(bound_kind=kind, value=len(sep), separator=sep,
                          largest_component_size=largest, stats=stats)


def cut_brute(g: Graph, max_n: int = BRUTE_MAX_VERTICES) -> CutCertificate:
    """Exact minimum by subset enumeration in order of size then lex order,
    so ties break to the lexicographically smallest separator."""
    n = g.n
    if n == 0:
        raise ValueError("cut sets are undefined for the empty graph")
    if n > max_n:
        raise ResourceBudgetError(
            f"cut_brute is capped at {max_n} vertices (got {n}); use cut_exact")
    start = time.perf_counter()
    tested = 0
    for k in range(n + 1):
        for subset in combinations(range(n), k):
            tested += 1
            if is_cut_set(g, subset):
                stats = SearchStats(
                    nodes=tested,
                    elapsed_ms=(time.perf_counter() - start) * 1000.0)
                return _certificate_for(g, subset, "exact", stats)
    raise AssertionError("unreachable: removing all vertices is always valid")


# ---------------------------------------------------------------------------
# Heuristic upper bounds


def _refine_separator(g: Graph, sep: list[int], *, swaps: bool) -> list[int]:
    """Greedy shrink: drop vertices while validity holds, optionally try
    single swaps that enable another drop."""
    current = sorted(set(sep))
    improved = True
    while improved:
        improved = False
        for v in list(current):
            trial = [u for u in current if u != v]
            if is_cut_set(g, trial):
                current = trial
                improved = True
        if swaps and not improved:
            for v in list(current):
                done = False
                for u in g.adj[v]:
                    if u in current:
                        continue
                    trial = sorted(set(current) - {v} | {u})
                    if not is_cut_set(g, trial):
                        continue
                    for w in list(trial):
                        smaller = [x for x in trial if x != w]
                        if is_cut_set(g, smaller):
                            current = smaller
                            improved = True
                            done = True
                            break
                    if done:
                        break
                if done:
                    break
    return current


def _level_candidates(g: Graph, dist: Sequence[int], extra_slack: int = 6):
    """Separator candidates from distance levels: the level sets near the
    mass balance point, where both sides could fit under the threshold."""
    n = g.n
    limit = half_threshold(n)
    maxd = max(dist)
    level_mass = [0] * (maxd + 1)
    for d in dist:
        if d >= 0:
            level_mass[d] += 1
    prefix = 0
    plausible = []
    near_balance = []
    for t in range(maxd + 1):
        inner = prefix  # strictly below level t
        outer = n - prefix - level_mass[t]
        prefix += level_mass[t]
        if inner <= limit and outer <= limit:
            plausible.append(t)
        else:
            near_balance.append((abs(inner - outer), t))
    near_balance.sort()
    extras = [t for _, t in near_balance[:extra_slack]]
    for t in plausible + extras:
        yield [v for v in range(n) if dist[v] == t]


def _geodesic_path(g: Graph, dist_to_target: Sequence[int], start: int) -> list[int]:
    """Shortest path following decreasing distance, smallest id first."""
    path = [start]
    v = start
    while dist_to_target[v] > 0:
        v = min(u for u in g.adj[v] if dist_to_target[u] == dist_to_target[v] - 1)
        path.append(v)
    return path


def _far_pairs(g: Graph, rng: random.Random, samples: int) -> list[tuple[int, int]]:
    """Far vertex pairs: a double-sweep diametral pair, antipodes of a spread
    of vertices on the far set (so several diameter directions are covered),
    and a few seeded extras."""
    n = g.n
    pairs = []

    def antipode(u):
        du = bfs_distances(g, [u])
        return max(range(n), key=lambda w: (du[w], -w)), du

    p, _ = antipode(0)
    q, dp = antipode(p)
    pairs.append((min(p, q), max(p, q)))
    far_set = [v for v in range(n) if dp[v] == dp[q]]
    if len(far_set) <= 8:
        picks = set(far_set)
    else:
        picks = {far_set[(k * (len(far_set) - 1)) // 7] for k in range(8)}
    for u in sorted(picks):
        v, _ = antipode(u)
        if u != v:
            pairs.append((min(u, v), max(u, v)))
    for _ in range(samples):
        u = rng.randrange(n)
        v, _ = antipode(u)
        if u != v:
            pairs.append((min(u, v), max(u, v)))
    seen = set()
    out = []
    for pair in pairs:
        if pair not in seen:
            seen.add(pair)
            out.append(pair)
    return out


def cut_heuristic(g: Graph, seed: int = 0,
                  dist_from_center: Sequence[int] | None = None) -> CutCertificate:
    """Best valid separator found by deterministic seeded sweeps.

    Candidates come from sphere sweeps (around the ball center when known,
    plus BFS sources), BFS-order prefix boundaries, distance bisectors
    between far pairs, and 1-thickened geodesic walls; the best few are then
    locally refined.  Always returns a valid certificate.
    """
    n = g.n
    if n == 0:
        raise ValueError("cut sets are undefined for the empty graph")
    start_t = time.perf_counter()
    if n == 1:
        # The definition forces removing the lone vertex: {} leaves a
        # component of size 1 > floor(1/2).
        return _certificate_for(g, (0,), "upper", SearchStats(0, 0.0))
    limit = half_threshold(n)
    if _largest_surviving(g, ()) <= limit:
        return _certificate_for(g, (), "upper", SearchStats(0, 0.0))

    rng = random.Random(seed)
    big = n > 5000
    candidates: list[list[int]] = []

    def consider(sep):
        sep = sorted(set(sep))
        if sep and is_cut_set(g, sep):
            candidates.append(sep)

    # (a) sphere sweeps around the center and a few BFS sources.
    dists = []
    if dist_from_center is not None:
        dists.append(list(dist_from_center))
    sources = [0] if big else [0, n - 1, rng.randrange(n)]
    for s in sources:
        dists.append(bfs_distances(g, [s]))
    for dist in dists:
        for sep in _level_candidates(g, dist):
            consider(sep)

    # (b) BFS-order prefix sweeps: boundary vertices of a prefix.
    for s in ([0] if big else [0, rng.randrange(n)]):
        order = []
        seen = bytearray(n)
        seen[s] = 1
        queue = [s]
        while queue:
            nxt = []
            for u in queue:
                order.append(u)
                for v in g.adj[u]:
                    if not seen[v]:
                        seen[v] = 1
                        nxt.append(v)
            queue = sorted(nxt)
        position = [0] * n
        for i, v in enumerate(order):
            position[v] = i
        for frac in (3, 2):
            k = len(order) // frac
            prefix = order[:k]
            boundary = [v for v in prefix
                        if any(position[u] >= k for u in g.adj[v])]
            consider(boundary)

    # (d) far-pair structures: distance bisectors and thickened geodesic
    # walls (these find the straight cuts of lattice balls and the walls of
    # hyperbolic ones; refinement does the polishing).
    pairs = _far_pairs(g, rng, samples=0 if big else 2)
    for (u, v) in pairs:
        du = bfs_distances(g, [u])
        dv = bfs_distances(g, [v])
        if not big:
            f = [du[i] - dv[i] for i in range(n)]
            fmin, fmax = min(f), max(f)
            balance = []
            for c in range(fmin, fmax):
                low = sum(1 for x in f if x <= c - 1)
                high = sum(1 for x in f if x >= c + 2)
                balance.append((max(low, high), c))
            balance.sort()
            for _, c in balance[:4]:
                consider([i for i in range(n) if c <= f[i] <= c + 1])
        path = _geodesic_path(g, dv, u)
        wall = set(path)
        for w in path:
            wall.update(g.adj[w])
        consider(sorted(wall))

    # Last resort: everything but one vertex is always valid for n >= 2.
    if not candidates:
        candidates.append(list(range(1, n)))

    candidates.sort(key=lambda c: (len(c), c))
    best = None
    for sep in candidates[:3]:
        refined = _refine_separator(g, sep, swaps=not big)
        if best is None or (len(refined), refined) < (len(best), best):
            best = refined
    stats = SearchStats(nodes=len(candidates),
                        elapsed_ms=(time.perf_counter() - start_t) * 1000.0)
    return _certificate_for(g, best, "upper", stats)


# ---------------------------------------------------------------------------
# Treewidth upper bound (greedy min-fill elimination)


def treewidth_upper(g: Graph) -> int:
    """Width of the min-fill elimination ordering (ties: min degree, then
    smallest id); an upper bound on the treewidth."""
    nbrs: dict[int, set[int]] = {v: set(g.adj[v]) for v in range(g.n)}
    width = 0
    while nbrs:
        best_v = None
        best_key = None
        for v, vn in nbrs.items():
            fill = 0
            vn_list = list(vn)
            for i in range(len(vn_list)):
                ni = nbrs[vn_list[i]]
                for j in range(i + 1, len(vn_list)):
                    if vn_list[j] not in ni:
                        fill += 1
            key = (fill, len(vn), v)
            if best_key is None or key < best_key:
                best_key = key
                best_v = v
        v = best_v
        vn = nbrs.pop(v)
        width = max(width, len(vn))
        for u in vn:
            nbrs[u].discard(v)
        vn_list = list(vn)
        for i in range(len(vn_list)):
            for j in range(i + 1, len(vn_list)):
                nbrs[vn_list[i]].add(vn_list[j])
                nbrs[vn_list[j]].add(vn_list[i])
    return width


# ---------------------------------------------------------------------------
# Certified lower bounds by demand routing


def _pick_sources(g: Graph, banned: frozenset[int], count: int,
                  seed: int) -> list[int]:
    """Deterministic spread of routing sources: double-sweep extremes plus a
    seeded sample."""
    n = g.n
    alive = [v for v in range(n) if v not in banned]
    if len(alive) <= count:
        return alive
    rng = random.Random(seed)
    chosen: list[int] = []
    d0 = bfs_distances(g, [alive[0]])
    p = max(alive, key=lambda v: (d0[v], -v))
    dp = bfs_distances(g, [p])
    q = max(alive, key=lambda v: (dp[v], -v))
    chosen.extend({alive[0], p, q})
    remaining = [v for v in alive if v not in set(chosen)]
    chosen.extend(rng.sample(remaining, min(count - len(chosen), len(remaining))))
    return sorted(chosen)


def _route_once(g: Graph, banned: frozenset[int], sources: Sequence[int],
                lengths: Sequence[int] | None):
    """Route one unit from every source to each reachable vertex along
    (weighted-)shortest-path DAGs, splitting evenly at each step.

    Returns (loads, total reached counts per source).  With lengths given,
    paths follow integer vertex-weighted shortest paths (Dijkstra), which is
    used to steer flow away from congested vertices; validity of the bound
    does not depend on the routing, only on where demands start and end.
    """
    n = g.n
    adj = g.adj
    loads = [0.0] * n
    reached_list = []
    for src in sources:
        if src in banned:
            continue
        if lengths is None:
            dist = [-1] * n
            for b in banned:
                dist[b] = -2
            dist[src] = 0
            order = [src]
            head = 0
            while head < len(order):
                u = order[head]
                head += 1
                du = dist[u] + 1
                for w in adj[u]:
                    if dist[w] == -1:
                        dist[w] = du
                        order.append(w)

            def preds_of(u, d=dist):
                return [w for w in adj[u] if d[w] == d[u] - 1]
        else:
            INF = float("inf")
            dist = [INF] * n
            for b in banned:
                dist[b] = -2
            dist[src] = 0
            heap = [(0, src)]
            order = []
            while heap:
                du, u = heappop(heap)
                if du > dist[u]:
                    continue
                order.append(u)
                for w in adj[u]:
                    if dist[w] == -2:
                        continue
                    cand = du + lengths[w]
                    if cand < dist[w]:
                        dist[w] = cand
                        heappush(heap, (cand, w))

            def preds_of(u, d=dist):
                return [w for w in adj[u]
                        if d[w] != -2 and d[w] != float("inf")
                        and d[w] + lengths[u] == d[u]]
        reached_list.append(len(order))
        carry = [1.0] * n
        for u in reversed(order):
            if u == src:
                continue
            preds = preds_of(u)
            share = carry[u] / len(preds)
            for w in preds:
                carry[w] += share
        for u in order:
            loads[u] += carry[u]
    return loads, reached_list


def _bound_from_loads(loads, banned, demand) -> int:
    """Smallest k whose k largest loads cover the demand; a tiny upward
    inflation makes float rounding strictly conservative."""
    pool = sorted((loads[v] for v in range(len(loads)) if v not in banned),
                  reverse=True)
    cum = 0.0
    for k, load in enumerate(pool, start=1):
        cum += load * (1.0 + 1e-9) + 1e-12
        if cum >= demand:
            return k
    return len(pool)


def _routing_lower_bound(g: Graph, banned: frozenset[int], half: int,
                         sources: Sequence[int], reroute_rounds: int = 8) -> int:
    """Certified lower bound on the number of separator vertices outside
    `banned` (vertices already committed to the separator).

    Each source sends one unit to every vertex it can reach in g - banned.
    In any completed separator, at most `half` targets share the source's
    component, so the rest of its demand must cross separator vertices; the
    smallest k whose k largest vertex loads cover that crossing demand is a
    valid bound.  Congestion-penalized rerouting rounds are averaged (a
    convex combination of routings is again a routing), which flattens the
    load profile towards the min-congestion optimum and sharpens the bound;
    the best round wins.
    """
    bound, _ = _routing_bound_with_loads(g, banned, half, sources,
                                         reroute_rounds)
    return bound


def _routing_bound_with_loads(g: Graph, banned: frozenset[int], half: int,
                              sources: Sequence[int], reroute_rounds: int):
    """Routing bound plus the final averaged load profile (the hot vertices
    are natural branching candidates)."""
    n = g.n
    loads, reached = _route_once(g, banned, sources, None)
    # Reachability, and hence the crossing demand, is routing-independent.
    demand = float(sum(max(0, rc - half) for rc in reached))
    if demand <= 0:
        return 0, loads
    best = _bound_from_loads(loads, banned, demand)
    total = list(loads)
    rounds = 1
    for _ in range(reroute_rounds):
        averaged = [t / rounds for t in total]
        peak = max(averaged)
        if peak <= 0:
            break
        lengths = [1 + int(24.0 * averaged[v] / peak) for v in range(n)]
        loads, _ = _route_once(g, banned, sources, lengths)
        best = max(best, _bound_from_loads(loads, banned, demand))
        rounds += 1
        for v in range(n):
            total[v] += loads[v]
        best = max(best, _bound_from_loads([t / rounds for t in total],
                                           banned, demand))
    return best, [t / rounds for t in total]


class _WorkBudget:
    """Deterministic work meter; budgets are abstract operation counts so
    certificates do not depend on machine speed or worker count."""

    def __init__(self, ops: float):
        self.remaining = ops

    def spend(self, ops: float) -> bool:
        self.remaining -= ops
        return self.remaining > 0

    @property
    def exhausted(self) -> bool:
        return self.remaining <= 0


class _Timeout(Exception):
    pass


class _FoundSeparator(Exception):
    def __init__(self, separator: list[int]):
        self.separator = separator


def _vertex_mincut(g: Graph, statuses: bytearray, source_comp, sink_comp,
                   need: int, meter: _WorkBudget):
    """Vertex-capacitated max flow between two kept components, plus a
    canonical minimum cut when the flow stays below `need`.

    Undecided vertices have capacity one, kept vertices are uncuttable
    (infinite capacity), committed separator vertices are removed.  Returns
    (flow, cut): cut is None when flow reached `need` (early exit), and []
    when source and sink cannot be disconnected by undecided vertices at
    all (they are adjacent or glued through kept vertices).

    Standard node splitting: state (v, 0) is "entering v", (v, 1) "leaving
    v"; vertex_flow holds flow across capacity arcs, edge_flow net oriented
    edge flow.
    """
    n = g.n
    in_sink = bytearray(n)
    for v in sink_comp:
        in_sink[v] = 1
    vertex_flow = [0] * n
    edge_flow: dict[tuple[int, int], int] = {}
    flow = 0

    def residual_states():
        """BFS over the residual graph; returns (parents, sink state)."""
        parent: dict[tuple[int, int], tuple[int, int]] = {}
        queue: list[tuple[int, int]] = []
        for v in source_comp:
            state = (v, 1)
            parent[state] = (-1, -1)
            queue.append(state)
        head = 0
        while head < len(queue):
            state = queue[head]
            head += 1
            v, side = state
            if side == 1:
                for w in g.adj[v]:
                    if statuses[w] == _IN:
                        continue
                    nxt = (w, 0)
                    if nxt not in parent:
                        parent[nxt] = state
                        if in_sink[w]:
                            return parent, nxt
                        queue.append(nxt)
                if vertex_flow[v] > 0:
                    nxt = (v, 0)
                    if nxt not in parent:
                        parent[nxt] = state
                        queue.append(nxt)
            else:
                capacity = 1 if statuses[v] == _UNDECIDED else n + 1
                if vertex_flow[v] < capacity:
                    nxt = (v, 1)
                    if nxt not in parent:
                        parent[nxt] = state
                        queue.append(nxt)
                for w in g.adj[v]:
                    if edge_flow.get((v, w), 0) < 0:
                        nxt = (w, 1)
                        if nxt not in parent:
                            parent[nxt] = state
                            queue.append(nxt)
        return parent, None

    while flow < need:
        if not meter.spend(2.0 * (n + 2 * g.edge_count)):
            raise _Timeout
        parent, final = residual_states()
        if final is None:
            # min cut: undecided vertices whose entry state is reachable but
            # whose exit state is not
            cut = [v for v in range(n)
                   if statuses[v] == _UNDECIDED
                   and (v, 0) in parent and (v, 1) not in parent]
            return flow, cut
        path = [final]
        while parent[path[-1]] != (-1, -1):
            path.append(parent[path[-1]])
        path.reverse()
        for i in range(len(path) - 1):
            (v, sv), (w, sw) = path[i], path[i + 1]
            if v == w:
                vertex_flow[v] += 1 if (sv, sw) == (0, 1) else -1
            else:
                # any edge traversal shifts one net unit in that direction
                edge_flow[(v, w)] = edge_flow.get((v, w), 0) + 1
                edge_flow[(w, v)] = edge_flow.get((w, v), 0) - 1
        flow += 1
    return flow, None


# Deterministic work accounting: budgets in abstract operation counts
# converted from budget_ms at a nominal rate.
_OPS_PER_MS = 10_000.0


def _components_by_status(g: Graph, statuses: bytearray, allowed) -> list[list[int]]:
    """Components of the subgraph induced by the allowed statuses."""
    n = g.n
    seen = bytearray(n)
    comps = []
    for start in range(n):
        if seen[start] or statuses[start] not in allowed:
            continue
        seen[start] = 1
        stack = [start]
        comp = []
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in g.adj[u]:
                if not seen[w] and statuses[w] in allowed:
                    seen[w] = 1
                    stack.append(w)
        comps.append(comp)
    return comps


class _Refuter:
    """Decides whether a balanced separator of size <= level exists.

    Case analysis rooted at a probe vertex x0: either x0 is in the
    separator (recurse with one unit less), or x0 is kept; then, because the
    mass outside x0's component exceeds a ball volume, some kept anchor far
    from x0 lies in a different component, and each anchor case is searched
    with must-separate min-cut branching (multiway over a canonical minimum
    vertex cut between the two kept sides).  Finding a valid separator of
    size <= level raises _FoundSeparator, which improves the incumbent.
    """

    def __init__(self, g: Graph, limit: int, meter: _WorkBudget,
                 probe_order: Sequence[int]):
        self.g = g
        self.n = g.n
        self.limit = limit
        self.meter = meter
        self.m2 = g.n + 2 * g.edge_count
        self.probe_order = list(probe_order)
        self._dist_cache: dict[int, list[int]] = {}

    def _distances(self, v: int) -> list[int]:
        if v not in self._dist_cache:
            self._dist_cache[v] = bfs_distances(self.g, [v])
        return self._dist_cache[v]

    def _check_complete(self, statuses: bytearray, level: int) -> None:
        """If keeping every undecided vertex yields a balanced separator of
        size <= level, report it."""
        in_set = [v for v in range(self.n) if statuses[v] == _IN]
        if len(in_set) > level:
            return
        if not self.meter.spend(self.m2):
            raise _Timeout
        if _largest_surviving(self.g, in_set) <= self.limit:
            raise _FoundSeparator(in_set)

    def _refute_balance(self, statuses: bytearray, level: int,
                        in_set: list[int]) -> None:
        """Close a state whose committed vertices already satisfy every
        separation constraint: only balance is left.

        Extra separator vertices only ever help inside surviving components
        that are too large, and those components are vertex-disjoint, so the
        problem splits into independent minimum-fix subproblems on induced
        subgraphs, solved by recursive refuters.
        """
        budget = level - len(in_set)
        relaxed = _components_by_status(self.g, statuses, (_OUT, _UNDECIDED))
        oversized = sorted((c for c in relaxed if len(c) > self.limit),
                           key=lambda c: (len(c), c[0]))
        if not oversized:
            # the all-kept completion is balanced; callers checked it, but
            # re-raise defensively
            self._check_complete(statuses, level)
            return
        if len(oversized) > budget:
            return  # each oversized component needs at least one removal
        fixes: list[int] = []
        for comp in oversized:
            remaining = budget - len(fixes)
            sub, old_ids = induced_subgraph(self.g, comp)
            order = {old: i for i, old in enumerate(old_ids)}
            sub_probe = [order[v] for v in self.probe_order if v in order]
            sub_refuter = _Refuter(sub, self.limit, self.meter, sub_probe)
            fixed = None
            for sub_level in range(1, remaining + 1):
                try:
                    sub_refuter.refute(bytearray(sub.n), sub_level)
                except _FoundSeparator as found:
                    fixed = [old_ids[v] for v in found.separator]
                    break
            if fixed is None:
                return  # this component cannot be repaired within budget
            fixes.extend(fixed)
        raise _FoundSeparator(in_set + fixes)

    def refute(self, statuses: bytearray, level: int) -> None:
        """Prove no consistent balanced separator of size <= level exists;
        raises _FoundSeparator when one is found instead."""
        in_count = sum(1 for v in range(self.n) if statuses[v] == _IN)
        if in_count > level:
            return
        self._check_complete(statuses, level)
        if in_count == level:
            # No separator budget left, and the unique completion (keep all
            # undecided vertices) was just checked.
            return
        if not self.meter.spend(self.m2):
            raise _Timeout
        kept = _components_by_status(self.g, statuses, (_OUT,))
        if kept and max(len(c) for c in kept) > self.limit:
            return
        probe = next((v for v in self.probe_order
                      if statuses[v] == _UNDECIDED), None)
        if probe is None:
            # fully decided and the completion check did not fire
            return
        # Case 1: probe joins the separator.
        child = bytearray(statuses)
        child[probe] = _IN
        self.refute(child, level)
        # Case 2: probe is kept; some far kept vertex is in another
        # component.  outside mass >= n - level - limit forces an anchor
        # beyond any ball of smaller volume.
        outside_mass = self.n - level - self.limit
        kept_probe = bytearray(statuses)
        kept_probe[probe] = _OUT
        if outside_mass <= 0:
            # no two-component guarantee; fall back to exhaustive branching
            self.refute(kept_probe, level)
            return
        dist = self._distances(probe)
        volumes: dict[int, int] = {}
        for d in dist:
            if d >= 0:
                volumes[d] = volumes.get(d, 0) + 1
        # Largest radius whose closed ball is small enough that the outside
        # mass cannot fit in it (the ball includes the probe itself, which is
        # never part of the outside set).
        radius = 0
        cumulative = 0
        for d in sorted(volumes):
            cumulative += volumes[d]
            if cumulative <= outside_mass:
                radius = d + 1
            else:
                break
        anchors = [a for a in range(self.n)
                   if (dist[a] >= radius or dist[a] < 0) and statuses[a] != _IN]
        anchors.sort(key=lambda a: (-dist[a], a))
        # At least `surplus` outside vertices lie beyond the ball, so the
        # separator cannot dodge that many anchors at once: the closest
        # surplus-1 cases are covered by the remaining ones.
        inside_ball = sum(c for d, c in volumes.items() if d < radius)
        surplus = outside_mass - (inside_ball - 1)
        if surplus > 1:
            anchors = anchors[:max(1, len(anchors) - (surplus - 1))]
        for a in anchors:
            case = bytearray(kept_probe)
            case[a] = _OUT
            self._refute_pair(case, level, probe, a)

    def _refute_pair(self, statuses: bytearray, level: int,
                     left: int, right: int) -> None:
        """Refute separators of size <= level keeping `left` and `right` in
        different components."""
        n = self.n
        in_set = [v for v in range(n) if statuses[v] == _IN]
        if len(in_set) > level:
            return
        if len(in_set) == level:
            # Only the all-kept completion remains; it was checked when this
            # state was created.
            self._check_complete(statuses, level)
            return
        if not self.meter.spend(self.m2):
            raise _Timeout
        kept = _components_by_status(self.g, statuses, (_OUT,))
        comp_left = comp_right = None
        oversized = False
        for comp in kept:
            if len(comp) > self.limit:
                oversized = True
            has_l = left in comp
            has_r = right in comp
            if has_l and has_r:
                return  # sides glued: case impossible
            if has_l:
                comp_left = comp
            if has_r:
                comp_right = comp
        if oversized:
            return
        need = level - len(in_set) + 1
        flow, cut = _vertex_mincut(self.g, statuses, comp_left, comp_right,
                                   need, self.meter)
        if cut is None:
            return  # flow proves more than `level - |IN|` vertices needed
        if not cut:
            # Zero flow and nothing to cut: the committed vertices already
            # separate the pair.  What remains is a pure balance problem.
            self._refute_balance(statuses, level, in_set)
            return
        # Multiway branch over the canonical min cut: the separator either
        # uses cut[0], or keeps it and uses cut[1], ..., or keeps them all.
        for i in range(len(cut) + 1):
            child = bytearray(statuses)
            for j in range(i):
                child[cut[j]] = _OUT
            if i < len(cut):
                child[cut[i]] = _IN
            if i < len(cut):
                # Balance of the committed set alone already answers the
                # global question, regardless of the case assumption.
                self._check_complete(child, level)
            self._refute_pair(child, level, left, right)

def cut_exact(g: Graph, budget_ms: int = 10_000, seed: int = 0) -> CutBounds:
    """Certified bounds on cut(g); exact when the search closes in budget.

    The upper bound starts from the sweep heuristic; the lower bound starts
    from the routing certificate and is then raised one level at a time by
    the anchored refutation search, which either proves no smaller separator
    exists or finds one (improving the upper bound).  When the two meet the
    result is exact; otherwise both certificates are returned.
    """
    if budget_ms <= 0:
        raise ValueError("budget_ms must be positive")
    n = g.n
    if n == 0:
        raise ValueError("cut sets are undefined for the empty graph")
    start_t = time.perf_counter()
    levels_closed = 0

    def stats() -> SearchStats:
        return SearchStats(nodes=levels_closed,
                           elapsed_ms=(time.perf_counter() - start_t) * 1000.0)

    def exact_result(sep) -> CutBounds:
        cert = _certificate_for(g, sep, "exact", stats())
        return CutBounds(lower=cert, upper=cert)

    limit = half_threshold(n)
    if _largest_surviving(g, ()) <= limit:
        return exact_result(())

    ub_cert = cut_heuristic(g, seed=seed)
    best_sep = list(ub_cert.separator)
    best_val = ub_cert.value

    meter = _WorkBudget(budget_ms * _OPS_PER_MS)
    m2 = n + 2 * g.edge_count
    source_count = min(n, 2 * best_val + 24)
    root_sources = _pick_sources(g, frozenset(), source_count, seed)
    root_rounds = 8
    meter.spend((root_rounds + 1.0) * len(root_sources) * m2)
    root_lb, loads = _routing_bound_with_loads(g, frozenset(), limit,
                                               root_sources, root_rounds)
    lower = max(1, root_lb)
    if lower >= best_val:
        return exact_result(best_sep)

    # Probe vertices hottest-first: routing bottlenecks first forces the
    # case analysis through the natural separator region.
    probe_order = sorted(range(n), key=lambda v: (-loads[v], v))
    refuter = _Refuter(g, limit, meter, probe_order)
    level = lower
    while level < best_val and not meter.exhausted:
        try:
            refuter.refute(bytearray(n), level)
            lower = level + 1
            levels_closed += 1
            level += 1
        except _FoundSeparator as found:
            sep = sorted(found.separator)
            if len(sep) < best_val:
                best_val = len(sep)
                best_sep = sep
            # keep refuting the same level; a separator this small must now
            # be ruled out or beaten again
            if lower >= best_val:
                break
        except _Timeout:
            break

    if lower >= best_val:
        return exact_result(best_sep)
    lower_cert = CutCertificate(bound_kind="lower", value=lower,
                                separator=None, largest_component_size=None,
                                stats=stats())
    upper_cert = _certificate_for(g, best_sep, "upper", stats())
    return CutBounds(lower=lower_cert, upper=upper_cert)
