"""Finite undirected simple graphs and the metric primitives built on them.

Vertices are integers 0..n-1.  Adjacency lists are kept sorted so that every
graph has one canonical form; all operations here are read-only after
construction and safe for concurrent readers.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence

from .errors import GraphFormatError

UNREACHABLE = -1


class Graph:
    """Undirected simple graph with sorted adjacency lists.

    ``labels`` optionally attaches a string to each vertex (element keys for
    Cayley balls, original ids for relabelled files).
    """

    __slots__ = ("n", "adj", "labels")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]],
                 labels: Sequence[str] | None = None):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        self.n = n
        self.adj: tuple[tuple[int, ...], ...] = tuple(
            tuple(sorted(s)) for s in nbrs)
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != n:
                raise ValueError("labels length must equal vertex count")
        self.labels = labels

    def __len__(self) -> int:
        return self.n

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def edges(self):
        """Iterate edges as (u, v) with u < v, in sorted order."""
        for u in range(self.n):
            for v in self.adj[u]:
                if u < v:
                    yield (u, v)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Graph) and self.n == other.n
                and self.adj == other.adj)

    def __hash__(self):
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count})"


def bfs_distances(g: Graph, sources: Iterable[int]) -> list[int]:
    """Unweighted distances to the nearest source; UNREACHABLE when cut off."""
    src = list(sources)
    if not src:
        raise ValueError("sources must be non-empty")
    dist = [UNREACHABLE] * g.n
    q = deque()
    for s in src:
        if dist[s] == UNREACHABLE:
            dist[s] = 0
            q.append(s)
    while q:
        u = q.popleft()
        du = dist[u] + 1
        for v in g.adj[u]:
            if dist[v] == UNREACHABLE:
                dist[v] = du
                q.append(v)
    return dist


def neighborhood(g: Graph, vertices: Iterable[int], radius: int, *,
                 closed: bool) -> list[int]:
    """Open {d < radius} or closed {d <= radius} neighbourhood of a vertex set.

    The open variant with radius 0 is empty; the closed one returns the set
    itself.
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    verts = sorted(set(vertices))
    if not closed and radius == 0:
        return []
    if not verts:
        return []
    dist = bfs_distances(g, verts)
    if closed:
        return [v for v in range(g.n)
                if dist[v] != UNREACHABLE and dist[v] <= radius]
    return [v for v in range(g.n)
            if dist[v] != UNREACHABLE and dist[v] < radius]


def annulus(g: Graph, vertices: Iterable[int], inner: int, outer: int) -> list[int]:
    """Closed annulus: the closed outer neighbourhood minus the open inner one."""
    if inner < 0 or outer < 0:
        raise ValueError("annulus radii must be non-negative")
    if inner > outer:
        raise ValueError(f"annulus needs inner <= outer, got {inner} > {outer}")
    verts = sorted(set(vertices))
    if not verts:
        return []
    dist = bfs_distances(g, verts)
    return [v for v in range(g.n)
            if dist[v] != UNREACHABLE and inner <= dist[v] <= outer]


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> tuple[Graph, list[int]]:
    """Induced subgraph plus the remap table (new id -> old id, ascending)."""
    old_ids = sorted(set(vertices))
    index = {old: new for new, old in enumerate(old_ids)}
    edges = []
    for new_u, old_u in enumerate(old_ids):
        for old_v in g.adj[old_u]:
            if old_v in index and old_u < old_v:
                edges.append((new_u, index[old_v]))
    labels = None
    if g.labels is not None:
        labels = [g.labels[old] for old in old_ids]
    return Graph(len(old_ids), edges, labels), old_ids


def connected_components(g: Graph, removed: Iterable[int] = ()) -> list[list[int]]:
    """Components of g minus a vertex set, largest first, then by smallest id."""
    gone = set(removed)
    seen = [False] * g.n
    comps: list[list[int]] = []
    for start in range(g.n):
        if seen[start] or start in gone:
            continue
        comp = []
        q = deque([start])
        seen[start] = True
        while q:
            u = q.popleft()
            comp.append(u)
            for v in g.adj[u]:
                if not seen[v] and v not in gone:
                    seen[v] = True
                    q.append(v)
        comp.sort()
        comps.append(comp)
    comps.sort(key=lambda c: (-len(c), c[0]))
    return comps


def largest_component_size(g: Graph, removed: Iterable[int] = ()) -> int:
    comps = connected_components(g, removed)
    return len(comps[0]) if comps else 0


def load_edge_list(path) -> Graph:
    """Read an edge-list file: one `u v` pair per line, `#` starts a comment.

    Vertex ids need not be contiguous; they are remapped to 0..n-1 in
    ascending order of original id, kept in the labels.  Duplicate edges are
    tolerated; self-loops are rejected with their line number.
    """
    raw_edges: list[tuple[int, int]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            parts = text.split()
            if len(parts) != 2:
                raise GraphFormatError(
                    f"expected two integers, got {text!r}", line=lineno)
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphFormatError(
                    f"expected two integers, got {text!r}", line=lineno) from None
            if u < 0 or v < 0:
                raise GraphFormatError(
                    f"vertex ids must be non-negative, got {text!r}", line=lineno)
            if u == v:
                raise GraphFormatError(f"self-loop at vertex {u}", line=lineno)
            raw_edges.append((u, v))
    if not raw_edges:
        raise GraphFormatError("file defines an empty graph (no edges)")
    ids = sorted({x for e in raw_edges for x in e})
    index = {old: new for new, old in enumerate(ids)}
    edges = [(index[u], index[v]) for u, v in raw_edges]
    return Graph(len(ids), edges, labels=[str(i) for i in ids])


def save_graph(g: Graph, path) -> None:
    """Write the canonical edge list; save then load is the identity."""
    with open(path, "w", encoding="utf-8") as fh:
        for u, v in g.edges():
            fh.write(f"{u} {v}\n")


def sierpinski_graph(level: int) -> Graph:
    """Sierpinski triangle graph: level 0 is a triangle, each level glues
    three copies of the previous one at shared corner midpoints."""
    if level < 0:
        raise ValueError("level must be non-negative")
    side = 2 ** level
    corners = ((0, 0), (side, 0), (0, side))
    edges: set[tuple[tuple[int, int], tuple[int, int]]] = set()

    def midpoint(p, q):
        return ((p[0] + q[0]) // 2, (p[1] + q[1]) // 2)

    def build(a, b, c, depth):
        if depth == 0:
            for p, q in ((a, b), (b, c), (a, c)):
                edges.add((min(p, q), max(p, q)))
            return
        ab, bc, ac = midpoint(a, b), midpoint(b, c), midpoint(a, c)
        build(a, ab, ac, depth - 1)
        build(ab, b, bc, depth - 1)
        build(ac, bc, c, depth - 1)

    build(*corners, level)
    points = sorted({p for e in edges for p in e})
    index = {p: i for i, p in enumerate(points)}
    return Graph(len(points), [(index[p], index[q]) for p, q in edges],
                 labels=[f"{x},{y}" for x, y in points])
