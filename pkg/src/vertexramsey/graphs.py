"""Graphs, arrival-ordered graphs, and ordered-subgraph families.

An *ordered graph* is a graph together with an arrival ordering of its
vertices; the first vertex of the ordering is the youngest (most recently
arrived) one.  Two ordered graphs are considered equivalent when a graph
isomorphism between them preserves relative arrival positions.  Since the
ordering is total, this holds exactly when the position-relabelled edge
sets coincide, so the positional normal form *is* the canonical form.

Throughout this package an ordered-isomorphism class is represented by an
``OClass``: a pair ``(h, edges)`` where ``h`` is the vertex count and
``edges`` is a frozenset of position pairs ``(a, b)`` with ``a < b``;
position 0 is the youngest vertex, position ``h - 1`` the oldest.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterable, Iterator, Optional, Sequence

Edge = tuple[int, int]
OClass = tuple[int, frozenset]  # (vertex count, frozenset of position pairs)


def _norm_edge(u: int, v: int) -> Edge:
    if u == v:
        raise ValueError(f"loop at vertex {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """A finite simple graph on vertices ``0 .. vertex_count - 1``."""

    vertex_count: int
    edges: frozenset

    def __post_init__(self):
        if self.vertex_count < 0:
            raise ValueError("negative vertex count")
        for u, v in self.edges:
            if not (0 <= u < v < self.vertex_count):
                raise ValueError(f"bad edge ({u}, {v}) for n={self.vertex_count}")

    @staticmethod
    def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        return Graph(n, frozenset(_norm_edge(u, v) for u, v in edges))

    @staticmethod
    def complete(n: int) -> "Graph":
        return Graph(n, frozenset(combinations(range(n), 2)))

    @staticmethod
    def path(n: int) -> "Graph":
        return Graph(n, frozenset((i, i + 1) for i in range(n - 1)))

    @staticmethod
    def cycle(n: int) -> "Graph":
        if n < 3:
            raise ValueError("cycle needs at least 3 vertices")
        edges = [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)]
        return Graph.from_edges(n, edges)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def has_edge(self, u: int, v: int) -> bool:
        return _norm_edge(u, v) in self.edges

    def vertices(self) -> range:
        return range(self.vertex_count)

    def is_forest(self) -> bool:
        parent = list(range(self.vertex_count))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True


@dataclass(frozen=True)
class OrderedGraph:
    """A graph with an arrival ordering, youngest vertex first."""

    graph: Graph
    ordering: tuple

    def __post_init__(self):
        if sorted(self.ordering) != list(range(self.graph.vertex_count)):
            raise ValueError("ordering is not a permutation of the vertex set")


@dataclass(frozen=True)
class CanonicalKey:
    """Injective byte encoding of an ordered-isomorphism class."""

    encoding: bytes


def oclass_of(og: OrderedGraph) -> OClass:
    """Positional normal form of an ordered graph (the canonical class)."""
    pos = {v: i for i, v in enumerate(og.ordering)}
    edges = frozenset(_norm_edge(pos[u], pos[v]) for u, v in og.graph.edges)
    return (og.graph.vertex_count, edges)


def oclass_to_ordered_graph(cls: OClass) -> OrderedGraph:
    """A representative ordered graph of a class (identity ordering)."""
    h, edges = cls
    return OrderedGraph(Graph(h, edges), tuple(range(h)))


def encode_oclass(cls: OClass) -> bytes:
    h, edges = cls
    body = ";".join(f"{a},{b}" for a, b in sorted(edges))
    return f"{h}|{body}".encode()


def canonical_key(og: OrderedGraph) -> CanonicalKey:
    """Key equal for ordered-isomorphic inputs, distinct otherwise."""
    return CanonicalKey(encode_oclass(oclass_of(og)))


def parent_oclass(cls: OClass) -> Optional[OClass]:
    """Delete the youngest vertex (position 0); None for the root."""
    h, edges = cls
    if h <= 1:
        return None
    return (h - 1, frozenset((a - 1, b - 1) for a, b in edges if a != 0))


def ancestor_oclass(cls: OClass, k: int) -> OClass:
    """Delete the ``k`` youngest vertices."""
    out: Optional[OClass] = cls
    for _ in range(k):
        assert out is not None
        out = parent_oclass(out)
    assert out is not None
    return out


@lru_cache(maxsize=None)
def restrict_oclass(cls: OClass, positions: frozenset, edge_sel: frozenset) -> OClass:
    """Normal form of the subgraph on ``positions`` with edges ``edge_sel``."""
    rank = {p: i for i, p in enumerate(sorted(positions))}
    return (len(positions), frozenset((rank[a], rank[b]) for a, b in edge_sel))


@lru_cache(maxsize=None)
def subclasses_with_youngest(cls: OClass) -> frozenset:
    """All classes of subgraphs containing the youngest vertex.

    Subgraphs range over every vertex subset containing position 0 combined
    with every subset of the edges induced on it; orderings are inherited.
    """
    h, edges = cls
    out = set()
    rest = list(range(1, h))
    for k in range(h):
        for others in combinations(rest, k):
            verts = frozenset((0,) + others)
            avail = [e for e in edges if e[0] in verts and e[1] in verts]
            for m in range(len(avail) + 1):
                for sel in combinations(avail, m):
                    out.add(restrict_oclass(cls, verts, frozenset(sel)))
    return frozenset(out)


KEY_ROOT: OClass = (1, frozenset())


@dataclass(frozen=True)
class SubgraphFamily:
    """All ordered-isomorphism classes of subgraphs of a target graph.

    Realizes the rooted tree whose nodes are the classes and whose parent
    map deletes the youngest vertex; the root is the single-vertex class.
    """

    target: Graph
    classes: frozenset  # of OClass
    induced_only: bool = False
    _children: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        kids: dict = {}
        for cls in self.classes:
            p = parent_oclass(cls)
            if p is not None:
                assert p in self.classes, "family not closed under youngest-vertex removal"
                kids.setdefault(p, set()).add(cls)
        object.__setattr__(self, "_children", {k: frozenset(v) for k, v in kids.items()})

    def __len__(self) -> int:
        return len(self.classes)

    def __contains__(self, cls: OClass) -> bool:
        return cls in self.classes

    def children_of(self, cls: OClass) -> frozenset:
        return self._children.get(cls, frozenset())

    def full_classes(self) -> frozenset:
        """Classes whose underlying graph is the whole target."""
        n = self.target.vertex_count
        e = self.target.edge_count
        return frozenset(c for c in self.classes if c[0] == n and len(c[1]) == e)


def enumerate_ordered_subgraphs(F: Graph, induced_only: bool = False) -> SubgraphFamily:
    """All ordered-isomorphism classes of subgraphs of ``F`` with >= 1 vertex."""
    if F.vertex_count < 2 or F.edge_count < 1:
        raise ValueError("target graph needs at least 2 vertices and 1 edge")
    classes: set = set()
    verts = list(F.vertices())
    for k in range(1, F.vertex_count + 1):
        for subset in combinations(verts, k):
            vs = set(subset)
            avail = [e for e in F.edges if e[0] in vs and e[1] in vs]
            if induced_only:
                edge_sets: list = [avail]
            else:
                edge_sets = [
                    list(sel)
                    for m in range(len(avail) + 1)
                    for sel in combinations(avail, m)
                ]
            for es in edge_sets:
                for order in permutations(subset):
                    pos = {v: i for i, v in enumerate(order)}
                    cls = (k, frozenset(_norm_edge(pos[u], pos[v]) for u, v in es))
                    classes.add(cls)
    return SubgraphFamily(F, frozenset(classes), induced_only)


def children(H_set: Iterable, family: SubgraphFamily) -> frozenset:
    """Classes outside ``H_set`` whose parent lies in it; root if empty."""
    members = frozenset(H_set)
    if not members:
        return frozenset({KEY_ROOT})
    assert members <= family.classes, "H_set must lie inside the family"
    out = set()
    for cls in members:
        for kid in family.children_of(cls):
            if kid not in members:
                out.add(kid)
    return frozenset(out)


def parse_graph_text(text: str) -> Graph:
    """Parse the edge-list format: header ``n m``, then ``m`` lines ``u v``.

    Lines starting with ``#`` and blank lines are ignored.
    """
    rows = [
        line.strip()
        for line in text.splitlines()
        if line.strip() and not line.strip().startswith("#")
    ]
    if not rows:
        raise ValueError("empty graph file")
    head = rows[0].split()
    if len(head) != 2:
        raise ValueError(f"bad header {rows[0]!r}, expected 'n m'")
    n, m = int(head[0]), int(head[1])
    if len(rows) - 1 != m:
        raise ValueError(f"header promises {m} edges, file has {len(rows) - 1}")
    edges = []
    for row in rows[1:]:
        parts = row.split()
        if len(parts) != 2:
            raise ValueError(f"bad edge line {row!r}")
        u, v = int(parts[0]), int(parts[1])
        if not (0 <= u < v < n):
            raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
        edges.append((u, v))
    g = Graph.from_edges(n, edges)
    if g.edge_count != m:
        raise ValueError("duplicate edges in file")
    return g


def load_graph(path: str) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_graph_text(fh.read())


def automorphism_count(G: Graph) -> int:
    """Order of the automorphism group, by brute force (small graphs only)."""
    edges = G.edges
    count = 0
    for perm in permutations(range(G.vertex_count)):
        if all(_norm_edge(perm[u], perm[v]) in edges for u, v in edges):
            count += 1
    return count


def find_ordered_copies(
    board,
    target: OClass,
    color: int,
    pinned: int,
    pending_edges: Optional[Sequence[int]] = None,
    existence_only: bool = False,
) -> list:
    """Embeddings of an ordered class into one color class of a board.

    The pinned vertex (the newest one) is the image of the youngest target
    vertex and is treated as hypothetically carrying ``color``.  Image
    arrival order must match the target ordering and every target edge must
    be present on the board.  ``pending_edges`` supplies the neighbor set of
    the pinned vertex when its edges are not yet part of the board.

    The board object must expose ``color_of(v)``, ``neighbors(v)`` and have
    vertices identified with arrival indices ``0 .. n-1``.
    """
    h, edges = target
    if pending_edges is not None:
        pin_nbrs = set(pending_edges)
    else:
        pin_nbrs = set(board.neighbors(pinned))

    older_constraints: list = [[] for _ in range(h)]  # edges to already-placed positions
    for a, b in edges:
        older_constraints[b].append(a)

    results: list = []
    image = [-1] * h
    image[0] = pinned
    same_color = [
        v for v in range(pinned) if board.color_of(v) == color
    ]  # ascending arrival

    def candidates(p: int) -> Iterator[int]:
        upper = image[p - 1]  # must be strictly older than the previous position
        needs_pin_edge = 0 in older_constraints[p]
        for v in same_color:
            if v >= upper:
                break
            if needs_pin_edge and v not in pin_nbrs:
                continue
            yield v

    def extend(p: int) -> bool:
        if p == h:
            results.append(tuple(image))
            return existence_only
        for v in candidates(p):
            ok = True
            for a in older_constraints[p]:
                if a == 0:
                    continue  # checked in candidates()
                if image[a] not in board.neighbors(v):
                    ok = False
                    break
            if ok:
                image[p] = v
                if extend(p + 1):
                    return True
                image[p] = -1
        return False

    extend(1)
    return results
