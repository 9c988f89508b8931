"""Graph core: ordered classes, family enumeration, copy detection, parsing."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vertexramsey.engine import Board
from vertexramsey.graphs import (
    Graph,
    OrderedGraph,
    automorphism_count,
    canonical_key,
    children,
    encode_oclass,
    enumerate_ordered_subgraphs,
    find_ordered_copies,
    oclass_of,
    parent_oclass,
    parse_graph_text,
    restrict_oclass,
    subclasses_with_youngest,
)


def test_family_sizes():
    # counts established by independent brute-force enumeration of ordered
    # subgraphs up to order-preserving isomorphism
    assert len(enumerate_ordered_subgraphs(Graph.from_edges(2, [(0, 1)]))) == 3
    assert len(enumerate_ordered_subgraphs(Graph.complete(3))) == 11
    assert len(enumerate_ordered_subgraphs(Graph.path(3))) == 10
    assert len(enumerate_ordered_subgraphs(Graph.path(4))) == 44
    assert len(enumerate_ordered_subgraphs(Graph.complete(4))) == 75


def test_family_closed_under_parent():
    fam = enumerate_ordered_subgraphs(Graph.path(4))
    for cls in fam.classes:
        par = parent_oclass(cls)
        if par is not None:
            assert par in fam.classes


def test_full_classes_are_permutations_of_target():
    F = Graph.complete(3)
    fam = enumerate_ordered_subgraphs(F)
    full = fam.full_classes()
    # K3 is vertex-transitive: a single ordered class of full copies
    assert len(full) == 1
    (cls,) = full
    assert cls[0] == 3 and len(cls[1]) == 3
    # P3 has three: the centre vertex can sit at any arrival position
    assert len(enumerate_ordered_subgraphs(Graph.path(3)).full_classes()) == 3


def test_children_extend_by_one_vertex():
    F = Graph.complete(3)
    fam = enumerate_ordered_subgraphs(F)
    assert children([], fam) == frozenset({(1, frozenset())})
    ch = children([(1, frozenset())], fam)
    assert all(cls[0] == 2 for cls in ch)
    # every child's parent lies in the given set
    H = {(1, frozenset()), (2, frozenset())}
    for cls in children(H, fam):
        assert parent_oclass(cls) in H


def test_induced_only_is_subfamily():
    F = Graph.path(4)
    fam = enumerate_ordered_subgraphs(F)
    ind = enumerate_ordered_subgraphs(F, induced_only=True)
    assert ind.classes <= fam.classes
    assert len(ind) < len(fam)


def test_restrict_and_subclasses():
    # triangle class restricted to two positions keeping one edge
    tri = (3, frozenset({(0, 1), (0, 2), (1, 2)}))
    sub = restrict_oclass(tri, frozenset({0, 2}), frozenset({(0, 2)}))
    assert sub == (2, frozenset({(0, 1)}))
    subs = subclasses_with_youngest(tri)
    assert (1, frozenset()) in subs
    assert all(0 in {p for e in cls[1] for p in e} or cls[0] >= 1 for cls in subs)


def test_canonical_key_order_respecting():
    # relabelled ordered graphs with the same arrival pattern share a key
    a = OrderedGraph(Graph.from_edges(3, [(0, 1), (1, 2)]), (0, 1, 2))
    b = OrderedGraph(Graph.from_edges(3, [(0, 2), (1, 2)]), (1, 2, 0))
    assert oclass_of(a) == oclass_of(b)
    assert canonical_key(a) == canonical_key(b)
    # centre arriving first is a different class
    c = OrderedGraph(Graph.from_edges(3, [(0, 1), (1, 2)]), (1, 0, 2))
    assert oclass_of(c) != oclass_of(a)
    assert canonical_key(c) != canonical_key(a)


def test_automorphism_count():
    assert automorphism_count(Graph.complete(3)) == 6
    assert automorphism_count(Graph.path(3)) == 2
    assert automorphism_count(Graph.cycle(4)) == 8


def test_parse_graph_text_roundtrip():
    g = parse_graph_text("# a comment\n3 2\n0 1\n1 2\n")
    assert g.vertex_count == 3 and g.edge_count == 2 and g.has_edge(1, 2)
    with pytest.raises(ValueError):
        parse_graph_text("3 1\n2 5\n")
    with pytest.raises(ValueError):
        parse_graph_text("3 2\n0 1\n")


def brute_force_copies(board, target, color, pinned, pending_edges=None):
    """Reference implementation: try all injections position -> vertex.

    The pinned vertex is treated as if it carried ``color`` regardless of
    its actual color (matching the pending-vertex use of the fast search).
    """
    from itertools import permutations

    h, edges = target
    verts = [v for v in range(board.n) if board.color_of(v) == color or v == pinned]
    arrival = {v: v for v in verts}
    adj = {v: set(board.neighbors(v)) for v in verts}
    if pending_edges is not None:
        if board.n not in verts:
            verts.append(board.n)
            arrival[board.n] = board.n
        adj[board.n] = set(pending_edges)
        for u in pending_edges:
            adj.setdefault(u, set(board.neighbors(u))).add(board.n)
    out = set()
    pool = [v for v in verts if v != pinned]
    for rest in permutations(pool, h - 1):
        emb = (pinned,) + rest
        # position 0 is youngest: arrivals strictly decrease along positions
        if any(arrival[emb[i]] <= arrival[emb[j]] for i in range(h) for j in range(i + 1, h)):
            continue
        if all(emb[b] in adj.get(emb[a], set()) for a, b in edges):
            out.add(emb)
    return out


def test_find_ordered_copies_matches_brute_force():
    rng = random.Random(5)
    F = Graph.path(3)
    fam = enumerate_ordered_subgraphs(F)
    for trial in range(25):
        board = Board()
        for _ in range(10):
            k = rng.randrange(0, min(3, board.n) + 1)
            nbrs = sorted(rng.sample(range(board.n), k)) if board.n else []
            board.add_vertex(nbrs, rng.randrange(2))
        for cls in fam.classes:
            for color in range(2):
                for pinned in range(board.n):
                    got = set(map(tuple, find_ordered_copies(board, cls, color, pinned)))
                    want = brute_force_copies(board, cls, color, pinned)
                    assert got == want, (cls, color, pinned)


def test_find_ordered_copies_pending_vertex():
    board = Board()
    a = board.add_vertex([], 0)
    b = board.add_vertex([a], 0)
    cls = (3, frozenset({(0, 1), (0, 2)}))  # new vertex joined to both older
    got = find_ordered_copies(board, cls, 0, board.n, pending_edges=[a, b])
    assert got, "pending vertex adjacent to both must complete the class"
    got = find_ordered_copies(board, cls, 0, board.n, pending_edges=[b])
    assert not got


@given(st.integers(2, 5), st.data())
@settings(max_examples=30, deadline=None)
def test_encode_oclass_injective_on_family(n, data):
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = data.draw(st.sets(st.sampled_from(pairs), min_size=1))
    fam = enumerate_ordered_subgraphs(Graph.from_edges(n, sorted(edges)))
    encs = {encode_oclass(c) for c in fam.classes}
    assert len(encs) == len(fam.classes)
