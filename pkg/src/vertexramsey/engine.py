"""The deterministic avoidance game: board, legality, and a minimax oracle.

Legality under the density restriction ``e(H)/v(H) <= d`` (equivalently the
generalized restriction with ``theta = 1/d`` and ``beta = 0``) is decided
exactly by a maximum-closure computation: the worst subgraph for a fixed
vertex set always takes all induced edges, and maximizing
``theta * e(S) - |S|`` over vertex sets is a project-selection problem
solved by one integer max-flow.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .graphs import Graph, find_ordered_copies
from .rationals import Rational


@dataclass(frozen=True)
class Move:
    """Attach a new vertex to this set of existing vertices."""

    neighbors: frozenset

    @staticmethod
    def of(vs: Iterable[int]) -> "Move":
        return Move(frozenset(vs))


@dataclass(frozen=True)
class GameConfig:
    F: Graph
    r: int
    density: Optional[Rational] = None
    theta: Optional[Rational] = None
    beta: Optional[Rational] = None

    def __post_init__(self):
        if (self.density is None) == (self.theta is None):
            raise ValueError("specify exactly one of density or (theta, beta)")
        if self.density is not None and self.density <= 0:
            raise ValueError("density must be positive")
        if self.theta is not None:
            if self.theta <= 0:
                raise ValueError("theta must be positive")
            if self.beta is None:
                raise ValueError("generalized restriction needs beta")

    def restriction(self) -> tuple:
        """The (theta, beta) form: density d maps to (1/d, 0)."""
        if self.density is not None:
            return (Fraction(1, 1) / self.density, Fraction(0))
        return (self.theta, self.beta)


class Board:
    """A growing vertex-colored board; vertex ids are arrival indices."""

    def __init__(self):
        self.colors: list = []
        self.adj: list = []
        self.edges: set = set()

    @property
    def n(self) -> int:
        return len(self.colors)

    def add_vertex(self, neighbors: Iterable[int], color: Optional[int] = None) -> int:
        v = self.n
        nbrs = set(neighbors)
        for u in nbrs:
            if not (0 <= u < v):
                raise ValueError(f"neighbor {u} does not exist yet")
        self.colors.append(color)
        self.adj.append(nbrs)
        for u in nbrs:
            self.adj[u].add(v)
            self.edges.add((u, v))
        return v

    def set_color(self, v: int, color: int):
        self.colors[v] = color

    def color_of(self, v: int) -> Optional[int]:
        return self.colors[v]

    def neighbors(self, v: int) -> set:
        return self.adj[v]

    def as_graph(self) -> Graph:
        return Graph(self.n, frozenset(self.edges))

    def copy(self) -> "Board":
        b = Board.__new__(Board)
        b.colors = list(self.colors)
        b.adj = [set(a) for a in self.adj]
        b.edges = set(self.edges)
        return b


# ---------------------------------------------------------------------------
# exact legality via integer max-flow (Dinic)


class _Dinic:
    def __init__(self, n: int):
        self.n = n
        self.head: list = [[] for _ in range(n)]
        self.to: list = []
        self.cap: list = []

    def add(self, u: int, v: int, c: int):
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(c)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)

    def maxflow(self, s: int, t: int) -> int:
        flow = 0
        INF = float("inf")
        while True:
            level = [-1] * self.n
            level[s] = 0
            queue = [s]
            for u in queue:
                for ei in self.head[u]:
                    v = self.to[ei]
                    if self.cap[ei] > 0 and level[v] < 0:
                        level[v] = level[u] + 1
                        queue.append(v)
            if level[t] < 0:
                return flow
            it = [0] * self.n

            def dfs(u: int, f):
                if u == t:
                    return f
                while it[u] < len(self.head[u]):
                    ei = self.head[u][it[u]]
                    v = self.to[ei]
                    if self.cap[ei] > 0 and level[v] == level[u] + 1:
                        d = dfs(v, min(f, self.cap[ei]))
                        if d > 0:
                            self.cap[ei] -= d
                            self.cap[ei ^ 1] += d
                            return d
                    it[u] += 1
                return 0

            while True:
                f = dfs(s, INF)
                if f == 0:
                    break
                flow += f


def _max_scaled_profit(
    n: int, edges: Iterable[tuple], edge_profit: int, vertex_cost: int,
    forced: Sequence[int] = (),
) -> int:
    """max over vertex sets S (containing ``forced``) of
    edge_profit * e(S) - vertex_cost * |S|, edges induced."""
    edges = list(edges)
    m = len(edges)
    net = _Dinic(2 + m + n)
    src, snk = 0, 1
    ev = 2  # edge nodes 2 .. 2+m-1, vertex nodes follow
    vn = 2 + m
    INF = edge_profit * m + vertex_cost * n + 1
    for i, (u, v) in enumerate(edges):
        net.add(src, ev + i, edge_profit)
        net.add(ev + i, vn + u, INF)
        net.add(ev + i, vn + v, INF)
    for v in range(n):
        net.add(vn + v, snk, vertex_cost)
    for v in forced:
        net.add(src, vn + v, INF)
    cut = net.maxflow(src, snk)
    return edge_profit * m - cut


def _closure_value(
    n: int, edges: list, theta: Rational, forced: Sequence[int] = ()
) -> Fraction:
    """max over S (⊇ forced) of theta * e(S) - |S|, exactly."""
    p, q = theta.numerator, theta.denominator
    best = _max_scaled_profit(n, edges, p, q, forced)
    return Fraction(best, q)


def legal(board: Board, move: Move, cfg: GameConfig) -> bool:
    """Would attaching a new vertex via ``move`` keep the board admissible?

    Assumes the current board is admissible.  For ``beta >= 0`` it suffices
    to bound subgraphs containing the new vertex (component additivity);
    for ``beta < 0`` the whole board is re-checked.
    """
    theta, beta = cfg.restriction()
    v = board.n
    edges = list(board.edges) + [(u, v) for u in sorted(move.neighbors)]
    if beta >= 0:
        val = _closure_value(v + 1, edges, theta, forced=(v,))
    else:
        val = max(
            _closure_value(v + 1, edges, theta, forced=(u,)) for u in range(v + 1)
        )
    return val <= -beta


def board_restriction_ok(board: Board, cfg: GameConfig) -> bool:
    """From-scratch check of the restriction over every nonempty subgraph."""
    theta, beta = cfg.restriction()
    if board.n == 0:
        return True
    best = None
    for v in range(board.n):
        val = _closure_value(board.n, list(board.edges), theta, forced=(v,))
        best = val if best is None else max(best, val)
    return best <= -beta


def min_mu_over_subgraphs(board: Board, theta: Rational, forced: Sequence[int] = ()) -> Fraction:
    """min over nonempty subgraphs (containing ``forced``) of v(H) - e(H)*theta."""
    if board.n == 0:
        raise ValueError("empty board has no nonempty subgraphs")
    if forced:
        return -_closure_value(board.n, list(board.edges), theta, forced=forced)
    best = None
    for v in range(board.n):
        val = -_closure_value(board.n, list(board.edges), theta, forced=(v,))
        best = val if best is None else min(best, val)
    return best


# ---------------------------------------------------------------------------
# monochromatic-copy detection


def detect_mono(board: Board, F: Graph, anchor: Optional[int] = None):
    """An embedding of ``F`` into one color class, or None.

    With ``anchor`` given, only embeddings containing that vertex are sought
    (incremental use: the anchor is the newest vertex).
    """
    fverts = sorted(F.vertices(), key=lambda u: -F.degree(u))
    colors = set(c for c in board.colors if c is not None)
    for color in colors:
        pool = [v for v in range(board.n) if board.colors[v] == color]
        if anchor is not None and board.colors[anchor] != color:
            continue
        if len(pool) < F.vertex_count:
            continue
        image: dict = {}
        used: set = set()

        def extend(idx: int):
            if idx == len(fverts):
                return dict(image)
            u = fverts[idx]
            for cand in pool:
                if cand in used:
                    continue
                ok = True
                for x, y in F.edges:
                    if u == x and y in image and image[y] not in board.adj[cand]:
                        ok = False
                        break
                    if u == y and x in image and image[x] not in board.adj[cand]:
                        ok = False
                        break
                if ok:
                    image[u] = cand
                    used.add(cand)
                    res = extend(idx + 1)
                    if res is not None:
                        if anchor is None or anchor in res.values():
                            return res
                    del image[u]
                    used.discard(cand)
            return None

        found = extend(0)
        if found is not None:
            return found
    return None


def coloring_completes_mono(
    board: Board, pending: int, pending_edges: Sequence[int], color: int, F: Graph,
    full_classes,
) -> bool:
    """Would giving the pending vertex this color complete a copy of F?"""
    for cls in full_classes:
        if find_ordered_copies(
            board, cls, color, pending, pending_edges=pending_edges, existence_only=True
        ):
            return True
    return False


# ---------------------------------------------------------------------------
# canonical keys for colored boards (isomorphism pruning)


def _refine(colors: Sequence, adjacency: Sequence[set], n: int) -> list:
    sig = [(-1 if colors[v] is None else colors[v], len(adjacency[v])) for v in range(n)]
    labels = {s: i for i, s in enumerate(sorted(set(sig)))}
    cell = [labels[sig[v]] for v in range(n)]
    while True:
        new_sig = [
            (cell[v], tuple(sorted(cell[u] for u in adjacency[v]))) for v in range(n)
        ]
        labels = {s: i for i, s in enumerate(sorted(set(new_sig)))}
        new_cell = [labels[new_sig[v]] for v in range(n)]
        if new_cell == cell:
            return cell
        cell = new_cell


def canonical_board_key(board: Board, r: int) -> bytes:
    """Canonical encoding up to vertex relabeling and color permutation.

    An uncolored (pending) vertex keeps its special status.  Exhaustive
    search within refinement cells keeps this exact.
    """
    n = board.n
    best = None
    present = sorted(set(c for c in board.colors if c is not None))
    for perm in itertools.permutations(range(r), len(present)):
        remap = dict(zip(present, perm))
        colors = [None if c is None else remap[c] for c in board.colors]
        cell = _refine(colors, board.adj, n)
        order = sorted(range(n), key=lambda v: (cell[v], v))
        groups: list = []
        for v in order:
            if groups and cell[groups[-1][0]] == cell[v]:
                groups[-1].append(v)
            else:
                groups.append([v])

        def candidates():
            for parts in itertools.product(*[itertools.permutations(g) for g in groups]):
                seq = [v for part in parts for v in part]
                pos = {v: i for i, v in enumerate(seq)}
                ec = tuple(
                    sorted(tuple(sorted((pos[u], pos[v]))) for u, v in board.edges)
                )
                cc = tuple(-1 if colors[v] is None else colors[v] for v in seq)
                yield (cc, ec)

        cand = min(candidates())
        if best is None or cand < best:
            best = cand
    return repr(best).encode()


# ---------------------------------------------------------------------------
# exhaustive minimax


class ResourceBudgetExceeded(RuntimeError):
    pass


@dataclass
class OracleResult:
    builder_wins: bool
    principal_variation: list = field(default_factory=list)  # (neighbors, color)


def solve_game_exhaustive(
    cfg: GameConfig, max_steps: int, node_budget: int = 2_000_000
) -> OracleResult:
    """Full minimax: Builder move subsets x Painter colors, memoized on
    canonical colored boards.  Builder wins iff he can force a monochromatic
    copy of the target within ``max_steps`` vertex additions."""
    F = cfg.F
    from .graphs import enumerate_ordered_subgraphs

    family = enumerate_ordered_subgraphs(F)
    full_classes = family.full_classes()
    memo: dict = {}
    nodes = 0

    def builder_turn(board: Board, steps: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise ResourceBudgetExceeded(f"minimax node budget {node_budget} exceeded")
        if steps == 0:
            return False
        key = (canonical_board_key(board, cfg.r), steps)
        hit = memo.get(key)
        if hit is not None:
            return hit
        result = False
        seen_moves: set = set()
        for size in range(board.n + 1):
            for nbrs in itertools.combinations(range(board.n), size):
                move = Move.of(nbrs)
                if not legal(board, move, cfg):
                    continue
                nb = board.copy()
                v = nb.add_vertex(nbrs)
                mkey = canonical_board_key(nb, cfg.r)
                if mkey in seen_moves:
                    continue
                seen_moves.add(mkey)
                painter_escapes = False
                for color in range(cfg.r):
                    if coloring_completes_mono(nb, v, list(nbrs), color, F, full_classes):
                        continue
                    nb2 = nb.copy()
                    nb2.set_color(v, color)
                    if not builder_turn(nb2, steps - 1):
                        painter_escapes = True
                        break
                if not painter_escapes:
                    result = True
                    break
            if result:
                break
        memo[key] = result
        return result

    won = builder_turn(Board(), max_steps)
    return OracleResult(won)


def random_legal_move(board: Board, cfg: GameConfig, rng, tries: int = 8,
                      max_degree: int = 5) -> Move:
    """A random legal attachment: small random neighbor sets are sampled and
    the first legal one is played; an isolated vertex is the fallback (always
    legal under a density restriction)."""
    n = board.n
    for _ in range(tries):
        k = rng.randint(0, min(n, max_degree))
        nbrs = rng.sample(range(n), k) if k else []
        move = Move.of(nbrs)
        if legal(board, move, cfg):
            return move
    move = Move.of([])
    if not legal(board, move, cfg):
        raise ValueError("even an isolated vertex is illegal under this restriction")
    return move


def density_candidates(max_steps: int) -> list:
    """Board densities e/v realizable within the step budget."""
    vals = set()
    for v in range(1, max_steps + 1):
        for e in range(1, v * (v - 1) // 2 + 1):
            vals.add(Fraction(e, v))
    return sorted(vals)


def min_winning_density(
    F: Graph, r: int, max_steps: int, node_budget: int = 2_000_000
) -> Rational:
    """Least candidate density at which Builder wins the bounded game.

    Builder wins are monotone in the allowance, so binary search over the
    candidate densities locates the threshold with few oracle calls.
    """
    cands = density_candidates(max_steps)
    lo, hi = 0, len(cands) - 1
    if not solve_game_exhaustive(
        GameConfig(F, r, density=cands[hi]), max_steps, node_budget
    ).builder_wins:
        raise ValueError("Builder never wins within this step budget")
    while lo < hi:
        mid = (lo + hi) // 2
        cfg = GameConfig(F, r, density=cands[mid])
        if solve_game_exhaustive(cfg, max_steps, node_budget).builder_wins:
            hi = mid
        else:
            lo = mid + 1
    return cands[lo]
