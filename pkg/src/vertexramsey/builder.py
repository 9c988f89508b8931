"""Builder's side: the abstract construction game driven by weight-computation
lookaheads, the dominating-color search, and the pigeonhole translation of an
abstract strategy tree into a concrete-game move plan.

In the abstract game Builder grows a list of r-colored graphs.  Each step
takes the disjoint union of previously listed graphs, attaches one new vertex,
and lets the painter color it; Builder wins when a listed graph contains a
monochromatic copy of the target.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .engine import Board, min_mu_over_subgraphs
from .graphs import (
    Graph,
    OClass,
    enumerate_ordered_subgraphs,
    parent_oclass,
)
from .rationals import Rational
from .weights import _partner_class, cw_full, pad_alpha

# painter callable: (board without the new vertex, its future neighbor list) -> color
AbstractPainter = Callable[[Board, Sequence[int]], int]


@dataclass
class ListedGraph:
    """One entry of the abstract list: an r-colored graph with a designated
    central monochromatic copy of an ordered subgraph class of the target."""

    index: int
    board: Board
    central_cls: OClass
    central_color: int
    central_embedding: tuple  # class position -> board vertex, position 0 youngest


@dataclass(frozen=True)
class AbstractMove:
    indices: tuple  # list indices of the graphs put in the union
    attachments: dict  # index -> tuple of local vertex ids the new vertex joins


@dataclass
class SessionResult:
    won: bool
    steps: int
    rounds: int
    alpha: tuple
    listed: list
    g_families: list = field(default_factory=list)  # per color: set of OClass
    winning_index: Optional[int] = None


class StepBudgetExceeded(AssertionError):
    pass


def find_dominating_color(f: dict, x_sets: Sequence) -> int:
    """Given a full coloring ``f`` of the product X_1 x ... x X_r, a color
    sigma such that every element of X_sigma appears as the sigma-component
    of some tuple colored sigma.  Lowest qualifying index; existence is
    guaranteed (pigeonhole over the product)."""
    r = len(x_sets)
    for sigma in range(r):
        if all(
            any(t[sigma] == x and c == sigma for t, c in f.items())
            for x in x_sets[sigma]
        ):
            return sigma
    raise AssertionError("no dominating color exists; coloring map is inconsistent")


def _neighbor_positions(cls: OClass) -> tuple:
    """Positions adjacent to the youngest position of the class."""
    _, edges = cls
    return tuple(sorted(b for a, b in edges if a == 0))


def _partner_position_map(k: int, h: int) -> dict:
    """Position map from a class to its k-partner (the reordering that the
    secondary-threat rule relies on)."""

    def move(p: int) -> int:
        if p == k:
            return 0
        if p < k:
            return p + 1
        return p

    return {p: move(p) for p in range(h)}


def abuild_session(
    F: Graph,
    r: int,
    theta: Rational,
    painter: AbstractPainter,
    beta: Rational = Fraction(0),
    check_legality: bool = True,
    family=None,
) -> SessionResult:
    """Drive the abstract game to a forced monochromatic copy of the target.

    Per round, runs the weight computation one color ahead for each color to
    obtain the threat batches, performs every construction in the product of
    the current batches, extracts a dominating color from the painter's
    replies, and records that color as the round's realized entry.
    """
    if family is None:
        family = enumerate_ordered_subgraphs(F)
    size = len(family)
    budget = r * r * size ** (r + 2)
    full_classes = family.full_classes()

    lookahead_cache: dict = {}

    def lookahead(alpha_prefix: tuple, s: int):
        key = (alpha_prefix, s)
        if key not in lookahead_cache:
            alpha_full = pad_alpha(alpha_prefix + (s,), r, family)
            _, traces = cw_full(F, r, theta, alpha_full, family=family,
                                check_invariants=False)
            lookahead_cache[key] = traces
        return lookahead_cache[key]

    g_maps: list = [dict() for _ in range(r)]  # OClass -> ListedGraph
    g_fams: list = [set() for _ in range(r)]
    listed: list = []
    alpha: tuple = ()
    steps = 0
    rounds = 0
    winning_index = None

    def construct(tuple_classes: tuple) -> ListedGraph:
        """One construction step for a choice of one class per color."""
        nonlocal steps, winning_index
        steps += 1
        if steps > budget:
            raise StepBudgetExceeded(f"abstract step budget {budget} exceeded")
        board = Board()
        nbrs: list = []
        used_indices = []
        attachments: dict = {}
        potential: dict = {}
        for s, cls in enumerate(tuple_classes):
            h, _ = cls
            if h < 2:
                potential[s] = (cls, None)  # the new vertex alone
                continue
            par = parent_oclass(cls)
            parent_graph = g_maps[s][par]
            offset = board.n
            for v in range(parent_graph.board.n):
                board.add_vertex(
                    [u + offset for u in parent_graph.board.neighbors(v) if u < v],
                    color=parent_graph.board.color_of(v),
                )
            emb = tuple(x + offset for x in parent_graph.central_embedding)
            locs = []
            for b in _neighbor_positions(cls):
                locs.append(emb[b - 1])  # parent positions shift down by one
            nbrs.extend(locs)
            used_indices.append(parent_graph.index)
            attachments[parent_graph.index] = tuple(locs)
            potential[s] = (cls, emb)
        color = painter(board, list(dict.fromkeys(nbrs)))
        if not (0 <= color < r):
            raise ValueError(f"painter returned invalid color {color}")
        v = board.add_vertex(dict.fromkeys(nbrs), color=color)
        cls, emb = potential[color]
        embedding = (v,) if emb is None else (v,) + emb
        lg = ListedGraph(
            index=len(listed),
            board=board,
            central_cls=cls,
            central_color=color,
            central_embedding=embedding,
        )
        listed.append(lg)
        if check_legality:
            mu = min_mu_over_subgraphs(board, theta)
            if not mu >= beta:
                raise AssertionError(
                    f"listed graph {lg.index} violates the restriction: "
                    f"min mu = {mu} < {beta}"
                )
        if winning_index is None and cls in full_classes:
            winning_index = lg.index
        return lg

    while True:
        rounds += 1
        traces_per_color = [lookahead(alpha, s) for s in range(r)]
        round_traces = [traces_per_color[s][rounds - 1] for s in range(r)]
        jmax = [len(t.primary_sets) for t in round_traces]
        j = [1] * r
        sigma_exit = None
        while True:
            batches = [
                sorted(round_traces[s].primary_sets[j[s] - 1], key=repr)
                for s in range(r)
            ]
            prod_size = 1
            for b in batches:
                prod_size *= len(b)
            assert prod_size <= size ** r, "product loop exceeds its bound"
            replies: dict = {}
            results: dict = {}
            for combo in itertools.product(*batches):
                lg = construct(combo)
                replies[combo] = lg.central_color
                results[combo] = lg
            sigma_hat = find_dominating_color(replies, batches)
            for cls in batches[sigma_hat]:
                for combo in itertools.product(*batches):
                    if combo[sigma_hat] == cls and replies[combo] == sigma_hat:
                        g_maps[sigma_hat][cls] = results[combo]
                        break
            g_fams[sigma_hat].update(batches[sigma_hat])
            for k, sec in enumerate(
                round_traces[sigma_hat].secondary_sets[j[sigma_hat] - 1], start=1
            ):
                for cls in sec:
                    partner = _partner_class(cls, k)
                    src = g_maps[sigma_hat][partner]
                    pmap = _partner_position_map(k, cls[0])
                    emb = tuple(
                        src.central_embedding[pmap[p]] for p in range(cls[0])
                    )
                    g_maps[sigma_hat][cls] = ListedGraph(
                        index=src.index,
                        board=src.board,
                        central_cls=cls,
                        central_color=sigma_hat,
                        central_embedding=emb,
                    )
                g_fams[sigma_hat].update(sec)
            j[sigma_hat] += 1
            if j[sigma_hat] > jmax[sigma_hat]:
                sigma_exit = sigma_hat
                break
        alpha = alpha + (sigma_exit,)
        if any(g_fams[s] & full_classes for s in range(r)):
            break
        assert rounds <= r * size, "round budget exceeded"

    return SessionResult(
        won=True,
        steps=steps,
        rounds=rounds,
        alpha=alpha,
        listed=listed,
        g_families=[frozenset(f) for f in g_fams],
        winning_index=winning_index,
    )


def family_correspondence_holds(
    F: Graph, r: int, theta: Rational, result: SessionResult, family=None
) -> bool:
    """The per-color key families collected by a session contain the families
    grown by the weight computation on the realized color sequence."""
    if family is None:
        family = enumerate_ordered_subgraphs(F)
    alpha = pad_alpha(result.alpha, r, family)
    _, traces = cw_full(F, r, theta, alpha, family=family, check_invariants=False)
    h_fams: list = [set() for _ in range(r)]
    for t in traces[: result.rounds]:
        s = alpha[t.index - 1]
        for batch in t.primary_sets:
            h_fams[s].update(batch)
        for secs in t.secondary_sets:
            for sec in secs:
                h_fams[s].update(sec)
    return all(h_fams[s] <= set(result.g_families[s]) for s in range(r))


# ---------------------------------------------------------------------------
# painter adapters


def make_random_painter(rng, r: int) -> AbstractPainter:
    return lambda board, nbrs: rng.randrange(r)


def make_greedy_painter(F: Graph, r: int) -> AbstractPainter:
    from .painter import greedy_decide

    targets = [F] * r
    return lambda board, nbrs: greedy_decide(board, nbrs, targets)


def make_priority_painter(plist) -> AbstractPainter:
    from .painter import paint_decide

    return lambda board, nbrs: paint_decide(board, nbrs, plist)


# ---------------------------------------------------------------------------
# strategy-tree translation (pigeonhole multiplicities)


@dataclass
class StrategyNode:
    """A node of an abstract strategy tree: the next construction step, and
    one child per painter color.  Leaves (move None) mark a won position."""

    move: Optional[AbstractMove] = None
    children: Optional[tuple] = None


@dataclass
class MultiplicitySchedule:
    """Per tree node (keyed by the color path from the root): the copy
    requirements f_b and the repetition count of the node's step."""

    f: dict = field(default_factory=dict)  # path -> {index: count}
    repeats: dict = field(default_factory=dict)  # path -> int
    max_total_steps: int = 0


def translate_strategy(
    root: StrategyNode, r: int, max_depth: int = 6
) -> MultiplicitySchedule:
    """Bottom-up copy counts: a leaf needs one copy of its last graph; an
    internal node needs the per-child maximum, plus — for the graphs its own
    step consumes — one copy per repetition of the step."""
    sched = MultiplicitySchedule()

    def walk(node: StrategyNode, t: int, path: tuple) -> dict:
        if t > max_depth:
            raise ValueError(f"strategy tree deeper than {max_depth}")
        if node.move is None:
            fb = {i: (1 if i == t else 0) for i in range(1, t + 1)}
            sched.f[path] = fb
            sched.repeats[path] = 0
            return fb
        if node.children is None or len(node.children) != r:
            raise ValueError("internal node must have one child per color")
        child_f = [walk(node.children[s], t + 1, path + (s,)) for s in range(r)]
        reps = sum(child_f[s][t + 1] for s in range(r))
        fb = {}
        for i in range(1, t + 1):
            fb[i] = max(child_f[s][i] for s in range(r))
            if i in node.move.indices:
                fb[i] += reps
        sched.f[path] = fb
        sched.repeats[path] = reps
        return fb

    walk(root, 0, ())

    def total(node: StrategyNode, path: tuple) -> int:
        if node.move is None:
            return 0
        return sched.repeats[path] + max(
            total(node.children[s], path + (s,)) for s in range(r)
        )

    sched.max_total_steps = total(root, ())
    return sched


def execute_translated(
    root: StrategyNode,
    sched: MultiplicitySchedule,
    r: int,
    painter: AbstractPainter,
) -> tuple:
    """Play the translated plan in the concrete game against a painter.

    Returns (board, steps).  Pools of unused isolated copies are tracked per
    abstract-list index; pigeonhole guarantees the required copies exist at
    every node.
    """
    board = Board()
    # pool[i] = list of vertex maps (abstract local id -> board vertex)
    pools: dict = {}
    # local-vertex layout of abstract graph i: graphs i in X listed in
    # ascending index order, then the new vertex as the highest local id.
    sizes: dict = {}
    steps = 0

    node, t, path = root, 0, ()
    while node.move is not None:
        move = node.move
        union_size = sum(sizes[i] for i in move.indices)
        reps = sched.repeats[path]
        outcomes: dict = {s: [] for s in range(r)}
        for _ in range(reps):
            vmap: dict = {}
            base = 0
            nbrs = []
            for i in sorted(move.indices):
                copy_map = pools[i].pop()
                for local, bv in copy_map.items():
                    vmap[base + local] = bv
                nbrs.extend(copy_map[a] for a in move.attachments[i])
                base += sizes[i]
            color = painter(board, nbrs)
            v = board.add_vertex(nbrs, color=None)
            board.set_color(v, color)
            vmap[union_size] = v
            steps += 1
            outcomes[color].append(vmap)
        sizes[t + 1] = union_size + 1
        needed = {s: sched.f[path + (s,)].get(t + 1, 0) for s in range(r)}
        sigma = next(s for s in range(r) if len(outcomes[s]) >= needed[s])
        pools[t + 1] = outcomes[sigma]
        node, t, path = node.children[sigma], t + 1, path + (sigma,)
    return board, steps
