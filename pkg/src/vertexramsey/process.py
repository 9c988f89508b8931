"""Online coloring of a random graph under vertex exposure, with Monte-Carlo
survival sweeps over the edge probability.

Vertices arrive one by one; each back-edge to an older vertex appears
independently with probability p.  The painter colors each vertex on arrival
and the trial fails at the first monochromatic copy of the target.

Threat detection must stay cheap on boards with thousands of vertices, so the
board keeps, per color and ordered subgraph class, a monotone flag saying
whether a copy exists anywhere.  A copy completed by the newest vertex is then
found by searching only through that vertex's neighborhood: positions reachable
from the youngest position follow board edges, isolated positions reduce to
counting same-colored vertices in an arrival interval, and classes whose
youngest position is isolated reduce to the parent class's flag.
"""

from __future__ import annotations

import bisect
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import log
from typing import Callable, Optional, Sequence

import numpy as np

from .graphs import (
    Graph,
    OClass,
    enumerate_ordered_subgraphs,
    find_ordered_copies,
    parent_oclass,
)
from .painter import PriorityList
from .rationals import is_finite


@dataclass(frozen=True)
class ProcessConfig:
    n: int
    p: float
    F: Graph
    r: int
    seed: int
    trials: int = 1

    def __post_init__(self):
        if not (0 <= self.p <= 1):
            raise ValueError("p must be a probability")
        if self.n < 1 or self.trials < 1:
            raise ValueError("n and trials must be positive")


@dataclass
class SweepRow:
    n: int
    p_exponent: Optional[float]
    p: float
    trials: int
    survivals: int

    @property
    def rate(self) -> float:
        return self.survivals / self.trials


@dataclass
class SweepResult:
    F: Graph
    r: int
    seed: int
    rows: list = field(default_factory=list)  # ascending p

    def to_csv(self) -> str:
        lines = ["n,p_exponent,p,trials,survivals,rate"]
        for row in self.rows:
            exp = "" if row.p_exponent is None else repr(row.p_exponent)
            lines.append(
                f"{row.n},{exp},{row.p!r},{row.trials},{row.survivals},{row.rate!r}"
            )
        return "\n".join(lines) + "\n"


class ExposureBoard:
    """Board specialized for the exposure process: adjacency, per-color
    arrival lists, and monotone per-class presence flags."""

    def __init__(self, F: Graph, r: int):
        self.family = enumerate_ordered_subgraphs(F)
        self.r = r
        self.colors: list = []
        self.adj: list = []
        self.by_color: list = [[] for _ in range(r)]  # ascending arrivals
        self.flags: list = [dict() for _ in range(r)]  # OClass -> bool
        self.classes = sorted(self.family.classes, key=lambda c: (c[0], sorted(c[1])))
        self.full_classes = self.family.full_classes()
        # positions reachable from position 0 along class edges; None marks
        # classes needing the generic fallback search
        self._plans: dict = {cls: _anchored_plan(cls) for cls in self.classes}
        for d in self.flags:
            for cls in self.classes:
                d[cls] = False

    @property
    def n(self) -> int:
        return len(self.colors)

    def color_of(self, v: int) -> Optional[int]:
        return self.colors[v]

    def neighbors(self, v: int) -> set:
        return self.adj[v]

    def anchored_present(self, cls: OClass, color: int, nbrs: Sequence[int]) -> bool:
        """Would coloring the pending vertex (arrival index n) with ``color``
        complete a copy of the class with the pending vertex youngest?"""
        h, _ = cls
        if h == 1:
            return True
        plan = self._plans[cls]
        if plan is None:
            return bool(
                find_ordered_copies(
                    self, cls, color, self.n, pending_edges=list(nbrs),
                    existence_only=True,
                )
            )
        if plan == "parent-flag":
            return self.flags[color][parent_oclass(cls)]
        return self._search(cls, plan, color, set(nbrs))

    def _search(self, cls: OClass, plan: tuple, color: int, pin_nbrs: set) -> bool:
        order, isolated = plan
        h, edges = cls
        arrivals = self.by_color[color]
        image = {0: self.n}

        def order_ok(p: int, u: int) -> bool:
            for q, x in image.items():
                if q < p and not (x > u):
                    return False
                if q > p and not (x < u):
                    return False
            return True

        def isolated_ok() -> bool:
            # positions not reachable from 0 are edge-free: each run between
            # consecutive placed positions needs enough same-colored vertices
            # strictly inside the corresponding arrival interval
            placed = sorted(image)  # position indices, ascending = younger first
            runs: list = []
            for p in isolated:
                i = bisect.bisect_left(placed, p)
                lo_pos = placed[i - 1]  # exists: position 0 is always placed
                hi_pos = placed[i] if i < len(placed) else None
                runs.append((lo_pos, hi_pos))
            need = Counter(runs)
            for (lo_pos, hi_pos), count in need.items():
                upper = image[lo_pos]  # arrivals inside the run are older
                lower = image[hi_pos] if hi_pos is not None else -1
                have = bisect.bisect_left(arrivals, upper) - bisect.bisect_right(
                    arrivals, lower
                )
                if have < count:
                    return False
            return True

        def extend(idx: int) -> bool:
            if idx == len(order):
                return isolated_ok()
            p, anchor = order[idx]
            base = image[anchor]
            pool = pin_nbrs if anchor == 0 else self.adj[base]
            needs_pin = (0, p) in edges or (p, 0) in edges
            for u in pool:
                if u >= self.n or self.colors[u] != color:
                    continue
                if needs_pin and u not in pin_nbrs:
                    continue
                ok = True
                for a, b in edges:
                    if a == p and b in image and image[b] not in self.adj[u]:
                        ok = False
                        break
                    if b == p and a in image and a != 0 and image[a] not in self.adj[u]:
                        ok = False
                        break
                if ok and order_ok(p, u):
                    image[p] = u
                    if extend(idx + 1):
                        return True
                    del image[p]
            return False

        return extend(0)

    def add_vertex(self, nbrs: Sequence[int], color: int) -> tuple:
        """Add the pending vertex with its color; returns the newly realized
        classes of that color (empty when nothing new appeared)."""
        v = self.n
        new = []
        for cls in self.classes:
            if not self.flags[color][cls] and self.anchored_present(cls, color, nbrs):
                new.append(cls)
        nbr_set = set(nbrs)
        self.colors.append(color)
        self.adj.append(nbr_set)
        for u in nbr_set:
            self.adj[u].add(v)
        self.by_color[color].append(v)
        for cls in new:
            self.flags[color][cls] = True
        return tuple(new)

    def mono_target_present(self) -> bool:
        return any(
            self.flags[s][cls] for s in range(self.r) for cls in self.full_classes
        )


def _anchored_plan(cls: OClass):
    """Search plan for a class: BFS order of the positions reachable from the
    youngest one (each paired with an already-placed neighbor to draw
    candidates from), plus the list of isolated positions.  None when some
    edge lies in a component away from the youngest position (generic search
    required)."""
    h, edges = cls
    if h == 1:
        return ((), ())
    adj = {p: set() for p in range(h)}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    if not adj[0]:
        return "parent-flag"
    seen = {0}
    order = []
    queue = [0]
    while queue:
        q = queue.pop(0)
        for p in sorted(adj[q]):
            if p not in seen:
                seen.add(p)
                order.append((p, q))
                queue.append(p)
    rest = [p for p in range(h) if p not in seen]
    if any(adj[p] for p in rest):
        return None
    return (tuple(order), tuple(rest))


# painter callable: (board, pending neighbor list) -> color
ProcessPainter = Callable[[ExposureBoard, Sequence[int]], int]


def fast_priority_painter(plist: PriorityList) -> ProcessPainter:
    """The priority-list strategy evaluated through the board's anchored fast
    search (same decisions as the generic one, tested for agreement)."""
    r = plist.r

    def worst(board: ExposureBoard, nbrs: Sequence[int], color: int):
        lam = None
        flagged = False
        for e in plist.by_color[color]:
            if lam is not None and e.lam != lam:
                break
            if board.anchored_present(e.cls, color, nbrs):
                lam = e.lam
                flagged = flagged or e.flagged
        return lam, flagged

    def decide(board: ExposureBoard, nbrs: Sequence[int]) -> int:
        info = [worst(board, nbrs, s) for s in range(r)]

        def level(s):
            lam, flagged = info[s]
            lam_key = (0, Fraction(0)) if not is_finite(lam) else (1, lam)
            return (lam_key, 1 if not flagged else 0)

        best = max(level(s) for s in range(r))
        return min(s for s in range(r) if level(s) == best)

    return decide


def fast_greedy_painter(F: Graph, r: int) -> ProcessPainter:
    family = enumerate_ordered_subgraphs(F)
    full = sorted(family.full_classes(), key=repr)

    def decide(board: ExposureBoard, nbrs: Sequence[int]) -> int:
        for color in range(r - 1, -1, -1):
            if not any(board.anchored_present(cls, color, nbrs) for cls in full):
                return color
        return 0

    return decide


def _vertex_rng(seed: int, trial: int, vertex: int) -> np.random.Generator:
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, (trial << 32) | vertex], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass
class TrialResult:
    survived: bool
    died_at: Optional[int]
    board: ExposureBoard


def run_trial(cfg: ProcessConfig, painter: ProcessPainter, trial: int = 0) -> TrialResult:
    """One exposure trial; deterministic given (seed, trial index)."""
    board = ExposureBoard(cfg.F, cfg.r)
    for v in range(cfg.n):
        if v == 0 or cfg.p == 0:
            nbrs: list = []
        else:
            rng = _vertex_rng(cfg.seed, trial, v)
            mask = rng.random(v) < cfg.p
            nbrs = np.nonzero(mask)[0].tolist()
        color = painter(board, nbrs)
        new = board.add_vertex(nbrs, color)
        if any(cls in board.full_classes for cls in new):
            return TrialResult(survived=False, died_at=v, board=board)
    return TrialResult(survived=True, died_at=None, board=board)


def sweep(
    F: Graph,
    r: int,
    n: int,
    exponents: Sequence[float],
    trials: int,
    seed: int,
    painter_factory: Callable[[], ProcessPainter],
    jobs: int = 1,
) -> SweepResult:
    """Survival rates across edge probabilities p = n^(-gamma), rows ordered
    by ascending p.  Sub-seeds are derived per grid point so results do not
    depend on evaluation order or the number of workers."""
    points = sorted(enumerate(exponents), key=lambda t: -t[1])  # ascending p
    result = SweepResult(F=F, r=r, seed=seed)

    def run_point(point_index: int, gamma: float) -> SweepRow:
        p = n ** (-gamma)
        sub_seed = (seed * 1_000_003 + point_index) & 0xFFFFFFFFFFFFFFFF
        cfg = ProcessConfig(n=n, p=p, F=F, r=r, seed=sub_seed, trials=trials)
        survivals = 0
        if jobs > 1:
            from concurrent.futures import ProcessPoolExecutor

            with ProcessPoolExecutor(max_workers=jobs) as ex:
                flags = list(
                    ex.map(_trial_worker,
                           [(cfg, painter_factory, t) for t in range(trials)])
                )
            survivals = sum(flags)
        else:
            painter = painter_factory()
            for t in range(trials):
                if run_trial(cfg, painter, trial=t).survived:
                    survivals += 1
        return SweepRow(n=n, p_exponent=gamma, p=p, trials=trials,
                        survivals=survivals)

    for point_index, gamma in points:
        result.rows.append(run_point(point_index, gamma))
    return result


def _trial_worker(args) -> bool:
    cfg, painter_factory, t = args
    return run_trial(cfg, painter_factory(), trial=t).survived


class CrossoverNotBracketed(ValueError):
    pass


def estimate_crossover(result: SweepResult) -> float:
    """Exponent gamma where the survival rate crosses 1/2, by linear
    interpolation between the bracketing grid points (rates are monotone in p
    up to noise; the first bracketing pair in ascending p is used)."""
    rows = result.rows
    if not rows or all(row.p_exponent is None for row in rows):
        raise CrossoverNotBracketed("sweep lacks exponent information")
    for a, b in zip(rows, rows[1:]):
        ra, rb = a.rate, b.rate
        if (ra - 0.5) == 0:
            return a.p_exponent
        if (ra - 0.5) * (rb - 0.5) < 0:
            t = (0.5 - ra) / (rb - ra)
            return a.p_exponent + t * (b.p_exponent - a.p_exponent)
    if rows[-1].rate == 0.5:
        return rows[-1].p_exponent
    raise CrossoverNotBracketed("survival rates do not bracket 1/2")
