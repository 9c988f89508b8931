"""The weight-assignment dynamic program and the game invariant it computes.

``cw_full`` runs the full fidelity version: per round it measures, for every
color, the least dangerous graph the adversary could complete next, consumes
one entry of the decision sequence ``alpha``, and grows that color's family
with primary and secondary completions, assigning each a non-positive weight.
``cw_simplified`` drops the secondary-completion machinery and the forward
sets, and stops at the first completion of the full target graph; this
changes nothing about the final minimax value.  ``big_lambda`` explores all
decision sequences by branching on the color chosen each round, with
memoization on (color-permutation-canonical) states, and returns the minimax
value together with a witnessing decision sequence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable, Optional, Sequence

from .graphs import (
    Graph,
    OClass,
    SubgraphFamily,
    children,
    encode_oclass,
    enumerate_ordered_subgraphs,
    parent_oclass,
    restrict_oclass,
    subclasses_with_youngest,
)
from .rationals import (
    NEG_INFINITY,
    ExtRational,
    Rational,
    d_pos,
    ext_min,
    lambda_pos,
    weight_vector,
)


class InvariantError(AssertionError):
    """A theorem-backed runtime invariant failed: implementation bug."""


@dataclass
class WeightState:
    """Per-color families, weight tables and forward sets."""

    r: int
    family: SubgraphFamily
    H: list  # per color: set of OClass
    w: list  # per color: dict OClass -> Rational
    forward: list  # per color: dict Rational -> frozenset of OClass

    @staticmethod
    def empty(r: int, family: SubgraphFamily) -> "WeightState":
        return WeightState(
            r, family, [set() for _ in range(r)], [dict() for _ in range(r)], [dict() for _ in range(r)]
        )

    def d_value(self, s: int, cls: OClass, theta: Rational) -> Rational:
        return d_pos(cls, weight_vector(cls, self.w[s]), theta)


@dataclass
class RoundTrace:
    """What happened in one round of ``cw_full``."""

    index: int  # 1-based round number
    d: tuple  # d-value per color at round start
    sigma: int
    w_round: Rational
    primary_sets: list = field(default_factory=list)  # C^{i,j} per j
    secondary_sets: list = field(default_factory=list)  # per j: list of C^{i,j,k}
    completed_full: bool = False  # a full target class entered some C^{i,j}


@dataclass
class DecisionOutcome:
    """Result of the minimax evaluation over decision sequences."""

    value: Rational
    alpha_star: tuple
    family: SubgraphFamily
    theta: Rational
    rounds: int = 0


def _partner_class(cls: OClass, k: int) -> OClass:
    """Reorder so the (k+1)-th youngest vertex becomes youngest.

    Old position k moves to position 0; old positions 0..k-1 shift to
    1..k; later positions stay.
    """
    h, edges = cls
    assert 0 < k < h

    def move(p: int) -> int:
        if p == k:
            return 0
        if p < k:
            return p + 1
        return p

    out = frozenset(tuple(sorted((move(a), move(b)))) for a, b in edges)
    return (h, out)


def _has_subclass_in(cls: OClass, pool: frozenset) -> bool:
    """Does some subgraph containing the youngest vertex lie in ``pool``?"""
    if not pool:
        return False
    return bool(subclasses_with_youngest(cls) & pool)


def default_alpha_length(r: int, family: SubgraphFamily) -> int:
    return r * len(family)


def cw_full(
    F: Graph,
    r: int,
    theta: Rational,
    alpha: Sequence[int],
    family: Optional[SubgraphFamily] = None,
    check_invariants: bool = True,
) -> tuple:
    """Full-fidelity run; colors are 0-based; returns (state, traces).

    ``alpha`` must be long enough to cover the run (at most ``r * |family|``
    rounds are ever needed).  Theorem-backed invariants are asserted when
    ``check_invariants`` is set; a violation raises ``InvariantError``.
    """
    if r < 2:
        raise ValueError("need at least two colors")
    if theta <= 0:
        raise ValueError("theta must be positive")
    if family is None:
        family = enumerate_ordered_subgraphs(F)
    state = WeightState.empty(r, family)
    all_classes = family.classes
    full = family.full_classes()
    traces: list = []
    d_hist: list = []  # per round: tuple of d per color
    w_hist: list = []  # per round: w^i
    alpha_hist: list = []
    sandwich_log: list = []  # (round i, i_hat, rule_strict, d value, class)

    def require(cond: bool, msg: str):
        if not cond:
            raise InvariantError(msg)

    i = 0
    while True:
        i += 1
        require(i <= r * len(family), "round budget r*|S(F)| exceeded")
        if i > len(alpha):
            raise ValueError("alpha sequence too short for this run")
        child_sets = [children(state.H[s], family) for s in range(r)]
        d_now = tuple(
            max(state.d_value(s, c, theta) for c in child_sets[s]) for s in range(r)
        )
        if check_invariants and d_hist:
            prev_sigma = alpha_hist[-1]
            for s in range(r):
                if s == prev_sigma:
                    require(d_now[s] < d_hist[-1][s], "played color's d-value must strictly drop")
                else:
                    require(d_now[s] == d_hist[-1][s], "unplayed color's d-value must not move")
        d_hist.append(d_now)
        sigma = alpha[i - 1]
        alpha_hist.append(sigma)
        w_i = sum((d_now[s] for s in range(r) if s != sigma), Fraction(0))
        w_hist.append(w_i)
        if check_invariants and len(w_hist) >= 2:
            prior = [q for q in range(len(alpha_hist) - 1) if alpha_hist[q] == sigma]
            if prior:
                q = prior[-1]
                require(w_i <= w_hist[q], "round weight must be non-increasing per color")
                same_run = all(a == sigma for a in alpha_hist[q:])
                require((w_i == w_hist[q]) == same_run, "round weight equality iff same-color run")
        trace = RoundTrace(i, d_now, sigma, w_i)
        d_sig = d_now[sigma]
        Hs = state.H[sigma]
        ws = state.w[sigma]
        fwd = state.forward[sigma]
        j = 0
        while True:
            j += 1
            ch = children(Hs, family)
            cij = frozenset(
                c for c in ch if state.d_value(sigma, c, theta) == d_sig
            )
            if j == 1:
                require(d_sig not in fwd, "forward set written twice for one d-value")
                fwd[d_sig] = cij
            trace.primary_sets.append(cij)
            if check_invariants:
                for c in cij:
                    par = parent_oclass(c)
                    require(par is None or par in Hs, "family closure violated on insertion")
            for c in cij:
                ws[c] = w_i
                if c in full:
                    trace.completed_full = True
            Hs.update(cij)
            # secondary completions
            sec_sets: list = []
            k = 0
            while True:
                k += 1
                ch = children(Hs, family)
                tijk = [
                    c for c in ch if state.d_value(sigma, c, theta) >= d_sig
                ]
                cijk = []
                for c in tijk:
                    dv = state.d_value(sigma, c, theta)
                    if dv > d_sig or not _has_subclass_in(c, fwd.get(d_sig, frozenset())):
                        in_fwd_at_dv = _has_subclass_in(c, fwd.get(dv, frozenset()))
                        if not in_fwd_at_dv:
                            cand = [
                                q
                                for q in range(i)
                                if alpha_hist[q] == sigma and dv < d_hist[q][sigma]
                            ]
                            strict = True
                        else:
                            cand = [
                                q
                                for q in range(i)
                                if alpha_hist[q] == sigma and dv <= d_hist[q][sigma]
                            ]
                            strict = False
                        require(bool(cand), "no admissible earlier round for secondary weight")
                        i_hat = cand[-1]
                        ws[c] = w_hist[i_hat]
                        cijk.append(c)
                        sandwich_log.append((i, i_hat, strict, dv, c))
                        if check_invariants and c[0] > k:
                            partner = _partner_class(c, k)
                            require(partner in cij, "partner class missing from primary set")
                Hs.update(cijk)
                if check_invariants:
                    for c in cijk:
                        if c[0] > k:
                            partner = _partner_class(c, k)
                            # pointwise weight comparison under the reordering
                            wv_c = weight_vector(c, ws)
                            wv_p = weight_vector(partner, ws)
                            for p in range(c[0]):
                                newp = 0 if p == k else (p + 1 if p < k else p)
                                require(
                                    wv_c[p] is NEG_INFINITY or wv_p[newp] >= wv_c[p],
                                    "partner weights must dominate pointwise",
                                )
                sec_sets.append(frozenset(cijk))
                if not cijk:
                    break
            trace.secondary_sets.append(sec_sets)
            ch = children(Hs, family)
            d_vals = {c: state.d_value(sigma, c, theta) for c in ch}
            if check_invariants:
                for c, dv in d_vals.items():
                    require(dv <= d_sig, "child above round level after secondary sweep")
                    if dv == d_sig:
                        require(
                            _has_subclass_in(c, fwd.get(d_sig, frozenset())),
                            "level child without a forward-set subgraph",
                        )
            if all(dv < d_sig for dv in d_vals.values()):
                break
        traces.append(trace)
        if check_invariants:
            for s in range(r):
                for c, wv in state.w[s].items():
                    require(wv <= 0, "stored weight must be non-positive")
        if any(state.H[s] == all_classes for s in range(r)):
            break

    if check_invariants:
        _check_sandwich(sandwich_log, d_hist, alpha_hist)
        _check_subgraph_weight_monotonicity(state, theta)
    return state, traces


def _check_sandwich(sandwich_log, d_hist, alpha_hist):
    for (i, i_hat, strict, dv, cls) in sandwich_log:
        if i_hat + 1 >= len(d_hist):
            continue
        sigma = alpha_hist[i_hat]
        hi = d_hist[i_hat][sigma]
        lo = d_hist[i_hat + 1][sigma]
        if strict:
            ok = lo <= dv < hi
        else:
            ok = lo < dv <= hi
        if not ok:
            raise InvariantError(
                f"secondary d-value {dv} not sandwiched in ({lo}, {hi}) for class {cls}"
            )


def _check_subgraph_weight_monotonicity(state: WeightState, theta: Rational):
    """Members' subgraphs are members, with pointwise larger-or-equal weights."""
    for s in range(state.r):
        for cls in state.H[s]:
            wv = weight_vector(cls, state.w[s])
            h, edges = cls
            rest = list(range(1, h))
            for k in range(h):
                for others in combinations(rest, k):
                    verts = frozenset((0,) + others)
                    avail = [e for e in edges if e[0] in verts and e[1] in verts]
                    ranks = {p: idx for idx, p in enumerate(sorted(verts))}
                    for m in range(len(avail) + 1):
                        for sel in combinations(avail, m):
                            sub = restrict_oclass(cls, verts, frozenset(sel))
                            if sub not in state.family.classes:
                                continue
                            if sub not in state.H[s]:
                                raise InvariantError("subgraph of a member escaped the family")
                            wv_sub = weight_vector(sub, state.w[s])
                            for p in verts:
                                if not (wv_sub[ranks[p]] >= wv[p]):
                                    raise InvariantError(
                                        "subgraph weights must dominate pointwise"
                                    )


@dataclass
class SimplifiedOutcome:
    value: Rational
    rounds: int
    d_history: list
    state: WeightState
    alpha_used: tuple


def cw_simplified(
    F: Graph,
    r: int,
    theta: Rational,
    alpha: Sequence[int],
    family: Optional[SubgraphFamily] = None,
) -> SimplifiedOutcome:
    """Streamlined run: no forward sets, no secondary completions.

    Once a candidate graph's danger score rises strictly above the round
    level of its color, that graph (and with it its whole subtree of
    extensions) is ignored for that color for the rest of the run.  The run
    stops as soon as a full copy of the target enters some family.  For a
    fixed decision sequence the per-round values may differ from the full
    run (the families evolve differently), but the minimum over all
    decision sequences is unchanged.
    """
    if family is None:
        family = enumerate_ordered_subgraphs(F)
    state = WeightState.empty(r, family)
    full = family.full_classes()
    ignored = [set() for _ in range(r)]
    d_history: list = []
    i = 0
    while True:
        i += 1
        if i > r * len(family):
            raise InvariantError("round budget r*|S(F)| exceeded")
        if i > len(alpha):
            raise ValueError("alpha sequence too short for this run")
        d_now = tuple(
            max(
                state.d_value(s, c, theta)
                for c in children(state.H[s], family)
                if c not in ignored[s]
            )
            for s in range(r)
        )
        d_history.append(d_now)
        sigma = alpha[i - 1]
        w_i = sum((d_now[s] for s in range(r) if s != sigma), Fraction(0))
        d_sig = d_now[sigma]
        Hs = state.H[sigma]
        ws = state.w[sigma]
        skip = ignored[sigma]
        completed = False
        while True:
            live = {
                c: state.d_value(sigma, c, theta)
                for c in children(Hs, family)
                if c not in skip
            }
            skip.update(c for c, dv in live.items() if dv > d_sig)
            batch = [c for c, dv in live.items() if dv == d_sig]
            if not batch:
                break
            for c in batch:
                ws[c] = w_i
                if c in full:
                    completed = True
            Hs.update(batch)
            if completed:
                break
        if completed:
            value = Fraction(1) + sum(d_now, Fraction(0))
            return SimplifiedOutcome(value, i, d_history, state, tuple(alpha[:i]))
        if any(state.H[s] == family.classes for s in range(r)):
            # unreachable: a complete family contains full target classes
            raise InvariantError("family completed without a full target class")


def full_run_value(traces: list) -> Rational:
    """The minimax-relevant value of a full run: 1 + sum of d at the first
    round in which a full target class was completed."""
    for t in traces:
        if t.completed_full:
            return Fraction(1) + sum(t.d, Fraction(0))
    raise ValueError("run never completed a full target class")


def _encode_color_state(H: set, w: dict, ignored: frozenset) -> bytes:
    items = sorted((encode_oclass(c), str(w[c])) for c in H)
    skipped = sorted(encode_oclass(c) for c in ignored)
    return repr((items, skipped)).encode()


def big_lambda(
    F: Graph,
    r: int,
    theta: Rational,
    family: Optional[SubgraphFamily] = None,
    induced_only: bool = False,
) -> DecisionOutcome:
    """Minimax value over all decision sequences, with a witness sequence.

    Branches on the color chosen each round, evaluating each leaf as
    1 + sum of the round's per-color d-values, and minimizing over branches.
    States are memoized up to color permutation.
    """
    if r < 2:
        raise ValueError("need at least two colors")
    if theta <= 0:
        raise ValueError("theta must be positive")
    if family is None:
        family = enumerate_ordered_subgraphs(F, induced_only=induced_only)
    full = family.full_classes()
    max_rounds = r * len(family)
    memo: dict = {}

    def explore(Hs: tuple, ws: tuple, igs: tuple, depth: int) -> tuple:
        encs = [_encode_color_state(Hs[s], ws[s], igs[s]) for s in range(r)]
        order = sorted(range(r), key=lambda s: encs[s])
        rank = {s: idx for idx, s in enumerate(order)}
        key = tuple(encs[s] for s in order)
        hit = memo.get(key)
        if hit is not None:
            val, canon_suffix = hit
            return val, tuple(order[c] for c in canon_suffix)
        if depth >= max_rounds:
            raise InvariantError("round budget r*|S(F)| exceeded in branch search")
        d_now = []
        for s in range(r):
            d_now.append(
                max(
                    d_pos(c, weight_vector(c, ws[s]), theta)
                    for c in children(Hs[s], family)
                    if c not in igs[s]
                )
            )
        best_val = None
        best_suffix = None
        for sigma in range(r):
            d_sig = d_now[sigma]
            w_i = sum((d_now[s] for s in range(r) if s != sigma), Fraction(0))
            H2 = set(Hs[sigma])
            w2 = dict(ws[sigma])
            skip = set(igs[sigma])
            completed = False
            while True:
                live = {
                    c: d_pos(c, weight_vector(c, w2), theta)
                    for c in children(H2, family)
                    if c not in skip
                }
                skip.update(c for c, dv in live.items() if dv > d_sig)
                batch = [c for c, dv in live.items() if dv == d_sig]
                if not batch:
                    break
                for c in batch:
                    w2[c] = w_i
                    if c in full:
                        completed = True
                H2.update(batch)
                if completed:
                    break
            if completed:
                val = Fraction(1) + sum(d_now, Fraction(0))
                suffix: tuple = (sigma,)
            else:
                nHs = Hs[:sigma] + (frozenset(H2),) + Hs[sigma + 1 :]
                nws = ws[:sigma] + (w2,) + ws[sigma + 1 :]
                nigs = igs[:sigma] + (frozenset(skip),) + igs[sigma + 1 :]
                sub_val, sub_suffix = explore(nHs, nws, nigs, depth + 1)
                val = sub_val
                suffix = (sigma,) + sub_suffix
            if best_val is None or val < best_val:
                best_val, best_suffix = val, suffix
        memo[key] = (best_val, tuple(rank[c] for c in best_suffix))
        return best_val, best_suffix

    init_H = tuple(frozenset() for _ in range(r))
    init_w = tuple(dict() for _ in range(r))
    init_ig = tuple(frozenset() for _ in range(r))
    value, alpha_star = explore(init_H, init_w, init_ig, 0)
    return DecisionOutcome(value, alpha_star, family, theta, rounds=len(alpha_star))


def lambda_from_state(
    full_cls: OClass, s: int, state: WeightState, theta: Rational
) -> ExtRational:
    """min over subgraphs of the ordered target of their danger score.

    Ranges over every subgraph class (any vertex subset, any edge subset),
    evaluated against color ``s``'s weight table.
    """
    return ext_min(
        lambda_pos(sub, weight_vector(sub, state.w[s]), theta)
        for sub in _all_subclasses(full_cls)
    )


@lru_cache(maxsize=None)
def _all_subclasses(cls: OClass) -> frozenset:
    """Classes of all subgraphs (not necessarily containing the youngest)."""
    from .graphs import restrict_oclass

    h, edges = cls
    out = set()
    for k in range(1, h + 1):
        for verts in combinations(range(h), k):
            vs = frozenset(verts)
            avail = [e for e in edges if e[0] in vs and e[1] in vs]
            for m in range(len(avail) + 1):
                for sel in combinations(avail, m):
                    out.add(restrict_oclass(cls, vs, frozenset(sel)))
    return frozenset(out)


def pad_alpha(alpha: Sequence[int], r: int, family: SubgraphFamily) -> tuple:
    """Extend a decision prefix to full length by repeating its last entry.

    Entries beyond the realized run are never consulted, so any fixed
    extension is valid; repeating one color guarantees termination.
    """
    alpha = tuple(alpha)
    need = default_alpha_length(r, family)
    if len(alpha) >= need:
        return alpha
    filler = alpha[-1] if alpha else 0
    return alpha + (filler,) * (need - len(alpha))


def lambda_definition_check(
    F: Graph, r: int, theta: Rational, alpha: Sequence[int],
    family: Optional[SubgraphFamily] = None,
) -> ExtRational:
    """The triple max-min evaluated literally from a full run on ``alpha``."""
    if family is None:
        family = enumerate_ordered_subgraphs(F)
    alpha = pad_alpha(alpha, r, family)
    state, _ = cw_full(F, r, theta, alpha, family=family, check_invariants=False)
    best = None
    for full_cls in state.family.full_classes():
        for s in range(r):
            v = lambda_from_state(full_cls, s, state, theta)
            if best is None or v > best:
                best = v
    assert best is not None
    return best
