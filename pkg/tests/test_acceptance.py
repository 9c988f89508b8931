"""Acceptance suite: one test (one pass/fail line under -v) per criterion.

The heavy criteria (5 and 8) run large randomized workloads; expect several
minutes each.
"""

import itertools
import math
import random
import time
from fractions import Fraction
from functools import partial

import networkx as nx
import pytest

from vertexramsey.builder import (
    abuild_session,
    family_correspondence_holds,
    make_greedy_painter,
    make_priority_painter,
    make_random_painter,
)
from vertexramsey.density import online_vertex_ramsey_density
from vertexramsey.engine import (
    Board,
    GameConfig,
    min_mu_over_subgraphs,
    min_winning_density,
    random_legal_move,
)
from vertexramsey.graphs import Graph, enumerate_ordered_subgraphs
from vertexramsey.painter import (
    check_witness_invariant,
    compute_witness_constants,
    derive_priority_list,
)
from vertexramsey.process import (
    ExposureBoard,
    estimate_crossover,
    fast_priority_painter,
    sweep,
)
from vertexramsey.weights import (
    big_lambda,
    cw_full,
    cw_simplified,
    default_alpha_length,
    full_run_value,
    pad_alpha,
)


def test_criterion_1_exact_density_clique(K3):
    t0 = time.time()
    res = online_vertex_ramsey_density(K3, 2)
    elapsed = time.time() - t0
    assert res.m1_star == Fraction(4, 3)
    assert res.theta_star == Fraction(3, 4)
    assert elapsed < 60


def test_criterion_2_exact_density_paths(P3, P4):
    t0 = time.time()
    res3 = online_vertex_ramsey_density(P3, 2)
    res4 = online_vertex_ramsey_density(P4, 2)
    elapsed = time.time() - t0
    assert res3.m1_star == Fraction(8, 9)
    assert res4.m1_star == Fraction(15, 16)
    assert elapsed < 30 * 60


def test_criterion_3_root_sign_discipline(K2, K3, P3):
    eighth = Fraction(1, 8)
    for F in (K2, K3, P3):
        theta_star = online_vertex_ramsey_density(F, 2).theta_star
        assert big_lambda(F, 2, theta_star - eighth).value > 0, F
        assert big_lambda(F, 2, theta_star + eighth).value < 0, F


def test_criterion_4_oracle_cross_validation(K2):
    t0 = time.time()
    oracle = min_winning_density(K2, 2, max_steps=8)
    elapsed = time.time() - t0
    assert oracle == online_vertex_ramsey_density(K2, 2).m1_star == Fraction(3, 4)
    assert elapsed < 10 * 60


def test_criterion_5_painter_soundness(K3, k3_density, k3_strategy):
    plist, _ = k3_strategy
    theta_star = k3_density.theta_star
    d = k3_density.m1_star - Fraction(1, 100)
    cfg = GameConfig(F=K3, r=2, density=d)
    painter = fast_priority_painter(plist)
    rng = random.Random(20260826)

    losses = 0
    sampled_boards = []
    for game in range(10_000):
        exposure = ExposureBoard(K3, 2)
        mirror = Board()
        snapshot = None
        for step in range(40):
            mv = random_legal_move(mirror, cfg, rng)
            pend = sorted(mv.neighbors)
            color = painter(exposure, pend)
            exposure.add_vertex(pend, color)
            mirror.add_vertex(pend, color)
            if exposure.mono_target_present():
                losses += 1
                break
            if game % 10 == 0 and mirror.n == 30:
                snapshot = mirror.copy()
        if game % 10 == 0:
            sampled_boards.append(snapshot if snapshot is not None else mirror)
    assert losses == 0

    fam = enumerate_ordered_subgraphs(K3)
    state, _ = cw_full(K3, 2, theta_star, pad_alpha(k3_density.alpha_star, 2, fam))
    constants = compute_witness_constants(state, K3, 2, theta_star)
    assert len(sampled_boards) == 1000
    for board in sampled_boards:
        assert board.n <= 30
        report = check_witness_invariant(board, plist, theta_star, constants)
        assert report.ok, report.violations


def test_criterion_6_builder_completeness(K2, K3, k3_density, k3_strategy):
    t0 = time.time()
    plist_k3, _ = k3_strategy
    res_k2 = online_vertex_ramsey_density(K2, 2)
    plist_k2, _ = derive_priority_list(K2, 2, res_k2.theta_star, res_k2.alpha_star)
    cases = [
        (K2, res_k2.theta_star, plist_k2),
        (K3, k3_density.theta_star, plist_k3),
    ]
    for F, theta_star, plist in cases:
        size = len(enumerate_ordered_subgraphs(F))
        budget = 4 * size ** 4  # r^2 * |S(F)|^(r+2) with r = 2
        painters = {
            "random": make_random_painter(random.Random(7), 2),
            "greedy": make_greedy_painter(F, 2),
            "priority": make_priority_painter(plist),
        }
        for name, painter in painters.items():
            result = abuild_session(F, 2, theta_star, painter)
            assert result.won, (F, name)
            assert result.steps <= budget, (F, name)
            for lg in result.listed:
                assert min_mu_over_subgraphs(lg.board, theta_star) >= 0, (F, name)
            assert family_correspondence_holds(F, 2, theta_star, result), (F, name)
    assert time.time() - t0 < 10 * 60


def _grid_graphs():
    """All graphs with <= 4 vertices and >= 1 edge, up to isomorphism."""
    seen, out = [], []
    for n in (2, 3, 4):
        pairs = list(itertools.combinations(range(n), 2))
        for m in range(1, len(pairs) + 1):
            for es in itertools.combinations(pairs, m):
                g = nx.Graph()
                g.add_nodes_from(range(n))
                g.add_edges_from(es)
                if any(gh.number_of_nodes() == n and nx.is_isomorphic(g, gh) for gh in seen):
                    continue
                seen.append(g)
                out.append(Graph.from_edges(n, es))
    return out


def test_criterion_7_internal_invariants():
    thetas = [Fraction(1, 2), Fraction(3, 4), Fraction(1), Fraction(9, 8), Fraction(3, 2)]
    for F in _grid_graphs():
        fam = enumerate_ordered_subgraphs(F)
        L = default_alpha_length(2, fam)
        alphas = [
            (0,) * L,
            tuple(i % 2 for i in range(L)),
            tuple(1 if i % 3 else 0 for i in range(L)),
        ]
        for theta in thetas:
            for alpha in alphas:
                # check_invariants=True enforces round monotonicity, family
                # closure, non-positive weights, subgraph weight
                # monotonicity, the sandwich bounds, and partner membership
                _, traces = cw_full(F, 2, theta, alpha, check_invariants=True)
                assert len(traces) <= 2 * len(fam)
                streamlined = cw_simplified(F, 2, theta, alpha)
                assert streamlined.value == full_run_value(traces)
                assert streamlined.rounds <= 2 * len(fam)


def test_criterion_8_threshold_separation(K3, k3_strategy):
    t0 = time.time()
    plist, _ = k3_strategy
    exponents = [0.95, 0.85, 0.75, 0.65, 0.55]
    result = sweep(
        K3, 2, n=2000, exponents=exponents, trials=200, seed=910,
        painter_factory=partial(fast_priority_painter, plist),
    )
    rates = {row.p_exponent: row.rate for row in result.rows}
    assert rates[0.95] - rates[0.55] >= 0.5

    # weak monotonicity in p, allowing two-sided binomial noise at 99%
    rows = result.rows  # ascending p
    for a, b in zip(rows, rows[1:]):
        pa, pb = a.rate, b.rate
        pooled = (a.survivals + b.survivals) / (a.trials + b.trials)
        se = math.sqrt(max(pooled * (1 - pooled) * (1 / a.trials + 1 / b.trials), 1e-12))
        assert pb - pa <= 2.576 * se, (a.p_exponent, b.p_exponent, pa, pb)

    crossover = estimate_crossover(result)
    assert 0.6 <= crossover <= 0.9, crossover
    assert time.time() - t0 < 30 * 60


def test_criterion_9_reproducibility(K3, k3_strategy):
    plist, _ = k3_strategy
    factory = partial(fast_priority_painter, plist)
    kw = dict(n=400, exponents=[0.9, 0.7, 0.55], trials=10, seed=4242,
              painter_factory=factory)
    outputs = {
        "jobs1-a": sweep(K3, 2, jobs=1, **kw).to_csv(),
        "jobs1-b": sweep(K3, 2, jobs=1, **kw).to_csv(),
        "jobs2": sweep(K3, 2, jobs=2, **kw).to_csv(),
        "jobs3": sweep(K3, 2, jobs=3, **kw).to_csv(),
    }
    assert len(set(outputs.values())) == 1, outputs
