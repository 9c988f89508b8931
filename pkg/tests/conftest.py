"""Shared fixtures: small target graphs and the derived K3 strategy."""

import random
from fractions import Fraction

import pytest

from vertexramsey.density import online_vertex_ramsey_density
from vertexramsey.engine import Board, GameConfig, random_legal_move
from vertexramsey.graphs import Graph
from vertexramsey.painter import derive_priority_list


@pytest.fixture(scope="session")
def K2():
    return Graph.from_edges(2, [(0, 1)])


@pytest.fixture(scope="session")
def K3():
    return Graph.complete(3)


@pytest.fixture(scope="session")
def P3():
    return Graph.path(3)


@pytest.fixture(scope="session")
def P4():
    return Graph.path(4)


@pytest.fixture(scope="session")
def k3_density(K3):
    return online_vertex_ramsey_density(K3, 2)


@pytest.fixture(scope="session")
def k3_strategy(K3, k3_density):
    plist, fams = derive_priority_list(K3, 2, k3_density.theta_star, k3_density.alpha_star)
    return plist, fams


def random_board(F, density, moves, seed, painter, max_degree=5):
    """Play a random legal builder against ``painter`` and return the board.

    ``painter`` maps (board, sorted neighbor list) to a color.
    """
    cfg = GameConfig(F=F, r=2, density=density)
    rng = random.Random(seed)
    board = Board()
    for _ in range(moves):
        mv = random_legal_move(board, cfg, rng, max_degree=max_degree)
        if mv is None:
            break
        pend = sorted(mv.neighbors)
        board.add_vertex(pend, painter(board, pend))
    return board
