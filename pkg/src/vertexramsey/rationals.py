"""Exact rational arithmetic and the three scalar graph functionals.

All core computations are exact: values are ``fractions.Fraction`` or the
symbol ``NEG_INFINITY``.  No floating point is used anywhere in this module.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Mapping, Optional, Sequence, Union

from .graphs import Graph, OClass, ancestor_oclass

Rational = Fraction


class _NegInfinity:
    """The symbol -oo: smaller than every rational, absorbing under +."""

    _instance: Optional["_NegInfinity"] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __neg__(self):
        raise ArithmeticError("cannot negate -oo here")

    def __repr__(self):
        return "-oo"

    def __hash__(self):
        return hash("vertexramsey-neg-infinity")


NEG_INFINITY = _NegInfinity()

ExtRational = Union[Rational, _NegInfinity]


def is_finite(x: ExtRational) -> bool:
    return x is not NEG_INFINITY


def ext_min(values) -> ExtRational:
    out: ExtRational = None  # type: ignore[assignment]
    for v in values:
        if v is NEG_INFINITY:
            return NEG_INFINITY
        if out is None or v < out:
            out = v
    if out is None:
        raise ValueError("ext_min of empty sequence")
    return out


def mu_theta(H: Graph, theta: Rational) -> Rational:
    """v(H) - e(H) * theta."""
    return Fraction(H.vertex_count) - H.edge_count * theta


def lambda_theta(H: Graph, w: Mapping[int, ExtRational], theta: Rational) -> ExtRational:
    """sum over vertices of (1 + w(u)), minus e(H) * theta."""
    total: ExtRational = Fraction(0)
    for u in H.vertices():
        x = w[u]
        if x is NEG_INFINITY:
            return NEG_INFINITY
        total = total + 1 + x
    return total - H.edge_count * theta


def lambda_pos(cls: OClass, weights: Sequence[ExtRational], theta: Rational) -> ExtRational:
    """``lambda_theta`` on a positional class with position-indexed weights."""
    h, edges = cls
    total: ExtRational = Fraction(0)
    for p in range(h):
        x = weights[p]
        if x is NEG_INFINITY:
            return NEG_INFINITY
        total = total + 1 + x
    return total - len(edges) * theta


def d_theta(H: Graph, v: int, w: Mapping[int, ExtRational], theta: Rational) -> Rational:
    """Minimum over subgraphs J containing ``v`` of sum_{u in J-v}(1+w(u)) - e(J)*theta.

    For a fixed vertex set, taking all induced edges minimizes (theta > 0),
    so the minimum ranges over the 2^(v(H)-1) vertex subsets containing ``v``
    with their induced edge sets.  The result is always <= 0 (the subset
    {v} contributes 0).
    """
    others = [u for u in H.vertices() if u != v]
    for u in others:
        if w[u] is NEG_INFINITY:
            raise ValueError("d_theta requires finite weights away from the pinned vertex")
    best = Fraction(0)
    for k in range(1, len(others) + 1):
        for sub in combinations(others, k):
            verts = set(sub) | {v}
            e = sum(1 for a, b in H.edges if a in verts and b in verts)
            val = sum((1 + w[u] for u in sub), Fraction(0)) - e * theta
            if val < best:
                best = val
    return best


@lru_cache(maxsize=1 << 18)
def d_pos(cls: OClass, weights: tuple, theta: Rational) -> Rational:
    """``d_theta`` for a positional class, pinned at the youngest vertex.

    ``weights`` is position-indexed; the youngest entry is not used.
    """
    h, edges = cls
    best = Fraction(0)
    others = range(1, h)
    for k in range(1, h):
        for sub in combinations(others, k):
            verts = set(sub)
            verts.add(0)
            e = sum(1 for a, b in edges if a in verts and b in verts)
            val = sum((1 + weights[p] for p in sub), Fraction(0)) - e * theta
            if val < best:
                best = val
    return best


def weight_vector(cls: OClass, w_s: Mapping[OClass, Rational]) -> tuple:
    """Position-indexed weights of a class against one color's weight table.

    Position ``p`` receives the table value of the ancestor obtained by
    deleting the ``p`` youngest vertices, or ``NEG_INFINITY`` when that
    ancestor carries no table entry yet.
    """
    h, _ = cls
    out = []
    for p in range(h):
        anc = ancestor_oclass(cls, p)
        out.append(w_s.get(anc, NEG_INFINITY))
    return tuple(out)


def parse_rational(text: str) -> Rational:
    """Parse ``p/q`` or an integer; reject decimals."""
    text = text.strip()
    if "." in text:
        raise ValueError(f"decimal not allowed, use p/q: {text!r}")
    if "/" in text:
        p, q = text.split("/", 1)
        return Fraction(int(p), int(q))
    return Fraction(int(text))


def format_rational(x: Rational) -> str:
    """Render as ``p/q`` in lowest terms, or plain ``p`` when integral."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"
