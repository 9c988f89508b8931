"""Root search for the critical restriction parameter and reference formulas.

The minimax value as a function of the parameter ``theta`` changes sign from
positive to negative at a unique rational root ``theta_star`` in (0, 2); the
density of interest is its inverse.  The search alternates bisection with
enumeration of all rationals of bounded denominator inside the bracket,
doubling the bound until the root is hit exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .graphs import Graph, SubgraphFamily, enumerate_ordered_subgraphs
from .rationals import Rational
from .weights import DecisionOutcome, big_lambda


class RootNotFound(RuntimeError):
    """The root is bracketed but has denominator above the configured cap."""

    def __init__(self, lo: Rational, hi: Rational, max_denominator: int):
        self.lo, self.hi, self.max_denominator = lo, hi, max_denominator
        super().__init__(
            f"root lies in ({lo}, {hi}) but was not found with denominator <= {max_denominator}"
        )


@dataclass
class DensityResult:
    theta_star: Rational
    m1_star: Rational
    alpha_star: tuple
    search_log: list = field(default_factory=list)  # (theta, sign of Lambda)


def rationals_in_interval(lo: Rational, hi: Rational, max_den: int) -> list:
    """All reduced rationals in the open interval with denominator <= max_den.

    Walks the Stern-Brocot tree: every fraction strictly between two tree
    neighbours a/b and c/d has denominator at least b + d, which prunes the
    recursion exactly.
    """
    if not (0 <= lo < hi):
        raise ValueError("need 0 <= lo < hi")
    out: list = []

    def walk(a: int, b: int, c: int, d: int):
        nb, nd = a + c, b + d
        if nd > max_den:
            return
        m = Fraction(nb, nd)
        if lo < m:
            walk(a, b, nb, nd)
        if lo < m < hi:
            out.append(m)
        if m < hi:
            walk(nb, nd, c, d)

    walk(0, 1, 1, 0)
    return out


def online_vertex_ramsey_density(
    F: Graph,
    r: int,
    max_denominator: int = 64,
    induced_only: bool = False,
    family: Optional[SubgraphFamily] = None,
) -> DensityResult:
    """Locate the exact root ``theta_star`` and return the density 1/theta_star."""
    if r < 2:
        raise ValueError("need at least two colors")
    if family is None:
        family = enumerate_ordered_subgraphs(F, induced_only=induced_only)
    log: list = []
    evaluated: dict = {}

    def lam(theta: Rational) -> DecisionOutcome:
        if theta not in evaluated:
            out = big_lambda(F, r, theta, family=family)
            evaluated[theta] = out
            sign = 0 if out.value == 0 else (1 if out.value > 0 else -1)
            log.append((theta, sign))
        return evaluated[theta]

    lo, hi = Fraction(0), Fraction(2)  # open bracket: Lambda > 0 below root, < 0 above
    bound = 2
    while True:
        # one bisection step at the exact rational midpoint
        mid = (lo + hi) / 2
        out = lam(mid)
        if out.value == 0:
            return DensityResult(mid, 1 / mid, out.alpha_star, log)
        if out.value > 0:
            lo = mid
        else:
            hi = mid
        # enumerate denominator-bounded candidates inside the bracket
        for theta in rationals_in_interval(lo, hi, bound):
            out = lam(theta)
            if out.value == 0:
                return DensityResult(theta, 1 / theta, out.alpha_star, log)
            if out.value > 0:
                if theta > lo:
                    lo = theta
            else:
                if theta < hi:
                    hi = theta
        if bound > max_denominator:
            raise RootNotFound(lo, hi, max_denominator)
        bound *= 2


def m1(F: Graph) -> Rational:
    """max over subgraphs with >= 2 vertices of e(H) / (v(H) - 1)."""
    if F.vertex_count < 2:
        raise ValueError("need at least two vertices")
    best = Fraction(0)
    # only vertex subsets with all induced edges can attain the maximum
    from itertools import combinations

    for k in range(2, F.vertex_count + 1):
        for verts in combinations(F.vertices(), k):
            vs = set(verts)
            e = sum(1 for a, b in F.edges if a in vs and b in vs)
            best = max(best, Fraction(e, k - 1))
    return best


def m1_bar(F: Graph, r: int) -> Rational:
    """Greedy-strategy density: max over subgraphs of (e(H) + prev) / v(H)."""
    if r < 1:
        raise ValueError("need at least one color")
    from itertools import combinations

    densities = []
    for k in range(1, F.vertex_count + 1):
        for verts in combinations(F.vertices(), k):
            vs = set(verts)
            e = sum(1 for a, b in F.edges if a in vs and b in vs)
            densities.append((e, k))
    value = max(Fraction(e, k) for e, k in densities)
    for _ in range(2, r + 1):
        value = max((e + value) / k for e, k in densities)
    return value


def k_star_from_density(F: Graph, m1_star: Rational) -> int:
    """Tree-size restriction equivalent for forests: k with density (k-1)/k."""
    if not F.is_forest():
        raise ValueError("tree-size conversion applies to forests only")
    k = m1_star.denominator
    if m1_star.numerator != k - 1:
        raise ValueError(f"density {m1_star} is not of the form (k-1)/k")
    return k
