"""Brute-force reference checks, deliberately independent of the solvers.

Nothing here imports the safety, equilibrium or load-balancing code;
payoff sums are recomputed from the raw tables. These are slow by design.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .games import BimatrixGame, GameError, MixedStrategy, StrategyProfile2P

FLOAT_TOL = 1e-12
SPLIT_CAP = 10**6


@dataclass(frozen=True)
class GridSpec:
    resolution: int

    def __post_init__(self):
        if self.resolution < 2:
            raise GameError(f"grid resolution must be at least 2, got {self.resolution}")


def _own_rows(g: BimatrixGame, player: int) -> list[list[Fraction]]:
    rows, cols = len(g.u1), len(g.u1[0])
    if player == 1:
        return [[g.u1[j][k] for k in range(cols)] for j in range(rows)]
    return [[g.u2[j][k] for j in range(rows)] for k in range(cols)]


def lipschitz_slack(g: BimatrixGame, player: int, grid: GridSpec) -> Fraction:
    """Payoff range over R: the most the best grid point can fall short.

    Rounding any mixture onto the grid moves it by at most 4/(3R) in L1
    norm for up to three strategies, and the worst-case payoff changes by
    at most half the payoff range per unit of L1 distance.
    """
    entries = [v for row in _own_rows(g, player) for v in row]
    return (max(entries) - min(entries)) / grid.resolution


def grid_maximin(g: BimatrixGame, player: int, grid: GridSpec) -> tuple[MixedStrategy, Fraction]:
    """Best worst-case payoff over all mixtures with denominator R.

    Ties go to the first grid point in lexicographic order of weights.
    """
    rows = _own_rows(g, player)
    size = len(rows)
    if size > 3:
        raise GameError(f"grid oracle supports at most 3 strategies, got {size}")
    R = grid.resolution
    # integer arithmetic: scale payoffs by the common denominator
    denom = math.lcm(*(v.denominator for row in rows for v in row))
    ints = [[int(v * denom) for v in row] for row in rows]
    cols = len(ints[0])

    if size == 1:
        points = [(R,)]
    elif size == 2:
        points = ((i, R - i) for i in range(R + 1))
    else:
        points = ((i, j, R - i - j) for i in range(R + 1) for j in range(R + 1 - i))

    best_w, best_v = None, None
    for w in points:
        worst = min(sum(w[j] * ints[j][k] for j in range(size)) for k in range(cols))
        if best_v is None or worst > best_v:
            best_w, best_v = w, worst
    strategy = MixedStrategy(tuple(Fraction(x, R) for x in best_w))
    return strategy, Fraction(best_v, R * denom)


def verify_equilibrium(g: BimatrixGame, profile: StrategyProfile2P) -> bool:
    """No pure deviation raises either player's expected payoff.

    Exact comparison for exact strategies, 1e-12 slack otherwise.
    """
    rows, cols = len(g.u1), len(g.u1[0])
    s1, s2 = profile.s1.probs, profile.s2.probs
    if len(s1) != rows or len(s2) != cols:
        raise GameError("profile dimensions do not match the game")
    tol = 0 if (profile.s1.exact and profile.s2.exact) else FLOAT_TOL

    row_vals = [sum(s2[k] * g.u1[j][k] for k in range(cols)) for j in range(rows)]
    col_vals = [sum(s1[j] * g.u2[j][k] for j in range(rows)) for k in range(cols)]
    current1 = sum(s1[j] * row_vals[j] for j in range(rows))
    current2 = sum(s2[k] * col_vals[k] for k in range(cols))
    return max(row_vals) - current1 <= tol and max(col_vals) - current2 <= tol


def exhaustive_split_min(fam, n: int, t: MixedStrategy) -> tuple[float, tuple[int, ...]]:
    """Worst case of link mixture ``t`` by enumerating every split of n-1 rivals.

    ``fam`` needs ``alphas`` and ``X``. Ties keep the lexicographically
    first split. Refuses more than 10**6 splits.
    """
    m = len(fam.alphas)
    others = n - 1
    if others < 0:
        raise GameError(f"n must be positive, got {n}")
    if math.comb(others + m - 1, m - 1) > SPLIT_CAP:
        raise GameError("too many splits to enumerate")
    weights = [float(p) * float(fam.X) * float(a) for p, a in zip(t.probs, fam.alphas)]
    best = None
    # stars and bars: bar positions among others + m - 1 slots, lexicographic counts
    for bars in itertools.combinations(range(others + m - 1), m - 1):
        edges = (-1,) + bars + (others + m - 1,)
        counts = tuple(edges[i + 1] - edges[i] - 1 for i in range(m))
        value = 0
        for w, c in zip(weights, counts):
            value = value + w / (c + 1)
        if best is None or value < best[0]:
            best = (value, counts)
    return best
