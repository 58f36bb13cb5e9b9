"""Safety-level (probabilistic maximin) strategies for bimatrix games.

The guaranteed value of a mixed strategy is the minimum over the
opponent's *pure* strategies: payoff is linear in the opponent's mixture,
so some pure strategy always attains the minimum over all mixtures.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .games import BimatrixGame, GameError, MixedStrategy, format_fraction, payoff_against_pure
from .simplex import solve_packing

PURE = "pure"
STRICTLY_MIXED = "strictly-mixed"
MIXED = "mixed"  # some but not all strategies in the support (3+ strategies only)


@dataclass(frozen=True)
class SafetyReport:
    player: int
    strategy: MixedStrategy
    value: Fraction
    kind: str
    worst_responses: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "player": self.player,
            "strategy": [format_fraction(p) for p in self.strategy.probs],
            "value": format_fraction(self.value),
            "kind": self.kind,
            "worst_responses": list(self.worst_responses),
        }


def value_of(g: BimatrixGame, player: int, t: MixedStrategy):
    """Worst-case expected payoff of ``t`` over the opponent's pure strategies."""
    n_opp = g.n_strategies(3 - player)
    if len(t) != g.n_strategies(player):
        raise GameError(
            f"strategy has {len(t)} entries, player {player} has {g.n_strategies(player)} strategies"
        )
    return min(payoff_against_pure(g, player, t, k) for k in range(n_opp))


def worst_responses(g: BimatrixGame, player: int, t: MixedStrategy) -> tuple[int, ...]:
    payoffs = [payoff_against_pure(g, player, t, k) for k in range(g.n_strategies(3 - player))]
    low = min(payoffs)
    return tuple(k for k, v in enumerate(payoffs) if v == low)


def _kind(t: MixedStrategy) -> str:
    if t.is_pure:
        return PURE
    return STRICTLY_MIXED if t.is_strictly_mixed else MIXED


def make_report(g: BimatrixGame, player: int, t: MixedStrategy) -> SafetyReport:
    return SafetyReport(player, t, value_of(g, player, t), _kind(t), worst_responses(g, player, t))


def best_pure_safety(g: BimatrixGame, player: int) -> SafetyReport:
    """Pure maximin strategy; ties go to the lowest index."""
    n = g.n_strategies(player)
    best = None
    for j in range(n):
        rep = make_report(g, player, MixedStrategy.pure(n, j))
        if best is None or rep.value > best.value:
            best = rep
    return best


def safety_level_2x2(g: BimatrixGame, player: int) -> SafetyReport:
    """Closed-form maximin for a 2x2 game.

    With own payoffs a, b (first row) and c, d (second row), the
    equalizing probability on the first strategy is
    p = (d - c) / (a - c - b + d). It is used when it lies strictly inside
    (0, 1) and beats both pure guarantees; otherwise the best pure strategy
    wins. A zero denominator (parallel payoff lines) goes to the LP.
    """
    if g.shape != (2, 2):
        raise GameError(f"expected a 2x2 game, got {g.shape}")
    (a, b), (c, d) = g.own_matrix(player)
    pure = best_pure_safety(g, player)
    denom = a - c - b + d
    if denom == 0:
        return safety_level_lp(g, player)
    p = (d - c) / denom
    if 0 < p < 1:
        mixed = make_report(g, player, MixedStrategy((p, 1 - p)))
        if mixed.value >= pure.value:
            return mixed
    return pure


def safety_level_lp(g: BimatrixGame, player: int) -> SafetyReport:
    """Exact maximin strategy of any finite game via the simplex method.

    Payoffs are first mapped affinely onto [1, 2]; the map commutes with
    positive scaling and shifting, so those transformations leave the
    returned strategy untouched. The maximin program then becomes the
    covering LP ``min sum(x) s.t. M^T x >= 1``, solved through its packing
    dual, with ``t = x / sum(x)``.
    """
    m = g.own_matrix(player)
    n = len(m)
    entries = [v for row in m for v in row]
    lo, hi = min(entries), max(entries)
    if lo == hi:
        return make_report(g, player, MixedStrategy.pure(n, 0))
    span = hi - lo
    scaled = [[(v - lo) / span + 1 for v in row] for row in m]
    # packing rows are own strategies, so the dual lives on them
    _, x, total = solve_packing(scaled)
    t = MixedStrategy(tuple(xj / total for xj in x))
    report = make_report(g, player, t)
    assert report.value == (1 / total - 1) * span + lo, "LP certificate mismatch"
    return report


def safety_level(g: BimatrixGame, player: int) -> SafetyReport:
    """Closed form for 2x2 games, exact LP otherwise."""
    if g.shape == (2, 2):
        return safety_level_2x2(g, player)
    return safety_level_lp(g, player)
