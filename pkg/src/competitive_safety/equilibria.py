"""Nash equilibria of 2x2 games and safety-vs-equilibrium comparisons."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .games import (
    BimatrixGame,
    GameError,
    MixedStrategy,
    StrategyProfile2P,
    expected_payoff,
    format_fraction,
    is_generic,
    is_non_reducible,
)
from .safety import STRICTLY_MIXED, safety_level_2x2

log = logging.getLogger(__name__)

PURE = "pure"


@dataclass(frozen=True)
class Equilibrium2x2:
    """Equilibrium of a 2x2 game; p and q are the weights on the first strategies."""

    p: Fraction
    q: Fraction
    kind: str
    payoffs: tuple[Fraction, Fraction]

    @property
    def profile(self) -> StrategyProfile2P:
        return StrategyProfile2P(MixedStrategy((self.p, 1 - self.p)), MixedStrategy((self.q, 1 - self.q)))

    def to_json(self) -> dict:
        return {
            "p": format_fraction(self.p),
            "q": format_fraction(self.q),
            "kind": self.kind,
            "payoffs": [format_fraction(v) for v in self.payoffs],
        }


def _mixed_equilibrium(g: BimatrixGame) -> tuple[Equilibrium2x2 | None, str]:
    if g.shape != (2, 2):
        raise GameError(f"expected a 2x2 game, got {g.shape}")
    (a, b), (c, d) = g.u1
    (e, f), (gg, h) = g.u2
    den_q = a - b - c + d
    den_p = e - gg - f + h
    if den_q == 0 or den_p == 0:
        return None, "indifference system is degenerate (zero denominator)"
    q = (d - b) / den_q
    p = (h - gg) / den_p
    if not (0 < p < 1 and 0 < q < 1):
        return None, f"indifference solution p={p}, q={q} is not interior"
    profile = StrategyProfile2P(MixedStrategy((p, 1 - p)), MixedStrategy((q, 1 - q)))
    payoffs = (expected_payoff(g, 1, profile), expected_payoff(g, 2, profile))
    return Equilibrium2x2(p, q, STRICTLY_MIXED, payoffs), ""


def strictly_mixed_equilibrium(g: BimatrixGame) -> Equilibrium2x2 | None:
    """Interior equilibrium of a 2x2 game from the two indifference equations.

    Player 2's weight q makes player 1 indifferent between rows and vice
    versa. Returns None (reason logged at debug level) when either
    denominator vanishes or the solution is not strictly inside (0, 1).
    """
    eq, reason = _mixed_equilibrium(g)
    if eq is None:
        log.debug("no strictly mixed equilibrium: %s", reason)
    return eq


def pure_equilibria(g: BimatrixGame) -> list[StrategyProfile2P]:
    rows, cols = g.shape
    found = []
    for j in range(rows):
        for k in range(cols):
            if all(g.u1[j][k] >= g.u1[r][k] for r in range(rows)) and all(
                g.u2[j][k] >= g.u2[j][c] for c in range(cols)
            ):
                found.append(StrategyProfile2P(MixedStrategy.pure(rows, j), MixedStrategy.pure(cols, k)))
    return found


def _pure_as_2x2(g: BimatrixGame, profile: StrategyProfile2P) -> Equilibrium2x2:
    payoffs = (expected_payoff(g, 1, profile), expected_payoff(g, 2, profile))
    return Equilibrium2x2(profile.s1[0], profile.s2[0], PURE, payoffs)


@dataclass(frozen=True)
class ComparisonReport:
    player: int
    safety_value: Fraction
    nash_value: Fraction | None
    equal: bool
    ratio: Fraction | None
    safety_strategy: MixedStrategy
    safety_kind: str
    nash_strategy: MixedStrategy | None
    nash_kind: str | None
    within_hypotheses: bool
    notes: tuple[str, ...] = field(default=())

    @property
    def comparable(self) -> bool:
        return self.nash_value is not None

    def to_json(self) -> dict:
        def frac(x):
            return None if x is None else format_fraction(x)

        return {
            "player": self.player,
            "safety_value": frac(self.safety_value),
            "nash_value": frac(self.nash_value),
            "equal": self.equal,
            "ratio": frac(self.ratio),
            "safety_strategy": [format_fraction(p) for p in self.safety_strategy.probs],
            "safety_kind": self.safety_kind,
            "nash_strategy": None
            if self.nash_strategy is None
            else [format_fraction(p) for p in self.nash_strategy.probs],
            "nash_kind": self.nash_kind,
            "within_hypotheses": self.within_hypotheses,
            "notes": list(self.notes),
        }


def compare_safety_vs_nash(g: BimatrixGame, player: int) -> ComparisonReport:
    """Compare a player's maximin value with their equilibrium payoff.

    The strictly mixed equilibrium is the reference when it exists. Without
    one, the player's lowest pure-equilibrium payoff is used; with neither,
    the report is marked incomparable (``nash_value is None``).
    ``within_hypotheses`` is True only for generic, non-reducible games
    whose safety strategy is strictly mixed.
    """
    safety = safety_level_2x2(g, player)
    notes = []
    generic, non_reducible = is_generic(g), is_non_reducible(g)
    if not generic:
        notes.append("game is not generic")
    if not non_reducible:
        notes.append("game has a dominated strategy")
    if safety.kind != STRICTLY_MIXED:
        notes.append("safety strategy is not strictly mixed")
    within = generic and non_reducible and safety.kind == STRICTLY_MIXED
    if not within:
        notes.append("outside the hypotheses of the coincidence theorem")

    eq, reason = _mixed_equilibrium(g)
    if eq is None:
        notes.append(f"no strictly mixed equilibrium: {reason}")
        pures = [_pure_as_2x2(g, pr) for pr in pure_equilibria(g)]
        if pures:
            eq = min(pures, key=lambda e: e.payoffs[player - 1])
            notes.append("compared against the worst pure equilibrium")
        else:
            notes.append("incomparable: no equilibrium found")

    if eq is None:
        nash_value = nash_strategy = nash_kind = ratio = None
        equal = False
    else:
        nash_value = eq.payoffs[player - 1]
        nash_strategy = eq.profile.of(player)
        nash_kind = eq.kind
        equal = safety.value == nash_value
        ratio = nash_value / safety.value if safety.value > 0 else None
    return ComparisonReport(
        player=player,
        safety_value=safety.value,
        nash_value=nash_value,
        equal=equal,
        ratio=ratio,
        safety_strategy=safety.strategy,
        safety_kind=safety.kind,
        nash_strategy=nash_strategy,
        nash_kind=nash_kind,
        within_hypotheses=within,
        notes=tuple(notes),
    )
