"""Two-player set-theoretic games and the strategy-transplant guarantee.

In a set-theoretic game both players share one strategy set and each
payoff depends only on the unordered pair of choices, so both payoff
tables are symmetric matrices. If (t1, t2) is a full-support equilibrium,
player 1 playing t2 (and player 2 playing t1) is indifferent to the
opponent's choice and guarantees exactly the equilibrium payoff.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .games import BimatrixGame, GameError, MixedStrategy, StrategyProfile2P, expected_payoff
from .safety import SafetyReport, make_report

MAX_STRATEGIES = 6


class SymmetryError(GameError):
    pass


@dataclass(frozen=True)
class SetTheoreticGame:
    base: BimatrixGame

    @property
    def size(self) -> int:
        return self.base.shape[0]


def make_set_theoretic(g: BimatrixGame) -> SetTheoreticGame:
    rows, cols = g.shape
    if rows != cols:
        raise SymmetryError(f"set-theoretic games need a square table, got {rows}x{cols}")
    for name, u in (("u1", g.u1), ("u2", g.u2)):
        for s in range(rows):
            for t in range(s + 1, rows):
                if u[s][t] != u[t][s]:
                    raise SymmetryError(
                        f"{name}[{s}][{t}] = {u[s][t]} differs from {name}[{t}][{s}] = {u[t][s]}"
                    )
    return SetTheoreticGame(g)


@dataclass(frozen=True)
class FullSupportEquilibrium:
    t1: MixedStrategy
    t2: MixedStrategy
    payoffs: tuple[Fraction, Fraction]
    multiple: bool = False  # indifference system was singular; this is one witness

    @property
    def profile(self) -> StrategyProfile2P:
        return StrategyProfile2P(self.t1, self.t2)


def _solve(rows: list[list[Fraction]], rhs: list[Fraction], anchor: Fraction):
    """Exact Gauss-Jordan solve; free variables are pinned to ``anchor``.

    Returns ``(solution, singular)`` or ``(None, singular)`` when inconsistent.
    """
    n = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        piv = aug[r][c]
        aug[r] = [v / piv for v in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [vi - f * vr for vi, vr in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    if any(all(v == 0 for v in row[:-1]) and row[-1] != 0 for row in aug):
        return None, len(pivots) < n
    free = [c for c in range(n) if c not in pivots]
    x = [Fraction(0)] * n
    for c in free:
        x[c] = anchor
    for i, c in enumerate(pivots):
        x[c] = aug[i][-1] - sum((aug[i][f] * x[f] for f in free), Fraction(0))
    return x, bool(free)


def _indifferent_mixture(m, size: int) -> tuple[list[Fraction] | None, bool, str]:
    """Opponent mixture y with ``m @ y`` constant and ``sum(y) = 1``.

    Unknowns are y_0..y_{l-1} and the common value v.
    """
    rows = [list(m[j]) + [Fraction(-1)] for j in range(size)]
    rows.append([Fraction(1)] * size + [Fraction(0)])
    rhs = [Fraction(0)] * size + [Fraction(1)]
    sol, singular = _solve(rows, rhs, Fraction(1, size))
    if sol is None:
        return None, singular, "indifference system is inconsistent"
    y = sol[:size]
    if not all(p > 0 for p in y):
        return None, singular, f"indifference mixture {y} is not strictly positive"
    return y, singular, ""


def strictly_mixed_equilibrium_support_enum(g: SetTheoreticGame) -> FullSupportEquilibrium | None:
    """Full-support equilibrium of a set-theoretic game, if one exists.

    Each player's mixture is chosen to make the *other* player indifferent
    among all pure strategies. When an indifference system is singular the
    free probabilities are pinned to 1/l and the result is flagged
    ``multiple``. Games larger than 6x6 are rejected.
    """
    size = g.size
    if size > MAX_STRATEGIES:
        raise GameError(f"full-support search is limited to {MAX_STRATEGIES} strategies, got {size}")
    base = g.base
    # t2 equalizes player 1's rows; t1 equalizes player 2's columns
    t2, sing2, _ = _indifferent_mixture(base.u1, size)
    if t2 is None:
        return None
    t1, sing1, _ = _indifferent_mixture(base.own_matrix(2), size)
    if t1 is None:
        return None
    profile = StrategyProfile2P(MixedStrategy(t1), MixedStrategy(t2))
    payoffs = (expected_payoff(base, 1, profile), expected_payoff(base, 2, profile))
    return FullSupportEquilibrium(profile.s1, profile.s2, payoffs, sing1 or sing2)


def full_support_diagnostic(g: SetTheoreticGame) -> str:
    """Why no full-support equilibrium was found ("" when one exists)."""
    for player, m in ((1, g.base.u1), (2, g.base.own_matrix(2))):
        y, _, reason = _indifferent_mixture(m, g.size)
        if y is None:
            return f"player {player} cannot be made indifferent: {reason}"
    return ""


def transplant_safety_value(
    g: SetTheoreticGame, eq: FullSupportEquilibrium, player: int
) -> SafetyReport:
    """Safety report for a player who adopts the opponent's equilibrium mixture.

    The resulting guarantee equals the player's equilibrium payoff; a
    mismatch means ``eq`` was not a full-support equilibrium of ``g``.
    """
    if not (eq.t1.is_strictly_mixed and eq.t2.is_strictly_mixed):
        raise GameError("transplant needs a strictly mixed equilibrium")
    base = g.base
    for pl in (1, 2):
        m = base.own_matrix(pl)
        opp = eq.t2 if pl == 1 else eq.t1
        payoffs = {sum((m[j][k] * opp[k] for k in range(g.size)), Fraction(0)) for j in range(g.size)}
        if len(payoffs) != 1:
            raise GameError(f"player {pl} is not indifferent across strategies: not an equilibrium")
    strategy = eq.t2 if player == 1 else eq.t1
    report = make_report(base, player, strategy)
    if report.value != eq.payoffs[player - 1]:
        raise GameError(
            f"transplanted value {report.value} differs from equilibrium payoff {eq.payoffs[player - 1]}"
        )
    return report
