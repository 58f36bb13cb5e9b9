"""Finite two-player games with exact rational payoffs.

Payoff tables are indexed ``[row][col]`` where rows are player 1's pure
strategies and columns are player 2's. Players are numbered 1 and 2.
Everything here is immutable; every function is pure.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence

Matrix = tuple[tuple[Fraction, ...], ...]


class GameError(ValueError):
    """Malformed game, strategy or index."""


class AlphaRangeWarning(UserWarning):
    """Link speed outside the two-link game's nominal (1/2, 1) range."""


def as_fraction(x) -> Fraction:
    """Coerce ints, Fractions, decimal strings or "p/q" strings to a Fraction.

    Floats are converted through their shortest decimal repr, so ``0.8``
    becomes ``4/5`` rather than its binary expansion.
    """
    if isinstance(x, bool):
        raise GameError(f"boolean is not a payoff: {x!r}")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, float):
        if x != x or x in (float("inf"), float("-inf")):
            raise GameError(f"non-finite value {x!r}")
        return Fraction(repr(x))
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise GameError(f"not a rational number: {x!r}") from exc
    raise GameError(f"unsupported number type {type(x).__name__}: {x!r}")


def format_fraction(x: Fraction) -> str:
    """Render as "p/q", or "p" for integers."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _matrix(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(as_fraction(v) for v in row) for row in rows)


@dataclass(frozen=True)
class MixedStrategy:
    """Probability vector over one player's pure strategies.

    With ``exact=True`` entries are Fractions summing to exactly 1;
    otherwise they are floats summing to 1 within 1e-12.
    """

    probs: tuple
    exact: bool = True

    def __post_init__(self):
        if not self.probs:
            raise GameError("empty mixed strategy")
        if self.exact:
            probs = tuple(as_fraction(p) for p in self.probs)
            total = sum(probs, Fraction(0))
            if total != 1:
                raise GameError(f"probabilities sum to {total}, not 1")
        else:
            probs = tuple(float(p) for p in self.probs)
            if abs(sum(probs) - 1.0) > 1e-12:
                raise GameError(f"probabilities sum to {sum(probs)!r}, not 1")
        if any(p < 0 for p in probs):
            raise GameError(f"negative probability in {probs}")
        object.__setattr__(self, "probs", probs)

    @classmethod
    def pure(cls, size: int, index: int) -> "MixedStrategy":
        if not 0 <= index < size:
            raise GameError(f"pure strategy index {index} out of range for {size} strategies")
        return cls(tuple(Fraction(int(i == index)) for i in range(size)))

    @classmethod
    def uniform(cls, size: int) -> "MixedStrategy":
        return cls(tuple(Fraction(1, size) for _ in range(size)))

    def __len__(self) -> int:
        return len(self.probs)

    def __getitem__(self, i):
        return self.probs[i]

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, p in enumerate(self.probs) if p > 0)

    @property
    def is_strictly_mixed(self) -> bool:
        return all(p > 0 for p in self.probs)

    @property
    def is_pure(self) -> bool:
        return len(self.support) == 1


@dataclass(frozen=True)
class StrategyProfile2P:
    s1: MixedStrategy
    s2: MixedStrategy

    def of(self, player: int) -> MixedStrategy:
        return self.s1 if player == 1 else self.s2


@dataclass(frozen=True)
class BimatrixGame:
    """Two payoff tables over a shared (rows x cols) grid of pure profiles."""

    u1: Matrix
    u2: Matrix
    labels: tuple[tuple[str, ...], tuple[str, ...]] | None = None

    def __post_init__(self):
        u1, u2 = _matrix(self.u1), _matrix(self.u2)
        if not u1 or not u1[0]:
            raise GameError("payoff table must be non-empty")
        ncols = len(u1[0])
        if any(len(row) != ncols for row in u1 + u2) or len(u2) != len(u1):
            raise GameError("u1 and u2 must be rectangular tables of identical shape")
        labels = self.labels
        if labels is None:
            labels = (
                tuple(f"a{j + 1}" for j in range(len(u1))),
                tuple(f"a{k + 1}" for k in range(ncols)),
            )
        else:
            labels = (tuple(labels[0]), tuple(labels[1]))
            if (len(labels[0]), len(labels[1])) != (len(u1), ncols):
                raise GameError("strategy labels do not match the payoff table shape")
        object.__setattr__(self, "u1", u1)
        object.__setattr__(self, "u2", u2)
        object.__setattr__(self, "labels", labels)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.u1), len(self.u1[0])

    def n_strategies(self, player: int) -> int:
        return self.shape[_check_player(player) - 1]

    def own_matrix(self, player: int) -> Matrix:
        """Player's payoffs with rows = own strategies, cols = opponent's."""
        if _check_player(player) == 1:
            return self.u1
        return tuple(zip(*self.u2))

    def transpose(self) -> "BimatrixGame":
        """Swap the roles of the two players."""
        return BimatrixGame(
            tuple(zip(*self.u2)), tuple(zip(*self.u1)), (self.labels[1], self.labels[0])
        )


def _check_player(player: int) -> int:
    if player not in (1, 2):
        raise GameError(f"player must be 1 or 2, got {player!r}")
    return player


def _check_profile(g: BimatrixGame, profile: StrategyProfile2P) -> None:
    rows, cols = g.shape
    if len(profile.s1) != rows or len(profile.s2) != cols:
        raise GameError(
            f"profile dimensions ({len(profile.s1)}, {len(profile.s2)}) "
            f"do not match game shape ({rows}, {cols})"
        )


def expected_payoff(g: BimatrixGame, player: int, profile: StrategyProfile2P):
    """Sum of s1[j] * s2[k] * u[j][k] over all cells.

    Exact when both strategies are exact, float otherwise.
    """
    _check_profile(g, profile)
    u = g.u1 if _check_player(player) == 1 else g.u2
    total = Fraction(0)
    for j, pj in enumerate(profile.s1.probs):
        if pj == 0:
            continue
        for k, qk in enumerate(profile.s2.probs):
            if qk:
                total += pj * qk * u[j][k]
    return total


def payoff_against_pure(g: BimatrixGame, player: int, t: MixedStrategy, opponent: int):
    """Expected payoff of mixed ``t`` when the opponent plays pure ``opponent``."""
    m = g.own_matrix(player)
    if len(t) != len(m):
        raise GameError(f"strategy has {len(t)} entries, player {player} has {len(m)} strategies")
    if not 0 <= opponent < len(m[0]):
        raise GameError(f"opponent strategy index {opponent} out of range")
    return sum((p * m[j][opponent] for j, p in enumerate(t.probs) if p), Fraction(0))


def dominates(g: BimatrixGame, player: int, e: int, f: int) -> bool:
    """Whether own strategy ``e`` weakly dominates ``f`` with one strict case.

    Only opponent pure strategies are compared: expected payoff is linear in
    the opponent's mixture, so a pure-wise comparison decides the mixed one.
    """
    m = g.own_matrix(player)
    for idx in (e, f):
        if not 0 <= idx < len(m):
            raise GameError(f"strategy index {idx} out of range for player {player}")
    diffs = [m[e][k] - m[f][k] for k in range(len(m[0]))]
    return all(d >= 0 for d in diffs) and any(d > 0 for d in diffs)


def is_non_reducible(g: BimatrixGame) -> bool:
    for player in (1, 2):
        n = g.n_strategies(player)
        for e in range(n):
            for f in range(n):
                if e != f and dominates(g, player, e, f):
                    return False
    return True


def is_generic(g: BimatrixGame) -> bool:
    """No two distinct own strategies tie against any opponent pure strategy."""
    for player in (1, 2):
        m = g.own_matrix(player)
        for k in range(len(m[0])):
            column = [m[j][k] for j in range(len(m))]
            if len(set(column)) != len(column):
                return False
    return True


def make_load_balancing_2x2(alpha, X=1) -> BimatrixGame:
    """Two players, two parallel links of value X and alpha*X, halved on collision."""
    alpha, X = as_fraction(alpha), as_fraction(X)
    if X <= 0:
        raise GameError(f"X must be positive, got {X}")
    if alpha <= 0:
        raise GameError(f"alpha must be positive, got {alpha}")
    if not Fraction(1, 2) < alpha < 1:
        warnings.warn(
            f"alpha={alpha} lies outside (1/2, 1); the game is still well defined",
            AlphaRangeWarning,
            stacklevel=2,
        )
    u1 = ((X / 2, X), (alpha * X, alpha * X / 2))
    u2 = ((X / 2, alpha * X), (X, alpha * X / 2))
    return BimatrixGame(u1, u2, (("e1", "e2"), ("e1", "e2")))


def make_leader_election(a, b, c, d) -> BimatrixGame:
    """Agreement on a1 pays (a, b), agreement on a2 pays (c, d), disagreement pays 0."""
    a, b, c, d = (as_fraction(x) for x in (a, b, c, d))
    if min(a, b, c, d) <= 0:
        raise GameError("leader election payoffs must all be positive")
    zero = Fraction(0)
    return BimatrixGame(
        ((a, zero), (zero, c)),
        ((b, zero), (zero, d)),
        (("vote1", "vote2"), ("vote1", "vote2")),
    )


def make_aumann_game() -> BimatrixGame:
    return BimatrixGame(((2, 4), (6, 0)), ((6, 2), (0, 4)))


def make_section51_game() -> BimatrixGame:
    """Generic non-reducible game whose player-1 maximin strategy is pure."""
    return BimatrixGame(((100, 40), (60, 50)), ((100, 210), (200, 90)))


def make_cyclic_voting_game() -> BimatrixGame:
    """Three-candidate vote whose payoffs depend only on the pair of ballots cast."""
    u1 = ((0, 1, 2), (1, 2, 0), (2, 0, 1))
    u2 = ((2, 0, 1), (0, 1, 2), (1, 2, 0))
    labels = ("x", "y", "z")
    return BimatrixGame(u1, u2, (labels, labels))
