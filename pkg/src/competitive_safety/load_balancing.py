"""Decentralized load balancing over m parallel links with n players.

A player on link i shared by ``load`` players receives X * alpha_i / load.
Link indices are 0-based here; link 0 is the fastest (alpha_0 = 1).

Speeds may be floats or Fractions. Closed-form quantities keep the input
arithmetic (exact for Fractions); the adversarial minimization over
opponent splits runs in floating point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

from .games import GameError, MixedStrategy

ENUMERATION_CAP = 10**7


@dataclass(frozen=True)
class LoadBalancingFamily:
    alphas: tuple
    X: float | Fraction = 1

    def __post_init__(self):
        alphas = tuple(self.alphas)
        object.__setattr__(self, "alphas", alphas)
        if len(alphas) < 2:
            raise GameError("need at least two links")
        if alphas[0] != 1:
            raise GameError(f"the fastest link must have speed 1, got {alphas[0]}")
        if any(a <= 0 for a in alphas):
            raise GameError(f"link speeds must be positive: {alphas}")
        if any(x < y for x, y in zip(alphas, alphas[1:])):
            raise GameError(f"link speeds must be non-increasing: {alphas}")
        if self.X <= 0:
            raise GameError(f"X must be positive, got {self.X}")

    @classmethod
    def binary(cls, alpha, X=1) -> "LoadBalancingFamily":
        return cls((type(alpha)(1), alpha), X)

    @property
    def m(self) -> int:
        return len(self.alphas)

    @property
    def exact(self) -> bool:
        return all(isinstance(a, (int, Fraction)) for a in self.alphas + (self.X,))


class SplitProfile(NamedTuple):
    """How the other n-1 players are spread over the links."""

    counts: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.counts)


class Guarantee(NamedTuple):
    value: float
    split: SplitProfile
    exhaustive: bool


@dataclass(frozen=True)
class RatioReport:
    n: int
    nash_bound: float
    guaranteed: float
    ratio: float
    limit_ratio: float
    exhaustive: bool

    def to_row(self) -> dict:
        return {
            "n": self.n,
            "nash_bound": self.nash_bound,
            "guaranteed": self.guaranteed,
            "ratio": self.ratio,
            "limit_ratio": self.limit_ratio,
            "exhaustive": self.exhaustive,
        }


def link_payoff(fam: LoadBalancingFamily, link: int, load: int):
    if load < 1:
        raise GameError(f"load must be at least 1 (the player itself), got {load}")
    if not 0 <= link < fam.m:
        raise GameError(f"link index {link} out of range for {fam.m} links")
    return fam.X * fam.alphas[link] / load


def _profitable_move(alphas: Sequence[Fraction], counts: list[int]):
    """Best strictly improving single-player move ``(gain, src, dst)``, or None."""
    best = None
    for src, c in enumerate(counts):
        if c == 0:
            continue
        here = alphas[src] / c
        for dst in range(len(counts)):
            if dst == src:
                continue
            gain = alphas[dst] / (counts[dst] + 1) - here
            if gain > 0 and (best is None or gain > best[0]):
                best = (gain, src, dst)
    return best


def partition_equilibrium(fam: LoadBalancingFamily, n: int) -> tuple[int, ...]:
    """Pure equilibrium loads with players split in proportion to link speeds.

    The fastest link receives ceil(n / sum(alpha)) players, the remainder
    is spread over the other links by largest remainder, and best-response
    moves then repair any profitable deviation. The result is checked
    exactly (Fractions) to admit no profitable unilateral move.
    """
    m = fam.m
    if n < m:
        raise GameError(f"need at least as many players as links (n={n}, m={m})")
    alphas = [Fraction(a) for a in fam.alphas]
    total = sum(alphas)
    first = min(n, math.ceil(n * alphas[0] / total))
    rest = n - first
    others = sum(alphas[1:])
    quotas = [rest * a / others for a in alphas[1:]]
    counts = [first] + [math.floor(qt) for qt in quotas]
    short = n - sum(counts)
    by_remainder = sorted(range(1, m), key=lambda i: (-(quotas[i - 1] - counts[i]), i))
    for i in by_remainder[:short]:
        counts[i] += 1

    # potential game: improving moves terminate
    while (move := _profitable_move(alphas, counts)) is not None:
        _, src, dst = move
        counts[src] -= 1
        counts[dst] += 1
    return tuple(counts)


def equilibrium_payoffs(fam: LoadBalancingFamily, counts: Sequence[int]) -> list:
    """Per-link payoff of a player on each occupied link (None when empty)."""
    return [link_payoff(fam, i, c) if c else None for i, c in enumerate(counts)]


def nash_value_bound(fam: LoadBalancingFamily, n: int):
    """Upper bound X * sum(alpha) / n on the lowest equilibrium payoff."""
    if n < 1:
        raise GameError(f"n must be positive, got {n}")
    return fam.X * sum(fam.alphas) / n


def _products_except(alphas: Sequence) -> list:
    out = []
    for i in range(len(alphas)):
        p = 1
        for j, a in enumerate(alphas):
            if j != i:
                p = p * a
        out.append(p)
    return out


def safety_mixture(fam: LoadBalancingFamily) -> MixedStrategy:
    """Pick link i with probability proportional to the product of the other speeds.

    Equivalently proportional to 1/alpha_i, which makes
    ``prob_i * alpha_i`` identical on every link.
    """
    prods = _products_except(fam.alphas)
    total = sum(prods)
    probs = tuple(p / total for p in prods)
    if fam.exact:
        return MixedStrategy(probs)
    return MixedStrategy(probs, exact=False)


def _split_payoff(weights: Sequence[float], counts: Sequence[int]) -> float:
    return sum(w / (c + 1) for w, c in zip(weights, counts))


def _weights(fam: LoadBalancingFamily, t: MixedStrategy) -> list[float]:
    if len(t) != fam.m:
        raise GameError(f"strategy has {len(t)} entries for {fam.m} links")
    return [float(p) * float(fam.X) * float(a) for p, a in zip(t.probs, fam.alphas)]


def _compositions(total: int, parts: int):
    """All tuples of ``parts`` non-negative ints summing to ``total``, lexicographic."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _local_search(weights: Sequence[float], others: int) -> tuple[float, tuple[int, ...]]:
    """Minimize a separable convex split cost by unit-block exchanges.

    Block sizes halve down to 1; a split that no single-unit exchange can
    improve is a global minimum for separable convex costs.
    """
    m = len(weights)
    counts = [others // m + (1 if i < others % m else 0) for i in range(m)]
    value = _split_payoff(weights, counts)
    step = 1 << max(0, (others // m).bit_length())
    while step >= 1:
        improved = True
        while improved:
            improved = False
            for src in range(m):
                if counts[src] < step:
                    continue
                for dst in range(m):
                    if dst == src:
                        continue
                    counts[src] -= step
                    counts[dst] += step
                    v = _split_payoff(weights, counts)
                    if v < value:
                        value, improved = v, True
                        break
                    counts[src] += step
                    counts[dst] -= step
                if improved:
                    break
        step //= 2
    return value, tuple(counts)


def guaranteed_value_exact(fam: LoadBalancingFamily, n: int, t: MixedStrategy) -> Guarantee:
    """Worst case of mixed strategy ``t`` over every split of the other n-1 players.

    Exhaustive (lexicographically first minimizer) while the number of
    splits C(n+m-2, m-1) stays within ``ENUMERATION_CAP``; otherwise an
    exchange local search, reported with ``exhaustive=False``.
    """
    if n < 1:
        raise GameError(f"n must be positive, got {n}")
    weights = _weights(fam, t)
    others = n - 1
    m = fam.m
    if math.comb(others + m - 1, m - 1) <= ENUMERATION_CAP:
        if m == 2:
            # same summation order as _split_payoff, without tuple churn
            w0, w1 = weights
            best_v, best_c = math.inf, 0
            for c in range(others + 1):
                v = w0 / (c + 1) + w1 / (others - c + 1)
                if v < best_v:
                    best_v, best_c = v, c
            return Guarantee(best_v, SplitProfile((best_c, others - best_c)), True)
        best = min(((_split_payoff(weights, c), c) for c in _compositions(others, m)))
        return Guarantee(best[0], SplitProfile(best[1]), True)
    value, counts = _local_search(weights, others)
    return Guarantee(value, SplitProfile(counts), False)


def continuous_bound(fam: LoadBalancingFamily, n: int, beta: float) -> float:
    """Lower bound on the two-link mixture's payoff when a beta share uses the slow link."""
    if fam.m != 2:
        raise GameError("continuous bound is defined for two links only")
    if n < 1:
        raise GameError(f"n must be positive, got {n}")
    if not 0 <= beta <= 1:
        raise GameError(f"beta must lie in [0, 1], got {beta}")
    alpha, X = float(fam.alphas[1]), float(fam.X)
    return (X * alpha / (1 + alpha)) * (n + 2) / ((1 + beta * n) * (n - beta * n + 1))


def ratio_limit_thm3(fam: LoadBalancingFamily):
    """Large-n competitive ratio of the speed-weighted mixture.

    sum(alpha) * sum_i prod_{j!=i} alpha_j / (m^2 * prod(alpha));
    (1 + a)^2 / (4a) for two links.
    """
    prod_all = 1
    for a in fam.alphas:
        prod_all = prod_all * a
    return sum(fam.alphas) * sum(_products_except(fam.alphas)) / (fam.m**2 * prod_all)


def cor1_strategy(alpha) -> tuple[MixedStrategy, float | Fraction]:
    """Two-link strategy with ratio at most 4/3 for any slow-link speed in (0, 1].

    Mixed by speed for alpha >= 1/3, otherwise always the fast link
    (ratio 1 + alpha).
    """
    if not 0 < alpha <= 1:
        raise GameError(f"alpha must lie in (0, 1], got {alpha}")
    fam = LoadBalancingFamily.binary(alpha)
    if alpha >= Fraction(1, 3):
        return safety_mixture(fam), ratio_limit_thm3(fam)
    return MixedStrategy.pure(2, 0), 1 + alpha


def k_regularity(fam: LoadBalancingFamily):
    """Average speed over slowest speed; the network is k-regular for any k above it."""
    return sum(fam.alphas) / fam.m / fam.alphas[-1]


def ratio_table(
    fam: LoadBalancingFamily,
    n_values: Sequence[int],
    strategy: MixedStrategy | None = None,
    limit_ratio=None,
) -> list[RatioReport]:
    """Nash bound over guaranteed value for each n.

    Defaults to the speed-weighted safety mixture and its large-n limit.
    """
    if strategy is None:
        strategy = safety_mixture(fam)
    if limit_ratio is None:
        limit_ratio = ratio_limit_thm3(fam)
    rows = []
    for n in n_values:
        if n < fam.m:
            raise GameError(f"n={n} is smaller than the number of links m={fam.m}")
        bound = float(nash_value_bound(fam, n))
        g = guaranteed_value_exact(fam, n, strategy)
        rows.append(RatioReport(n, bound, g.value, bound / g.value, float(limit_ratio), g.exhaustive))
    return rows
