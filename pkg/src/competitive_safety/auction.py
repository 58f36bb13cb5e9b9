"""First-price auction with uniform [0, 1] private values, in revelation form.

Bidders report a value; the highest report wins and pays (1 - 1/n) times
its report. Truthful reporting is an equilibrium, so the revelation
"bid" of a bidder is a report in [0, n/(n-1) * v].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .games import GameError

MC_CHUNK = 100_000
MIN_SAMPLES = 1_000
DIRECT_RIVALS = 100
ARGMAX_TOL = 1e-6


class VerificationError(RuntimeError):
    """Numerical cross-check disagreed with a closed form."""


def _check(v: float, n: int) -> None:
    if not 0 <= v <= 1:
        raise GameError(f"valuation must lie in [0, 1], got {v}")
    if n < 2 or int(n) != n:
        raise GameError(f"need an integer number of bidders n >= 2, got {n}")


def max_report(v: float, n: int) -> float:
    return v * n / (n - 1)


def equilibrium_bid(v: float, n: int) -> float:
    """First-price equilibrium bid (1 - 1/n) v."""
    _check(v, n)
    return (1 - 1 / n) * v


def equilibrium_expected_payoff(v: float, n: int) -> float:
    _check(v, n)
    return v**n / n


def worst_case_payoff(v: float, b: float, n: int) -> float:
    """Payoff of report b when every rival reports n/(n-1) times their value.

    The rival with value w beats b iff w > (n-1)/n * b, so b wins with
    probability ((n-1)/n * b)^(n-1) and then pays (n-1)/n * b.
    """
    _check(v, n)
    top = max_report(v, n)
    if not 0 <= b <= top * (1 + 1e-12):
        raise GameError(f"report {b} outside [0, {top}]")
    k = (n - 1) / n * b
    return (v - k) * k ** (n - 1)


def _golden_argmax(f: Callable[[float], float], lo: float, hi: float, tol: float) -> float:
    invphi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (a + b) / 2


def golden_section_safety_bid(v: float, n: int, tol: float = 1e-9) -> float:
    """Numerical argmax of the worst-case payoff over admissible reports.

    Works on the log payoff so large n does not underflow.
    """
    _check(v, n)
    if v == 0:
        return 0.0
    k = (n - 1) / n

    def log_payoff(b: float) -> float:
        win, surplus = k * b, v - k * b
        if win <= 0 or surplus <= 0:
            return -math.inf
        return (n - 1) * math.log(win) + math.log(surplus)

    return _golden_argmax(log_payoff, 0.0, max_report(v, n), tol)


def optimal_safety_bid(v: float, n: int) -> float:
    """The maximin report is the true value v, for every n.

    Checked on every call against golden-section search; raises
    VerificationError if they drift apart by more than 1e-6.
    """
    _check(v, n)
    numeric = golden_section_safety_bid(v, n)
    if abs(numeric - v) > ARGMAX_TOL:
        raise VerificationError(f"numerical argmax {numeric} disagrees with closed form {v} (n={n})")
    return v


def guaranteed_payoff(v: float, n: int) -> float:
    """Worst-case payoff of the truthful report: (v/n) * ((n-1)/n * v)^(n-1)."""
    _check(v, n)
    return (v / n) * ((n - 1) / n * v) ** (n - 1)


def competitive_ratio(n: int) -> float:
    """Equilibrium payoff over guaranteed payoff, (n/(n-1))^(n-1).

    Independent of v; rises from 2 at n = 2 toward e.
    """
    if n < 2 or int(n) != n:
        raise GameError(f"need an integer number of bidders n >= 2, got {n}")
    return math.exp((n - 1) * math.log1p(1 / (n - 1)))


@dataclass(frozen=True)
class AuctionSafetyReport:
    v: float
    n: int
    eq_bid: float
    eq_payoff: float
    safety_bid: float
    guaranteed: float
    ratio: float
    mc_mean: float | None = None
    mc_stderr: float | None = None

    def to_row(self) -> dict:
        return {
            "n": self.n,
            "v": self.v,
            "eq_bid": self.eq_bid,
            "eq_payoff": self.eq_payoff,
            "safety_bid": self.safety_bid,
            "guaranteed": self.guaranteed,
            "ratio": self.ratio,
            "mc_mean": self.mc_mean,
            "mc_stderr": self.mc_stderr,
        }


def safety_report(v: float, n: int) -> AuctionSafetyReport:
    return AuctionSafetyReport(
        v=v,
        n=n,
        eq_bid=equilibrium_bid(v, n),
        eq_payoff=equilibrium_expected_payoff(v, n),
        safety_bid=optimal_safety_bid(v, n),
        guaranteed=guaranteed_payoff(v, n),
        ratio=competitive_ratio(n),
    )


def truthful(v: float) -> float:
    return v


def monte_carlo_payoff(
    v: float,
    bid_fn: Callable[[float], float] = truthful,
    n: int = 2,
    samples: int = 100_000,
    seed: int = 42,
    opponents: str = "truthful",
) -> tuple[float, float]:
    """Simulated mean payoff and its standard error for a bidder with value v.

    Rivals draw uniform values and report them (``"truthful"``) or report
    n/(n-1) times them (``"aggressive"``, the worst case admitted by the
    revelation bid range). Ties are broken by a fair seeded lottery.

    Samples are drawn in chunks of ``MC_CHUNK``, each from its own stream
    spawned from ``seed``, so results depend only on (seed, samples, n).
    Up to ``DIRECT_RIVALS`` rivals are drawn one by one; beyond that only
    the highest rival value is drawn, from its order-statistic law.
    """
    _check(v, n)
    if samples < MIN_SAMPLES or int(samples) != samples:
        raise GameError(f"need an integer sample count >= {MIN_SAMPLES}, got {samples}")
    if opponents not in ("truthful", "aggressive"):
        raise GameError(f"unknown opponent model {opponents!r}")
    report = float(bid_fn(v))
    price = (1 - 1 / n) * report
    scale = n / (n - 1) if opponents == "aggressive" else 1.0

    n_chunks = -(-samples // MC_CHUNK)
    streams = np.random.SeedSequence(seed).spawn(n_chunks)
    total = 0.0
    total_sq = 0.0
    for i, ss in enumerate(streams):
        size = min(MC_CHUNK, samples - i * MC_CHUNK)
        rng = np.random.default_rng(ss)
        if n - 1 <= DIRECT_RIVALS:
            rivals = rng.random((size, n - 1)) * scale
            top = rivals.max(axis=1)
            ties = (rivals == report).sum(axis=1)
        else:
            # the max of n-1 uniforms is distributed as U**(1/(n-1))
            top = rng.random(size) ** (1.0 / (n - 1)) * scale
            ties = (top == report).astype(np.int64)
        lottery = rng.random(size)
        wins = (report > top) | ((report == top) & (lottery < 1.0 / (ties + 1)))
        payoff = np.where(wins, v - price, 0.0)
        total += float(payoff.sum())
        total_sq += float((payoff * payoff).sum())
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0) * samples / (samples - 1)
    return mean, math.sqrt(var / samples)
