import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from competitive_safety import load_balancing as lb
from competitive_safety.games import GameError, MixedStrategy
from competitive_safety.load_balancing import (
    LoadBalancingFamily,
    continuous_bound,
    cor1_strategy,
    guaranteed_value_exact,
    k_regularity,
    link_payoff,
    nash_value_bound,
    partition_equilibrium,
    ratio_limit_thm3,
    ratio_table,
    safety_mixture,
)
from competitive_safety.oracles import exhaustive_split_min

F = Fraction


def random_family(rng: random.Random, m: int) -> LoadBalancingFamily:
    rest = sorted((F(rng.randint(1, 60), 60) for _ in range(m - 1)), reverse=True)
    return LoadBalancingFamily((F(1), *rest))


def is_pure_equilibrium(fam, counts) -> bool:
    for src, c in enumerate(counts):
        if c == 0:
            continue
        here = link_payoff(fam, src, c)
        for dst in range(fam.m):
            if dst != src and link_payoff(fam, dst, counts[dst] + 1) > here:
                return False
    return True


class TestFamily:
    def test_validation(self):
        with pytest.raises(GameError):
            LoadBalancingFamily((F(1),))
        with pytest.raises(GameError):
            LoadBalancingFamily((F(1, 2), F(1, 2)))
        with pytest.raises(GameError):
            LoadBalancingFamily((1, 0.5, 0.7))
        with pytest.raises(GameError):
            LoadBalancingFamily((1, 0.5), X=0)

    def test_exactness_follows_input(self):
        assert LoadBalancingFamily.binary(F(1, 2)).exact
        assert not LoadBalancingFamily.binary(0.5).exact


class TestLinkPayoff:
    def test_examples(self):
        fam = LoadBalancingFamily((1, 0.5))
        assert link_payoff(fam, 1, 2) == 0.25
        assert link_payoff(LoadBalancingFamily((F(1), F(1, 2)), F(3)), 0, 4) == F(3, 4)

    def test_bad_inputs(self):
        fam = LoadBalancingFamily((1, 0.5))
        with pytest.raises(GameError):
            link_payoff(fam, 0, 0)
        with pytest.raises(GameError):
            link_payoff(fam, 2, 1)


class TestPartitionEquilibrium:
    def test_examples(self):
        assert partition_equilibrium(LoadBalancingFamily.binary(F(1, 2)), 3) == (2, 1)
        assert partition_equilibrium(LoadBalancingFamily.binary(F(1)), 4) == (2, 2)

    def test_too_few_players(self):
        with pytest.raises(GameError):
            partition_equilibrium(LoadBalancingFamily((F(1), F(1, 2), F(1, 3))), 2)

    def test_random_families_are_equilibria(self):
        rng = random.Random(17)
        for _ in range(150):
            fam = random_family(rng, rng.randint(2, 5))
            n = rng.randint(fam.m, 80)
            counts = partition_equilibrium(fam, n)
            assert sum(counts) == n
            assert is_pure_equilibrium(fam, counts)
            lowest = min(p for p in lb.equilibrium_payoffs(fam, counts) if p is not None)
            assert lowest <= nash_value_bound(fam, n)


class TestClosedForms:
    def test_nash_bound(self):
        assert nash_value_bound(LoadBalancingFamily.binary(F(1, 2)), 3) == F(1, 2)
        assert nash_value_bound(LoadBalancingFamily.binary(F(1), 2), 4) == 1
        assert nash_value_bound(LoadBalancingFamily((F(1), F(1, 2), F(1, 2))), 4) == F(1, 2)

    def test_safety_mixture(self):
        assert safety_mixture(LoadBalancingFamily.binary(F(4, 5))).probs == (F(4, 9), F(5, 9))
        assert safety_mixture(LoadBalancingFamily((F(1),) * 3)).probs == (F(1, 3),) * 3
        assert safety_mixture(LoadBalancingFamily.binary(F(1, 2))).probs == (F(1, 3), F(2, 3))

    def test_mixture_equalizes_weighted_speed(self):
        fam = LoadBalancingFamily((F(1), F(3, 4), F(1, 5), F(1, 7)))
        t = safety_mixture(fam)
        assert len({p * a for p, a in zip(t.probs, fam.alphas)}) == 1

    def test_ratio_limit(self):
        assert ratio_limit_thm3(LoadBalancingFamily.binary(F(1, 2))) == F(9, 8)
        assert ratio_limit_thm3(LoadBalancingFamily((F(1),) * 4)) == 1

    @given(st.fractions(min_value=F(1, 100), max_value=1, max_denominator=100))
    def test_ratio_limit_two_links(self, a):
        assert ratio_limit_thm3(LoadBalancingFamily.binary(a)) == (1 + a) ** 2 / (4 * a)

    def test_cor1(self):
        t, bound = cor1_strategy(F(1, 3))
        assert bound == F(4, 3) and t.is_strictly_mixed
        assert cor1_strategy(F(1))[1] == 1
        t, bound = cor1_strategy(F(1, 5))
        assert bound == F(6, 5) and t.probs == (1, 0)
        with pytest.raises(GameError):
            cor1_strategy(0)

    def test_k_regularity(self):
        assert k_regularity(LoadBalancingFamily.binary(F(1, 2))) == F(3, 2)
        assert k_regularity(LoadBalancingFamily((F(1),) * 3)) == 1
        assert k_regularity(LoadBalancingFamily((F(1), F(1, 2), F(1, 2), F(1, 2)))) <= 2


class TestGuaranteedValue:
    def test_single_player_takes_expectation(self):
        fam = LoadBalancingFamily.binary(F(1, 2))
        g = guaranteed_value_exact(fam, 1, safety_mixture(fam))
        assert g.value == pytest.approx(2 / 3, abs=1e-15)
        assert g.split.counts == (0, 0)

    def test_matches_manual_scan(self):
        fam = LoadBalancingFamily.binary(F(1, 2))
        t = safety_mixture(fam)
        w0, w1 = 1 / 3, 2 / 3 * 0.5
        manual = min(w0 / (c + 1) + w1 / (10 - c + 1) for c in range(11))
        assert guaranteed_value_exact(fam, 11, t).value == manual

    def test_n2_two_link_closed_form(self):
        for a in (F(3, 5), F(3, 4), F(9, 10)):
            fam = LoadBalancingFamily.binary(a)
            g = guaranteed_value_exact(fam, 2, safety_mixture(fam))
            assert abs(g.value - float(F(3, 2) * a / (1 + a))) < 1e-12

    @pytest.mark.parametrize("n", [2, 5, 17, 60])
    def test_at_least_continuous_bound(self, n):
        fam = LoadBalancingFamily.binary(F(1, 2))
        g = guaranteed_value_exact(fam, n, safety_mixture(fam))
        assert g.value >= continuous_bound(fam, n, 0.5) - 1e-12

    def test_continuous_bound_limit(self):
        fam = LoadBalancingFamily.binary(F(1, 2))
        n = 10**6
        # beta = 1/2 gives (alpha/(1+alpha)) * 4/n asymptotically
        assert continuous_bound(fam, n, 0.5) * n == pytest.approx(4 / 3, rel=1e-5)

    def test_adversary_split_near_balanced(self):
        fam = LoadBalancingFamily.binary(F(1, 2))
        t = safety_mixture(fam)
        for n in (9, 31, 100, 401):
            c = guaranteed_value_exact(fam, n, t).split.counts
            assert abs(c[0] - (n - 1) // 2) <= 1

    def test_local_search_agrees_with_enumeration(self, monkeypatch):
        rng = random.Random(2)
        cases = []
        for _ in range(30):
            fam = random_family(rng, rng.randint(2, 4))
            cases.append((fam, rng.randint(1, 40)))
        full = [guaranteed_value_exact(f, n, safety_mixture(f)) for f, n in cases]
        monkeypatch.setattr(lb, "ENUMERATION_CAP", 0)
        for (f, n), ref in zip(cases, full):
            g = guaranteed_value_exact(f, n, safety_mixture(f))
            assert not g.exhaustive
            assert g.value == pytest.approx(ref.value, rel=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(2, 4), st.integers(1, 25), st.randoms(use_true_random=False))
    def test_agrees_with_split_oracle(self, m, n, r):
        fam = random_family(r, m)
        w = [r.randint(1, 9) for _ in range(m)]
        t = MixedStrategy(tuple(F(x, sum(w)) for x in w))
        g = guaranteed_value_exact(fam, n, t)
        v, counts = exhaustive_split_min(fam, n, t)
        assert g.exhaustive and g.value == v and g.split.counts == counts


class TestRatios:
    def test_half_speed_table(self):
        fam = LoadBalancingFamily.binary(F(1, 2))
        rows = ratio_table(fam, [10, 100, 1000, 10000])
        for r in rows:
            assert r.ratio <= 1.125 * (1 + 10 / r.n)
            assert r.limit_ratio == 1.125
        assert abs(rows[-1].ratio - 1.125) / 1.125 < 0.01

    def test_pure_fast_link_ratio(self):
        fam = LoadBalancingFamily.binary(F(1, 4))
        (row,) = ratio_table(fam, [1000], strategy=MixedStrategy.pure(2, 0), limit_ratio=F(5, 4))
        assert row.ratio == pytest.approx(1.25, rel=1e-12)

    def test_table_rejects_small_n(self):
        with pytest.raises(GameError):
            ratio_table(LoadBalancingFamily((F(1), F(1), F(1))), [2])

    def test_ratio_limit_within_k_regularity(self):
        rng = random.Random(23)
        for _ in range(300):
            fam = random_family(rng, rng.randint(2, 6))
            assert ratio_limit_thm3(fam) <= k_regularity(fam)

    def test_finite_n_ratio_within_large_n_limit(self):
        rng = random.Random(29)
        for _ in range(50):
            m = rng.randint(2, 5)
            rest = sorted((rng.uniform(0.2, 1.0) for _ in range(m - 1)), reverse=True)
            fam = LoadBalancingFamily((1.0, *rest))
            (row,) = ratio_table(fam, [10_000])
            assert row.ratio <= row.limit_ratio * 1.01

    def test_three_links_finite_n(self):
        fam = LoadBalancingFamily((F(1), F(3, 4), F(1, 2)))
        (row,) = ratio_table(fam, [3000])
        assert row.ratio <= float(ratio_limit_thm3(fam)) * 1.01
        assert math.isfinite(row.ratio)
