import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from securenoma.noma import (
    DecodingStrategy,
    NomaScenario,
    OutageEstimate,
    PowerAllocation,
    Realization,
    TargetRates,
    achievable_rates_csi,
    common_outage,
    hybrid_threshold_and_group,
    outage_free_feasible,
    outage_indicators,
    qos_admission,
    strategy_order,
    superpose,
)

QPSK = [1 + 1j, -1 + 1j, 1 - 1j, -1 - 1j]
gains = st.floats(1e-4, 1e3)
snrs = st.floats(1e-2, 1e5)


class TestTypes:
    def test_power_allocation_bounds(self):
        with pytest.raises(ValueError):
            PowerAllocation(0.6, 0.6)
        with pytest.raises(ValueError):
            PowerAllocation(-0.1, 0.5)
        with pytest.raises(ValueError):
            PowerAllocation(0.3, 0.7, pa_dos_alpha=0.5)

    def test_thresholds(self):
        r = TargetRates(1.6, 0.4, 1.0)
        assert r.gamma1 == pytest.approx(2.031433133020796, rel=1e-15)
        assert r.gamma2 == pytest.approx(0.3195079107728943, rel=1e-15)
        assert r.gamma0 == 1.0
        with pytest.raises(ValueError):
            TargetRates(-1, 0)

    def test_strategy_names(self):
        assert DecodingStrategy.parse("pAdOsHuF") is DecodingStrategy.PA_DOS_HUF
        assert DecodingStrategy.parse("FIXED_CSI") is DecodingStrategy.FIXED_CSI
        with pytest.raises(ValueError):
            DecodingStrategy.parse("Random")

    def test_outage_estimate_stderr(self):
        est = OutageEstimate.from_count(25, 100, 3)
        assert est.probability == 0.25
        assert est.stderr == pytest.approx(math.sqrt(0.25 * 0.75 / 100))


class TestSuperpose:
    def test_single_user(self):
        assert superpose(1 + 1j, 5 - 2j, PowerAllocation(1.0, 0.0)) == 1 + 1j

    def test_symmetric(self):
        assert superpose(1, 1, PowerAllocation(0.5, 0.5)) == pytest.approx(math.sqrt(2))

    def test_composite_alphabet(self):
        pa = PowerAllocation(0.3, 0.7)
        points = {complex(round(superpose(a, b, pa).real, 12), round(superpose(a, b, pa).imag, 12))
                  for a, b in itertools.product(QPSK, QPSK)}
        assert len(points) == 16


class TestRates:
    def test_values(self):
        r12, r11, r22 = achievable_rates_csi(1.0, 0.25, 10.0, PowerAllocation(0.3, 0.7))
        assert r12 == pytest.approx(1.4594316186372973, rel=1e-14)
        assert r11 == pytest.approx(2.0, rel=1e-15)
        assert r22 == pytest.approx(1.4594316186372973, rel=1e-14)

    def test_no_power_to_user2(self):
        r12, _, r22 = achievable_rates_csi(1.0, 0.25, 10.0, PowerAllocation(1.0, 0.0))
        assert r12 == 0 and r22 == 0

    def test_equal_gains(self):
        r12, _, r22 = achievable_rates_csi(0.8, 0.8, 10.0, PowerAllocation(0.2, 0.8))
        # both carry a2*g in the numerator; r_1to2 additionally sees user 1's signal
        assert r12 <= r22

    def test_bad_snr(self):
        with pytest.raises(ValueError):
            achievable_rates_csi(1, 1, 0, PowerAllocation())

    @given(gains, gains, snrs, st.floats(1.01, 10), st.floats(0, 1))
    def test_monotone(self, g1, g2, rho, factor, a1):
        pa = PowerAllocation(a1, 1 - a1)
        base = achievable_rates_csi(g1, g2, rho, pa)
        assert min(base) >= 0
        more_snr = achievable_rates_csi(g1, g2, rho * factor, pa)
        assert all(m >= b - 1e-12 for m, b in zip(more_snr, base))
        more_gain = achievable_rates_csi(g1 * factor, g2 * factor, rho, pa)
        assert all(m >= b - 1e-12 for m, b in zip(more_gain, base))


class TestQos:
    def test_admitted(self):
        d = qos_admission(1.0, 0.25, 10.0, 1.0)
        assert d.admitted
        assert d.primary_rate == pytest.approx(1.9475325801058644, rel=1e-14)
        assert d.secondary_rate == pytest.approx(1.8073549220576042, rel=1e-14)

    def test_zero_target(self):
        assert qos_admission(1e-9, 50.0, 0.1, 0.0).admitted

    def test_interference_limit(self):
        d = qos_admission(1.0, math.inf, 10.0, 0.5)
        assert not d.admitted and d.secondary_rate == 0.0
        assert not qos_admission(1.0, 1e12, 10.0, 0.5).admitted


class TestHybrid:
    def test_threshold(self):
        assert hybrid_threshold_and_group(1.0, 1.0, 10.0, []).tau == pytest.approx(0.9)

    def test_boundary_all_strong(self):
        rho, r0 = 10.0, 1.0
        g0 = (2**r0 - 1) / rho
        grouping = hybrid_threshold_and_group(g0, r0, rho, [1e-6, 0.5, 3.0])
        assert grouping.tau == 0.0
        assert grouping.groups == ("Strong",) * 3

    def test_strong_user_blocks_primary_first(self):
        grouping = hybrid_threshold_and_group(1.0, 1.0, 10.0, [1.0, 0.5])
        assert grouping.groups == ("Strong", "Weak")
        rate = math.log2(1 + 1.0 / (1.0 + 0.1))
        assert rate == pytest.approx(0.9328858041414630, rel=1e-14)
        assert rate < 1.0

    def test_zero_target_all_weak(self):
        grouping = hybrid_threshold_and_group(1.0, 0.0, 10.0, [1e9, 1.0])
        assert math.isinf(grouping.tau)
        assert grouping.weak == [0, 1]

    @given(gains, st.floats(0.01, 8), snrs, st.lists(gains, min_size=1, max_size=8))
    def test_strong_users_fail_primary_first(self, g0, r0, rho, secondary):
        grouping = hybrid_threshold_and_group(g0, r0, rho, secondary)
        for i in grouping.strong:
            assert math.log2(1 + g0 / (secondary[i] + 1 / rho)) < r0 + 1e-12
        if grouping.tau == 0:
            assert not grouping.weak


class TestStrategyOrder:
    rates = TargetRates(1.6, 0.4)
    pa = PowerAllocation(0.3, 0.7, 0.7)

    def test_fixed_csi(self):
        plan = strategy_order(DecodingStrategy.FIXED_CSI, self.rates, self.pa, Realization(gains=(1.0, 0.2)))
        assert plan.sic_order == (2, 1)
        assert plan.allocation == (pytest.approx(0.3), 0.7)
        plan = strategy_order(DecodingStrategy.FIXED_CSI, self.rates, self.pa, Realization(gains=(0.1, 0.2)))
        assert plan.sic_order == (1, 2)

    def test_fixed_csi_tie(self):
        plan = strategy_order(DecodingStrategy.FIXED_CSI, self.rates, self.pa, Realization(gains=(0.5, 0.5)))
        # user 1 counts as the strong user, so user 2's signal goes first
        assert plan.sic_order == (2, 1)

    def test_statistical(self):
        plan = strategy_order(DecodingStrategy.STATISTICAL_CSI, self.rates, self.pa,
                              Realization(distances=(40.0, 30.0)))
        assert plan.sic_order == (1, 2)
        plan = strategy_order(DecodingStrategy.STATISTICAL_CSI, self.rates, self.pa,
                              Realization(distances=(30.0, 30.0)))
        assert plan.sic_order == (2, 1)

    def test_qos(self):
        plan = strategy_order(DecodingStrategy.QOS_CR, self.rates, self.pa, Realization())
        assert plan.sic_order == (1, 2) and plan.allocation[0] == 0.7
        plan = strategy_order(DecodingStrategy.QOS_CR, self.rates, self.pa, Realization(), primary=2)
        assert plan.sic_order == (2, 1)

    def test_hybrid(self):
        # tau = 1/(2**1.6 - 1) - 1/10 ~ 0.392
        strong = Realization(gains=(1.0, 0.5), snr=10.0)
        weak = Realization(gains=(1.0, 0.2), snr=10.0)
        s = DecodingStrategy.HYBRID_CSI_QOS
        assert strategy_order(s, self.rates, self.pa, strong).sic_order == (2, 1)
        assert strategy_order(s, self.rates, self.pa, weak).sic_order == (1, 2)
        assert strategy_order(s, self.rates, self.pa, weak, weak_primary_first=False).sic_order == (2, 1)

    def test_pa_dos_luf(self):
        plan = strategy_order(DecodingStrategy.PA_DOS_LUF, self.rates, self.pa, Realization())
        assert plan.sic_order == (2, 1)
        assert plan.allocation[1] == 0.7
        assert plan.adaptive

    def test_pa_dos_huf(self):
        plan = strategy_order(DecodingStrategy.PA_DOS_HUF, self.rates, self.pa, Realization())
        assert plan.sic_order == (1, 2) and plan.allocation[0] == 0.7
        swapped = strategy_order(DecodingStrategy.PA_DOS_HUF, TargetRates(0.4, 1.6), self.pa, Realization())
        assert swapped.sic_order == (2, 1)

    def test_pa_dos_tie(self):
        equal = TargetRates(1.0, 1.0)
        assert strategy_order(DecodingStrategy.PA_DOS_HUF, equal, self.pa, Realization()).sic_order == (1, 2)
        assert strategy_order(DecodingStrategy.PA_DOS_LUF, equal, self.pa, Realization()).sic_order == (2, 1)

    @pytest.mark.parametrize("strategy,realization", [
        (DecodingStrategy.FIXED_CSI, Realization(distances=(1, 2))),
        (DecodingStrategy.STATISTICAL_CSI, Realization(gains=(1, 2))),
        (DecodingStrategy.HYBRID_CSI_QOS, Realization(gains=(1, 2))),
    ])
    def test_missing_fields(self, strategy, realization):
        with pytest.raises(ValueError, match="needs realization field"):
            strategy_order(strategy, self.rates, self.pa, realization)

    @given(gains, gains, snrs)
    def test_pure(self, g1, g2, rho):
        r = Realization(gains=(g1, g2), distances=(40.0, 30.0), snr=rho)
        for s in DecodingStrategy:
            assert strategy_order(s, self.rates, self.pa, r) == strategy_order(s, self.rates, self.pa, r)


def grid_feasible(g1, g2, rho, gamma1, gamma2, points=10_001):
    """Brute force over the lead signal's power share for both orders."""
    beta = np.linspace(0.0, 1.0, points)
    g = {1: g1, 2: g2}
    gamma = {1: gamma1, 2: gamma2}
    with np.errstate(divide="ignore", invalid="ignore"):
        for lead, other in ((1, 2), (2, 1)):
            lead_direct = beta * g[lead] / ((1 - beta) * g[lead] + 1 / rho) >= gamma[lead]
            other_first = beta * g[other] / ((1 - beta) * g[other] + 1 / rho) >= gamma[lead]
            other_own = (1 - beta) * rho * g[other] >= gamma[other]
            if np.any(lead_direct & other_first & other_own):
                return True
    return False


class TestFeasibility:
    def test_zero_targets(self):
        assert outage_free_feasible(0.01, 0.02, 1.0, 0.0, 0.0)

    def test_huge_targets(self):
        assert not outage_free_feasible(1.0, 1.0, 10.0, 1e6, 1e6)

    def test_matches_grid_search(self):
        rng = np.random.default_rng(2024)
        agree = 0
        for _ in range(400):
            g1, g2 = 10 ** rng.uniform(-2, 1, 2)
            rho = 10 ** rng.uniform(0, 3)
            gamma1, gamma2 = 10 ** rng.uniform(-2, 1.5, 2)
            assert outage_free_feasible(g1, g2, rho, gamma1, gamma2) == grid_feasible(g1, g2, rho, gamma1, gamma2)
            agree += 1
        assert agree == 400

    def test_grid_search_sees_both_outcomes(self):
        rng = np.random.default_rng(2024)
        results = {outage_free_feasible(*(10 ** rng.uniform(-2, 1, 2)), 10 ** rng.uniform(0, 3),
                                        *(10 ** rng.uniform(-2, 1.5, 2))) for _ in range(400)}
        assert results == {True, False}

    @settings(max_examples=300)
    @given(gains, gains, snrs, st.floats(0, 4), st.floats(0, 4), st.floats(0.51, 0.99))
    def test_infeasible_means_every_strategy_fails(self, g1, g2, rho, r1, r2, alpha):
        scenario = NomaScenario(alpha=alpha, rate1=r1, rate2=r2)
        if outage_free_feasible(g1, g2, rho, 2**r1 - 1, 2**r2 - 1):
            return
        for s in DecodingStrategy:
            assert outage_indicators(s, g1, g2, rho, scenario)


class TestCommonOutage:
    def test_slack_constraints(self):
        scenario = NomaScenario(mean_gains=(1.0, 1.0), fading=False, rate1=0.1, rate2=0.1)
        for s in DecodingStrategy:
            assert common_outage(s, scenario, 1e3, 500, 1).probability == 0.0

    def test_impossible_targets(self):
        scenario = NomaScenario(rate1=12.0, rate2=12.0)
        for s in DecodingStrategy:
            est = common_outage(s, scenario, 100.0, 2000, 1)
            assert est.probability == 1.0 and est.stderr == 0.0

    def test_fixed_infeasible_channel(self):
        scenario = NomaScenario(mean_gains=(0.3, 0.1), fading=False, rate1=2.0, rate2=2.0)
        assert not outage_free_feasible(0.3, 0.1, 10.0, 3.0, 3.0)
        for s in DecodingStrategy:
            assert common_outage(s, scenario, 10.0, 100, 0).probability == 1.0

    def test_reproducible_and_chunk_invariant(self, monkeypatch):
        scenario = NomaScenario()
        a = common_outage(DecodingStrategy.PA_DOS_LUF, scenario, 1000.0, 5000, 9)
        import securenoma.noma as noma
        monkeypatch.setattr(noma, "CHUNK_TRIALS", 777)
        b = common_outage(DecodingStrategy.PA_DOS_LUF, scenario, 1000.0, 5000, 9)
        assert a == b

    def test_matches_indicator_mean(self):
        scenario = NomaScenario()
        g1, g2 = scenario.gains(4, np.arange(3000))
        flags = outage_indicators(DecodingStrategy.HYBRID_CSI_QOS, g1, g2, 300.0, scenario)
        est = common_outage(DecodingStrategy.HYBRID_CSI_QOS, scenario, 300.0, 3000, 4)
        assert est.probability == flags.mean()
        assert est.trials == 3000 and est.seed == 4

    @given(gains, gains, snrs, st.floats(1.0, 100.0))
    def test_monotone_in_snr_per_realization(self, g1, g2, rho, factor):
        scenario = NomaScenario()
        for s in DecodingStrategy:
            if not outage_indicators(s, g1, g2, rho, scenario):
                assert not outage_indicators(s, g1, g2, rho * factor, scenario)

    @given(gains, gains, snrs)
    def test_pa_dos_never_worse_than_fixed_order_same_split(self, g1, g2, rho):
        scenario = NomaScenario()
        huf = outage_indicators(DecodingStrategy.PA_DOS_HUF, g1, g2, rho, scenario)
        qos = outage_indicators(DecodingStrategy.QOS_CR, g1, g2, rho, scenario)
        # QosCr with primary user 1 is HUF's split with a fixed order
        assert huf <= qos

    def test_rejects_zero_trials(self):
        with pytest.raises(ValueError):
            common_outage(DecodingStrategy.QOS_CR, NomaScenario(), 10.0, 0, 0)
