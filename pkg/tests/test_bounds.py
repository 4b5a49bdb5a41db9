"""Closed-form bound arithmetic: point anchors, symmetries, and precision."""

import math
from decimal import Decimal, getcontext

import pytest
from hypothesis import given, strategies as st

from noisyquery.bounds import (
    binary_entropy,
    checkbit_budget,
    kl_pq,
    lecam_budget,
    lecam_floor,
    make_bound_report,
    regime_label,
    regime_ratio,
    tournament_budget,
    upper_budget,
)
from noisyquery.errors import ContractViolation


class TestKlDivergence:
    def test_half_is_zero(self):
        assert kl_pq(0.5) == 0.0

    def test_quarter(self):
        # (1 - 2/4) log 3 = 0.5 log 3
        assert kl_pq(0.25) == pytest.approx(0.5493061443340549, rel=1e-15)

    def test_tenth(self):
        # 0.8 log 9
        assert kl_pq(0.1) == pytest.approx(1.7577796618689758, rel=1e-15)

    @pytest.mark.parametrize("bad", [0.0, 1.0, -0.1, 1.5])
    def test_rejects_boundary(self, bad):
        with pytest.raises(ContractViolation):
            kl_pq(bad)

    @given(st.floats(min_value=0.01, max_value=0.49))
    def test_symmetry(self, p):
        assert kl_pq(p) == pytest.approx(kl_pq(1.0 - p), rel=1e-12)

    @given(st.floats(min_value=0.01, max_value=0.48))
    def test_strictly_decreasing_below_half(self, p):
        assert kl_pq(p) > kl_pq(p + 0.01)

    @given(st.floats(min_value=0.001, max_value=0.999))
    def test_nonnegative(self, p):
        assert kl_pq(p) >= 0.0


class TestBinaryEntropy:
    def test_maximum_at_half(self):
        assert binary_entropy(0.5) == pytest.approx(math.log(2), rel=1e-15)

    @pytest.mark.parametrize("edge", [0.0, 1.0])
    def test_continuity_convention(self, edge):
        assert binary_entropy(edge) == 0.0

    def test_quarter(self):
        assert binary_entropy(0.25) == pytest.approx(0.5623351446188083, rel=1e-15)

    @given(st.floats(min_value=0.0, max_value=1.0))
    def test_bounded(self, p):
        assert 0.0 <= binary_entropy(p) <= math.log(2) + 1e-15


class TestLecamFloor:
    def test_zero_queries_floor_is_quarter(self):
        assert lecam_floor(1000, 0.0, 0.25) == 0.25

    def test_point_value(self):
        assert lecam_floor(100, 100, 0.1) == pytest.approx(0.04310682149764886, rel=1e-14)

    def test_inverting_budget_recovers_delta(self):
        m = lecam_budget(1000, 0.01, 0.25)
        assert m == pytest.approx(5859.894082871708, rel=1e-14)
        assert lecam_floor(1000, m, 0.25) == pytest.approx(0.01, rel=1e-12)

    @given(
        st.integers(min_value=1, max_value=10_000),
        st.floats(min_value=0.0, max_value=1e5),
        st.floats(min_value=0.01, max_value=0.49),
    )
    def test_decreasing_in_m(self, n, m, p):
        lo, hi = lecam_floor(n, m + 1.0, p), lecam_floor(n, m, p)
        assert hi <= 0.25
        if hi > 1e-300:  # below that the exponential saturates float range
            assert lo < hi

    def test_vacuous_budget_clamps_to_zero(self):
        assert lecam_budget(10, 0.3, 0.25) == 0.0


class TestUpperBudget:
    def test_anchor(self):
        assert upper_budget(1000, 0.01, 0.25) == pytest.approx(8383.613097157539, rel=1e-14)

    def test_second_anchor(self):
        assert upper_budget(100, 0.001, 0.1) == pytest.approx(392.9818639292596, rel=1e-12)

    def test_degenerate_delta_one(self):
        assert upper_budget(5, 1.0, 0.3) == 0.0

    def test_linear_in_n(self):
        base = upper_budget(100, 0.01, 0.25)
        assert upper_budget(200, 0.01, 0.25) == pytest.approx(2 * base, rel=1e-15)
        assert upper_budget(300, 0.01, 0.25) == pytest.approx(3 * base, rel=1e-14)

    def test_linear_in_log_inverse_delta(self):
        base = upper_budget(100, 0.01, 0.25)
        squared = upper_budget(100, 0.0001, 0.25)
        assert squared == pytest.approx(2 * base, rel=1e-12)

    def test_spec_anchor_rounding(self):
        # Published anchor 8383.62 carries rounded constants.
        assert upper_budget(1000, 0.01, 0.25) == pytest.approx(8383.62, rel=1e-5)
        assert lecam_budget(1000, 0.01, 0.25) == pytest.approx(5859.93, rel=1e-5)
        assert lecam_floor(100, 100, 0.1) == pytest.approx(0.043096, rel=3e-4)


class TestPerPrimitiveBudgets:
    @pytest.mark.parametrize(
        "p,delta,expected",
        [(0.25, 0.01, 10.0), (0.25, 0.25, 2.0), (0.4, 0.01, 60.0)],
    )
    def test_checkbit_budget(self, p, delta, expected):
        assert checkbit_budget(delta, p) == pytest.approx(expected, rel=1e-12)

    def test_tournament_budget_anchor(self):
        # capacity term 100/(1 - H_bits(0.25)) = 529.880..., KL term 838.361...
        assert tournament_budget(100, 0.01, 0.25, 1.0) == pytest.approx(
            1368.2415883713425, rel=1e-13
        )

    def test_tournament_budget_monotone_in_log_delta(self):
        lo = tournament_budget(1, 0.1, 0.25, 1.0)
        hi = tournament_budget(1, 0.01, 0.25, 1.0)
        assert hi > lo

    def test_tournament_budget_default_constant_positive(self):
        assert tournament_budget(10, 0.01, 0.25) > tournament_budget(10, 0.01, 0.25, 1.0)


class TestConsistencyAcrossBounds:
    """Achievability and converse cannot cross at the formula level."""

    @pytest.mark.parametrize("n", [10, 1000, 100_000])
    @pytest.mark.parametrize("delta", [0.05, 0.01, 1e-4])
    @pytest.mark.parametrize("p", [0.05, 0.25, 0.45])
    def test_floor_below_delta_at_padded_budget(self, n, delta, p):
        epsilon = math.log(4.0) / math.log(1.0 / delta)
        m = upper_budget(n, delta, p) * (1.0 + epsilon)
        floor = lecam_floor(n, m, p)
        # Padding by log4/log(1/delta) turns the floor into exactly delta/16.
        assert floor == pytest.approx(delta / 16.0, rel=1e-9)
        assert floor < delta

    @pytest.mark.parametrize("n", [10, 1000])
    @pytest.mark.parametrize("delta", [0.05, 0.001])
    @pytest.mark.parametrize("p", [0.1, 0.4])
    def test_lower_budget_below_upper(self, n, delta, p):
        assert lecam_budget(n, delta, p) < upper_budget(n, delta, p)


class TestHighPrecisionAgreement:
    """Float pipeline agrees with a 50-digit Decimal recomputation to 12 significant digits."""

    def test_grid(self):
        getcontext().prec = 50
        checked = 0
        for p in (0.05, 0.1, 0.2, 0.25, 0.3, 0.4, 0.45, 0.49):
            dp = Decimal(p)
            d_kl = (1 - 2 * dp) * ((1 - dp) / dp).ln()
            assert kl_pq(p) == pytest.approx(float(d_kl), rel=1e-12)
            h = -(dp * dp.ln() + (1 - dp) * (1 - dp).ln())
            assert binary_entropy(p) == pytest.approx(float(h), rel=1e-12)
            for n in (1, 37, 1000):
                for delta in (0.25, 0.01, 1e-6):
                    dd = Decimal(delta)
                    ub = Decimal(n) * (1 / dd).ln() / d_kl
                    assert upper_budget(n, delta, p) == pytest.approx(float(ub), rel=1e-12)
                    floor = Decimal("0.25") * (-Decimal(200) * d_kl / Decimal(n)).exp()
                    assert lecam_floor(n, 200.0, p) == pytest.approx(float(floor), rel=1e-12)
                    checked += 2
        assert checked >= 100


class TestRegimeClassifier:
    def test_ratio_anchor(self):
        assert regime_ratio(1e-9, 0.1) == pytest.approx(9.0, rel=1e-12)

    def test_labels(self):
        assert "constant gap" in regime_label(regime_ratio(1e-9, 0.1))
        assert "KL term" in regime_label(100.0)
        assert "linear term" in regime_label(0.01)


class TestBoundReport:
    def test_fields_coherent(self):
        rep = make_bound_report(1000, 0.01, 0.25)
        assert rep.upper_budget == pytest.approx(8383.613097157539, rel=1e-13)
        assert rep.lower_budget == pytest.approx(5859.894082871708, rel=1e-13)
        assert rep.entropy_bits == pytest.approx(0.8112781244591328, rel=1e-13)
        assert rep.lecam_floor(0.0) == 0.25
        assert rep.lecam_floor(rep.lower_budget) == pytest.approx(0.01, rel=1e-10)
        assert rep.d_kl > 0 and rep.upper_budget > 0 and rep.lower_budget > 0

    def test_rejects_bad_delta(self):
        with pytest.raises(ContractViolation):
            make_bound_report(10, 0.5, 0.25)
