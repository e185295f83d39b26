"""Distance laws and closed-form handover rates, each checked by a second route."""

import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from hetnet_handover.analytics import (
    ClampDiagnostics,
    HandoverMetrics,
    HandoverThresholds,
    PairKind,
    cdf_r_sm,
    compute_metrics,
    f_k_exact,
    format_metrics_row,
    handover_failure_rate,
    handover_rate,
    handover_triggered_rate,
    mean_cluster_distance_numeric,
    mean_cluster_distance_ub,
    mean_pair_distance,
    mean_r_sm,
    movement_time_per_meter,
    pdf_r_sm,
    pingpong_rate,
    prob_sojourn_ge,
    rician_cdf,
    rician_mean,
    rician_pdf,
)
from hetnet_handover.fixtures import (
    default_hotspot_params,
    default_mobility,
    default_small_params,
    default_thresholds,
    fixture_value,
)
from hetnet_handover.radio import make_erb_pair
from hetnet_handover.specfun import marcum_q1

MOBILITY = default_mobility()
THRESHOLDS = default_thresholds()


def _sps_erb(distance: float = 218.73):
    return make_erb_pair(
        default_small_params(),
        default_hotspot_params(),
        np.array([distance, 0.0]),
        THRESHOLDS.q_out,
    )


class TestNearestDistanceLaw:
    def test_pdf_integrates_to_one(self):
        val, _ = integrate.quad(lambda r: pdf_r_sm(r, 1e-6), 0.0, np.inf)
        assert val == pytest.approx(1.0, rel=1e-9)

    def test_cdf_matches_pdf_quadrature(self):
        lam = 2e-6
        for r in (100.0, 400.0, 900.0):
            val, _ = integrate.quad(lambda x: pdf_r_sm(x, lam), 0.0, r)
            assert cdf_r_sm(r, lam) == pytest.approx(val, rel=1e-10)

    def test_mean_closed_form(self):
        lam = 2e-6
        assert mean_r_sm(lam) == pytest.approx(1.0 / (2.0 * math.sqrt(lam)), rel=1e-12)
        assert mean_r_sm(2e-6) == pytest.approx(353.5533905932738, rel=1e-12)

    def test_invalid_density(self):
        with pytest.raises(ValueError):
            mean_r_sm(0.0)


class TestConditionalDistanceLaw:
    def test_pdf_integrates_to_one(self):
        for w, sigma in ((50.0, 100.0), (200.0, 150.0), (0.0, 80.0)):
            val, _ = integrate.quad(
                lambda r: rician_pdf(r, w, sigma), 0.0, w + 14.0 * sigma, limit=200
            )
            assert val == pytest.approx(1.0, rel=1e-8)

    def test_cdf_is_marcum_complement(self):
        r, w, sigma = 120.0, 90.0, 70.0
        assert rician_cdf(r, w, sigma) == pytest.approx(
            1.0 - marcum_q1(w / sigma, r / sigma), rel=1e-12
        )

    def test_pinned_cdf_value(self):
        assert rician_cdf(1.0, 1.0, 1.0) == pytest.approx(
            fixture_value("rician_cdf_at_1_1_1"), rel=1e-9
        )

    def test_cdf_matches_pdf_quadrature_grid(self):
        # Arbitration check between the density and the tail expression:
        # they must be two faces of one law everywhere, not just at a point.
        for w in (0.0, 40.0, 150.0):
            for sigma in (60.0, 150.0):
                for r in (30.0, 120.0, 400.0):
                    quad_val, _ = integrate.quad(
                        lambda x: rician_pdf(x, w, sigma), 0.0, r, limit=200
                    )
                    assert rician_cdf(r, w, sigma) == pytest.approx(
                        quad_val, abs=1e-6
                    ), (w, sigma, r)

    def test_mean_matches_quadrature(self):
        for w, sigma in ((0.0, 50.0), (75.0, 50.0), (300.0, 150.0)):
            val, _ = integrate.quad(
                lambda r: r * rician_pdf(r, w, sigma), 0.0, w + 14.0 * sigma, limit=200
            )
            assert rician_mean(w, sigma) == pytest.approx(val, rel=1e-10)


class TestClusterMeanDistance:
    def test_pinned_against_independent_quadrature(self):
        assert mean_cluster_distance_numeric(2e-5, 150.0) == pytest.approx(
            fixture_value("cluster_mean_numeric_lam2e-5_sigma150"), rel=1e-7
        )

    def test_monte_carlo_cross_check(self):
        # The center-to-nearest distance law is Rayleigh-type with scale
        # 1/sqrt(2 pi lam) (void probability), so the mixture can be sampled
        # exactly without building point fields.
        lam, sigma = 2e-5, 150.0
        rng = np.random.default_rng(123)
        n = 200_000
        w = rng.rayleigh(1.0 / math.sqrt(2.0 * math.pi * lam), size=n)
        child = sigma * rng.standard_normal((n, 2))
        child[:, 0] += w
        dist = np.hypot(child[:, 0], child[:, 1])
        se = dist.std(ddof=1) / math.sqrt(n)
        assert mean_cluster_distance_numeric(lam, sigma) == pytest.approx(
            dist.mean(), abs=4.0 * se
        )

    def test_f_k_exact_matches_quadrature(self):
        for w, sigma, b in (
            (50.0, 100.0, 0.7536),
            (200.0, 150.0, -0.715),
            (0.0, 80.0, 0.9736),
            (120.0, 60.0, 0.2343),
        ):
            val, _ = integrate.quad(
                lambda r: r * r * math.exp(
                    -r * r / (2.0 * sigma * sigma) + b * w * r / (sigma * sigma)
                ),
                0.0,
                np.inf,
                limit=300,
            )
            assert f_k_exact(w, sigma, b) == pytest.approx(val, rel=1e-10)

    def test_ub_pinned(self):
        assert mean_cluster_distance_ub(2e-5, 150.0) == pytest.approx(
            fixture_value("cluster_mean_ub_lam2e-5_sigma150"), rel=1e-12
        )

    def test_ub_dominates_numeric_in_validity_range(self):
        for lam, sigma in ((2e-5, 150.0), (5e-5, 100.0), (1e-4, 300.0), (1e-5, 200.0)):
            q = math.pi * lam * sigma * sigma
            assert q >= 0.06, "test point outside the bound's validity range"
            assert mean_cluster_distance_ub(lam, sigma) >= mean_cluster_distance_numeric(
                lam, sigma
            )

    def test_ub_warns_below_validity_floor(self):
        with pytest.warns(UserWarning, match="not a true upper bound"):
            mean_cluster_distance_ub(1e-6, 50.0)

    def test_ub_rejects_unstable_interval(self):
        # The second coefficient block carries b = -163.4, which breaks the
        # positivity precondition 2q + 1 - b^2 > 0 for any physical q.
        with pytest.raises(ValueError):
            mean_cluster_distance_ub(2e-5, 150.0, interval=1)

    def test_mean_pair_distance_dispatch(self):
        lam_m, lam_s, sigma = 2e-6, 2e-5, 150.0
        sm = mean_pair_distance(PairKind.SM, lam_m, lam_s, sigma)
        sps = mean_pair_distance(PairKind.SPS, lam_m, lam_s, sigma)
        spm = mean_pair_distance(PairKind.SPM, lam_m, lam_s, sigma)
        assert sm == pytest.approx(mean_r_sm(lam_m))
        assert sps == pytest.approx(mean_cluster_distance_numeric(lam_s, sigma))
        assert spm == pytest.approx(mean_cluster_distance_numeric(lam_m, sigma))
        ub = mean_pair_distance(PairKind.SPS, lam_m, lam_s, sigma, mode="upper_bound")
        assert ub >= sps

    def test_mean_pair_distance_invalid_mode(self):
        with pytest.raises(ValueError):
            mean_pair_distance(PairKind.SM, 1e-6, 1e-5, 100.0, mode="nope")


class TestThresholdsAndMetrics:
    def test_threshold_validation(self):
        with pytest.raises(ValueError):
            HandoverThresholds(t_threshold=-1.0, t_pingpong=4.0, q_out=0.5)
        with pytest.raises(ValueError):
            HandoverThresholds(t_threshold=1.0, t_pingpong=0.0, q_out=0.5)
        with pytest.raises(ValueError):
            HandoverThresholds(t_threshold=1.0, t_pingpong=4.0, q_out=1.5)

    def test_metrics_validation(self):
        with pytest.raises(ValueError):
            HandoverMetrics(
                pair=PairKind.SM,
                triggered_rate=1.0,
                handover_rate=1.5,  # exceeds triggered
                failure_rate=0.1,
                pingpong_rate=0.0,
            )

    def test_csv_row_format(self):
        m = HandoverMetrics(
            pair=PairKind.SPS,
            triggered_rate=0.25,
            handover_rate=0.2,
            failure_rate=0.01,
            pingpong_rate=0.001,
        )
        row = format_metrics_row(m, 2e-5, 150.0, 16.7, 1.0, 4.0)
        assert row.split(",")[0] == "SpS"
        assert len(row.split(",")) == 10


class TestRates:
    def test_movement_time_per_meter(self):
        expected = 1.0 / MOBILITY.velocity + MOBILITY.pause / (
            math.sqrt(math.pi / 2.0) * (300.0 + 0.3 * 300.0)
        )
        assert movement_time_per_meter(MOBILITY) == pytest.approx(expected, rel=1e-12)

    def test_triggered_rate_manual_assembly(self):
        erb = _sps_erb()
        mean_d, area, n_bs = 218.73, 1e8, 10.0
        u = erb.lam_xi
        gain = math.sqrt(u) / (1.0 - u)
        manual = (2.0 / area) * gain * n_bs * mean_d / movement_time_per_meter(MOBILITY)
        assert handover_triggered_rate(
            PairKind.SPS, mean_d, erb, area, n_bs, MOBILITY
        ) == pytest.approx(manual, rel=1e-12)

    def test_triggered_rate_accepts_raw_factor(self):
        erb = _sps_erb()
        via_pair = handover_triggered_rate(
            PairKind.SPS, 200.0, erb, 1e8, 10.0, MOBILITY
        )
        via_float = handover_triggered_rate(
            PairKind.SPS, 200.0, erb.lam_xi, 1e8, 10.0, MOBILITY
        )
        assert via_pair == pytest.approx(via_float, rel=1e-15)

    def test_sojourn_tail_at_zero_threshold_is_one(self):
        assert prob_sojourn_ge(PairKind.SM, 0.0, 16.7, 0.3, lambda_m=2e-6) == 1.0

    def test_sojourn_tail_sm_branch(self):
        u, lam_m, v, t = 0.4, 2e-6, 16.7, 1.5
        manual = math.exp(-4.0 * lam_m * v * v * t * t * (1.0 - u) ** 2 / (math.pi * u))
        assert prob_sojourn_ge(
            PairKind.SM, t, v, u, lambda_m=lam_m
        ) == pytest.approx(manual, rel=1e-12)

    def test_sojourn_tail_hotspot_branches(self):
        u, lam, sigma, v, t = 0.47, 2e-5, 150.0, 16.7, 1.0
        a = 1.0 / (2.0 * sigma * math.sqrt(lam))
        b = 2.0 * t * v * (1.0 - u) / (math.pi * sigma * math.sqrt(u))
        manual = float(marcum_q1(a, b))
        assert prob_sojourn_ge(
            PairKind.SPS, t, v, u, lambda_s=lam, sigma=sigma
        ) == pytest.approx(manual, rel=1e-12)
        # The macro-served branch uses the macro density in the same formula.
        assert prob_sojourn_ge(
            PairKind.SPM, t, v, u, lambda_m=lam, sigma=sigma
        ) == pytest.approx(manual, rel=1e-12)

    def test_sojourn_tail_requires_density(self):
        with pytest.raises(ValueError):
            prob_sojourn_ge(PairKind.SM, 1.0, 16.7, 0.4)
        with pytest.raises(ValueError):
            prob_sojourn_ge(PairKind.SPS, 1.0, 16.7, 0.4, sigma=150.0)

    @given(
        t1=st.floats(min_value=0.0, max_value=30.0),
        dt=st.floats(min_value=0.1, max_value=30.0),
        u=st.floats(min_value=0.05, max_value=0.95),
    )
    @settings(max_examples=100, deadline=None)
    def test_sojourn_tail_decreasing_in_threshold(self, t1, dt, u):
        p1 = prob_sojourn_ge(PairKind.SPS, t1, 16.7, u, lambda_s=2e-5, sigma=150.0)
        p2 = prob_sojourn_ge(PairKind.SPS, t1 + dt, 16.7, u, lambda_s=2e-5, sigma=150.0)
        assert p2 <= p1 + 1e-12
        assert 0.0 <= p2 <= 1.0

    def test_handover_rate_is_triggered_times_tail(self):
        erb = _sps_erb()
        h_t = handover_triggered_rate(PairKind.SPS, 218.73, erb, 1e8, 10.0, MOBILITY)
        p = prob_sojourn_ge(
            PairKind.SPS,
            THRESHOLDS.t_threshold,
            MOBILITY.velocity,
            erb.lam_xi,
            lambda_s=2e-5,
            sigma=150.0,
        )
        h = handover_rate(
            PairKind.SPS,
            THRESHOLDS,
            218.73,
            erb,
            1e8,
            10.0,
            MOBILITY,
            lambda_s=2e-5,
            sigma=150.0,
        )
        assert h == pytest.approx(h_t * p, rel=1e-12)

    def test_failure_rate_manual_reduction(self):
        erb = _sps_erb()
        u, u_f = erb.lam_xi, erb.lam_xi_f
        g = lambda x: math.sqrt(x) / (1.0 - x)  # noqa: E731
        p_le = 1.0 - prob_sojourn_ge(
            PairKind.SPS,
            THRESHOLDS.t_threshold,
            MOBILITY.velocity,
            u_f,
            lambda_s=2e-5,
            sigma=150.0,
        )
        manual = g(u_f) / g(u) * p_le
        assert handover_failure_rate(
            PairKind.SPS, THRESHOLDS, erb, MOBILITY, lambda_s=2e-5, sigma=150.0
        ) == pytest.approx(manual, rel=1e-12)

    def test_pingpong_clamp_records_and_warns(self):
        erb = _sps_erb()
        diag = ClampDiagnostics()
        # A huge completion threshold with a tiny return window forces the
        # bracket negative: P(S >= T at u) ~ 0 while P(S >= T_p at u_f) ~ 1.
        thresholds = HandoverThresholds(t_threshold=60.0, t_pingpong=0.01, q_out=0.5)
        with pytest.warns(UserWarning, match="clamped"):
            rate = pingpong_rate(
                PairKind.SPS,
                thresholds,
                218.73,
                erb,
                1e8,
                10.0,
                MOBILITY,
                lambda_s=2e-5,
                sigma=150.0,
                diagnostics=diag,
            )
        assert rate == 0.0
        assert diag.count == 1
        assert diag.last_value < 0.0
        diag.reset()
        assert diag.count == 0 and diag.last_value is None

    def test_compute_metrics_consistency(self):
        erb = _sps_erb()
        m = compute_metrics(
            PairKind.SPS,
            THRESHOLDS,
            218.73,
            erb,
            1e8,
            10.0,
            MOBILITY,
            lambda_m=2e-6,
            lambda_s=2e-5,
            sigma=150.0,
        )
        assert m.handover_rate <= m.triggered_rate
        assert 0.0 <= m.failure_rate <= 1.0
        assert m.pingpong_rate >= 0.0
        h_t = handover_triggered_rate(PairKind.SPS, 218.73, erb, 1e8, 10.0, MOBILITY)
        assert m.triggered_rate == pytest.approx(h_t, rel=1e-12)

    @given(
        mean_d=st.floats(min_value=10.0, max_value=2000.0),
        u=st.floats(min_value=0.02, max_value=0.98),
        n_bs=st.floats(min_value=1.0, max_value=500.0),
    )
    @settings(max_examples=100, deadline=None)
    def test_triggered_rate_nonnegative_and_scales(self, mean_d, u, n_bs):
        rate = handover_triggered_rate(PairKind.SPS, mean_d, u, 25e6, n_bs, MOBILITY)
        assert rate >= 0.0
        double = handover_triggered_rate(
            PairKind.SPS, mean_d, u, 25e6, 2.0 * n_bs, MOBILITY
        )
        assert double == pytest.approx(2.0 * rate, rel=1e-9)
