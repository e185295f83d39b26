"""Closed-form handover analytics.

Distance laws
-------------
For a uniformly deployed target tier (density ``lam``), the distance from a
random point to its nearest BS is Rayleigh with

    pdf f(r) = 2 pi lam r exp(-pi lam r^2),   mean 1/(2 sqrt(lam)).

For a hotspot (cluster) BS whose cluster center sits at distance ``w`` from
the serving BS, the hotspot-to-serving distance is Rician:

    f(r | w) = (r / sigma^2) exp(-(r^2 + w^2) / (2 sigma^2)) I0(w r / sigma^2)
    F(r | w) = 1 - Q1(w / sigma, r / sigma)

and the unconditional mean distance is the expectation of the Rician mean
over the Rayleigh-distributed ``w``; `mean_cluster_distance_numeric` computes
it by adaptive quadrature, `mean_cluster_distance_ub` by a closed-form
exponential-sum bound (only a true upper bound for ``q = pi lam sigma^2``
roughly above 0.06 — see the function docstring).

Rates
-----
With ``u = lam_star * xi`` the boundary-circle radius scales as
``g(u) = sqrt(u) / (1 - u)`` times the pair distance, and the triggered rate
over a region of area ``A`` containing ``N`` target BSs on average is

    H_t = (2 / A) * g(u) * N * E[R] / (1/V + pause/E[L'])

Multiplying by the probability that the in-circle sojourn exceeds the
threshold gives the handover rate; failure and ping-pong rates follow the
same pattern with the failure-boundary factor ``u_f = lam_star * xi_f``.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy import special as _sp

from .mobility import MobilityConfig, mean_transition_length
from .radio import ErbPair
from .specfun import BesselApproxTable, DEFAULT_BESSEL_TABLE, marcum_q1

#: Default mean number of target BSs in the region for analytic evaluation.
DEFAULT_N_BS_MEAN = 10.0

#: Below this cluster-size parameter q = pi*lam*sigma^2 the closed-form
#: "upper bound" on the mean cluster distance is not actually an upper bound
#: (measured crossover near 0.05); a UserWarning is emitted.
UB_VALIDITY_Q_FLOOR = 0.06


class PairKind(enum.Enum):
    """Handover pair: target tier first, serving tier second.

    ``SM``  — uniform small cell entered while served by a macro BS;
    ``SPS`` — hotspot small cell entered while served by a uniform small cell;
    ``SPM`` — hotspot small cell entered while served by a macro BS.
    """

    SM = "SM"
    SPS = "SpS"
    SPM = "SpM"


@dataclass(frozen=True)
class HandoverThresholds:
    t_threshold: float  # minimum in-circle sojourn for a successful handover, s
    t_pingpong: float  # return-time window that classifies a ping-pong, s
    q_out: float  # linear outage offset defining the failure boundary

    def __post_init__(self) -> None:
        if self.t_threshold < 0:
            raise ValueError(f"t_threshold must be >= 0, got {self.t_threshold}")
        if self.t_pingpong <= 0:
            raise ValueError(f"t_pingpong must be positive, got {self.t_pingpong}")
        if not (0.0 < self.q_out < 1.0):
            raise ValueError(
                f"q_out must be a linear ratio in (0, 1), got {self.q_out}"
            )


@dataclass(frozen=True)
class HandoverMetrics:
    pair: PairKind
    triggered_rate: float  # boundary-circle entries per second
    handover_rate: float  # completed handovers per second
    failure_rate: float  # failures per triggered event (dimensionless)
    pingpong_rate: float  # ping-pongs per second

    def __post_init__(self) -> None:
        for name in ("triggered_rate", "handover_rate", "failure_rate", "pingpong_rate"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.handover_rate > self.triggered_rate * (1 + 1e-12):
            raise ValueError("handover_rate cannot exceed triggered_rate")
        if self.failure_rate > 1 + 1e-12:
            raise ValueError("failure_rate is a per-trigger ratio and cannot exceed 1")


METRICS_CSV_HEADER = "pair,lambda_s,sigma,V_mps,T_s,Tp_s,H_t,H,H_f,H_p"


def format_metrics_row(
    metrics: HandoverMetrics,
    lambda_s: float,
    sigma: float,
    velocity: float,
    t_threshold: float,
    t_pingpong: float,
) -> str:
    fields = [
        metrics.pair.value,
        f"{lambda_s:.10g}",
        f"{sigma:.10g}",
        f"{velocity:.10g}",
        f"{t_threshold:.10g}",
        f"{t_pingpong:.10g}",
        f"{metrics.triggered_rate:.10g}",
        f"{metrics.handover_rate:.10g}",
        f"{metrics.failure_rate:.10g}",
        f"{metrics.pingpong_rate:.10g}",
    ]
    return ",".join(fields)


# ---------------------------------------------------------------------------
# Distance distributions
# ---------------------------------------------------------------------------

def pdf_r_sm(r, lambda_m: float):
    """Nearest-BS distance density for a uniform tier of density ``lambda_m``."""
    if lambda_m <= 0:
        raise ValueError(f"lambda_m must be positive, got {lambda_m}")
    r_arr = np.asarray(r, dtype=float)
    out = 2.0 * math.pi * lambda_m * r_arr * np.exp(-math.pi * lambda_m * r_arr**2)
    out = np.where(r_arr < 0, 0.0, out)
    return float(out) if np.ndim(r) == 0 else out


def cdf_r_sm(r, lambda_m: float):
    if lambda_m <= 0:
        raise ValueError(f"lambda_m must be positive, got {lambda_m}")
    r_arr = np.asarray(r, dtype=float)
    out = 1.0 - np.exp(-math.pi * lambda_m * np.clip(r_arr, 0.0, None) ** 2)
    return float(out) if np.ndim(r) == 0 else out


def mean_r_sm(lambda_m: float) -> float:
    """Mean nearest-BS distance of a uniform tier: ``1 / (2 sqrt(lambda))``."""
    if lambda_m <= 0:
        raise ValueError(f"lambda_m must be positive, got {lambda_m}")
    return 1.0 / (2.0 * math.sqrt(lambda_m))


def rician_pdf(r, w: float, sigma: float):
    """Density of the hotspot-to-serving distance given center distance ``w``.

    Evaluated in the scaled form ``(r/sigma^2) i0e(wr/sigma^2)
    exp(-(r-w)^2 / (2 sigma^2))``, which stays finite for large arguments.
    """
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if w < 0:
        raise ValueError(f"w must be >= 0, got {w}")
    r_arr = np.asarray(r, dtype=float)
    z = w * r_arr / sigma**2
    out = (
        (r_arr / sigma**2)
        * _sp.i0e(z)
        * np.exp(-((r_arr - w) ** 2) / (2.0 * sigma**2))
    )
    out = np.where(r_arr < 0, 0.0, out)
    return float(out) if np.ndim(r) == 0 else out


def rician_cdf(r, w: float, sigma: float):
    """CDF of the conditional hotspot-to-serving distance: ``1 - Q1(w/sigma, r/sigma)``."""
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if w < 0:
        raise ValueError(f"w must be >= 0, got {w}")
    r_arr = np.asarray(r, dtype=float)
    out = 1.0 - marcum_q1(w / sigma, np.clip(r_arr, 0.0, None) / sigma)
    out = np.where(r_arr < 0, 0.0, out)
    return float(out) if np.ndim(r) == 0 else out


def rician_mean(w: float, sigma: float) -> float:
    """Mean of the Rician law via the exponentially scaled Bessel identity.

    ``E[R | w] = sigma sqrt(pi/2) [(1 + nu) i0e(nu/2) + nu i1e(nu/2)]`` with
    ``nu = w^2 / (2 sigma^2)``.  Exact and overflow-free for all ``w``.
    """
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if w < 0:
        raise ValueError(f"w must be >= 0, got {w}")
    nu = w * w / (2.0 * sigma * sigma)
    return float(
        sigma
        * math.sqrt(math.pi / 2.0)
        * ((1.0 + nu) * _sp.i0e(nu / 2.0) + nu * _sp.i1e(nu / 2.0))
    )


def mean_cluster_distance_numeric(lam: float, sigma: float) -> float:
    """Unconditional mean hotspot-to-serving distance, by adaptive quadrature.

    Averages the conditional Rician mean over the Rayleigh-distributed
    center-to-serving distance.  Substituting ``u = pi lam w^2`` turns the
    Rayleigh weight into ``e^-u du`` on [0, inf), a well-conditioned
    integrand for adaptive quadrature.
    """
    if lam <= 0 or sigma <= 0:
        raise ValueError("lam and sigma must be positive")

    def integrand(u: float) -> float:
        w = math.sqrt(u / (math.pi * lam))
        return math.exp(-u) * rician_mean(w, sigma)

    value, abserr = integrate.quad(
        integrand, 0.0, np.inf, limit=300, epsabs=0.0, epsrel=1e-10
    )
    if not math.isfinite(value) or value <= 0 or abserr / value > 1e-6:
        raise RuntimeError(
            f"mean-distance quadrature did not converge: value={value}, abserr={abserr}"
        )
    return value


def f_k_exact(w: float, sigma: float, b_k: float) -> float:
    """Closed form of ``int_0^inf r^2 exp(-r^2/(2 sigma^2) + b w r / sigma^2) dr``.

    Completing the square in the exponent gives

        sigma^2 b w + sqrt(pi/2) (sigma b^2 w^2 + sigma^3)
            * exp(b^2 w^2 / (2 sigma^2)) * (1 + erf(b w / (sqrt(2) sigma))).
    """
    if w < 0:
        raise ValueError(f"w must be >= 0, got {w}")
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    bw = b_k * w
    gauss = math.exp(bw * bw / (2.0 * sigma * sigma))
    tail = 1.0 + math.erf(bw / (math.sqrt(2.0) * sigma))
    return (
        sigma * sigma * bw
        + math.sqrt(math.pi / 2.0) * (sigma * bw * bw + sigma**3) * gauss * tail
    )


def mean_cluster_distance_ub(
    lam: float,
    sigma: float,
    table: BesselApproxTable = DEFAULT_BESSEL_TABLE,
    interval: int = 0,
) -> float:
    """Closed-form bound on the mean hotspot-to-serving distance.

    With ``q = pi lam sigma^2`` and the exponential-sum coefficients
    ``(a_k, b_k)`` of the chosen table interval:

        sqrt(2 pi) q sigma * sum_k a_k [ 2/(2q+1-b_k^2)
                                         + b_k/(2q+1)^(3/2)
                                         + 4 b_k^2/(2q+1-b_k^2)^2 ]

    The bounding step over-weights the Gaussian tail, so the value exceeds
    the numeric mean for moderate-to-large ``q`` but measurably undershoots
    it for ``q`` below ~0.06; a UserWarning flags that regime.  A coefficient
    with ``b_k^2 >= 2q+1`` puts the formula outside its validity range
    entirely and raises ``ValueError``.
    """
    if lam <= 0 or sigma <= 0:
        raise ValueError("lam and sigma must be positive")
    q = math.pi * lam * sigma * sigma
    coeffs = table.coefficients[interval]
    for _a, b in coeffs:
        if 2.0 * q + 1.0 - b * b <= 0.0:
            raise ValueError(
                f"coefficient b={b} violates 2q+1-b^2 > 0 at q={q:.4g}; "
                "closed-form bound out of validity range"
            )
    if q < UB_VALIDITY_Q_FLOOR:
        warnings.warn(
            f"closed-form mean-distance bound is not a true upper bound for "
            f"q = pi*lam*sigma^2 = {q:.4g} < {UB_VALIDITY_Q_FLOOR}",
            UserWarning,
            stacklevel=2,
        )
    total = 0.0
    for a, b in coeffs:
        d1 = 2.0 * q + 1.0 - b * b
        total += a * (2.0 / d1 + b / (2.0 * q + 1.0) ** 1.5 + 4.0 * b * b / (d1 * d1))
    return math.sqrt(2.0 * math.pi) * q * sigma * total


def mean_pair_distance(
    pair: PairKind,
    lambda_m: float,
    lambda_s: float,
    sigma: float,
    mode: str = "numeric",
    table: BesselApproxTable = DEFAULT_BESSEL_TABLE,
) -> float:
    """Mean target-to-serving distance for a pair kind.

    ``SM`` uses the uniform-tier law with the macro density; the hotspot
    pairs average the Rician law over the serving tier's density (``SPS``
    the small-cell density, ``SPM`` the macro density).  ``mode`` selects
    adaptive quadrature (``"numeric"``) or the closed-form bound
    (``"upper_bound"``).
    """
    if mode not in ("numeric", "upper_bound"):
        raise ValueError(f"unknown mean-distance mode {mode!r}")
    if pair is PairKind.SM:
        return mean_r_sm(lambda_m)
    lam = lambda_s if pair is PairKind.SPS else lambda_m
    if mode == "numeric":
        return mean_cluster_distance_numeric(lam, sigma)
    return mean_cluster_distance_ub(lam, sigma, table=table)


# ---------------------------------------------------------------------------
# Rate formulas
# ---------------------------------------------------------------------------

@dataclass
class ClampDiagnostics:
    """Counts ping-pong evaluations whose raw bracket came out negative."""

    count: int = 0
    last_value: float | None = None

    def record(self, value: float) -> None:
        self.count += 1
        self.last_value = value

    def reset(self) -> None:
        self.count = 0
        self.last_value = None


PINGPONG_CLAMP_DIAGNOSTICS = ClampDiagnostics()


def _radius_gain(lam_xi: float) -> float:
    """``g(u) = sqrt(u) / (1 - u)``: boundary radius per unit pair distance."""
    if not (0.0 < lam_xi < 1.0):
        raise ValueError(f"lam_star * xi must lie in (0, 1), got {lam_xi}")
    return math.sqrt(lam_xi) / (1.0 - lam_xi)


def _as_lam_xi(erb: ErbPair | float) -> float:
    return erb.lam_xi if isinstance(erb, ErbPair) else float(erb)


def _as_lam_xi_f(erb: ErbPair | float) -> float:
    if isinstance(erb, ErbPair):
        return erb.lam_xi_f
    raise TypeError("failure-boundary factor requires an ErbPair (carries xi_f)")


def movement_time_per_meter(mobility: MobilityConfig) -> float:
    """``1/V + pause/E[L']``: seconds of wall clock per meter traveled."""
    return 1.0 / mobility.velocity + mobility.pause / mean_transition_length(mobility)


def handover_triggered_rate(
    pair: PairKind,
    mean_distance: float,
    erb: ErbPair | float,
    region_area: float,
    n_bs_mean: float = DEFAULT_N_BS_MEAN,
    mobility: MobilityConfig | None = None,
) -> float:
    """Mean boundary-circle entries per second over the whole region.

    ``erb`` may be an :class:`ErbPair` or the raw ``lam_star * xi`` product.
    """
    if mobility is None:
        raise ValueError("a MobilityConfig is required")
    if mean_distance < 0:
        raise ValueError(f"mean_distance must be >= 0, got {mean_distance}")
    if region_area <= 0 or n_bs_mean <= 0:
        raise ValueError("region_area and n_bs_mean must be positive")
    gain = _radius_gain(_as_lam_xi(erb))
    return (
        (2.0 / region_area)
        * gain
        * n_bs_mean
        * mean_distance
        / movement_time_per_meter(mobility)
    )


def prob_sojourn_ge(
    pair: PairKind,
    t_threshold: float,
    velocity: float,
    lam_xi: float,
    lambda_m: float | None = None,
    lambda_s: float | None = None,
    sigma: float | None = None,
) -> float:
    """Probability that the in-circle sojourn is at least ``t_threshold``.

    The circle radius is proportional to the (random) pair distance, so the
    sojourn tail inherits the pair's distance law: the ``SM`` branch is the
    Rayleigh tail in closed exponential form, and the hotspot branches are
    Marcum-Q tails of the Rician mixture,

        SM :  exp(-4 lam_M V^2 T^2 (1-u)^2 / (pi u))
        SPS:  Q1( 1/(2 sigma sqrt(lam_S)), 2 T V (1-u) / (pi sigma sqrt(u)) )
        SPM:  Q1( 1/(2 sigma sqrt(lam_M)), 2 T V (1-u) / (pi sigma sqrt(u)) )

    with ``u = lam_xi``.
    """
    if t_threshold < 0:
        raise ValueError(f"t_threshold must be >= 0, got {t_threshold}")
    if velocity <= 0:
        raise ValueError(f"velocity must be positive, got {velocity}")
    if not (0.0 < lam_xi < 1.0):
        raise ValueError(f"lam_star * xi must lie in (0, 1), got {lam_xi}")
    if t_threshold == 0.0:
        return 1.0
    if pair is PairKind.SM:
        if lambda_m is None or lambda_m <= 0:
            raise ValueError("SM branch requires a positive lambda_m")
        expo = (
            4.0
            * lambda_m
            * velocity**2
            * t_threshold**2
            * (1.0 - lam_xi) ** 2
            / (math.pi * lam_xi)
        )
        return math.exp(-expo)
    lam = lambda_s if pair is PairKind.SPS else lambda_m
    which = "lambda_s" if pair is PairKind.SPS else "lambda_m"
    if lam is None or lam <= 0:
        raise ValueError(f"{pair.value} branch requires a positive {which}")
    if sigma is None or sigma <= 0:
        raise ValueError(f"{pair.value} branch requires a positive sigma")
    a = 1.0 / (2.0 * sigma * math.sqrt(lam))
    b = 2.0 * t_threshold * velocity * (1.0 - lam_xi) / (math.pi * sigma * math.sqrt(lam_xi))
    return float(marcum_q1(a, b))


def handover_rate(
    pair: PairKind,
    thresholds: HandoverThresholds,
    mean_distance: float,
    erb: ErbPair | float,
    region_area: float,
    n_bs_mean: float = DEFAULT_N_BS_MEAN,
    mobility: MobilityConfig | None = None,
    lambda_m: float | None = None,
    lambda_s: float | None = None,
    sigma: float | None = None,
) -> float:
    """Completed handovers per second: triggered rate times the sojourn tail."""
    h_t = handover_triggered_rate(
        pair, mean_distance, erb, region_area, n_bs_mean, mobility
    )
    p_ge = prob_sojourn_ge(
        pair,
        thresholds.t_threshold,
        mobility.velocity,
        _as_lam_xi(erb),
        lambda_m=lambda_m,
        lambda_s=lambda_s,
        sigma=sigma,
    )
    return h_t * p_ge


def handover_failure_rate(
    pair: PairKind,
    thresholds: HandoverThresholds,
    erb: ErbPair,
    mobility: MobilityConfig,
    lambda_m: float | None = None,
    lambda_s: float | None = None,
    sigma: float | None = None,
) -> float:
    """Failures per triggered event (dimensionless, in [0, 1]).

    The failure-boundary entry rate differs from the triggered rate only in
    the radius-gain factor, so the mean pair distance, region area and BS
    count cancel:

        H_f = [g(u_f) / g(u)] * P(gap sojourn <= T)

    where the gap-sojourn probability is the complement of the sojourn tail
    evaluated with the failure factor ``u_f``.
    """
    u = erb.lam_xi
    u_f = erb.lam_xi_f
    ratio = _radius_gain(u_f) / _radius_gain(u)
    p_le = 1.0 - prob_sojourn_ge(
        pair,
        thresholds.t_threshold,
        mobility.velocity,
        u_f,
        lambda_m=lambda_m,
        lambda_s=lambda_s,
        sigma=sigma,
    )
    return ratio * p_le


def pingpong_rate(
    pair: PairKind,
    thresholds: HandoverThresholds,
    mean_distance: float,
    erb: ErbPair,
    region_area: float,
    n_bs_mean: float = DEFAULT_N_BS_MEAN,
    mobility: MobilityConfig | None = None,
    lambda_m: float | None = None,
    lambda_s: float | None = None,
    sigma: float | None = None,
    diagnostics: ClampDiagnostics = PINGPONG_CLAMP_DIAGNOSTICS,
) -> float:
    """Ping-pongs per second.

    The bracket compares the sojourn law at the handover boundary against
    the *failure*-boundary law at the ping-pong window:

        H_p = H_t * [ P(S >= T at u)  -  P(S >= T_p at u_f) ]

    The two terms deliberately use different boundary factors (u vs. u_f),
    which can drive the bracket negative for small ``T_p``; a negative
    bracket is clamped to zero, recorded on ``diagnostics`` and warned about,
    since a negative rate is meaningless.
    """
    if mobility is None:
        raise ValueError("a MobilityConfig is required")
    h_t = handover_triggered_rate(
        pair, mean_distance, erb, region_area, n_bs_mean, mobility
    )
    p_t = prob_sojourn_ge(
        pair,
        thresholds.t_threshold,
        mobility.velocity,
        erb.lam_xi,
        lambda_m=lambda_m,
        lambda_s=lambda_s,
        sigma=sigma,
    )
    p_tp = prob_sojourn_ge(
        pair,
        thresholds.t_pingpong,
        mobility.velocity,
        erb.lam_xi_f,
        lambda_m=lambda_m,
        lambda_s=lambda_s,
        sigma=sigma,
    )
    bracket = p_t - p_tp
    if bracket < 0.0:
        diagnostics.record(bracket)
        warnings.warn(
            f"ping-pong bracket negative ({bracket:.3e}) for {pair.value} at "
            f"T={thresholds.t_threshold}, Tp={thresholds.t_pingpong}; clamped to 0",
            UserWarning,
            stacklevel=2,
        )
        bracket = 0.0
    return h_t * bracket


def compute_metrics(
    pair: PairKind,
    thresholds: HandoverThresholds,
    mean_distance: float,
    erb: ErbPair,
    region_area: float,
    n_bs_mean: float = DEFAULT_N_BS_MEAN,
    mobility: MobilityConfig | None = None,
    lambda_m: float | None = None,
    lambda_s: float | None = None,
    sigma: float | None = None,
) -> HandoverMetrics:
    """All four analytic metrics for one pair kind."""
    common = dict(lambda_m=lambda_m, lambda_s=lambda_s, sigma=sigma)
    h_t = handover_triggered_rate(
        pair, mean_distance, erb, region_area, n_bs_mean, mobility
    )
    h = handover_rate(
        pair, thresholds, mean_distance, erb, region_area, n_bs_mean, mobility, **common
    )
    h_f = handover_failure_rate(pair, thresholds, erb, mobility, **common)
    h_p = pingpong_rate(
        pair, thresholds, mean_distance, erb, region_area, n_bs_mean, mobility, **common
    )
    return HandoverMetrics(
        pair=pair,
        triggered_rate=h_t,
        handover_rate=h,
        failure_rate=h_f,
        pingpong_rate=h_p,
    )
