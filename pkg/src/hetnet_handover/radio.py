"""Received-signal-strength model and the circular boundary approximation.

Association and handover decisions are driven by the long-term downlink RSS

    RSS_i(r) = B_i * P_i * G_i * C_i * r^(-alpha_i)

(all factors linear; ``C_i`` is the path-gain intercept at 1 m).  Between a
serving BS i (placed at the origin of the pair frame) and a target BS j at
position X, the locus RSS_i = RSS_j is a circle exactly when
``alpha_i == alpha_j`` (the classical Apollonius circle) and is approximated
by a circle otherwise.  With

    xi      = (B_j P_j G_j C_j / (B_i P_i G_i C_i))^(2/alpha_j)
    lam     = |X|^(2 (alpha_i/alpha_j - 1))        # power-law flattening factor
    u       = lam * xi

the approximating circle is

    center = X / (1 - u),      radius = sqrt(u) * |X| / |1 - u|.

``u == 1`` means the boundary degenerates to the perpendicular bisector (no
circle exists) and is treated as a hard error.  ``u > 1`` (target effectively
stronger than serving) yields a circle that encloses the *serving* BS; the
flag on the returned Circle records that orientation.

The handover-failure boundary is the same construction with
``xi_f = xi * q_out^(2/alpha_j)`` for the outage offset ``q_out < 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import PointSet

#: |1 - lam*xi| below this is treated as the degenerate (bisector) case.
DEGENERACY_TOL = 1e-12


class DegenerateBoundaryError(ValueError):
    """The equal-RSS locus is a straight line, not a circle (lam * xi == 1)."""


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


@dataclass(frozen=True)
class TierRadioParams:
    """Per-tier radio constants.

    ``tx_power`` is in dBm, ``antenna_gain`` in dBi, ``bias`` in dB;
    ``pathloss_intercept`` is the *linear* path gain at 1 m and
    ``pathloss_exponent`` the power-law exponent.  The dB quantities are
    converted to linear exactly once, when the instance is created, and the
    combined prefactor ``B*P*G*C`` is cached for RSS evaluation.
    """

    tx_power: float
    antenna_gain: float
    bias: float
    pathloss_intercept: float
    pathloss_exponent: float
    linear_prefactor: float = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.pathloss_exponent <= 2:
            raise ValueError(
                f"pathloss_exponent must exceed 2, got {self.pathloss_exponent}"
            )
        if self.pathloss_intercept <= 0:
            raise ValueError(
                f"pathloss_intercept must be positive, got {self.pathloss_intercept}"
            )
        prefactor = (
            db_to_linear(self.bias)
            * dbm_to_watts(self.tx_power)
            * db_to_linear(self.antenna_gain)
            * self.pathloss_intercept
        )
        object.__setattr__(self, "linear_prefactor", prefactor)


def dl_rss(tier: TierRadioParams, distance) -> np.ndarray | float:
    """Long-term downlink RSS (linear watts) at ``distance`` meters."""
    d = np.asarray(distance, dtype=float)
    if np.any(d <= 0):
        raise ValueError("dl_rss requires distance > 0")
    out = tier.linear_prefactor * d ** (-tier.pathloss_exponent)
    if np.ndim(distance) == 0:
        return float(out)
    return out


def xi_factor(serving: TierRadioParams, target: TierRadioParams) -> float:
    """Power-ratio factor of the (serving, target) pair.

    ``(B_t P_t G_t C_t / (B_s P_s G_s C_s)) ** (2 / alpha_target)`` — the
    exponent always uses the *target* tier's path-loss exponent.
    """
    ratio = target.linear_prefactor / serving.linear_prefactor
    return ratio ** (2.0 / target.pathloss_exponent)


def xi_failure_factor(
    xi: float, q_out_linear: float, target_alpha: float
) -> float:
    """Failure-boundary analogue: ``xi * q_out ** (2 / alpha_target)``."""
    if q_out_linear <= 0:
        raise ValueError(f"q_out must be a positive linear ratio, got {q_out_linear}")
    return xi * q_out_linear ** (2.0 / target_alpha)


def lambda_star(target: np.ndarray, alpha_ratio: float) -> float:
    """Distance-dependent flattening factor ``(x^2 + y^2)^(alpha_ratio - 1)``.

    ``alpha_ratio`` is alpha_serving / alpha_target; equal exponents give 1
    for every target position.  Coordinates are meters in the serving-BS
    frame.
    """
    t = np.asarray(target, dtype=float)
    r2 = float(t[0] * t[0] + t[1] * t[1])
    if r2 == 0.0:
        raise ValueError("target must not sit on the serving BS (origin)")
    return r2 ** (alpha_ratio - 1.0)


@dataclass(frozen=True)
class Circle:
    center: np.ndarray
    radius: float
    #: True when the circle encloses the serving BS rather than the target
    #: (the lam*xi > 1 orientation).
    encloses_serving: bool = False

    def __post_init__(self) -> None:
        c = np.asarray(self.center, dtype=float)
        object.__setattr__(self, "center", c)
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise ValueError(f"radius must be positive and finite, got {self.radius}")

    def contains(self, points) -> np.ndarray | bool:
        pts = np.asarray(points, dtype=float)
        scalar = pts.ndim == 1
        pts_2d = np.atleast_2d(pts)
        d2 = np.sum((pts_2d - self.center) ** 2, axis=1)
        inside = d2 < self.radius * self.radius
        return bool(inside[0]) if scalar else inside


def erb_circle(target: np.ndarray, xi: float, lam_star: float) -> Circle:
    """Circular approximation of the equal-RSS boundary for one BS pair.

    ``target`` is the target-BS position in the serving-BS frame (meters).
    Raises :class:`DegenerateBoundaryError` when ``lam_star * xi == 1``.
    """
    if xi <= 0 or lam_star <= 0:
        raise ValueError("xi and lam_star must be positive")
    t = np.asarray(target, dtype=float)
    u = lam_star * xi
    denom = 1.0 - u
    if abs(denom) < DEGENERACY_TOL:
        raise DegenerateBoundaryError(
            "equal-RSS boundary is a perpendicular bisector (lam*xi == 1); "
            "no circular approximation exists"
        )
    norm = math.hypot(t[0], t[1])
    if norm == 0.0:
        raise ValueError("target must not coincide with the serving BS")
    center = t / denom
    radius = math.sqrt(u) * norm / abs(denom)
    return Circle(center=center, radius=radius, encloses_serving=u > 1.0)


def erb_failure_circle(target: np.ndarray, xi_f: float, lam_star: float) -> Circle:
    """Failure-boundary circle: same construction evaluated at ``xi_f``."""
    return erb_circle(target, xi_f, lam_star)


@dataclass(frozen=True)
class ErbPair:
    """Both boundary circles plus the scalar factors for one (serving, target) pair."""

    xi: float
    xi_f: float
    lam_star: float
    handover_circle: Circle
    failure_circle: Circle
    q_out: float  # linear ratio

    @property
    def lam_xi(self) -> float:
        return self.lam_star * self.xi

    @property
    def lam_xi_f(self) -> float:
        return self.lam_star * self.xi_f


def make_erb_pair(
    serving: TierRadioParams,
    target: TierRadioParams,
    target_position: np.ndarray,
    q_out_linear: float,
) -> ErbPair:
    """Build handover and failure circles for a target BS at ``target_position``
    (serving-BS frame)."""
    xi = xi_factor(serving, target)
    xi_f = xi_failure_factor(xi, q_out_linear, target.pathloss_exponent)
    alpha_ratio = serving.pathloss_exponent / target.pathloss_exponent
    lam = lambda_star(target_position, alpha_ratio)
    return ErbPair(
        xi=xi,
        xi_f=xi_f,
        lam_star=lam,
        handover_circle=erb_circle(target_position, xi, lam),
        failure_circle=erb_failure_circle(target_position, xi_f, lam),
        q_out=q_out_linear,
    )


def serving_bs(
    location: np.ndarray,
    deployment: list[tuple[PointSet, TierRadioParams]],
) -> tuple[str, int]:
    """Strongest-RSS association: ``(tier label, index within that tier)``.

    Ties break deterministically toward the earlier tier in ``deployment``
    and then the lower index, so simulations are reproducible bit-for-bit.
    A query placed exactly on a BS position associates to that BS (the RSS
    power law diverges there).
    """
    if not deployment or all(len(ps) == 0 for ps, _ in deployment):
        raise ValueError("no BS deployed anywhere")
    loc = np.asarray(location, dtype=float)
    best: tuple[str, int] | None = None
    best_rss = -math.inf
    for point_set, params in deployment:
        if len(point_set) == 0:
            continue
        d2 = np.sum((point_set.points - loc) ** 2, axis=1)
        zero = d2 == 0.0
        if np.any(zero):
            return point_set.tier, int(np.argmax(zero))
        rss = params.linear_prefactor * d2 ** (-params.pathloss_exponent / 2.0)
        idx = int(np.argmax(rss))
        # strict > keeps the first (earlier-tier, lower-index) maximum
        if rss[idx] > best_rss:
            best_rss = float(rss[idx])
            best = (point_set.tier, idx)
    assert best is not None
    return best
