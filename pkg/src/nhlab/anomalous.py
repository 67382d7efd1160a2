"""Anomalous affine connections on Newton-Hooke space-times.

The invariant connection family carries one real parameter C
(s = +1 NH, -1 ANH):

    Gamma^t_tt  = (2 s nu^2 t + 2 C nu) / sigma(t),
    Gamma^i_tj  = Gamma^i_jt = (1/2) Gamma^t_tt delta^i_j,

with C = 0 the standard metric-compatible case.  The first integral of
the temporal geodesic equation is

    dt/dlambda = sigma(t) varsigma(t)^C,   d tau/dlambda = varsigma(t)^C,

so the affine parameter (normalized to lambda(0) = 0) is

    lambda = (varsigma(t)^-C - 1) / (2 C nu) = expm1(2 C nu tau) / (2 C nu),

which degenerates to lambda = tau as C -> 0.  Spatial geodesic images
x(t) are straight world lines for every C, and under a time translation
a^t the affine parameter transforms linearly with slope

    dlambda'/dlambda = varsigma(a^t)^C.

The curvature of the family has the nonzero components

    R^i_ttj = s (1 - s C^2) nu^2 / sigma(t)^2 delta^i_j = -R^i_tjt,
    R_tt    = -s (1 - s C^2) nu^2 d / sigma(t)^2,

flat exactly at C^2 = 1 for NH.  The Galilei limit keeps gamma = nu C
fixed while nu -> 0: Gamma^t_tt = 2 gamma, Gamma^i_tj = gamma delta^i_j,
R^i_ttj = -gamma^2 delta^i_j, R_tt = gamma^2 d, and lambda = e^(2 gamma t)/(2 gamma).

The connection is deliberately not compatible with the degenerate metric
for C != 0; the defect is exposed as a diagnostic, not an error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, DomainExit
from .geometry import (
    EPS_DOMAIN,
    GALILEI,
    NH,
    SpacetimeKind,
    require_beltrami_time,
    sigma,
    sigma_mix,
    tau_of_t,
    varsigma,
)

#: Below this |C| the affine parameter switches to the C -> 0 form lambda = tau.
EPS_C = 1e-6


@dataclass(frozen=True)
class AnomalousConnection:
    """NH/ANH connection with anomaly parameter C, or its Galilei limit.

    NH/ANH store (kind, C) and derive gamma = nu C; the Galilei variant
    stores only gamma (C is infinite in the contraction).
    """

    kind: SpacetimeKind
    C: float = None
    gamma: float = None

    def __post_init__(self):
        if self.kind.variant == GALILEI:
            if self.gamma is None or self.C is not None:
                raise ValueError("Galilei connection takes gamma only")
            object.__setattr__(self, "gamma", float(self.gamma))
        else:
            if self.C is None or self.gamma is not None:
                raise ValueError("NH/ANH connection takes C only")
            object.__setattr__(self, "C", float(self.C))
            object.__setattr__(self, "gamma", float(self.C) * self.kind.nu)

    @classmethod
    def nh(cls, nu: float, C: float) -> "AnomalousConnection":
        return cls(SpacetimeKind.nh(nu), C=C)

    @classmethod
    def anh(cls, nu: float, C: float) -> "AnomalousConnection":
        return cls(SpacetimeKind.anh(nu), C=C)

    @classmethod
    def galilei(cls, gamma: float) -> "AnomalousConnection":
        return cls(SpacetimeKind.galilei(), gamma=gamma)


@dataclass(frozen=True)
class GeodesicState:
    """Geodesic data (t, x, dt/dlambda, dx/dlambda); future-directed dt/dlambda > 0."""

    t: float
    x: np.ndarray
    dt_dl: float
    dx_dl: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.atleast_1d(np.asarray(self.x, dtype=float)))
        object.__setattr__(self, "dx_dl",
                           np.atleast_1d(np.asarray(self.dx_dl, dtype=float)))
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "dt_dl", float(self.dt_dl))
        if not self.dt_dl > 0:
            raise ValueError("dt/dlambda must be positive (future-directed)")


@dataclass(frozen=True)
class GeodesicTrajectory:
    """Columns of an integrated geodesic, all sampled at uniform lambda."""

    lam: np.ndarray
    t: np.ndarray
    x: np.ndarray
    dt_dl: np.ndarray
    dx_dl: np.ndarray

    def to_csv(self, path) -> None:
        d = self.x.shape[1]
        header = ("lambda,t," + ",".join(f"x{i+1}" for i in range(d))
                  + ",dt_dl," + ",".join(f"dx{i+1}_dl" for i in range(d)))
        data = np.column_stack([self.lam, self.t, self.x, self.dt_dl, self.dx_dl])
        np.savetxt(path, data, delimiter=",", header=header, comments="")


def connection_coefficients(conn: AnomalousConnection, t: float) -> tuple[float, float]:
    """(Gamma^t_tt, Gamma^i_tj scalar); the second is always half the first."""
    if conn.kind.variant == GALILEI:
        g_t = 2.0 * conn.gamma
    else:
        sg = require_beltrami_time(conn.kind, t)
        nu = conn.kind.nu
        g_t = (2.0 * conn.kind.sign * nu**2 * t + 2.0 * conn.C * nu) / sg
    return g_t, 0.5 * g_t


def varsigma_pow(conn: AnomalousConnection, t) -> float:
    """varsigma(t)^C, or its Galilei limit e^(-2 gamma t)."""
    if conn.kind.variant == GALILEI:
        return np.exp(-2.0 * conn.gamma * np.asarray(t, dtype=float)) \
            if np.ndim(t) else math.exp(-2.0 * conn.gamma * t)
    return varsigma(conn.kind, t) ** conn.C


def affine_rate(conn: AnomalousConnection, t) -> float:
    """First integral dt/dlambda = sigma(t) varsigma(t)^C of the geodesic equation."""
    return sigma(conn.kind, t) * varsigma_pow(conn, t)


def affine_parameter(conn: AnomalousConnection, t) -> float:
    """Affine parameter lambda(t) along geodesics.

    NH/ANH: lambda = expm1(2 C nu tau(t)) / (2 C nu), normalized so
    lambda(0) = 0; below |C| = EPS_C the C -> 0 limit lambda = tau is
    used.  Galilei keeps the un-normalized form e^(2 gamma t)/(2 gamma)
    (and lambda = t when gamma = 0).
    """
    if conn.kind.variant == GALILEI:
        t = np.asarray(t, dtype=float)
        if conn.gamma == 0.0:
            out = t.copy()
        else:
            out = np.exp(2.0 * conn.gamma * t) / (2.0 * conn.gamma)
        return float(out) if out.ndim == 0 else out
    tau = tau_of_t(conn.kind, t)
    c2nu = 2.0 * conn.C * conn.kind.nu
    if abs(conn.C) < EPS_C:
        out = np.asarray(tau, dtype=float)
    else:
        out = np.expm1(c2nu * np.asarray(tau, dtype=float)) / c2nu
    return float(out) if out.ndim == 0 else out


def geodesic_rhs(conn: AnomalousConnection, state: np.ndarray) -> np.ndarray:
    """Geodesic equation as a first-order system in (t, x, dt/dl, dx/dl)."""
    d = (state.shape[0] - 2) // 2
    t, x = state[0], state[1:1 + d]
    td, xd = state[1 + d], state[2 + d:]
    g_t, g_x = connection_coefficients(conn, t)
    out = np.empty_like(state)
    out[0] = td
    out[1:1 + d] = xd
    out[1 + d] = -g_t * td * td
    out[2 + d:] = -2.0 * g_x * td * xd
    return out


def integrate_geodesic(conn: AnomalousConnection, initial: GeodesicState,
                       lambda_end: float, steps: int) -> GeodesicTrajectory:
    """Fixed-step RK4 integration of the full geodesic equation in lambda.

    The spatial image x(t) is a straight world line for every C; the
    first integral dt/dlambda / (sigma varsigma^C) stays constant to O(h^4).
    """
    d = initial.x.shape[0]
    y = np.concatenate([[initial.t], initial.x, [initial.dt_dl], initial.dx_dl])
    lams = np.linspace(0.0, lambda_end, steps + 1)
    h = lambda_end / steps
    rows = np.empty((steps + 1, y.shape[0]))
    rows[0] = y
    nu = conn.kind.nu
    for n in range(steps):
        if conn.kind.variant == NH and sigma(conn.kind, y[0]) <= EPS_DOMAIN:
            raise DomainExit(f"geodesic left the NH chart at t = {y[0]}")
        try:
            k1 = geodesic_rhs(conn, y)
            k2 = geodesic_rhs(conn, y + h / 2 * k1)
            k3 = geodesic_rhs(conn, y + h / 2 * k2)
            k4 = geodesic_rhs(conn, y + h * k3)
        except DomainError as err:
            raise DomainExit(f"geodesic left the chart near t = {y[0]}") from err
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if conn.kind.variant == NH and abs(y[0]) >= 1.0 / nu:
            raise DomainExit(f"geodesic left the NH chart at t = {y[0]}")
        rows[n + 1] = y
    return GeodesicTrajectory(lams, rows[:, 0], rows[:, 1:1 + d],
                              rows[:, 1 + d], rows[:, 2 + d:])


def straight_line_residual(traj: GeodesicTrajectory) -> float:
    """Deviation of the spatial image x(t) from the best straight world line.

    The velocity dx/dt = (dx/dl)/(dt/dl) is constant on an exact geodesic;
    returns the max deviation of x(t) from x0 + v (t - t0) plus the spread
    of the pointwise velocity.
    """
    v = traj.dx_dl / traj.dt_dl[:, None]
    v0 = v[0]
    pred = traj.x[0] + np.outer(traj.t - traj.t[0], v0)
    pos_dev = np.max(np.abs(traj.x - pred))
    vel_dev = np.max(np.abs(v - v0))
    return max(pos_dev, vel_dev)


def first_integral_residual(conn: AnomalousConnection,
                            traj: GeodesicTrajectory) -> float:
    """Max relative drift of dt/dlambda / (sigma varsigma^C) along the geodesic."""
    ratio = traj.dt_dl / np.array([affine_rate(conn, t) for t in traj.t])
    return float(np.max(np.abs(ratio / ratio[0] - 1.0)))


def lambda_transform_check(conn: AnomalousConnection, a_t: float,
                           t_samples: np.ndarray) -> float:
    """Check that lambda'(t') is affine in lambda(t) with slope varsigma(a^t)^C.

    Returns the least-squares affine fit residual plus the slope error.
    Requires every sample to stay in domain in both frames.
    """
    t_samples = np.asarray(t_samples, dtype=float)
    if conn.kind.variant == GALILEI:
        t_new = t_samples - a_t
    else:
        smix = sigma_mix(conn.kind, a_t, t_samples)
        if np.any(np.abs(smix) <= EPS_DOMAIN):
            raise DomainError("a sample maps to infinity under the time translation")
        t_new = (t_samples - a_t) / smix
    slope_expected = varsigma_pow(conn, a_t)
    lam = np.asarray(affine_parameter(conn, t_samples), dtype=float)
    lam_new = np.asarray(affine_parameter(conn, t_new), dtype=float)
    slope, intercept = np.polyfit(lam, lam_new, 1)
    fit_residual = np.max(np.abs(lam_new - (slope * lam + intercept)))
    return float(fit_residual + abs(slope - slope_expected))


def curvature(conn: AnomalousConnection, t: float) -> dict:
    """Closed-form curvature components at Beltrami time t.

    Returns {"r_i_ttj": scalar multiplying delta^i_j in R^i_ttj,
    "r_tt": the Ricci component R_tt given the space dimension is read
    off separately}; R^i_tjt = -R^i_ttj and all other components vanish.
    R_tt is returned per space dimension: R_tt = d * r_tt_per_dim.
    """
    if conn.kind.variant == GALILEI:
        r = -conn.gamma**2
    else:
        sg = require_beltrami_time(conn.kind, t)
        s = conn.kind.sign
        r = s * (1.0 - s * conn.C**2) * conn.kind.nu**2 / sg**2
    return {"r_i_ttj": r, "r_tt_per_dim": -r}


def _gamma_tensor(conn: AnomalousConnection, t: float, d: int) -> np.ndarray:
    """Full Gamma^rho_{mu nu} array over coordinates (t, x^1..x^d)."""
    g_t, g_x = connection_coefficients(conn, t)
    gam = np.zeros((d + 1, d + 1, d + 1))
    gam[0, 0, 0] = g_t
    for i in range(1, d + 1):
        gam[i, 0, i] = g_x
        gam[i, i, 0] = g_x
    return gam


def curvature_finite_difference(conn: AnomalousConnection, t: float, d: int = 3,
                                step: float = 1e-5) -> dict:
    """Numerical curvature from the connection coefficients.

    Uses R^rho_{sigma mu nu} = d_mu Gamma^rho_{nu sigma} - d_nu Gamma^rho_{mu sigma}
    + Gamma^rho_{mu l} Gamma^l_{nu sigma} - Gamma^rho_{nu l} Gamma^l_{mu sigma}
    with central differences for every coordinate derivative (the spatial
    ones vanish identically since the coefficients depend on t only).
    Returns the same summary dict as ``curvature`` plus the full tensor.
    """
    gam0 = _gamma_tensor(conn, t, d)
    dgam = np.zeros((d + 1, d + 1, d + 1, d + 1))
    dgam[0] = (_gamma_tensor(conn, t + step, d)
               - _gamma_tensor(conn, t - step, d)) / (2.0 * step)
    # spatial derivative slots stay zero: the coefficients are x-independent
    riem = np.zeros((d + 1, d + 1, d + 1, d + 1))
    for rho in range(d + 1):
        for sig in range(d + 1):
            for mu in range(d + 1):
                for nuu in range(d + 1):
                    val = dgam[mu, rho, nuu, sig] - dgam[nuu, rho, mu, sig]
                    val += np.dot(gam0[rho, mu, :], gam0[:, nuu, sig])
                    val -= np.dot(gam0[rho, nuu, :], gam0[:, mu, sig])
                    riem[rho, sig, mu, nuu] = val
    ricci_tt = sum(riem[l, 0, l, 0] for l in range(d + 1))
    return {
        "r_i_ttj": riem[1, 0, 0, 1],
        "r_tt_per_dim": ricci_tt / d,
        "riemann": riem,
        "ricci_tt": ricci_tt,
    }


def metric_compatibility_defect(conn: AnomalousConnection, t: float) -> float:
    """nabla_t g_tt for the degenerate metric g_tt = sigma^-2.

    Equals -4 C nu / sigma(t)^3 (NH/ANH) or -4 gamma (Galilei): nonzero
    whenever the anomaly parameter is, by construction.  Diagnostic only.
    """
    if conn.kind.variant == GALILEI:
        return -4.0 * conn.gamma
    sg = require_beltrami_time(conn.kind, t)
    dg_tt = 4.0 * conn.kind.sign * conn.kind.nu**2 * t / sg**3
    g_t, _ = connection_coefficients(conn, t)
    return dg_tt - 2.0 * g_t / sg**2


def galilei_contraction_check(gamma: float, nu_sequence, t: float,
                              d: int = 3) -> list[dict]:
    """Convergence of NH connection/curvature to the Galilei forms.

    Holds gamma = nu C fixed while nu runs down the given sequence; the
    returned per-nu entries carry the deviations from Gamma^t_tt = 2 gamma
    and R_tt = gamma^2 d.
    """
    rows = []
    target = AnomalousConnection.galilei(gamma)
    g_t_target, _ = connection_coefficients(target, t)
    r_target = curvature(target, t)
    for nu in nu_sequence:
        if gamma == 0.0:
            conn = AnomalousConnection.nh(nu, 0.0)
        else:
            conn = AnomalousConnection.nh(nu, gamma / nu)
        g_t, _ = connection_coefficients(conn, t)
        r = curvature(conn, t)
        rows.append({
            "nu": nu,
            "gamma_t_deviation": abs(g_t - g_t_target),
            "ricci_deviation": abs(d * r["r_tt_per_dim"] - d * r_target["r_tt_per_dim"]),
        })
    return rows
