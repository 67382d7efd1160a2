"""Newton-Cartan-like gravity on (anomalous) Newton-Hooke space-times.

For d = 3 a test particle in the field of a point source of mass M at
prescribed position X(t) obeys

    d^2 x^i / dt^2 = -(G M / sigma(t)^(1/2)) (x^i - X^i) / |x - X|^3,

i.e. the Newtonian inverse-square law with a time-dependent strength
G M / sigma(t)^(1/2).  The corresponding Newton-Cartan-like connection
component Gamma^i_tt = -F^i/m obeys the divergence form of the field
equation: its flux through any sphere around the source is
4 pi G M / sigma(t)^(1/2), independent of radius, and its pointwise
divergence vanishes away from the source.

The law is covariant: transporting both orbit and source world line with
a group element leaves the equation form-invariant.  The anomaly
parameter C never enters.  Source back-reaction is out of scope; X(t) is
prescribed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import CollisionError, DomainError, DomainExit
from .geometry import BELTRAMI, EPS_DOMAIN, Event, SpacetimeKind, require_beltrami_time, sigma
from .group import NHTransform, apply, transform_velocity

#: Minimal separation before integrate_orbit declares a collision.
COLLISION_RADIUS = 1e-9


@dataclass(frozen=True)
class PointSource:
    """Point mass M at prescribed position X(t), with gravitational constant G."""

    mass: float
    position: Callable[[float], np.ndarray] = None
    G: float = 1.0

    def __post_init__(self):
        if not self.mass > 0 or not self.G > 0:
            raise ValueError("mass and G must be positive")
        pos = self.position
        if pos is None:
            pos = lambda t: np.zeros(3)
        elif isinstance(pos, (list, tuple, np.ndarray)):
            fixed = np.asarray(pos, dtype=float)
            pos = lambda t, _fixed=fixed: _fixed
        object.__setattr__(self, "position", pos)

    def at(self, t: float) -> np.ndarray:
        return np.atleast_1d(np.asarray(self.position(t), dtype=float))


@dataclass(frozen=True)
class OrbitSample:
    """Integrated orbit: times plus positions and velocities (shape (n, 3))."""

    times: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray

    def to_csv(self, path) -> None:
        header = "t,x,y,z,vx,vy,vz"
        data = np.column_stack([self.times, self.positions, self.velocities])
        np.savetxt(path, data, delimiter=",", header=header, comments="")


def point_acceleration(kind: SpacetimeKind, src: PointSource, t: float,
                       x: np.ndarray) -> np.ndarray:
    """Gravitational acceleration of a test particle at (t, x); d = 3 only."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (3,):
        raise DomainError("the point-source law is implemented for d = 3")
    sg = require_beltrami_time(kind, t)
    rel = x - src.at(t)
    r = float(np.linalg.norm(rel))
    if r <= COLLISION_RADIUS:
        raise CollisionError(f"test particle at the source position (r = {r})")
    return -(src.G * src.mass / math.sqrt(sg)) * rel / r**3


def connection_field(kind: SpacetimeKind, src: PointSource, t: float,
                     x: np.ndarray) -> np.ndarray:
    """Gamma^i_tt = -F^i/m = +(G M / sigma^(1/2)) (x - X)/|x - X|^3."""
    return -point_acceleration(kind, src, t, x)


def integrate_orbit(kind: SpacetimeKind, src: PointSource, x0: np.ndarray,
                    v0: np.ndarray, t0: float, t_end: float,
                    steps: int) -> OrbitSample:
    """Fixed-step RK4 for xddot = point_acceleration along Beltrami time."""
    times = np.linspace(t0, t_end, steps + 1)
    if kind.variant == "nh" and np.any(sigma(kind, times) <= EPS_DOMAIN):
        raise DomainExit(f"orbit window [{t0}, {t_end}] leaves the NH chart")
    x = np.atleast_1d(np.asarray(x0, dtype=float)).copy()
    v = np.atleast_1d(np.asarray(v0, dtype=float)).copy()
    h = (t_end - t0) / steps
    xs = np.empty((steps + 1, 3))
    vs = np.empty((steps + 1, 3))
    xs[0], vs[0] = x, v
    acc = lambda tt, xx: point_acceleration(kind, src, tt, xx)
    for n in range(steps):
        t = times[n]
        k1x, k1v = v, acc(t, x)
        k2x, k2v = v + h / 2 * k1v, acc(t + h / 2, x + h / 2 * k1x)
        k3x, k3v = v + h / 2 * k2v, acc(t + h / 2, x + h / 2 * k2x)
        k4x, k4v = v + h * k3v, acc(t + h, x + h * k3x)
        x = x + h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x)
        v = v + h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)
        xs[n + 1], vs[n + 1] = x, v
    return OrbitSample(times, xs, vs)


def _fd_weights(xs: np.ndarray, x0: float, order: int) -> np.ndarray:
    """Finite-difference weights for the given derivative order on nodes xs.

    Fornberg's recursion; returns one weight per node so that
    f^(order)(x0) ~= weights . f(xs).
    """
    n = xs.shape[0]
    c = np.zeros((n, order + 1))
    c[0, 0] = 1.0
    c1 = 1.0
    c4 = xs[0] - x0
    for i in range(1, n):
        mn = min(i, order)
        c2 = 1.0
        c5 = c4
        c4 = xs[i] - x0
        for j in range(i):
            c3 = xs[i] - xs[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, order]


def covariance_check(kind: SpacetimeKind, g: NHTransform, src: PointSource,
                     orbit: OrbitSample, stencil: int = 7) -> float:
    """Residual of the gravity law along the transformed orbit.

    Transforms every orbit sample and the source world line with g, then
    compares local polynomial second derivatives of x'(t') against the
    point-source acceleration evaluated in the primed frame.  Returns the
    max-norm residual over interior samples; for an exact law it is at
    the level of the integration plus differentiation error.
    """
    n = orbit.times.shape[0]
    if n < stencil:
        raise ValueError("orbit too short for the requested stencil")
    ev_new = [apply(kind, g, Event(BELTRAMI, t, x))
              for t, x in zip(orbit.times, orbit.positions)]
    t_new = np.array([e.time for e in ev_new])
    x_new = np.array([e.space for e in ev_new])
    src_new = np.array([apply(kind, g, Event(BELTRAMI, t, src.at(t))).space
                        for t in orbit.times])
    if np.any(np.diff(t_new) <= 0):
        raise DomainError("transformed times are not monotonic on this window")
    half = stencil // 2
    worst = 0.0
    gm = src.G * src.mass
    for idx in range(half, n - half):
        sl = slice(idx - half, idx + half + 1)
        w = _fd_weights(t_new[sl], t_new[idx], 2)
        acc_num = w @ x_new[sl]
        rel = x_new[idx] - src_new[idx]
        r = np.linalg.norm(rel)
        sg = sigma(kind, t_new[idx])
        acc_law = -(gm / math.sqrt(sg)) * rel / r**3
        worst = max(worst, float(np.max(np.abs(acc_num - acc_law))))
    return worst


def field_divergence(kind: SpacetimeKind, src: PointSource, t: float,
                     x: np.ndarray, step: float = 1e-5) -> float:
    """Central-difference divergence of Gamma^i_tt at an off-source point."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    total = 0.0
    for i in range(3):
        e = np.zeros(3)
        e[i] = step
        fp = connection_field(kind, src, t, x + e)[i]
        fm = connection_field(kind, src, t, x - e)[i]
        total += (fp - fm) / (2.0 * step)
    return total


def divergence_check(kind: SpacetimeKind, src: PointSource, t: float,
                     sphere_radius: float, quad_order: int = 24) -> tuple[float, float]:
    """Flux of Gamma^i_tt through a sphere of given radius around the source.

    Product quadrature: Gauss-Legendre in cos(theta), trapezoid in phi.
    Returns (flux, expected) with expected = 4 pi G M / sigma(t)^(1/2);
    the flux is radius-independent.
    """
    if sphere_radius <= 0:
        raise DomainError("sphere radius must be positive")
    sg = require_beltrami_time(kind, t)
    center = src.at(t)
    mu, wt = np.polynomial.legendre.leggauss(quad_order)
    phis = np.linspace(0.0, 2.0 * math.pi, 2 * quad_order, endpoint=False)
    dphi = 2.0 * math.pi / (2 * quad_order)
    flux = 0.0
    for m_k, w_k in zip(mu, wt):
        sin_th = math.sqrt(max(1.0 - m_k * m_k, 0.0))
        for phi in phis:
            n_hat = np.array([sin_th * math.cos(phi),
                              sin_th * math.sin(phi), m_k])
            point = center + sphere_radius * n_hat
            f = connection_field(kind, src, t, point)
            flux += float(f @ n_hat) * sphere_radius**2 * w_k * dphi
    expected = 4.0 * math.pi * src.G * src.mass / math.sqrt(sg)
    return flux, expected


def flux_report(kind: SpacetimeKind, src: PointSource, t: float,
                radii, quad_order: int = 24) -> dict:
    """JSON-ready record of Gauss-law fluxes at several radii."""
    rows = []
    for r in radii:
        flux, expected = divergence_check(kind, src, t, r, quad_order)
        rows.append({"radius": float(r), "flux": flux,
                     "expected": expected,
                     "deviation": abs(flux - expected)})
    return {"kind": kind.variant, "nu": kind.nu, "time": t,
            "G": src.G, "mass": src.mass, "fluxes": rows}
