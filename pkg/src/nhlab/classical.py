"""Lagrangian and Hamiltonian mechanics of the free Newton-Hooke particle.

Three equivalent Lagrangian forms are implemented (s = +1 NH, -1 ANH):

* ``nh_beltrami``:  L = (m / 2 sigma(t)) [xdot^2 - s nu^2 (x - t xdot)^2
                        + 2 s nu^2 x^2 / sigma(t)],
* ``free``:         L = (1/2) m xdot^2   (same EOM, differs by a total
                        derivative of B(t, x) = s m nu^2 t x^2 / (2 sigma)),
* ``static_oscillator``:  L = (1/2) m (qdot^2 + s nu^2 q^2) in the static
                        chart, obtained from ``nh_beltrami`` by the chart map.

The canonical structure of the ``nh_beltrami`` form is

    p_i = m [xdot^i + s nu^2 t x^i / sigma(t)],
    H   = p^2/2m - s nu^2 t x.p / sigma(t) - s m nu^2 x^2 / (2 sigma(t)^2),

whose canonical equations integrate to straight world lines xddot = 0.

Actions are evaluated on uniformly sampled paths with trapezoid quadrature
(O(h^2)); path velocities come from second-order central differences with
one-sided stencils at the ends.  The endpoint identities below are checked
against exact boundary-term evaluation:

    L_nh dt = L_free dt + dB,
    S[x - a] = S[x] + (-s m nu^2 t a.x / sigma + s m nu^2 t a^2 / (2 sigma)) |_t1^t2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, DomainExit
from .geometry import EPS_DOMAIN, SpacetimeKind, require_beltrami_time, sigma

NH_BELTRAMI = "nh_beltrami"
FREE = "free"
STATIC_OSCILLATOR = "static_oscillator"
_FORMS = (NH_BELTRAMI, FREE, STATIC_OSCILLATOR)


@dataclass(frozen=True)
class PathSample:
    """A discretized world line: strictly increasing times, per-time positions."""

    times: np.ndarray
    positions: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        x = np.asarray(self.positions, dtype=float)
        if x.ndim == 1:
            x = x[:, None]
        if t.ndim != 1 or x.shape[0] != t.shape[0]:
            raise ValueError("times and positions have inconsistent shapes")
        if np.any(np.diff(t) <= 0):
            raise ValueError("times must be strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "positions", x)

    @property
    def dim(self) -> int:
        return self.positions.shape[1]

    def velocities(self) -> np.ndarray:
        """Second-order finite-difference velocities (one-sided at the ends)."""
        return np.gradient(self.positions, self.times, axis=0, edge_order=2)

    def to_csv(self, path) -> None:
        header = "t," + ",".join(f"x{i+1}" for i in range(self.dim))
        data = np.column_stack([self.times, self.positions])
        np.savetxt(path, data, delimiter=",", header=header, comments="")


@dataclass(frozen=True)
class PhaseState:
    """Phase-space point (t, x, p) with p the canonical momentum."""

    t: float
    x: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.atleast_1d(np.asarray(self.x, dtype=float)))
        object.__setattr__(self, "p", np.atleast_1d(np.asarray(self.p, dtype=float)))
        object.__setattr__(self, "t", float(self.t))


def _check_form(form: str):
    if form not in _FORMS:
        raise ValueError(f"unknown Lagrangian form {form!r}; pick one of {_FORMS}")


def lagrangian(form: str, kind: SpacetimeKind, m: float, t: float,
               x: np.ndarray, xdot: np.ndarray) -> float:
    """Evaluate the selected Lagrangian at (t, x, xdot).

    For ``static_oscillator`` the arguments are read as (tau, q, dq/dtau).
    """
    _check_form(form)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    xdot = np.atleast_1d(np.asarray(xdot, dtype=float))
    s = kind.sign
    nu2 = kind.nu**2
    if form == FREE:
        return 0.5 * m * float(xdot @ xdot)
    if form == STATIC_OSCILLATOR:
        return 0.5 * m * float(xdot @ xdot + s * nu2 * (x @ x))
    sg = require_beltrami_time(kind, t)
    rel = x - t * xdot
    return 0.5 * (m / sg) * float(
        xdot @ xdot - s * nu2 * (rel @ rel) + 2.0 * s * nu2 * (x @ x) / sg)


def legendre(kind: SpacetimeKind, m: float, t: float, x: np.ndarray,
             xdot: np.ndarray) -> tuple[PhaseState, float]:
    """Canonical momentum and Hamiltonian of the nh_beltrami form.

    Returns (PhaseState, H) with p = m [xdot + s nu^2 t x / sigma] and
    H = p.xdot - L in the closed form quoted in the module docstring.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    xdot = np.atleast_1d(np.asarray(xdot, dtype=float))
    sg = require_beltrami_time(kind, t)
    s = kind.sign
    nu2 = kind.nu**2
    p = m * (xdot + s * nu2 * t * x / sg)
    h = hamiltonian(kind, m, t, x, p)
    return PhaseState(t, x, p), h


def hamiltonian(kind: SpacetimeKind, m: float, t: float, x: np.ndarray,
                p: np.ndarray) -> float:
    """H(t, x, p) = p^2/2m - s nu^2 t x.p/sigma - s m nu^2 x^2/(2 sigma^2)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    p = np.atleast_1d(np.asarray(p, dtype=float))
    sg = require_beltrami_time(kind, t)
    s = kind.sign
    nu2 = kind.nu**2
    return float(p @ p) / (2.0 * m) \
        - s * nu2 * t * float(x @ p) / sg \
        - s * m * nu2 * float(x @ x) / (2.0 * sg**2)


def canonical_rhs(kind: SpacetimeKind, m: float, t: float, x: np.ndarray,
                  p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Right-hand side of the canonical equations of motion.

    xdot = p/m - s nu^2 t x / sigma,   pdot = s nu^2 t p / sigma + s m nu^2 x / sigma^2.
    """
    sg = require_beltrami_time(kind, t)
    s = kind.sign
    nu2 = kind.nu**2
    xdot = p / m - s * nu2 * t * x / sg
    pdot = s * nu2 * t * p / sg + s * m * nu2 * x / sg**2
    return xdot, pdot


def integrate_eom(kind: SpacetimeKind, m: float, initial: PhaseState,
                  t_end: float, steps: int) -> PathSample:
    """Integrate the canonical equations with fixed-step classic RK4.

    The resulting x(t) is a straight world line up to the O(h^4) method
    error.  Raises DomainExit if the time grid leaves the NH chart.
    """
    times = np.linspace(initial.t, t_end, steps + 1)
    if kind.variant == "nh":
        if np.any(sigma(kind, times) <= EPS_DOMAIN):
            raise DomainExit(
                f"integration window [{initial.t}, {t_end}] leaves the NH chart")
    h = (t_end - initial.t) / steps
    x = initial.x.copy()
    p = initial.p.copy()
    xs = np.empty((steps + 1, x.shape[0]))
    xs[0] = x
    for n in range(steps):
        t = times[n]
        k1x, k1p = canonical_rhs(kind, m, t, x, p)
        k2x, k2p = canonical_rhs(kind, m, t + h / 2, x + h / 2 * k1x, p + h / 2 * k1p)
        k3x, k3p = canonical_rhs(kind, m, t + h / 2, x + h / 2 * k2x, p + h / 2 * k2p)
        k4x, k4p = canonical_rhs(kind, m, t + h, x + h * k3x, p + h * k3p)
        x = x + h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x)
        p = p + h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p)
        xs[n + 1] = x
    return PathSample(times, xs)


def integrate_static_oscillator(kind: SpacetimeKind, q0: np.ndarray,
                                qdot0: np.ndarray, tau0: float,
                                tau_end: float, steps: int) -> PathSample:
    """RK4 for qddot = s nu^2 q, the EOM of the static_oscillator form."""
    q = np.atleast_1d(np.asarray(q0, dtype=float)).copy()
    v = np.atleast_1d(np.asarray(qdot0, dtype=float)).copy()
    taus = np.linspace(tau0, tau_end, steps + 1)
    h = (tau_end - tau0) / steps
    w2 = kind.sign * kind.nu**2
    qs = np.empty((steps + 1, q.shape[0]))
    qs[0] = q

    def rhs(qv):
        return qv[1], w2 * qv[0]

    for n in range(steps):
        k1q, k1v = rhs((q, v))
        k2q, k2v = rhs((q + h / 2 * k1q, v + h / 2 * k1v))
        k3q, k3v = rhs((q + h / 2 * k2q, v + h / 2 * k2v))
        k4q, k4v = rhs((q + h * k3q, v + h * k3v))
        q = q + h / 6 * (k1q + 2 * k2q + 2 * k3q + k4q)
        v = v + h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)
        qs[n + 1] = q
    return PathSample(taus, qs)


def action_of_path(form: str, kind: SpacetimeKind, m: float,
                   path: PathSample) -> float:
    """Trapezoid quadrature of the selected Lagrangian along the path.

    Requires at least 16 samples; the quadrature error is O(h^2) for
    smooth paths (velocities by central differences are O(h^2) as well).
    """
    _check_form(form)
    if path.times.shape[0] < 16:
        raise DomainError("path resolution too low (need >= 16 samples)")
    vel = path.velocities()
    vals = np.array([
        lagrangian(form, kind, m, path.times[i], path.positions[i], vel[i])
        for i in range(path.times.shape[0])
    ])
    return float(np.trapezoid(vals, path.times))


def boundary_term(kind: SpacetimeKind, m: float, t: float, x: np.ndarray) -> float:
    """B(t, x) = s m nu^2 t x^2 / (2 sigma(t)): L_nh dt = L_free dt + dB."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    sg = require_beltrami_time(kind, t)
    return kind.sign * m * kind.nu**2 * t * float(x @ x) / (2.0 * sg)


def translation_boundary_term(kind: SpacetimeKind, m: float, a: np.ndarray,
                              t: float, x: np.ndarray) -> float:
    """Endpoint term picked up by S under x -> x - a.

    Equals -s m nu^2 t a.x / sigma(t) + s m nu^2 t a^2 / (2 sigma(t)).
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    x = np.atleast_1d(np.asarray(x, dtype=float))
    sg = require_beltrami_time(kind, t)
    s = kind.sign
    nu2 = kind.nu**2
    return -s * m * nu2 * t * float(a @ x) / sg \
        + s * m * nu2 * t * float(a @ a) / (2.0 * sg)


def total_derivative_check(kind: SpacetimeKind, m: float,
                           path: PathSample) -> float:
    """| (S_nh - S_free) - [B]_{t1}^{t2} | for the given path.

    Vanishes as O(h^2) under refinement; exactly zero for x = 0.
    """
    s_nh = action_of_path(NH_BELTRAMI, kind, m, path)
    s_free = action_of_path(FREE, kind, m, path)
    b2 = boundary_term(kind, m, path.times[-1], path.positions[-1])
    b1 = boundary_term(kind, m, path.times[0], path.positions[0])
    return abs((s_nh - s_free) - (b2 - b1))


def translation_shift_check(kind: SpacetimeKind, m: float, a: np.ndarray,
                            path: PathSample) -> float:
    """| (S[x - a] - S[x]) - endpoint term | for the nh_beltrami action."""
    a = np.atleast_1d(np.asarray(a, dtype=float))
    shifted = PathSample(path.times, path.positions - a)
    ds = action_of_path(NH_BELTRAMI, kind, m, shifted) \
        - action_of_path(NH_BELTRAMI, kind, m, path)
    t2 = translation_boundary_term(kind, m, a, path.times[-1], path.positions[-1])
    t1 = translation_boundary_term(kind, m, a, path.times[0], path.positions[0])
    return abs(ds - (t2 - t1))
