"""Finite Newton-Hooke transformations on Beltrami and linear coordinates.

A group element g = (O, a^t, a, u) acts on Beltrami coordinates as the
fractional linear map

    t' = (t - a^t) / sigma(a^t, t),
    x'^i = sigma(a^t)^(1/2) / sigma(a^t, t) * O^i_j (x^j - a^j - u^j t),

with sigma(a^t, t) = 1 -+ nu^2 a^t t.  The time map is independent of x
(absolute simultaneity), and uniform-velocity world lines map to
uniform-velocity world lines.  Composition and inversion are obtained in
closed form by matching fractional-linear coefficients, never by fitting.

Velocity and acceleration transform by the chain rule; the acceleration
law is homogeneous,

    dv'^i/dt' = sigma(a^t, t)^3 / sigma(a^t)^(3/2) * O^i_j dv^j/dt.

On linear coordinates (NH) the same element acts linearly:

    lambda' = varsigma(a^t) lambda - a^t/(1 + nu a^t),
    y'^i    = varsigma(a^t)^(1/2) O^i_j (y^j - a^j - w^j lambda),
    w^j     = u^j + nu a^j.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, SingularTransform
from .geometry import (
    BELTRAMI,
    EPS_DOMAIN,
    LINEAR,
    NH,
    Event,
    SpacetimeKind,
    sigma,
    sigma_mix,
    varsigma,
)

ORTHO_TOL = 1e-12


@dataclass(frozen=True)
class NHTransform:
    """Group element: rotation O in SO(d), time shift a^t, space shift a, boost u."""

    rotation: np.ndarray
    time_shift: float
    space_shift: np.ndarray
    boost: np.ndarray = field(default=None)

    def __post_init__(self):
        rot = np.asarray(self.rotation, dtype=float)
        a = np.atleast_1d(np.asarray(self.space_shift, dtype=float))
        u = np.zeros_like(a) if self.boost is None else \
            np.atleast_1d(np.asarray(self.boost, dtype=float))
        d = a.shape[0]
        if rot.shape != (d, d) or u.shape != (d,):
            raise ValueError("inconsistent dimensions in NHTransform")
        if np.max(np.abs(rot.T @ rot - np.eye(d))) > ORTHO_TOL:
            raise ValueError("rotation matrix is not orthogonal to 1e-12")
        if abs(np.linalg.det(rot) - 1.0) > 1e-9:
            raise ValueError("rotation matrix must have det = +1")
        object.__setattr__(self, "rotation", rot)
        object.__setattr__(self, "time_shift", float(self.time_shift))
        object.__setattr__(self, "space_shift", a)
        object.__setattr__(self, "boost", u)

    @property
    def dim(self) -> int:
        return self.space_shift.shape[0]

    @classmethod
    def identity(cls, d: int) -> "NHTransform":
        return cls(np.eye(d), 0.0, np.zeros(d), np.zeros(d))

    def to_json(self) -> str:
        return json.dumps({
            "O": self.rotation.flatten().tolist(),
            "a_t": self.time_shift,
            "a": self.space_shift.tolist(),
            "u": self.boost.tolist(),
        }, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "NHTransform":
        obj = json.loads(text)
        d = len(obj["a"])
        return cls(np.asarray(obj["O"], dtype=float).reshape(d, d),
                   obj["a_t"], np.asarray(obj["a"]), np.asarray(obj["u"]))


def _check_time_shift(kind: SpacetimeKind, a_t: float, eps: float = EPS_DOMAIN):
    """NH time-translation parameters must satisfy sigma(a^t) > 0."""
    s_a = sigma(kind, a_t)
    if s_a <= eps:
        raise DomainError(f"time translation a_t = {a_t} out of domain (sigma(a_t) <= 0)")
    return s_a


def apply(kind: SpacetimeKind, g: NHTransform, e: Event,
          eps: float = EPS_DOMAIN) -> Event:
    """Act with g on a Beltrami event."""
    if e.chart != BELTRAMI:
        raise DomainError(f"apply expects a Beltrami event, got {e.chart!r}")
    s_a = _check_time_shift(kind, g.time_shift, eps)
    smix = sigma_mix(kind, g.time_shift, e.time)
    if abs(smix) <= eps:
        raise SingularTransform(
            f"sigma(a_t, t) = 0 at t = {e.time}: event maps to infinity")
    t_new = (e.time - g.time_shift) / smix
    x_new = (math.sqrt(s_a) / smix) * (
        g.rotation @ (e.space - g.space_shift - g.boost * e.time))
    return Event(BELTRAMI, t_new, x_new)


def compose(kind: SpacetimeKind, g2: NHTransform, g1: NHTransform,
            eps: float = EPS_DOMAIN) -> NHTransform:
    """Element acting as g2 after g1, by matching fractional-linear coefficients.

    The time parameters add like hyperbolic (NH) or circular (ANH) tangents:
    a_3 = (a_1 + a_2) / (1 + s nu^2 a_1 a_2).  For ANH the composite leaves
    the canonical parameter range when 1 - nu^2 a_1 a_2 <= 0 (half a period
    of the compact time-translation subgroup); that raises DomainError.
    """
    if g1.dim != g2.dim:
        raise ValueError("dimension mismatch between group elements")
    s = kind.sign
    nu2 = kind.nu**2
    a1, a2 = g1.time_shift, g2.time_shift
    den = 1.0 + s * nu2 * a1 * a2
    if den <= eps:
        raise DomainError(
            f"composite time translation leaves the parameter domain (1 + s nu^2 a1 a2 = {den})")
    a3 = (a1 + a2) / den
    _check_time_shift(kind, a3, eps)
    s1 = _check_time_shift(kind, a1, eps)
    inv_sqrt_s1 = 1.0 / math.sqrt(s1)
    o1t = g1.rotation.T
    space3 = g1.space_shift + inv_sqrt_s1 * (
        o1t @ (g2.space_shift - a1 * g2.boost))
    boost3 = g1.boost + inv_sqrt_s1 * (
        o1t @ (g2.boost - s * nu2 * a1 * g2.space_shift))
    return NHTransform(g2.rotation @ g1.rotation, a3, space3, boost3)


def invert(kind: SpacetimeKind, g: NHTransform,
           eps: float = EPS_DOMAIN) -> NHTransform:
    """Closed-form inverse: compose(invert(g), g) is the identity element."""
    s = kind.sign
    nu2 = kind.nu**2
    a = g.time_shift
    s_a = _check_time_shift(kind, a, eps)
    f = 1.0 / math.sqrt(s_a)
    space_inv = -f * (g.rotation @ (g.space_shift + a * g.boost))
    boost_inv = -f * (g.rotation @ (g.boost + s * nu2 * a * g.space_shift))
    return NHTransform(g.rotation.T, -a, space_inv, boost_inv)


def transform_velocity(kind: SpacetimeKind, g: NHTransform, e: Event,
                       v: np.ndarray, eps: float = EPS_DOMAIN) -> np.ndarray:
    """Velocity composition law dx'/dt' from differentiating the group action."""
    if e.chart != BELTRAMI:
        raise DomainError(f"expected a Beltrami event, got {e.chart!r}")
    v = np.atleast_1d(np.asarray(v, dtype=float))
    s_a = _check_time_shift(kind, g.time_shift, eps)
    smix = sigma_mix(kind, g.time_shift, e.time)
    if abs(smix) <= eps:
        raise SingularTransform("sigma(a_t, t) = 0: velocity undefined")
    s = kind.sign
    nu2 = kind.nu**2
    rel = e.space - g.space_shift - g.boost * e.time
    return (smix * (g.rotation @ (v - g.boost))
            + s * nu2 * g.time_shift * (g.rotation @ rel)) / math.sqrt(s_a)


def transform_acceleration(kind: SpacetimeKind, g: NHTransform, e: Event,
                           v: np.ndarray, acc: np.ndarray,
                           eps: float = EPS_DOMAIN) -> np.ndarray:
    """dv'/dt' = sigma(a^t, t)^3 / sigma(a^t)^(3/2) O dv/dt (homogeneous law).

    ``v`` is accepted for world-line context but the law does not involve it.
    """
    if e.chart != BELTRAMI:
        raise DomainError(f"expected a Beltrami event, got {e.chart!r}")
    acc = np.atleast_1d(np.asarray(acc, dtype=float))
    s_a = _check_time_shift(kind, g.time_shift, eps)
    smix = sigma_mix(kind, g.time_shift, e.time)
    if abs(smix) <= eps:
        raise SingularTransform("sigma(a_t, t) = 0: acceleration undefined")
    return (smix**3 / s_a**1.5) * (g.rotation @ acc)


def apply_linear(kind: SpacetimeKind, g: NHTransform, e: Event,
                 eps: float = EPS_DOMAIN) -> Event:
    """Act with g on a linear-chart event (NH only); a linear map in (lambda, y)."""
    if kind.variant != NH:
        raise DomainError("linear-chart action is defined for the NH kind only")
    if e.chart != LINEAR:
        raise DomainError(f"expected a linear-chart event, got {e.chart!r}")
    nu = kind.nu
    a_t = g.time_shift
    _check_time_shift(kind, a_t, eps)
    vs = varsigma(kind, a_t)
    lam_new = vs * e.time - a_t / (1.0 + nu * a_t)
    w = g.boost + nu * g.space_shift
    y_new = math.sqrt(vs) * (g.rotation @ (e.space - g.space_shift - w * e.time))
    if lam_new <= -0.5 / nu + eps:
        raise DomainError("image leaves the linear chart domain")
    return Event(LINEAR, lam_new, y_new)


def random_transform(kind: SpacetimeKind, d: int, rng: np.random.Generator,
                     time_scale: float = 0.4, space_scale: float = 1.0,
                     boost_scale: float = 1.0) -> NHTransform:
    """Draw a random in-domain group element (rotation via QR of a Gaussian)."""
    m = rng.standard_normal((d, d))
    q, r = np.linalg.qr(m)
    q = q @ np.diag(np.sign(np.diag(r)))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    if kind.nu > 0:
        a_t = time_scale / kind.nu * rng.uniform(-1.0, 1.0)
    else:
        a_t = time_scale * rng.uniform(-1.0, 1.0)
    return NHTransform(q, a_t,
                       space_scale * rng.uniform(-1, 1, size=d),
                       boost_scale * rng.uniform(-1, 1, size=d))
