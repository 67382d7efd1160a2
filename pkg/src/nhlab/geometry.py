"""Charts and scalar factors on Newton-Hooke space-times.

Conventions.  A space-time is labelled by its kind (NH, ANH, or the
Galilei limit) and the constant nu (units 1/time).  Every upper/lower
sign pair in the closed formulas is encoded through

    s = +1  (NH),   s = -1  (ANH),

so e.g. sigma(t) = 1 - s nu^2 t^2 reads 1 - nu^2 t^2 for NH and
1 + nu^2 t^2 for ANH.  Galilei is the nu -> 0 limit (sigma = 1,
varsigma = 1, all charts coincide).

Three charts are supported:

* Beltrami (t, x): group actions are fractional linear, free motion is
  straight-line uniform-velocity; NH requires |t| < 1/nu.
* static (tau, q): tau = nu^-1 artanh(nu t) (NH) or nu^-1 arctan(nu t)
  (ANH) is the invariant proper time, q^i = x^i / sigma(t)^(1/2).
* linear (lambda, y): lambda = t/(1 - nu t), y^i = x^i/(1 - nu t),
  defined for NH only, with lambda > -1/(2 nu).

Domain boundaries are open intervals with a guard band EPS_DOMAIN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

#: Guard band for open domain boundaries (sigma > EPS_DOMAIN etc.).
EPS_DOMAIN = 1e-12

BELTRAMI = "beltrami"
STATIC = "static"
LINEAR = "linear"

NH = "nh"
ANH = "anh"
GALILEI = "galilei"


@dataclass(frozen=True)
class SpacetimeKind:
    """Selects NH / ANH / Galilei conventions and carries nu.

    Galilei requires nu = 0; NH and ANH require nu > 0.  ``sign`` is the
    upper/lower-sign selector s (+1 for NH, -1 for ANH); it multiplies
    nu^2 everywhere, so its value is irrelevant for Galilei.
    """

    variant: str
    nu: float

    def __post_init__(self):
        if self.variant not in (NH, ANH, GALILEI):
            raise ValueError(f"unknown space-time variant {self.variant!r}")
        if self.variant == GALILEI:
            if self.nu != 0.0:
                raise ValueError("Galilei kind requires nu = 0")
        elif not self.nu > 0.0:
            raise ValueError(f"{self.variant} kind requires nu > 0")

    @property
    def sign(self) -> float:
        return -1.0 if self.variant == ANH else 1.0

    @classmethod
    def nh(cls, nu: float) -> "SpacetimeKind":
        return cls(NH, float(nu))

    @classmethod
    def anh(cls, nu: float) -> "SpacetimeKind":
        return cls(ANH, float(nu))

    @classmethod
    def galilei(cls) -> "SpacetimeKind":
        return cls(GALILEI, 0.0)


@dataclass(frozen=True)
class Event:
    """A space-time point in one of the three charts.

    ``time`` is t, tau or lambda and ``space`` is x, q or y depending on
    ``chart``.  The linear chart is only meaningful for NH kinds; chart
    domain checks are performed by the conversion functions, which know
    the kind.
    """

    chart: str
    time: float
    space: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.chart not in (BELTRAMI, STATIC, LINEAR):
            raise ValueError(f"unknown chart {self.chart!r}")
        space = np.atleast_1d(np.asarray(self.space, dtype=float))
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "time", float(self.time))

    @property
    def dim(self) -> int:
        return self.space.shape[0]


def sigma(kind: SpacetimeKind, t):
    """sigma(t) = 1 -+ nu^2 t^2 (upper sign NH, lower ANH; 1 for Galilei)."""
    t = np.asarray(t, dtype=float)
    out = 1.0 - kind.sign * kind.nu**2 * t * t
    return float(out) if out.ndim == 0 else out


def sigma_mix(kind: SpacetimeKind, a: float, t):
    """Two-argument factor sigma(a^t, t) = 1 -+ nu^2 a^t t."""
    t = np.asarray(t, dtype=float)
    out = 1.0 - kind.sign * kind.nu**2 * a * t
    return float(out) if out.ndim == 0 else out


def require_beltrami_time(kind: SpacetimeKind, t, eps: float = EPS_DOMAIN):
    """Raise DomainError unless sigma(t) > eps (always true for ANH/Galilei)."""
    s = sigma(kind, t)
    if np.any(np.asarray(s) <= eps):
        raise DomainError(f"time {t} outside Beltrami chart domain (sigma = {s})")
    return s


def tau_of_t(kind: SpacetimeKind, t, eps: float = EPS_DOMAIN):
    """Invariant proper time tau as a function of Beltrami time t."""
    t = np.asarray(t, dtype=float)
    if kind.variant == GALILEI:
        out = t.copy()
    elif kind.variant == NH:
        require_beltrami_time(kind, t, eps)
        out = np.arctanh(kind.nu * t) / kind.nu
    else:
        out = np.arctan(kind.nu * t) / kind.nu
    return float(out) if out.ndim == 0 else out


def t_of_tau(kind: SpacetimeKind, tau, eps: float = EPS_DOMAIN):
    """Inverse of tau_of_t.  ANH uses the principal branch |nu tau| < pi/2."""
    tau = np.asarray(tau, dtype=float)
    if kind.variant == GALILEI:
        out = tau.copy()
    elif kind.variant == NH:
        out = np.tanh(kind.nu * tau) / kind.nu
    else:
        if np.any(np.abs(kind.nu * tau) >= math.pi / 2 - eps):
            raise DomainError(
                f"ANH static time tau = {tau} outside principal branch |nu tau| < pi/2")
        out = np.tan(kind.nu * tau) / kind.nu
    return float(out) if out.ndim == 0 else out


def varsigma(kind: SpacetimeKind, t, eps: float = EPS_DOMAIN):
    """varsigma(t) = (1 - nu t)/(1 + nu t) for NH, exp(-2 arctan(nu t)) for ANH.

    Equal to exp(-2 nu tau(t)) in all cases; strictly positive on the chart.
    """
    t = np.asarray(t, dtype=float)
    if kind.variant == GALILEI:
        out = np.ones_like(t)
    elif kind.variant == NH:
        require_beltrami_time(kind, t, eps)
        out = (1.0 - kind.nu * t) / (1.0 + kind.nu * t)
    else:
        out = np.exp(-2.0 * np.arctan(kind.nu * t))
    return float(out) if out.ndim == 0 else out


def proper_time_rate(kind: SpacetimeKind, t, eps: float = EPS_DOMAIN):
    """d tau / d t = sigma(t)^-1, from the degenerate metric d tau^2 = sigma^-2 dt^2."""
    if kind.variant == NH:
        require_beltrami_time(kind, t, eps)
    s = sigma(kind, t)
    if np.any(np.abs(np.asarray(s)) <= eps):
        raise DomainError(f"sigma({t}) = 0: metric factor undefined")
    out = 1.0 / np.asarray(s)
    return float(out) if out.ndim == 0 else out


def beltrami_to_static(kind: SpacetimeKind, event: Event,
                       eps: float = EPS_DOMAIN) -> Event:
    """(t, x) -> (tau, q) with tau from tau_of_t and q = x / sigma(t)^(1/2)."""
    if event.chart != BELTRAMI:
        raise DomainError(f"expected Beltrami event, got chart {event.chart!r}")
    s = require_beltrami_time(kind, event.time, eps)
    tau = tau_of_t(kind, event.time, eps)
    return Event(STATIC, tau, event.space / math.sqrt(s))


def static_to_beltrami(kind: SpacetimeKind, event: Event,
                       eps: float = EPS_DOMAIN) -> Event:
    """(tau, q) -> (t, x); inverse of beltrami_to_static on the principal branch."""
    if event.chart != STATIC:
        raise DomainError(f"expected static event, got chart {event.chart!r}")
    t = t_of_tau(kind, event.time, eps)
    s = sigma(kind, t)
    return Event(BELTRAMI, t, event.space * math.sqrt(s))


def beltrami_to_linear(kind: SpacetimeKind, event: Event,
                       eps: float = EPS_DOMAIN) -> Event:
    """(t, x) -> (lambda, y) = (t, x) / (1 - nu t).  NH only."""
    if kind.variant != NH:
        raise DomainError("linear coordinates are defined for the NH kind only")
    if event.chart != BELTRAMI:
        raise DomainError(f"expected Beltrami event, got chart {event.chart!r}")
    den = 1.0 - kind.nu * event.time
    if den <= eps:
        raise DomainError(f"linear chart undefined at t = {event.time} (1 - nu t <= 0)")
    return Event(LINEAR, event.time / den, event.space / den)


def linear_to_beltrami(kind: SpacetimeKind, event: Event,
                       eps: float = EPS_DOMAIN) -> Event:
    """(lambda, y) -> (t, x) = (lambda, y) / (1 + nu lambda), for lambda > -1/(2 nu)."""
    if kind.variant != NH:
        raise DomainError("linear coordinates are defined for the NH kind only")
    if event.chart != LINEAR:
        raise DomainError(f"expected linear event, got chart {event.chart!r}")
    lam = event.time
    if lam <= -0.5 / kind.nu + eps:
        raise DomainError(f"lambda = {lam} outside linear chart (> -1/(2 nu) required)")
    den = 1.0 + kind.nu * lam
    return Event(BELTRAMI, lam / den, event.space / den)


def proper_time_interval(kind: SpacetimeKind, t1: float, t2: float,
                         eps: float = EPS_DOMAIN) -> float:
    """tau(t2) - tau(t1): the invariant duration between two Beltrami times."""
    return tau_of_t(kind, t2, eps) - tau_of_t(kind, t1, eps)
