"""Complex wave functions on uniform periodic Cartesian grids.

A GridState samples psi on a d-dimensional periodic box of extent L per
axis with N points per axis (N a power of two), centered on the origin:
x_j = (j - N/2) L/N.  The chart label says whether (time, coordinates)
mean Beltrami (t, x) or static (tau, q).  States are immutable values;
every operation returns a new state.

Spectral helpers use the convention psi(x) = sum_k c_k exp(i k.(x - x0))
with c = FFT(values)/N^d and k = 2 pi fftfreq(N, h), which makes shifts,
derivatives and off-grid trigonometric interpolation exact for
band-limited data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from .errors import BoundaryLeak, GridMismatch
from .geometry import BELTRAMI, STATIC


@dataclass(frozen=True)
class GridState:
    """Wave function sampled on a uniform periodic box at a fixed time."""

    chart: str
    time: float
    extent: float
    values: np.ndarray
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        if self.chart not in (BELTRAMI, STATIC):
            raise ValueError(f"grid states live on Beltrami or static charts, got {self.chart!r}")
        vals = np.asarray(self.values, dtype=complex)
        n = vals.shape[0]
        if any(size != n for size in vals.shape):
            raise ValueError("grid must have the same number of points per axis")
        if n < 2 or (n & (n - 1)) != 0:
            raise ValueError("points per axis must be a power of two")
        if not self.extent > 0:
            raise ValueError("extent must be positive")
        if not (self.hbar > 0 and self.mass > 0):
            raise ValueError("hbar and mass must be positive")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "time", float(self.time))
        object.__setattr__(self, "extent", float(self.extent))

    @property
    def dim(self) -> int:
        return self.values.ndim

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def spacing(self) -> float:
        return self.extent / self.n

    def axis(self) -> np.ndarray:
        """Coordinates along one axis: (j - N/2) h, covering [-L/2, L/2)."""
        return (np.arange(self.n) - self.n // 2) * self.spacing

    def meshgrid(self) -> list[np.ndarray]:
        return list(np.meshgrid(*([self.axis()] * self.dim), indexing="ij"))

    def radius_sq(self) -> np.ndarray:
        grids = self.meshgrid()
        return sum(g * g for g in grids)

    def with_values(self, values: np.ndarray, time: float = None,
                    chart: str = None, extent: float = None) -> "GridState":
        return GridState(chart or self.chart,
                         self.time if time is None else time,
                         self.extent if extent is None else extent,
                         values, self.hbar, self.mass)

    def norm_sq(self) -> float:
        """Grid quadrature of |psi|^2 over the box."""
        return float(np.sum(np.abs(self.values) ** 2) * self.spacing**self.dim)

    def to_json(self) -> str:
        flat = self.values.ravel(order="C")
        inter = np.empty(2 * flat.size)
        inter[0::2] = flat.real
        inter[1::2] = flat.imag
        return json.dumps({
            "chart": self.chart, "time": self.time, "d": self.dim,
            "n": self.n, "extent": self.extent,
            "hbar": self.hbar, "mass": self.mass,
            "values": inter.tolist(),
        }, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "GridState":
        obj = json.loads(text)
        inter = np.asarray(obj["values"], dtype=float)
        flat = inter[0::2] + 1j * inter[1::2]
        vals = flat.reshape((obj["n"],) * obj["d"], order="C")
        return cls(obj["chart"], obj["time"], obj["extent"], vals,
                   obj["hbar"], obj["mass"])


def wavenumbers(state: GridState) -> list[np.ndarray]:
    """Angular wavenumber grids (one d-dim array per axis)."""
    k1 = 2.0 * np.pi * np.fft.fftfreq(state.n, d=state.spacing)
    shape = [1] * state.dim
    out = []
    for ax in range(state.dim):
        s = shape.copy()
        s[ax] = state.n
        out.append(k1.reshape(s))
    return out


def spectral_gradient(state: GridState) -> list[np.ndarray]:
    """Per-axis spectral derivatives of the sampled values."""
    ft = np.fft.fftn(state.values)
    return [np.fft.ifftn(1j * k * ft) for k in wavenumbers(state)]


def spectral_laplacian(state: GridState) -> np.ndarray:
    ft = np.fft.fftn(state.values)
    k2 = sum(k**2 for k in wavenumbers(state))
    return np.fft.ifftn(-k2 * ft)


def shift_values(state: GridState, shift: np.ndarray) -> np.ndarray:
    """Values of psi(x + shift), exact for band-limited psi (FFT phase)."""
    shift = np.atleast_1d(np.asarray(shift, dtype=float))
    ft = np.fft.fftn(state.values)
    phase = np.zeros(state.values.shape)
    for ax, k in enumerate(wavenumbers(state)):
        phase = phase + k * shift[ax]
    return np.fft.ifftn(ft * np.exp(1j * phase))


def interpolate(state: GridState, points: np.ndarray) -> np.ndarray:
    """Trigonometric interpolation of psi at arbitrary points.

    ``points`` has shape (p, d); values outside the box sample the
    periodic extension.  The evaluation is factored per axis, costing
    O(p N) per axis instead of O(p N^d).
    """
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    p, d = points.shape
    if d != state.dim:
        raise GridMismatch("interpolation points have wrong dimension")
    coeff = np.fft.fftn(state.values) / state.n**state.dim
    x0 = state.axis()[0]
    k1 = 2.0 * np.pi * np.fft.fftfreq(state.n, d=state.spacing)
    # contract one axis at a time: result[p, k_{ax+1.. }] accumulates
    work = np.broadcast_to(coeff, (p,) + coeff.shape)
    for ax in range(d):
        phase = np.exp(1j * np.outer(points[:, ax] - x0, k1))  # (p, N)
        work = np.einsum("pk...,pk->p...", work, phase)
    return work


def scale_values(state: GridState, factor: float, out_extent: float,
                 out_n: int = None) -> np.ndarray:
    """Values of psi(factor * y) on a grid of the given extent.

    When factor * out-grid coincides with the source grid the samples are
    returned directly; otherwise trigonometric interpolation is used.
    """
    out_n = out_n or state.n
    h_out = out_extent / out_n
    y = (np.arange(out_n) - out_n // 2) * h_out
    if out_n == state.n and abs(factor * h_out - state.spacing) < 1e-15 * state.spacing:
        return state.values.copy()
    grids = np.meshgrid(*([y] * state.dim), indexing="ij")
    pts = np.stack([factor * g.ravel() for g in grids], axis=-1)
    vals = interpolate(state, pts)
    return vals.reshape((out_n,) * state.dim)


def boundary_mass_fraction(state: GridState, shell: float = 0.05) -> float:
    """Fraction of |psi|^2 within the outer ``shell`` of the box per axis."""
    x = np.abs(state.axis())
    edge = (0.5 - shell) * state.extent
    mask1 = x >= edge
    mask = np.zeros(state.values.shape, dtype=bool)
    for ax in range(state.dim):
        s = [None] * state.dim
        s[ax] = slice(None)
        mask |= mask1[tuple(s)]
    total = np.sum(np.abs(state.values) ** 2)
    if total == 0:
        return 0.0
    return float(np.sum(np.abs(state.values[mask]) ** 2) / total)


def check_boundary(state: GridState, tol: float, shell: float = 0.05) -> None:
    frac = boundary_mass_fraction(state, shell)
    if frac > tol:
        raise BoundaryLeak(
            f"boundary shell holds {frac:.3e} of the mass (tolerance {tol:.3e})")


def require_compatible(a: GridState, b: GridState, check_time: bool = True) -> None:
    if a.chart != b.chart:
        raise GridMismatch(f"charts differ: {a.chart!r} vs {b.chart!r}")
    if a.values.shape != b.values.shape or abs(a.extent - b.extent) > 1e-12:
        raise GridMismatch("grids differ in shape or extent")
    if check_time and abs(a.time - b.time) > 1e-12:
        raise GridMismatch(f"times differ: {a.time} vs {b.time}")


def l2_diff(a: GridState, b: GridState, normalize: bool = True) -> float:
    """L2 distance between two states on the same grid (optionally relative)."""
    require_compatible(a, b)
    diff = np.sqrt(np.sum(np.abs(a.values - b.values) ** 2) * a.spacing**a.dim)
    if not normalize:
        return float(diff)
    scale = max(np.sqrt(a.norm_sq()), np.sqrt(b.norm_sq()), 1e-300)
    return float(diff / scale)
