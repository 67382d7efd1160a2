"""Wave mechanics on Newton-Hooke space-times (three equivalent pictures).

Pictures and equations (s = +1 NH, -1 ANH; hbar, m kept symbolic):

* ordinary psi(t, x), Beltrami chart:
      i hbar d_t psi = [-hbar^2 lap/2m + s i hbar nu^2 t x.grad / sigma
                        - s m nu^2 x^2 / (2 sigma^2)] psi
* extraordinary psitilde(t, x), Beltrami chart (free particle):
      i hbar d_t psitilde = -hbar^2 lap/2m psitilde
* oscillator psi(tau, q), static chart:
      i hbar d_tau psi = [-hbar^2 lap_q/2m - s (1/2) m nu^2 q^2] psi

They are linked by the exact multiplicative maps

    psi(t, x)  = sigma^(d/4) exp[(i/hbar) s m nu^2 t x^2/(2 sigma)] psitilde(t, x)
    psi(tau,q) = sigma^(d/4) exp[(i/hbar) s (1/2) m nu (nu t) q^2] psitilde(t, x),

with (tau, q) the static image of (t, x); the second line reads
sech^(d/2)(nu tau) exp[+(i/2 hbar) m nu tanh(nu tau) q^2] for NH and
sec^(d/2)(nu tau) exp[-(i/2 hbar) m nu tan(nu tau) q^2] for ANH.

The ordinary equation is evolved by exact conjugation through the gauge
map (free spectral stepping in between); an independent Crank-Nicolson
stepper exists for cross-validation.  Extraordinary evolution is exact
per step up to grid truncation; oscillator evolution is Strang
split-step.  Probability structure:

    rho = sigma^(-d/2) psi* psi = psitilde* psitilde      (conserved form)
    rho_obs = psi* psi = sigma^(d/2) psitilde* psitilde   (invariant form)
    j_i = (i hbar/2m)(psitilde d_i psitilde* - psitilde* d_i psitilde)

Finite symmetry transformations act on psitilde by the Galilei-type
multiplicative rules plus, for time translations,

    psitilde'(t', x') = sigma(a,t)^(d/2)/sigma(a)^(d/4)
                        exp[(i/hbar) s m nu^2 a x^2/(2 sigma(a,t))] psitilde(t, x),

while psi itself is invariant under time translations; dilatations and
special conformal transformations extend the free equation's symmetry.
Rules for the ordinary picture are obtained by gauge conjugation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BoundaryLeak,
    DomainError,
    GridMismatch,
    ResampleError,
    SingularTransform,
)
from .geometry import (
    BELTRAMI,
    EPS_DOMAIN,
    STATIC,
    SpacetimeKind,
    require_beltrami_time,
    sigma,
    sigma_mix,
    t_of_tau,
    tau_of_t,
)
from .state import (
    GridState,
    check_boundary,
    interpolate,
    l2_diff,
    require_compatible,
    scale_values,
    shift_values,
    spectral_gradient,
    spectral_laplacian,
    wavenumbers,
)

ORDINARY = "ordinary_nh"
EXTRAORDINARY = "extraordinary"
HARMONIC = "harmonic"

PSI_TO_TILDE = "psi_to_tilde"
TILDE_TO_PSI = "tilde_to_psi"

REP_ORDINARY = "ordinary"
REP_TILDE = "tilde"

SPACE_TRANSLATION = "space_translation"
TIME_TRANSLATION = "time_translation"
BOOST = "boost"
ROTATION = "rotation"
DILATATION = "dilatation"
SCT = "sct"


# --- closed-form states ------------------------------------------------------

def plane_wave(extent: float, n: int, d: int, momentum, time: float = 0.0,
               hbar: float = 1.0, mass: float = 1.0) -> GridState:
    """Free plane wave psitilde = exp[(i/hbar)(p.x - p^2 t/2m)].

    The momentum must sit on the grid's reciprocal lattice (p L / 2 pi hbar
    integral per axis) so the state is exactly periodic.
    """
    p = np.atleast_1d(np.asarray(momentum, dtype=float))
    if p.shape != (d,):
        raise DomainError("momentum must have one component per axis")
    ratio = p * extent / (2.0 * math.pi * hbar)
    if np.max(np.abs(ratio - np.round(ratio))) > 1e-9:
        raise DomainError(f"momentum {p} is not on the grid's reciprocal lattice")
    probe = GridState(BELTRAMI, time, extent, np.zeros((n,) * d, dtype=complex),
                      hbar, mass)
    grids = probe.meshgrid()
    phase = sum(p[i] * grids[i] for i in range(d)) - (p @ p) * time / (2.0 * mass)
    return probe.with_values(np.exp(1j * phase / hbar))


def oscillator_ground_state(kind: SpacetimeKind, extent: float, n: int, d: int,
                            tau: float = 0.0, hbar: float = 1.0,
                            mass: float = 1.0) -> GridState:
    """ANH oscillator ground state exp(-m nu q^2/(2 hbar) - i d nu tau / 2)."""
    if kind.variant != "anh":
        raise DomainError("the normalizable oscillator ground state is ANH only")
    probe = GridState(STATIC, tau, extent, np.zeros((n,) * d, dtype=complex),
                      hbar, mass)
    q2 = probe.radius_sq()
    vals = np.exp(-mass * kind.nu * q2 / (2.0 * hbar)) \
        * np.exp(-0.5j * d * kind.nu * tau)
    return probe.with_values(vals)


def gaussian_packet(extent: float, n: int, d: int, width: float = 1.0,
                    center=0.0, momentum=0.0, time: float = 0.0,
                    chart: str = BELTRAMI, hbar: float = 1.0,
                    mass: float = 1.0) -> GridState:
    """Normalized Gaussian packet with the given width, center and momentum."""
    if not 0 < width < extent / 4:
        raise DomainError("packet width must be positive and well inside the box")
    probe = GridState(chart, time, extent, np.zeros((n,) * d, dtype=complex),
                      hbar, mass)
    grids = probe.meshgrid()
    center = np.broadcast_to(np.asarray(center, dtype=float), (d,))
    momentum = np.broadcast_to(np.asarray(momentum, dtype=float), (d,))
    r2 = sum((g - c) ** 2 for g, c in zip(grids, center))
    phase = sum(p * g for p, g in zip(momentum, grids))
    vals = np.exp(-r2 / (4.0 * width**2) + 1j * phase / hbar)
    state = probe.with_values(vals)
    return state.with_values(vals / math.sqrt(state.norm_sq()))


def analytic_state(which: str, **params) -> GridState:
    """Dispatcher for the closed-form states used by the CLI and tests."""
    builders = {
        "plane_wave_free": plane_wave,
        "osc_ground_anh": oscillator_ground_state,
        "gaussian_packet": gaussian_packet,
    }
    if which not in builders:
        raise DomainError(f"unknown analytic state {which!r}")
    return builders[which](**params)


# --- gauge and duality maps --------------------------------------------------

def _gauge_factor(kind: SpacetimeKind, state: GridState,
                  phase_only: bool = False) -> np.ndarray:
    sg = require_beltrami_time(kind, state.time)
    x2 = state.radius_sq()
    arg = kind.sign * state.mass * kind.nu**2 * state.time * x2 / (2.0 * state.hbar * sg)
    factor = np.exp(1j * arg)
    if not phase_only:
        factor = sg ** (state.dim / 4.0) * factor
    return factor


def gauge_map(direction: str, kind: SpacetimeKind, state: GridState,
              phase_only: bool = False) -> GridState:
    """Multiply by (or divide out) the ordinary <-> extraordinary factor.

    psi = sigma^(d/4) exp[(i/hbar) s m nu^2 t x^2 / (2 sigma)] psitilde.
    The phase alone is unitary; the sigma^(d/4) part rescales the plain
    norm by sigma^(d/2) exactly.  ``phase_only`` applies just the phase.
    """
    if state.chart != BELTRAMI:
        raise DomainError("gauge map acts on Beltrami-chart states")
    factor = _gauge_factor(kind, state, phase_only)
    if direction == TILDE_TO_PSI:
        return state.with_values(state.values * factor)
    if direction == PSI_TO_TILDE:
        return state.with_values(state.values / factor)
    raise DomainError(f"unknown gauge direction {direction!r}")


def duality_map(direction: str, kind: SpacetimeKind, state: GridState,
                out_extent: float = None, out_n: int = None) -> GridState:
    """Exact map between free Beltrami states and static oscillator states.

    tilde_to_psi takes psitilde(t, x) to psi(tau, q) on the q-grid whose
    natural extent is L/sigma^(1/2) (then no interpolation happens at
    all); a different target grid is allowed and resampled spectrally as
    long as its preimage stays inside the source box.
    """
    if direction == TILDE_TO_PSI:
        if state.chart != BELTRAMI:
            raise DomainError("tilde_to_psi expects a Beltrami state")
        t = state.time
        sg = require_beltrami_time(kind, t)
        root = math.sqrt(sg)
        tau = tau_of_t(kind, t)
        n_out = out_n or state.n
        ext = out_extent if out_extent is not None else state.extent / root
        if ext * root > state.extent * (1.0 + 1e-12):
            raise ResampleError("target q-grid reaches outside the source box")
        h_out = ext / n_out
        q = (np.arange(n_out) - n_out // 2) * h_out
        probe = GridState(STATIC, tau, ext, np.zeros((n_out,) * state.dim,
                                                     dtype=complex),
                          state.hbar, state.mass)
        vals = scale_values(state, root, ext, n_out)
        q2 = probe.radius_sq()
        arg = kind.sign * 0.5 * state.mass * kind.nu**2 * t * q2 / state.hbar
        pref = sg ** (state.dim / 4.0) * np.exp(1j * arg)
        return probe.with_values(pref * vals)
    if direction == PSI_TO_TILDE:
        if state.chart != STATIC:
            raise DomainError("psi_to_tilde expects a static-chart state")
        tau = state.time
        t = t_of_tau(kind, tau)
        sg = sigma(kind, t)
        root = math.sqrt(sg)
        n_out = out_n or state.n
        ext = out_extent if out_extent is not None else state.extent * root
        if ext / root > state.extent * (1.0 + 1e-12):
            raise ResampleError("target x-grid reaches outside the source box")
        probe = GridState(BELTRAMI, t, ext, np.zeros((n_out,) * state.dim,
                                                     dtype=complex),
                          state.hbar, state.mass)
        vals = scale_values(state, 1.0 / root, ext, n_out)
        x2 = probe.radius_sq()
        q2 = x2 / sg
        arg = kind.sign * 0.5 * state.mass * kind.nu**2 * t * q2 / state.hbar
        pref = sg ** (-state.dim / 4.0) * np.exp(-1j * arg)
        return probe.with_values(pref * vals)
    raise DomainError(f"unknown duality direction {direction!r}")


# --- evolution ---------------------------------------------------------------

def _free_step_phase(state: GridState, dt: float) -> np.ndarray:
    k2 = sum(k**2 for k in wavenumbers(state))
    return np.exp(-1j * state.hbar * k2 * dt / (2.0 * state.mass))


def evolve(eq: str, kind: SpacetimeKind, state: GridState, t_target: float,
           steps: int = 64, boundary_tol: float = None) -> GridState:
    """Evolve a grid state to the target time under the selected equation.

    extraordinary: spectral free stepping (exact per step up to grid
    truncation).  harmonic: Strang split-step with V = -s m nu^2 q^2 / 2.
    ordinary_nh: exact conjugation (gauge to the free picture, evolve,
    gauge back).  ``boundary_tol`` (if given) asserts the boundary-shell
    mass fraction before and after the batch.
    """
    if boundary_tol is not None:
        check_boundary(state, boundary_tol)
    if eq == EXTRAORDINARY:
        if state.chart != BELTRAMI:
            raise DomainError("extraordinary evolution lives on the Beltrami chart")
        dt = (t_target - state.time) / steps
        vals = state.values
        phase = _free_step_phase(state, dt)
        for _ in range(steps):
            vals = np.fft.ifftn(phase * np.fft.fftn(vals))
        out = state.with_values(vals, time=t_target)
    elif eq == HARMONIC:
        if state.chart != STATIC:
            raise DomainError("oscillator evolution lives on the static chart")
        dt = (t_target - state.time) / steps
        q2 = state.radius_sq()
        v_pot = -kind.sign * 0.5 * state.mass * kind.nu**2 * q2
        half = np.exp(-0.5j * v_pot * dt / state.hbar)
        kin = _free_step_phase(state, dt)
        vals = state.values
        for _ in range(steps):
            vals = half * vals
            vals = np.fft.ifftn(kin * np.fft.fftn(vals))
            vals = half * vals
        out = state.with_values(vals, time=t_target)
    elif eq == ORDINARY:
        if state.chart != BELTRAMI:
            raise DomainError("ordinary evolution lives on the Beltrami chart")
        require_beltrami_time(kind, t_target)
        tilde = gauge_map(PSI_TO_TILDE, kind, state)
        tilde = evolve(EXTRAORDINARY, kind, tilde, t_target, steps)
        out = gauge_map(TILDE_TO_PSI, kind, tilde)
    else:
        raise DomainError(f"unknown equation {eq!r}")
    if boundary_tol is not None:
        check_boundary(out, boundary_tol)
    return out


def _spectral_derivative_matrices(n: int, spacing: float):
    k = 2.0 * math.pi * np.fft.fftfreq(n, d=spacing)
    eye = np.eye(n, dtype=complex)
    ft = np.fft.fft(eye, axis=0)
    d1 = np.fft.ifft(1j * k[:, None] * ft, axis=0)
    d2 = np.fft.ifft(-(k**2)[:, None] * ft, axis=0)
    return d1, d2


def evolve_ordinary_cn(kind: SpacetimeKind, state: GridState, t_target: float,
                       steps: int) -> GridState:
    """Direct Crank-Nicolson stepper for the ordinary equation (d = 1).

    Spectral differentiation matrices in space, trapezoid rule in time;
    provided purely for cross-validation of the conjugated evolver.
    """
    if state.chart != BELTRAMI or state.dim != 1:
        raise DomainError("the Crank-Nicolson stepper supports d = 1 Beltrami states")
    n = state.n
    x = state.axis()
    d1, d2 = _spectral_derivative_matrices(n, state.spacing)
    hbar, m = state.hbar, state.mass
    s = kind.sign
    nu2 = kind.nu**2

    def hmat(t):
        sg = require_beltrami_time(kind, t)
        h = -(hbar**2 / (2.0 * m)) * d2
        h = h + (1j * hbar * s * nu2 * t / sg) * (x[:, None] * d1)
        h = h - np.diag(s * m * nu2 * x**2 / (2.0 * sg**2)).astype(complex)
        return h
    dt = (t_target - state.time) / steps
    vals = state.values.astype(complex)
    eye = np.eye(n, dtype=complex)
    for step in range(steps):
        t0 = state.time + step * dt
        t1 = t0 + dt
        lhs = eye + 0.5j * dt / hbar * hmat(t1)
        rhs = (eye - 0.5j * dt / hbar * hmat(t0)) @ vals
        vals = np.linalg.solve(lhs, rhs)
    return state.with_values(vals, time=t_target)


# --- finite symmetry transformations -----------------------------------------

def _rotation_is_permutation(rot: np.ndarray) -> bool:
    return np.all(np.isin(np.round(rot, 12), (-1.0, 0.0, 1.0))) and \
        np.max(np.abs(np.abs(rot) @ np.ones(rot.shape[0]) - 1.0)) < 1e-12


def _permute_values(values: np.ndarray, rot: np.ndarray) -> np.ndarray:
    """Pull back values along an axis permutation with sign flips: x = R^T y."""
    d = values.ndim
    n = values.shape[0]
    idx = np.arange(n)
    centered = idx - n // 2
    out_axes = []
    rt = rot.T
    for row in range(d):
        col = int(np.argmax(np.abs(rt[row])))
        sign = 1.0 if rt[row, col] > 0 else -1.0
        out_axes.append((col, sign))
    # build index arrays: value at y-index j equals source at x = R^T y
    grids = np.meshgrid(*([centered] * d), indexing="ij")
    src = []
    for row in range(d):
        col, sign = out_axes[row]
        coords = sign * grids[col]
        # wrap the unmatched -N/2 point periodically under sign flips
        src.append(((coords + n // 2) % n).astype(int))
    return values[tuple(src)]


def _tilde_rule(which: str, kind: SpacetimeKind, state: GridState, params: dict):
    """Time map, pullback scale/shift/rotation and multiplicative factor."""
    t = state.time
    hbar, m = state.hbar, state.mass
    s = kind.sign
    nu2 = kind.nu**2
    if which == SPACE_TRANSLATION:
        a = np.atleast_1d(np.asarray(params["a"], dtype=float))
        return dict(t_new=t, scale=1.0, shift=a, factor=None)
    if which == BOOST:
        u = np.atleast_1d(np.asarray(params["u"], dtype=float))

        def factor(x_grids):
            ux = sum(ui * g for ui, g in zip(u, x_grids))
            arg = (-m * ux + 0.5 * m * float(u @ u) * t) / hbar
            return np.exp(1j * arg)
        return dict(t_new=t, scale=1.0, shift=u * t, factor=factor)
    if which == ROTATION:
        rot = np.asarray(params["rotation"], dtype=float)
        return dict(t_new=t, scale=1.0, shift=None, factor=None, rotation=rot)
    if which == TIME_TRANSLATION:
        a_t = float(params["a_t"])
        s_a = sigma(kind, a_t)
        if s_a <= EPS_DOMAIN:
            raise DomainError("time translation parameter out of domain")
        smix = sigma_mix(kind, a_t, t)
        if smix <= EPS_DOMAIN:
            raise SingularTransform("sigma(a_t, t) <= 0: event maps outside the chart")
        scale = smix / math.sqrt(s_a)

        def factor(x_grids):
            x2 = sum(g * g for g in x_grids)
            arg = s * m * nu2 * a_t * x2 / (2.0 * hbar * smix)
            return (smix ** (state.dim / 2.0) / s_a ** (state.dim / 4.0)) \
                * np.exp(1j * arg)
        return dict(t_new=(t - a_t) / smix, scale=scale, shift=None, factor=factor)
    if which == DILATATION:
        dd = float(params["D"])
        if dd <= 0:
            raise DomainError("dilatation factor must be positive")

        def factor(x_grids):
            return dd ** (-state.dim / 2.0)
        return dict(t_new=dd**2 * t, scale=1.0 / dd, shift=None, factor=factor)
    if which == SCT:
        kk = float(params["k"])
        den = 1.0 - kk * t
        if den <= EPS_DOMAIN:
            raise SingularTransform("1 - k t <= 0: conformal pole reached")

        def factor(x_grids):
            x2 = sum(g * g for g in x_grids)
            arg = m * kk * x2 / (2.0 * hbar * den)
            return den ** (state.dim / 2.0) * np.exp(1j * arg)
        return dict(t_new=t / den, scale=den, shift=None, factor=factor)
    raise DomainError(f"unknown transformation {which!r}")


def _transform_tilde(which: str, kind: SpacetimeKind, state: GridState,
                     params: dict) -> GridState:
    rule = _tilde_rule(which, kind, state, params)
    rot = rule.get("rotation")
    if rot is not None:
        if state.dim == 1:
            vals = state.values.copy()
        elif _rotation_is_permutation(rot):
            vals = _permute_values(state.values, rot)
        elif state.dim == 2:
            probe = state
            grids = probe.meshgrid()
            pts = np.stack([g.ravel() for g in grids], axis=-1) @ rot
            vals = interpolate(state, pts).reshape(state.values.shape)
        else:
            raise ResampleError("generic rotations are resampled for d <= 2 only")
        return state.with_values(vals, time=rule["t_new"])
    scale = rule["scale"]
    out_extent = state.extent / scale
    if rule["shift"] is not None:
        vals = shift_values(state, rule["shift"])
    else:
        vals = scale_values(state, scale, out_extent)
    probe = GridState(state.chart, rule["t_new"], out_extent, vals,
                      state.hbar, state.mass)
    if rule["factor"] is not None:
        x_grids = [scale * g + (rule["shift"][i] if rule["shift"] is not None else 0.0)
                   for i, g in enumerate(probe.meshgrid())]
        vals = vals * rule["factor"](x_grids)
    return probe.with_values(vals)


def symmetry_transform(which: str, rep: str, kind: SpacetimeKind,
                       state: GridState, **params) -> GridState:
    """Finite symmetry action on a Beltrami-chart wave function.

    ``rep`` selects the picture: "tilde" uses the free-equation rules
    directly, "ordinary" conjugates them with the gauge map (which
    reproduces the ordinary-picture factors, e.g. invariance under time
    translations).  Parameters by transformation: a (space translation),
    a_t (time translation), u (boost), rotation (matrix), D (dilatation),
    k (special conformal).
    """
    if state.chart != BELTRAMI:
        raise DomainError("symmetry transforms act on Beltrami-chart states")
    if rep == REP_TILDE:
        return _transform_tilde(which, kind, state, params)
    if rep == REP_ORDINARY:
        tilde = gauge_map(PSI_TO_TILDE, kind, state)
        moved = _transform_tilde(which, kind, tilde, params)
        return gauge_map(TILDE_TO_PSI, kind, moved)
    raise DomainError(f"unknown representation {rep!r}")


def transformed_time(which: str, kind: SpacetimeKind, t: float,
                     **params) -> float:
    """The image t' of a Beltrami time under the named transformation."""
    if which in (SPACE_TRANSLATION, BOOST, ROTATION):
        return t
    if which == TIME_TRANSLATION:
        smix = sigma_mix(kind, float(params["a_t"]), t)
        if abs(smix) <= EPS_DOMAIN:
            raise SingularTransform("time maps to infinity")
        return (t - float(params["a_t"])) / smix
    if which == DILATATION:
        return float(params["D"]) ** 2 * t
    if which == SCT:
        den = 1.0 - float(params["k"]) * t
        if abs(den) <= EPS_DOMAIN:
            raise SingularTransform("conformal pole reached")
        return t / den
    raise DomainError(f"unknown transformation {which!r}")


def resample(state: GridState, out_extent: float, out_n: int = None,
             leak_tol: float = 1e-8) -> GridState:
    """Spectrally resample a state onto a grid of different extent.

    Growing the box samples the periodic extension, which is only
    meaningful when the boundary shell carries no mass; that case guards
    with ``leak_tol``.
    """
    out_n = out_n or state.n
    if out_extent > state.extent * (1.0 + 1e-12):
        from .state import boundary_mass_fraction
        if boundary_mass_fraction(state) > leak_tol:
            raise ResampleError(
                "cannot widen the box: source state touches the boundary")
    vals = scale_values(state, 1.0, out_extent, out_n)
    return GridState(state.chart, state.time, out_extent, vals,
                     state.hbar, state.mass)


def invariance_residual(eq: str, which: str, kind: SpacetimeKind,
                        initial: GridState, t2: float, steps: int = 64,
                        **params) -> float:
    """Normalized L2 gap between evolve-then-transform and transform-then-evolve.

    This is the executable statement that the named transformation is a
    symmetry of the selected equation; zero up to solver and resampling
    error when it is.
    """
    rep = REP_ORDINARY if eq == ORDINARY else REP_TILDE
    t2_new = transformed_time(which, kind, t2, **params)
    moved_first = symmetry_transform(which, rep, kind, initial, **params)
    path_b = evolve(eq, kind, moved_first, t2_new, steps)
    evolved = evolve(eq, kind, initial, t2, steps)
    path_a = symmetry_transform(which, rep, kind, evolved, **params)
    if abs(path_a.extent - path_b.extent) > 1e-12 or path_a.n != path_b.n:
        path_a = resample(path_a, path_b.extent, path_b.n)
    return l2_diff(path_a, path_b)


# --- densities, currents, inner products -------------------------------------

@dataclass(frozen=True)
class DensityReport:
    """Probability densities and flux of a Beltrami-chart state."""

    rho_ordinary: np.ndarray
    rho_invariant: np.ndarray
    flux: list
    continuity_residual: float = None


def density_report(rep: str, kind: SpacetimeKind, state: GridState,
                   before: GridState = None, after: GridState = None) -> DensityReport:
    """Densities rho = sigma^(-d/2)|psi|^2 (conserved) and |psi|^2 (invariant).

    The flux is the standard free-picture current, computed from psitilde
    (obtained by the gauge map when ``rep`` is "ordinary").  When two
    nearby-time states bracket this one, the continuity residual
    max|d_t rho + div j| is evaluated with a central time difference and
    spectral space derivatives.
    """
    if state.chart != BELTRAMI:
        raise DomainError("density reports are defined on the Beltrami chart")
    sg = require_beltrami_time(kind, state.time)
    d = state.dim

    def split(st):
        if rep == REP_TILDE:
            tilde = st
            rho_ord = np.abs(st.values) ** 2
            rho_inv = sigma(kind, st.time) ** (d / 2.0) * rho_ord
        elif rep == REP_ORDINARY:
            tilde = gauge_map(PSI_TO_TILDE, kind, st)
            rho_inv = np.abs(st.values) ** 2
            rho_ord = sigma(kind, st.time) ** (-d / 2.0) * rho_inv
        else:
            raise DomainError(f"unknown representation {rep!r}")
        return tilde, rho_ord, rho_inv

    tilde, rho_ord, rho_inv = split(state)
    grads = spectral_gradient(tilde)
    flux = [state.hbar / state.mass * np.imag(np.conj(tilde.values) * g)
            for g in grads]
    residual = None
    if before is not None and after is not None:
        _, rho_m, _ = split(before)
        _, rho_p, _ = split(after)
        dt_m = state.time - before.time
        dt_p = after.time - state.time
        if abs(dt_m - dt_p) > 1e-12 or dt_m <= 0:
            raise GridMismatch("continuity check needs equally spaced bracketing times")
        drho = (rho_p - rho_m) / (dt_m + dt_p)
        div = np.zeros_like(drho)
        for ax, j in enumerate(flux):
            jt = np.fft.fftn(j.astype(complex))
            div = div + np.real(np.fft.ifftn(1j * wavenumbers(state)[ax] * jt))
        residual = float(np.max(np.abs(drho + div)))
    return DensityReport(rho_ord, rho_inv, flux, residual)


def inner_product(which: str, kind: SpacetimeKind, a: GridState,
                  b: GridState) -> complex:
    """Grid quadrature of the selected pairing of two states.

    "ordinary" is int psi* phi sigma^(-d/2) d^d x, the pairing that makes
    the invariant-time generator Hermitian; "invariant" is the plain
    int psi* phi d^d x, unchanged under the group.  On the static chart
    the chart measure absorbs the weight (ordinary becomes the plain
    L^2(q) product, invariant acquires sigma^(d/2)).
    """
    require_compatible(a, b)
    d = a.dim
    if a.chart == BELTRAMI:
        sg = sigma(kind, a.time)
        weight = sg ** (-d / 2.0) if which == "ordinary" else 1.0
    else:
        sg = sigma(kind, t_of_tau(kind, a.time))
        weight = 1.0 if which == "ordinary" else sg ** (d / 2.0)
    if which not in ("ordinary", "invariant"):
        raise DomainError(f"unknown inner product {which!r}")
    return complex(np.sum(np.conj(a.values) * b.values) * weight
                   * a.spacing**d)


# --- pointwise equation residuals (time derivative by central difference) ----

def _time_triplet(before: GridState, center: GridState, after: GridState):
    require_compatible(before, center, check_time=False)
    require_compatible(center, after, check_time=False)
    dt_m = center.time - before.time
    dt_p = after.time - center.time
    if dt_m <= 0 or abs(dt_m - dt_p) > 1e-10 * max(abs(dt_m), 1.0):
        raise GridMismatch("equation residuals need equally spaced time slices")
    return (after.values - before.values) / (dt_m + dt_p)


def equation_residual(eq: str, kind: SpacetimeKind, before: GridState,
                      center: GridState, after: GridState) -> float:
    """max |i hbar d_t psi - H psi| / max |psi| on three bracketing slices."""
    dpsi_dt = _time_triplet(before, center, after)
    hbar, m = center.hbar, center.mass
    s = kind.sign
    nu2 = kind.nu**2
    lap = spectral_laplacian(center)
    if eq == EXTRAORDINARY:
        h_psi = -hbar**2 / (2.0 * m) * lap
    elif eq == HARMONIC:
        if center.chart != STATIC:
            raise DomainError("harmonic residual expects static-chart slices")
        q2 = center.radius_sq()
        h_psi = -hbar**2 / (2.0 * m) * lap \
            - s * 0.5 * m * nu2 * q2 * center.values
    elif eq == ORDINARY:
        sg = require_beltrami_time(kind, center.time)
        grads = spectral_gradient(center)
        xdotgrad = sum(g * grad for g, grad in zip(center.meshgrid(), grads))
        h_psi = -hbar**2 / (2.0 * m) * lap \
            + s * 1j * hbar * nu2 * center.time / sg * xdotgrad \
            - s * m * nu2 * center.radius_sq() / (2.0 * sg**2) * center.values
    elif eq == "intermediate":
        sg = require_beltrami_time(kind, center.time)
        h_psi = -hbar**2 / (2.0 * m) * lap \
            - s * 1j * hbar * nu2 * center.time * center.dim / (2.0 * sg) \
            * center.values
    else:
        raise DomainError(f"unknown equation {eq!r}")
    res = 1j * hbar * dpsi_dt - h_psi
    return float(np.max(np.abs(res)) / max(np.max(np.abs(center.values)), 1e-300))
