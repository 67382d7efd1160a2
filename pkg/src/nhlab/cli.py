"""Config-driven command line front end.

Two subcommands:

* ``nhlab verify``   runs named verification suites and writes a JSON
  report; exit code 0 when every check passes, 1 on tolerance failure.
* ``nhlab simulate`` integrates states/orbits/geodesics/world lines from
  a YAML config and writes CSV/JSON data files.

Exit codes: 0 pass, 1 tolerance failure, 2 config error, 3 domain exit.
Reports are deterministic: a fixed config and seed give byte-identical
JSON (keys sorted, ordered check lists, explicit physical defaults).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np
import yaml

from . import algebra, anomalous, classical, geometry, gravity, group, quantum
from .errors import ConfigError, DomainExit, NHLabError
from .geometry import BELTRAMI, STATIC, SpacetimeKind
from .state import l2_diff

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_DOMAIN = 3


def _kind(name: str, nu: float) -> SpacetimeKind:
    if name == "nh":
        return SpacetimeKind.nh(nu)
    if name == "anh":
        return SpacetimeKind.anh(nu)
    if name == "galilei":
        return SpacetimeKind.galilei()
    raise ConfigError(f"unknown kind {name!r} (expected nh|anh|galilei)")


def _check(name, identity, value, tolerance):
    return {
        "name": name,
        "identity": identity,
        "value": float(value),
        "tolerance": float(tolerance),
        "pass": bool(value <= tolerance),
    }


# --- verification suites ------------------------------------------------------

def suite_brackets(kind: SpacetimeKind, d: int, seed: int) -> list:
    checks = []
    tables = ["nh_algebra", "extended_nh"]
    if kind.variant != "galilei":
        tables += ["ladder", "so12"]
    for table in tables:
        rep = algebra.verify_bracket_table(kind, table, d=d, seed=seed)
        for c in rep.checks:
            checks.append(_check(f"brackets/{table}", c.label,
                                 c.max_abs_deviation, c.tolerance))
    return checks


def suite_group(kind: SpacetimeKind, d: int, seed: int, n_cases: int = 1000) -> list:
    rng = np.random.default_rng(seed)
    worst_compose = 0.0
    worst_tprime = 0.0
    for _ in range(n_cases):
        g1 = group.random_transform(kind, d, rng, time_scale=0.3)
        g2 = group.random_transform(kind, d, rng, time_scale=0.3)
        g12 = group.compose(kind, g2, g1)
        t = rng.uniform(-0.3, 0.3) / max(kind.nu, 1.0)
        e = geometry.Event(BELTRAMI, t, rng.uniform(-1, 1, d))
        seq = group.apply(kind, g2, group.apply(kind, g1, e))
        one = group.apply(kind, g12, e)
        worst_compose = max(worst_compose, abs(seq.time - one.time),
                            float(np.max(np.abs(seq.space - one.space))))
        # absolute simultaneity: t' may not depend on the spatial point
        e2 = geometry.Event(BELTRAMI, t, rng.uniform(-1, 1, d))
        worst_tprime = max(worst_tprime, abs(group.apply(kind, g1, e).time
                                             - group.apply(kind, g1, e2).time))
    checks = [
        _check("group/closure", "compose(g2,g1) acts like g2 after g1",
               worst_compose, 1e-10),
        _check("group/simultaneity", "t' is independent of x (exact)",
               worst_tprime, 0.0),
    ]
    # acceleration law against second divided differences along a world line
    worst_acc = 0.0
    worst_tau = 0.0
    for _ in range(50):
        g = group.random_transform(kind, d, rng, time_scale=0.3)
        x0, v0, b = (rng.uniform(-1, 1, d) for _ in range(3))
        t0 = rng.uniform(-0.2, 0.2) / max(kind.nu, 1.0)
        h = 1e-4
        evs = [group.apply(kind, g, geometry.Event(
            BELTRAMI, t0 + dt, x0 + v0 * (t0 + dt) + 0.5 * b * (t0 + dt) ** 2))
            for dt in (-h, 0.0, h)]
        (tm, xm), (tc, xc), (tp, xp) = [(e.time, e.space) for e in evs]
        d1 = (xc - xm) / (tc - tm)
        d2 = (xp - xc) / (tp - tc)
        acc_fd = 2.0 * (d2 - d1) / (tp - tm)
        acc = group.transform_acceleration(
            kind, g, geometry.Event(BELTRAMI, t0, x0 + v0 * t0 + 0.5 * b * t0**2),
            v0 + b * t0, b)
        worst_acc = max(worst_acc, float(np.max(np.abs(acc_fd - acc))))
        t1, t2 = t0, t0 + 0.3 / max(kind.nu, 1.0)
        i1 = group.apply(kind, g, geometry.Event(BELTRAMI, t1, x0)).time
        i2 = group.apply(kind, g, geometry.Event(BELTRAMI, t2, x0)).time
        worst_tau = max(worst_tau, abs(
            geometry.proper_time_interval(kind, t1, t2)
            - geometry.proper_time_interval(kind, i1, i2)))
    checks.append(_check("group/acceleration",
                         "dv'/dt' = sigma(a,t)^3/sigma(a)^(3/2) O dv/dt",
                         worst_acc, 1e-5))
    checks.append(_check("group/proper-time",
                         "dtau^2 = sigma^-2 dt^2 is invariant", worst_tau, 1e-8))
    return checks


def suite_classical(kind: SpacetimeKind, seed: int) -> list:
    rng = np.random.default_rng(seed)
    m = 1.0
    a_, b_ = rng.uniform(0.2, 0.5, 2)

    def xf(t):
        return np.array([a_ * math.sin(2.0 * t) + 0.1, b_ * t * t])

    n = 10001
    ts = np.linspace(0.0, 0.7, n)
    path = classical.PathSample(ts, np.array([xf(t) for t in ts]))
    shift = rng.uniform(-1, 1, 2)
    r_total = classical.total_derivative_check(kind, m, path)
    r_shift = classical.translation_shift_check(kind, m, shift, path)
    init, _ = classical.legendre(kind, m, 0.0, np.array([0.3, -0.2]),
                                 np.array([0.5, 0.1]))
    sol = classical.integrate_eom(kind, m, init, 0.6, 200)
    exact = init.x + np.outer(sol.times, np.array([0.5, 0.1]))
    r_line = float(np.max(np.abs(sol.positions - exact)))
    return [
        _check("classical/total-derivative",
               "L_nh dt = L_free dt + d(s m nu^2 t x^2 / 2 sigma)",
               r_total, 1e-6),
        _check("classical/translation-shift",
               "S[x-a] - S[x] equals the endpoint term", r_shift, 1e-6),
        _check("classical/straight-line",
               "canonical EOM integrates to xddot = 0", r_line, 1e-8),
    ]


def suite_quantum(kind: SpacetimeKind, seed: int, n: int = 1024,
                  extent: float = 60.0) -> list:
    packet = quantum.gaussian_packet(extent, n, 1, width=1.2, center=-2.0,
                                     momentum=1.0, time=0.0)
    cases = [
        (quantum.SPACE_TRANSLATION, dict(a=[1.3])),
        (quantum.BOOST, dict(u=[0.7])),
        (quantum.ROTATION, dict(rotation=[[1.0]])),
        (quantum.TIME_TRANSLATION, dict(a_t=0.25)),
        (quantum.DILATATION, dict(D=1.2)),
        (quantum.SCT, dict(k=0.3)),
    ]
    checks = []
    for eq in (quantum.EXTRAORDINARY, quantum.ORDINARY):
        for which, params in cases:
            if eq == quantum.ORDINARY and which in (quantum.DILATATION, quantum.SCT):
                continue
            r = quantum.invariance_residual(eq, which, kind, packet, 0.4,
                                            steps=16, **params)
            checks.append(_check(f"quantum/invariance/{eq}",
                                 f"{which}: evolve-then-map = map-then-evolve",
                                 r, 1e-5))
    return checks


def suite_duality(kind: SpacetimeKind, seed: int, n: int = 512,
                  extent: float = 60.0) -> list:
    nu = kind.nu
    hbar = m = 1.0
    t0 = 0.45 / max(nu, 1.0)
    p = 2.0 * math.pi / extent * 6
    pw = quantum.plane_wave(extent, n, 1, [p], time=t0)
    img = quantum.duality_map(quantum.TILDE_TO_PSI, kind, pw)
    tau = geometry.tau_of_t(kind, t0)
    qx = img.axis()
    if kind.variant == "nh":
        cfac, tfac = 1.0 / math.cosh(nu * tau), math.tanh(nu * tau)
        phase = p * qx * cfac - (p * p / (2 * m * nu) - 0.5 * m * nu * qx**2) * tfac
    else:
        cfac, tfac = 1.0 / math.cos(nu * tau), math.tan(nu * tau)
        phase = p * qx * cfac - (p * p / (2 * m * nu) + 0.5 * m * nu * qx**2) * tfac
    expected = cfac**0.5 * np.exp(1j * phase / hbar)
    r_pw = float(np.max(np.abs(img.values - expected)))
    checks = [_check("duality/plane-wave",
                     "free plane wave maps to the oscillator-chart closed form",
                     r_pw, 1e-8)]
    if kind.variant == "anh":
        tau0 = 0.35
        gs = quantum.oscillator_ground_state(kind, extent / 2, n, 1, tau=tau0)
        tilde = quantum.duality_map(quantum.PSI_TO_TILDE, kind, gs)
        tb = geometry.t_of_tau(kind, tau0)
        x = tilde.axis()
        expected = (1 + 1j * nu * tb) ** -0.5 * np.exp(
            -m * nu * x**2 / (2 * hbar * (1 + 1j * nu * tb)))
        checks.append(_check("duality/ground-state",
                             "oscillator ground state maps to (1+i nu t)^(-d/2) Gaussian",
                             float(np.max(np.abs(tilde.values - expected))), 1e-8))
    h_tau = 5e-4
    tau0 = 0.3 / max(nu, 1.0)
    packet = quantum.gaussian_packet(extent, n, 1, width=1.2, momentum=1.0)
    ts = [geometry.t_of_tau(kind, tau0 + k * h_tau) for k in (-1, 0, 1)]
    ext_common = min(extent / math.sqrt(geometry.sigma(kind, t)) for t in ts)
    slices = [quantum.duality_map(
        quantum.TILDE_TO_PSI, kind,
        quantum.evolve(quantum.EXTRAORDINARY, kind, packet, t, steps=8),
        out_extent=ext_common) for t in ts]
    r_evolved = quantum.equation_residual(quantum.HARMONIC, kind, *slices)
    checks.append(_check("duality/evolved-state",
                         "duality image of an evolved free state solves the oscillator equation",
                         r_evolved, 1e-5))
    return checks


def suite_probability(kind: SpacetimeKind, seed: int, n: int = 512,
                      extent: float = 60.0) -> list:
    packet = quantum.gaussian_packet(extent, n, 1, width=1.2, momentum=1.0)
    ev = quantum.evolve(quantum.EXTRAORDINARY, kind, packet, 0.5, steps=1000)
    drift_free = abs(ev.norm_sq() - packet.norm_sq())
    qs = quantum.gaussian_packet(extent / 2, n, 1, width=0.9, chart=STATIC)
    ev2 = quantum.evolve(quantum.HARMONIC, kind, qs, 0.5, steps=1000)
    drift_harm = abs(ev2.norm_sq() - qs.norm_sq())
    delta = 5e-4
    t0 = 0.3 / max(kind.nu, 1.0)
    center = quantum.evolve(quantum.EXTRAORDINARY, kind, packet, t0, steps=8)
    before = quantum.evolve(quantum.EXTRAORDINARY, kind, packet, t0 - delta, steps=8)
    after = quantum.evolve(quantum.EXTRAORDINARY, kind, packet, t0 + delta, steps=8)
    rep = quantum.density_report(quantum.REP_TILDE, kind, center,
                                 before=before, after=after)
    psi = quantum.gauge_map(quantum.TILDE_TO_PSI, kind, center)
    norm_rel = abs(quantum.inner_product("ordinary", kind, psi, psi)
                   - quantum.inner_product("invariant", kind, center, center))
    moved = quantum.symmetry_transform(quantum.TIME_TRANSLATION,
                                       quantum.REP_TILDE, kind, center,
                                       a_t=0.2 / max(kind.nu, 1.0))
    rho_before = geometry.sigma(kind, center.time) ** 0.5 * np.abs(center.values) ** 2
    rho_after = geometry.sigma(kind, moved.time) ** 0.5 * np.abs(moved.values) ** 2
    rho_dev = float(np.max(np.abs(rho_before - rho_after)))
    return [
        _check("probability/unitarity-free",
               "free split-step conserves the plain norm (1000 steps)",
               drift_free, 1e-10),
        _check("probability/unitarity-harmonic",
               "oscillator split-step conserves the plain norm (1000 steps)",
               drift_harm, 1e-10),
        _check("probability/continuity",
               "d_t rho + div j = 0 (spectral, central difference)",
               rep.continuity_residual, 1e-6),
        _check("probability/norm-relation",
               "ordinary norm of psi equals plain norm of psitilde",
               norm_rel, 1e-10),
        _check("probability/observable-density",
               "sigma^(d/2)|psitilde|^2 is pointwise invariant",
               rho_dev, 1e-10),
    ]


def suite_geodesics(kind: SpacetimeKind, C: float, seed: int) -> list:
    rng = np.random.default_rng(seed)
    worst_line = 0.0
    worst_first = 0.0
    for trial in range(50):
        c_val = rng.uniform(-2.0, 2.0)
        conn = anomalous.AnomalousConnection(kind, C=c_val)
        t0 = rng.uniform(-0.2, 0.2) / kind.nu
        x0 = rng.uniform(-0.5, 0.5, 2)
        v0 = rng.uniform(-0.5, 0.5, 2)
        td0 = anomalous.affine_rate(conn, t0)
        init = anomalous.GeodesicState(t0, x0, td0, v0 * td0)
        t_safe = (0.7 if kind.variant == "nh" else 1.2) / kind.nu
        lam_end = min(anomalous.affine_parameter(conn, t_safe)
                      - anomalous.affine_parameter(conn, t0), 0.8 / kind.nu)
        traj = anomalous.integrate_geodesic(conn, init, lam_end, 2000)
        worst_line = max(worst_line, anomalous.straight_line_residual(traj))
        worst_first = max(worst_first, anomalous.first_integral_residual(conn, traj))
    conn = anomalous.AnomalousConnection(kind, C=C)
    ts = np.linspace(-0.3, 0.5, 41) / kind.nu
    r_lambda = anomalous.lambda_transform_check(conn, 0.4 / kind.nu, ts)
    cf = anomalous.curvature(conn, 0.3 / kind.nu)
    fd = anomalous.curvature_finite_difference(conn, 0.3 / kind.nu, d=3)
    r_curv = max(abs(cf["r_i_ttj"] - fd["r_i_ttj"]),
                 abs(cf["r_tt_per_dim"] - fd["r_tt_per_dim"]))
    checks = [
        _check("geodesics/straight-line",
               "geodesic images x(t) are straight for 50 random C",
               worst_line, 1e-8),
        _check("geodesics/first-integral",
               "dt/dlambda / (sigma varsigma^C) is constant", worst_first, 1e-8),
        _check("geodesics/lambda-transform",
               "dlambda'/dlambda = varsigma(a)^C (affine fit)", r_lambda, 1e-9),
        _check("geodesics/curvature",
               "closed-form curvature matches the finite-difference oracle",
               r_curv, 1e-6),
    ]
    if kind.variant == "nh":
        flat = anomalous.curvature(anomalous.AnomalousConnection(kind, C=1.0),
                                   0.3 / kind.nu)
        checks.append(_check("geodesics/flat-C1",
                             "curvature vanishes identically at C = 1",
                             abs(flat["r_i_ttj"]) + abs(flat["r_tt_per_dim"]), 0.0))
    return checks


def suite_gravity(seed: int) -> list:
    rng = np.random.default_rng(seed)
    gal = SpacetimeKind.galilei()
    src = gravity.PointSource(1.0, np.zeros(3), G=1.0)
    orbit = gravity.integrate_orbit(gal, src, [1, 0, 0], [0, 1, 0],
                                    0.0, 2.0 * math.pi, 2000)
    radii = np.linalg.norm(orbit.positions, axis=1)
    r_kepler = float(np.max(np.abs(radii - 1.0)))
    kind = SpacetimeKind.nh(1.0)
    f1, e1 = gravity.divergence_check(kind, src, 0.5, 1.0)
    f2, e2 = gravity.divergence_check(kind, src, 0.5, 2.5)
    r_flux = max(abs(f1 - e1), abs(f2 - e2), abs(f1 - f2))
    kind2 = SpacetimeKind.anh(1.0)
    orbit2 = gravity.integrate_orbit(kind2, src, [1, 0, 0], [0, 1, 0], 0.0, 1.0, 4000)
    g = group.NHTransform(np.eye(3), 0.2, rng.uniform(-0.3, 0.3, 3),
                          rng.uniform(-0.3, 0.3, 3))
    r_cov = gravity.covariance_check(kind2, g, src, orbit2)
    return [
        _check("gravity/kepler", "nu -> 0 circular orbit keeps its radius",
               r_kepler, 1e-6),
        _check("gravity/gauss-flux",
               "flux of Gamma^i_tt is 4 pi G M / sigma^(1/2), radius-independent",
               r_flux, 1e-8),
        _check("gravity/covariance",
               "the point-source law holds along transformed orbits",
               r_cov, 1e-6),
    ]


SUITES = {
    "brackets": lambda cfg: suite_brackets(cfg["kind_obj"], cfg["d"], cfg["seed"]),
    "group": lambda cfg: suite_group(cfg["kind_obj"], cfg["d"], cfg["seed"]),
    "classical": lambda cfg: suite_classical(cfg["kind_obj"], cfg["seed"]),
    "quantum": lambda cfg: suite_quantum(cfg["kind_obj"], cfg["seed"]),
    "duality": lambda cfg: suite_duality(cfg["kind_obj"], cfg["seed"]),
    "probability": lambda cfg: suite_probability(cfg["kind_obj"], cfg["seed"]),
    "geodesics": lambda cfg: suite_geodesics(cfg["kind_obj"], cfg["C"], cfg["seed"]),
    "gravity": lambda cfg: suite_gravity(cfg["seed"]),
}


def run_verify(args) -> int:
    if args.kind == "galilei" and args.nu != 0.0:
        print("config error: galilei kind requires nu = 0", file=sys.stderr)
        return EXIT_CONFIG
    try:
        kind = _kind(args.kind, args.nu)
    except (ConfigError, ValueError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    cfg = {
        "kind": args.kind, "nu": args.nu, "C": args.C, "d": args.d,
        "seed": args.seed, "hbar": 1.0, "mass": 1.0, "G": 1.0,
        "kind_obj": kind,
    }
    if args.suite == "all":
        names = sorted(SUITES)
    elif args.suite in SUITES:
        names = [args.suite]
    else:
        print(f"config error: unknown suite {args.suite!r}", file=sys.stderr)
        return EXIT_CONFIG
    checks = []
    try:
        for name in names:
            if name == "gravity" and args.kind == "galilei" and args.suite != "all":
                pass
            checks.extend(SUITES[name](cfg))
    except DomainExit as err:
        print(f"domain exit: {err}", file=sys.stderr)
        return EXIT_DOMAIN
    report = {
        "config": {k: v for k, v in cfg.items() if k != "kind_obj"},
        "suites": names,
        "checks": checks,
        "passed": all(c["pass"] for c in checks),
    }
    text = json.dumps(report, sort_keys=True, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    for c in checks:
        if not c["pass"]:
            print(f"FAIL {c['name']}: {c['identity']} "
                  f"(value {c['value']:.3e} > tol {c['tolerance']:.3e})",
                  file=sys.stderr)
    return EXIT_PASS if report["passed"] else EXIT_FAIL


# --- simulations --------------------------------------------------------------

def _require(cfg: dict, key: str):
    if key not in cfg:
        raise ConfigError(f"missing config key {key!r}")
    return cfg[key]


def run_simulate(args) -> int:
    try:
        cfg = yaml.safe_load(Path(args.config).read_text())
        if not isinstance(cfg, dict):
            raise ConfigError("config must be a mapping")
        task = _require(cfg, "task")
        out_dir = Path(cfg.get("output_dir", args.out or "."))
        out_dir.mkdir(parents=True, exist_ok=True)
        kind_name = cfg.get("kind", "anh")
        nu = float(cfg.get("nu", 1.0 if kind_name != "galilei" else 0.0))
        kind = _kind(kind_name, nu)
        if task == "evolve":
            block = _require(cfg, "evolve")
            n = int(block.get("n", 256))
            extent = float(block.get("extent", 40.0))
            eq = block.get("equation", quantum.EXTRAORDINARY)
            chart = STATIC if eq == quantum.HARMONIC else BELTRAMI
            state = quantum.gaussian_packet(
                extent, n, int(block.get("d", 1)),
                width=float(block.get("width", 1.0)),
                center=block.get("center", 0.0),
                momentum=block.get("momentum", 0.0),
                time=float(block.get("t_start", 0.0)), chart=chart)
            t_end = float(_require(block, "t_end"))
            snaps = int(block.get("snapshots", 4))
            steps = int(block.get("steps", 64))
            times = np.linspace(state.time, t_end, snaps + 1)
            for i, t in enumerate(times):
                snap = quantum.evolve(eq, kind, state, float(t), steps=steps) \
                    if t != state.time else state
                (out_dir / f"state_{i:03d}.json").write_text(snap.to_json())
                dens = np.abs(snap.values) ** 2
                data = np.column_stack([snap.axis(), dens]) if snap.dim == 1 \
                    else np.column_stack([np.arange(dens.size), dens.ravel()])
                np.savetxt(out_dir / f"density_{i:03d}.csv", data, delimiter=",",
                           header="x,density" if snap.dim == 1 else "index,density",
                           comments="")
        elif task == "orbit":
            block = _require(cfg, "orbit")
            src = gravity.PointSource(float(block.get("mass", 1.0)),
                                      np.asarray(block.get("source", [0, 0, 0]),
                                                 dtype=float),
                                      G=float(block.get("G", 1.0)))
            orbit = gravity.integrate_orbit(
                kind, src, np.asarray(_require(block, "x0"), dtype=float),
                np.asarray(_require(block, "v0"), dtype=float),
                float(block.get("t0", 0.0)), float(_require(block, "t_end")),
                int(block.get("steps", 1000)))
            orbit.to_csv(out_dir / "orbit.csv")
            report = gravity.flux_report(kind, src, float(block.get("t0", 0.0)),
                                         block.get("flux_radii", [1.0, 2.0]))
            (out_dir / "flux.json").write_text(
                json.dumps(report, sort_keys=True, indent=2) + "\n")
        elif task == "geodesic":
            block = _require(cfg, "geodesic")
            if kind.variant == "galilei":
                conn = anomalous.AnomalousConnection(kind, gamma=float(
                    block.get("gamma", 0.0)))
            else:
                conn = anomalous.AnomalousConnection(kind, C=float(
                    block.get("C", 0.0)))
            sweep = block.get("C_sweep")
            conns = [anomalous.AnomalousConnection(kind, C=float(c))
                     for c in sweep] if sweep else [conn]
            for i, cn in enumerate(conns):
                t0 = float(block.get("t0", 0.0))
                td0 = anomalous.affine_rate(cn, t0)
                v0 = np.asarray(block.get("v0", [0.1, 0.0]), dtype=float)
                init = anomalous.GeodesicState(
                    t0, np.asarray(block.get("x0", [0.0, 0.0]), dtype=float),
                    td0, v0 * td0)
                traj = anomalous.integrate_geodesic(
                    cn, init, float(_require(block, "lambda_end")),
                    int(block.get("steps", 400)))
                label = f"_C{cn.C}" if sweep else ""
                traj.to_csv(out_dir / f"geodesic{label}.csv")
        elif task == "classical_eom":
            block = _require(cfg, "classical_eom")
            init, _ = classical.legendre(
                kind, float(block.get("mass", 1.0)),
                float(block.get("t0", 0.0)),
                np.asarray(_require(block, "x0"), dtype=float),
                np.asarray(_require(block, "v0"), dtype=float))
            path = classical.integrate_eom(kind, float(block.get("mass", 1.0)),
                                           init, float(_require(block, "t_end")),
                                           int(block.get("steps", 400)))
            path.to_csv(out_dir / "world_line.csv")
        else:
            raise ConfigError(f"unknown task {task!r}")
    except (ConfigError, KeyError, TypeError, ValueError, OSError,
            yaml.YAMLError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainExit as err:
        print(f"domain exit: {err}", file=sys.stderr)
        return EXIT_DOMAIN
    except NHLabError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nhlab",
        description="Verification suites and simulations for Newton-Hooke space-times")
    sub = parser.add_subparsers(dest="command", required=True)
    ver = sub.add_parser("verify", help="run verification suites")
    ver.add_argument("--suite", default="all",
                     help="suite name or 'all' (%s)" % ", ".join(sorted(SUITES)))
    ver.add_argument("--kind", default="anh", choices=["nh", "anh", "galilei"])
    ver.add_argument("--nu", type=float, default=1.0)
    ver.add_argument("--C", type=float, default=1.7)
    ver.add_argument("--d", type=int, default=3)
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--out", default=None, help="write the JSON report here")
    ver.set_defaults(func=run_verify)
    sim = sub.add_parser("simulate", help="run a config-driven simulation")
    sim.add_argument("--config", required=True)
    sim.add_argument("--out", default=None, help="output directory override")
    sim.set_defaults(func=run_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify" and args.kind == "galilei":
        args.nu = 0.0
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
