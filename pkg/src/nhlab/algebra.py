"""Exact first-order operator realizations of the space-time symmetry algebra.

Operators have the form X = c_t(t, x) d_t + c_i(t, x) d_i + c_0(t, x),
with all coefficients stored as closed-form sympy expressions, so the
commutator

    [X, Y] = (X_D c_t^Y - Y_D c_t^X) d_t + (X_D c_i^Y - Y_D c_i^X) d_i
             + (X_D c_0^Y - Y_D c_0^X)

(X_D the derivative part of X) is computed exactly, with no numerical
differentiation anywhere.  Operator equality is then checked by sampling
coefficients at random in-domain points.

Beltrami-chart realizations (anti-Hermitian convention, s = +1 NH / -1 ANH):

    H = sigma(t) d_t - s nu^2 t x^i d_i,  P_i = -d_i,  K_i = -t d_i,
    J_ij = x^i d_j - x^j d_i,

and the bracket table  [H, P_j] = s nu^2 K_j, [H, K_j] = P_j,
[P_i, K_j] = 0, plus the standard rotation brackets.  The centrally
extended Beltrami realization appends multiplication terms

    K_i += i (m/hbar) x_i,
    H   += -s (d/2) nu^2 t + i s (m/(2 hbar)) nu^2 x^2,

giving [P_i, K_j] = -i (m/hbar) delta_ij.

Static-chart realizations (Hermitian convention, explicit hbar):

    Hhat = i hbar d_tau,
    Phat_i = -i hbar fc(nu tau) d_qi,   Khat_i = -i hbar nu^-1 fs(nu tau) d_qi,

with (fc, fs) = (cosh, sinh) for NH and (cos, sin) for ANH; their
centrally extended versions add -+ m nu q_i fs and -m q_i fc.  The ladder
combinations A_i = Phat_i + i nu Khat_i, Adag_i = Phat_i - i nu Khat_i
satisfy [Hhat, A_i] = -hbar nu A_i and [Hhat, Adag_i] = +hbar nu Adag_i
for ANH (for NH the analogous exponential combinations pick up the
factors +-i hbar nu).  The dilatation and its commutator partner

    d_D = nu^-1 fs(2 nu tau) d_tau + fc(2 nu tau) q^i d_qi,
    d_G = fc(2 nu tau) d_tau +- nu fs(2 nu tau) q^i d_qi,

close with d_tau into an so(1,2):  [d_tau, d_D] = 2 d_G,
[d_tau, d_G] = 2 s nu^2 d_D, [d_G, d_D] = 2 d_tau; d_G equals the
combination 2 d_t - d_tau of Galilei and invariant time translations.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
import sympy as sp

from .errors import ChartMismatch, UnsupportedGenerator
from .geometry import ANH, BELTRAMI, GALILEI, NH, STATIC, SpacetimeKind
from .state import GridState, spectral_gradient, spectral_laplacian

BRACKET_TOL = 1e-12


def chart_symbols(chart: str, d: int) -> tuple[sp.Symbol, ...]:
    if chart == BELTRAMI:
        return sp.symbols(f"t x1:{d + 1}", real=True)
    if chart == STATIC:
        return sp.symbols(f"tau q1:{d + 1}", real=True)
    raise ChartMismatch(f"operators live on Beltrami or static charts, not {chart!r}")


@dataclass(frozen=True)
class FirstOrderOperator:
    """c_time d_time + c_space[i] d_i + c_mult, with sympy coefficients."""

    chart: str
    coords: tuple
    c_time: sp.Expr
    c_space: tuple
    c_mult: sp.Expr

    def __post_init__(self):
        object.__setattr__(self, "c_time", sp.sympify(self.c_time))
        object.__setattr__(self, "c_space",
                           tuple(sp.sympify(c) for c in self.c_space))
        object.__setattr__(self, "c_mult", sp.sympify(self.c_mult))
        if len(self.c_space) != len(self.coords) - 1:
            raise ValueError("need one spatial coefficient per spatial coordinate")

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    @classmethod
    def zero(cls, chart: str, d: int) -> "FirstOrderOperator":
        coords = chart_symbols(chart, d)
        return cls(chart, coords, 0, (0,) * d, 0)

    def _binary_guard(self, other: "FirstOrderOperator"):
        if self.chart != other.chart or self.coords != other.coords:
            raise ChartMismatch("operators live on different charts or dimensions")

    def __add__(self, other):
        self._binary_guard(other)
        return FirstOrderOperator(
            self.chart, self.coords, self.c_time + other.c_time,
            tuple(a + b for a, b in zip(self.c_space, other.c_space)),
            self.c_mult + other.c_mult)

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, scalar):
        scalar = sp.sympify(scalar)
        return FirstOrderOperator(
            self.chart, self.coords, scalar * self.c_time,
            tuple(scalar * c for c in self.c_space), scalar * self.c_mult)

    def __neg__(self):
        return (-1) * self

    def derive(self, expr: sp.Expr) -> sp.Expr:
        """Apply only the derivative part to a scalar expression."""
        out = self.c_time * sp.diff(expr, self.coords[0])
        for c, q in zip(self.c_space, self.coords[1:]):
            out = out + c * sp.diff(expr, q)
        return out

    def apply_to(self, expr: sp.Expr) -> sp.Expr:
        """Full action X(expr) including the multiplication term."""
        return self.derive(expr) + self.c_mult * expr

    def coefficients(self) -> list[sp.Expr]:
        return [self.c_time, *self.c_space, self.c_mult]

    def eval_coefficients(self, points: np.ndarray) -> np.ndarray:
        """Evaluate all coefficients at sample points (shape (n, d+1))."""
        points = np.asarray(points, dtype=float)
        cols = [points[:, i] for i in range(points.shape[1])]
        out = np.zeros((len(self.coefficients()), points.shape[0]), dtype=complex)
        for row, expr in enumerate(self.coefficients()):
            fn = sp.lambdify(self.coords, expr, "numpy")
            vals = fn(*cols)
            out[row] = np.broadcast_to(np.asarray(vals, dtype=complex),
                                       (points.shape[0],))
        return out

    def max_deviation(self, other: "FirstOrderOperator",
                      points: np.ndarray) -> float:
        """Max absolute coefficient difference over the sample points."""
        self._binary_guard(other)
        return float(np.max(np.abs(
            self.eval_coefficients(points) - other.eval_coefficients(points))))


def commutator(x: FirstOrderOperator, y: FirstOrderOperator) -> FirstOrderOperator:
    """[X, Y] = XY - YX, closed in the first-order class."""
    x._binary_guard(y)
    c_time = x.derive(y.c_time) - y.derive(x.c_time)
    c_space = tuple(x.derive(cy) - y.derive(cx)
                    for cx, cy in zip(x.c_space, y.c_space))
    c_mult = x.derive(y.c_mult) - y.derive(x.c_mult)
    return FirstOrderOperator(x.chart, x.coords, c_time, c_space, c_mult)


def _trig_pair(kind: SpacetimeKind):
    """(fc, fs) = (cosh, sinh) for NH, (cos, sin) for ANH."""
    if kind.variant == NH:
        return sp.cosh, sp.sinh
    if kind.variant == ANH:
        return sp.cos, sp.sin
    raise UnsupportedGenerator("static trig factors need an NH or ANH kind")


def realize(name: str, chart: str, kind: SpacetimeKind, *, d: int = 3,
            index: int = 0, pair: tuple = (0, 1), extended: bool = False,
            convention: str = "auto", hbar: float = 1.0,
            mass: float = 1.0) -> FirstOrderOperator:
    """Build a generator realization with exact symbolic coefficients.

    Names: "H", "P", "K", "J" on either chart; "A", "A_dag", "D", "G" on
    the static chart; "dt" is the plain coordinate time derivative.
    ``convention`` is "antihermitian" (geometric vector fields, the
    default on Beltrami), "hermitian" (explicit i hbar factors, the
    default on static H/P/K/A), or "auto".  The Hermitian operator is
    i hbar times the anti-Hermitian one.  ``extended`` switches on the
    central-extension multiplication terms (H, K on Beltrami; P, K on
    static).  Combinations the source algebra does not define (e.g. the
    dilatation for the Galilei kind) raise UnsupportedGenerator.
    """
    coords = chart_symbols(chart, d)
    tsym = coords[0]
    xs = coords[1:]
    nu = sp.Float(kind.nu) if kind.nu else sp.Integer(0)
    if kind.nu and float(kind.nu) == int(kind.nu):
        nu = sp.Integer(int(kind.nu))
    s = sp.Integer(int(kind.sign))
    hb = sp.nsimplify(hbar) if hbar == int(hbar) else sp.Float(hbar)
    mm = sp.nsimplify(mass) if mass == int(mass) else sp.Float(mass)
    zero = (sp.Integer(0),) * d

    def finish(op: FirstOrderOperator, natural: str) -> FirstOrderOperator:
        conv = natural if convention == "auto" else convention
        if conv == natural or natural == "vector" and conv == "antihermitian":
            return op
        if natural == "vector":
            # plain vector fields (dilatation and partners) carry no hbar
            raise UnsupportedGenerator(
                f"{name!r} is a coordinate vector field; no Hermitian version is defined")
        if natural == "antihermitian" and conv == "hermitian":
            return (sp.I * hb) * op
        if natural == "hermitian" and conv == "antihermitian":
            return (1 / (sp.I * hb)) * op
        raise UnsupportedGenerator(f"convention {convention!r} undefined for {name!r}")

    if name == "dt":
        return FirstOrderOperator(chart, coords, 1, zero, 0)

    if chart == BELTRAMI:
        if name == "H":
            sigma = 1 - s * nu**2 * tsym**2
            c_space = tuple(-s * nu**2 * tsym * x for x in xs)
            c_mult = sp.Integer(0)
            if extended:
                x2 = sum(x**2 for x in xs)
                c_mult = -s * sp.Rational(d, 2) * nu**2 * tsym \
                    + sp.I * s * mm * nu**2 * x2 / (2 * hb)
            return finish(FirstOrderOperator(chart, coords, sigma, c_space, c_mult),
                          "antihermitian")
        if name == "P":
            c_space = [sp.Integer(0)] * d
            c_space[index] = sp.Integer(-1)
            return finish(FirstOrderOperator(chart, coords, 0, tuple(c_space), 0),
                          "antihermitian")
        if name == "K":
            c_space = [sp.Integer(0)] * d
            c_space[index] = -tsym
            c_mult = sp.I * mm * xs[index] / hb if extended else sp.Integer(0)
            return finish(FirstOrderOperator(chart, coords, 0, tuple(c_space), c_mult),
                          "antihermitian")
        if name == "J":
            i, j = pair
            c_space = [sp.Integer(0)] * d
            c_space[j] = xs[i]
            c_space[i] = -xs[j]
            return finish(FirstOrderOperator(chart, coords, 0, tuple(c_space), 0),
                          "antihermitian")
        if name in ("D", "G"):
            if kind.variant == GALILEI and name == "D":
                raise UnsupportedGenerator("dilatation is not defined for the Galilei kind")
            if name == "D":
                return finish(FirstOrderOperator(chart, coords, 2 * tsym, xs, 0),
                              "vector")
            c_time = 1 + s * nu**2 * tsym**2
            c_space = tuple(s * nu**2 * tsym * x for x in xs)
            return finish(FirstOrderOperator(chart, coords, c_time, c_space, 0),
                          "vector")
        raise UnsupportedGenerator(f"no Beltrami realization for {name!r}")

    # static chart
    if kind.variant == GALILEI and name in ("A", "A_dag", "D", "G"):
        raise UnsupportedGenerator(f"{name!r} is not defined for the Galilei kind")
    if name == "J":
        i, j = pair
        c_space = [sp.Integer(0)] * d
        c_space[j] = xs[i]
        c_space[i] = -xs[j]
        return finish(FirstOrderOperator(chart, coords, 0, tuple(c_space), 0),
                      "antihermitian")
    if name == "H":
        return finish(FirstOrderOperator(chart, coords, sp.I * hb, zero, 0),
                      "hermitian")
    if name in ("P", "K") and kind.variant == GALILEI:
        c_space = [sp.Integer(0)] * d
        c_space[index] = -sp.I * hb if name == "P" else -sp.I * hb * tsym
        c_mult = sp.Integer(0)
        if extended and name == "K":
            c_mult = -mm * xs[index]
        return finish(FirstOrderOperator(chart, coords, 0, tuple(c_space), c_mult),
                      "hermitian")
    fc, fs = _trig_pair(kind)
    if name == "P":
        c_space = [sp.Integer(0)] * d
        c_space[index] = -sp.I * hb * fc(nu * tsym)
        c_mult = sp.Integer(0)
        if extended:
            c_mult = -s * mm * nu * xs[index] * fs(nu * tsym)
        return finish(FirstOrderOperator(chart, coords, 0, tuple(c_space), c_mult),
                      "hermitian")
    if name == "K":
        c_space = [sp.Integer(0)] * d
        c_space[index] = -sp.I * hb * fs(nu * tsym) / nu
        c_mult = -mm * xs[index] * fc(nu * tsym) if extended else sp.Integer(0)
        return finish(FirstOrderOperator(chart, coords, 0, tuple(c_space), c_mult),
                      "hermitian")
    if name in ("A", "A_dag"):
        p_op = realize("P", chart, kind, d=d, index=index,
                       convention="hermitian", hbar=hbar, mass=mass)
        k_op = realize("K", chart, kind, d=d, index=index,
                       convention="hermitian", hbar=hbar, mass=mass)
        # ANH: A = P + i nu K lowers by hbar nu; the NH analog of the
        # eigen-pair of ad_H is the hyperbolic combination P +- nu K.
        unit = sp.I if kind.variant == ANH else sp.Integer(1)
        sign = unit if name == "A" else -unit
        return finish(p_op + (sign * nu) * k_op, "hermitian")
    if name == "D":
        c_time = fs(2 * nu * tsym) / nu
        c_space = tuple(fc(2 * nu * tsym) * q for q in xs)
        return finish(FirstOrderOperator(chart, coords, c_time, c_space, 0),
                      "vector")
    if name == "G":
        c_time = fc(2 * nu * tsym)
        c_space = tuple(s * nu * fs(2 * nu * tsym) * q for q in xs)
        return finish(FirstOrderOperator(chart, coords, c_time, c_space, 0),
                      "vector")
    raise UnsupportedGenerator(f"no static realization for {name!r}")


def to_beltrami(op: FirstOrderOperator, kind: SpacetimeKind) -> FirstOrderOperator:
    """Re-express a static-chart operator in Beltrami coordinates.

    Uses d_tau = sigma d_t - s nu^2 t x^i d_i and d_qi = sigma^(1/2) d_xi
    together with the substitutions tau -> tau(t), q -> x / sigma^(1/2).
    """
    if op.chart != STATIC:
        raise ChartMismatch("to_beltrami expects a static-chart operator")
    d = op.dim
    bcoords = chart_symbols(BELTRAMI, d)
    tsym = bcoords[0]
    xs = bcoords[1:]
    nu = sp.nsimplify(kind.nu) if kind.nu == int(kind.nu) else sp.Float(kind.nu)
    s = sp.Integer(int(kind.sign))
    sigma = 1 - s * nu**2 * tsym**2
    if kind.variant == GALILEI:
        tau_expr = tsym
    elif kind.variant == NH:
        tau_expr = sp.atanh(nu * tsym) / nu
    else:
        tau_expr = sp.atan(nu * tsym) / nu
    subs = {op.coords[0]: tau_expr}
    for q, x in zip(op.coords[1:], xs):
        subs[q] = x / sp.sqrt(sigma)
    f = op.c_time.subs(subs)
    gs = [c.subs(subs) for c in op.c_space]
    c_time = f * sigma
    c_space = tuple(f * (-s * nu**2 * tsym * x) + g * sp.sqrt(sigma)
                    for x, g in zip(xs, gs))
    return FirstOrderOperator(BELTRAMI, bcoords, c_time, c_space,
                              op.c_mult.subs(subs))


def sample_points(chart: str, kind: SpacetimeKind, d: int, n: int,
                  rng: np.random.Generator, space_half_width: float = 2.0,
                  time_horizon: float = 0.9) -> np.ndarray:
    """Random in-domain sample points for operator comparisons."""
    pts = np.empty((n, d + 1))
    if kind.nu > 0:
        t_half = time_horizon / kind.nu if chart == BELTRAMI else 0.8 / kind.nu
    else:
        t_half = 1.0
    pts[:, 0] = rng.uniform(-t_half, t_half, size=n)
    pts[:, 1:] = rng.uniform(-space_half_width, space_half_width, size=(n, d))
    return pts


@dataclass
class BracketCheck:
    label: str
    max_abs_deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_abs_deviation <= self.tolerance

    def as_dict(self) -> dict:
        return {"bracket": self.label,
                "max_abs_deviation": self.max_abs_deviation,
                "tolerance": self.tolerance, "pass": bool(self.passed)}


@dataclass
class Report:
    """Outcome of a bracket-table verification."""

    kind: str
    table: str
    checks: list

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def max_deviation(self) -> float:
        return max((c.max_abs_deviation for c in self.checks), default=0.0)

    def to_json(self) -> str:
        return json.dumps({
            "kind": self.kind, "table": self.table,
            "all_pass": self.all_pass,
            "checks": [c.as_dict() for c in self.checks],
        }, sort_keys=True, indent=2)


def _delta(i, j):
    return 1 if i == j else 0


def verify_bracket_table(kind: SpacetimeKind, table: str, *, d: int = 3,
                         hbar: float = 1.0, mass: float = 1.0,
                         n_points: int = 1000, seed: int = 0,
                         tolerance: float = BRACKET_TOL) -> Report:
    """Verify every bracket of the named table coefficient-wise.

    Tables: "nh_algebra" (Beltrami, anti-Hermitian), "extended_nh"
    (static, footnote realization in the anti-Hermitian convention, with
    the central element realized as multiplication by m/hbar), "ladder"
    (static Hermitian), "so12" (static vector fields).  Each bracket is
    compared against its stated right-hand side at ``n_points`` random
    in-domain sample points; failures never raise, they are Report rows.
    """
    rng = np.random.default_rng(seed)
    checks = []
    s = kind.sign
    nu = kind.nu

    def add(label, got, expected, chart):
        pts = sample_points(chart, kind, d, n_points, rng)
        dev = got.max_deviation(expected, pts)
        checks.append(BracketCheck(label, dev, tolerance))

    if table == "nh_algebra":
        chart = BELTRAMI
        H = realize("H", chart, kind, d=d)
        P = [realize("P", chart, kind, d=d, index=i) for i in range(d)]
        K = [realize("K", chart, kind, d=d, index=i) for i in range(d)]
        pairs = [(a, b) for a in range(d) for b in range(a + 1, d)]
        J = {p: realize("J", chart, kind, d=d, pair=p) for p in pairs}

        def j_op(a, b):
            if a == b:
                return FirstOrderOperator.zero(chart, d)
            if (a, b) in J:
                return J[(a, b)]
            return -J[(b, a)]

        for (i, j) in pairs:
            for (k, l) in pairs:
                expected = (_delta(j, k) * j_op(i, l) + _delta(i, l) * j_op(j, k)
                            - _delta(i, k) * j_op(j, l) - _delta(j, l) * j_op(i, k))
                add(f"[J{i}{j}, J{k}{l}] = d_jk J_il + d_il J_jk - d_ik J_jl - d_jl J_ik",
                    commutator(J[(i, j)], J[(k, l)]), expected, chart)
        for (i, j) in pairs:
            for k in range(d):
                add(f"[J{i}{j}, P{k}] = d_jk P_i - d_ik P_j",
                    commutator(J[(i, j)], P[k]),
                    _delta(j, k) * P[i] - _delta(i, k) * P[j], chart)
                add(f"[J{i}{j}, K{k}] = d_jk K_i - d_ik K_j",
                    commutator(J[(i, j)], K[k]),
                    _delta(j, k) * K[i] - _delta(i, k) * K[j], chart)
            add(f"[J{i}{j}, H] = 0", commutator(J[(i, j)], H),
                FirstOrderOperator.zero(chart, d), chart)
        for j in range(d):
            add(f"[H, P{j}] = (+-) nu^2 K{j}", commutator(H, P[j]),
                (s * nu**2) * K[j], chart)
            add(f"[H, K{j}] = P{j}", commutator(H, K[j]), P[j], chart)
        for i in range(d):
            for j in range(d):
                add(f"[P{i}, K{j}] = 0", commutator(P[i], K[j]),
                    FirstOrderOperator.zero(chart, d), chart)
        return Report(kind.variant, table, checks)

    if table == "extended_nh":
        chart = STATIC
        conv = dict(d=d, convention="antihermitian", hbar=hbar, mass=mass)
        H = realize("H", chart, kind, **conv)
        P = [realize("P", chart, kind, index=i, extended=True, **conv)
             for i in range(d)]
        K = [realize("K", chart, kind, index=i, extended=True, **conv)
             for i in range(d)]
        coords = chart_symbols(chart, d)
        for j in range(d):
            add(f"[H, P{j}] = (+-) nu^2 K{j} (extended)", commutator(H, P[j]),
                (s * nu**2) * K[j], chart)
            add(f"[H, K{j}] = P{j} (extended)", commutator(H, K[j]), P[j], chart)
        for i in range(d):
            for j in range(d):
                central = FirstOrderOperator(
                    chart, coords, 0, (sp.Integer(0),) * d,
                    -sp.I * _delta(i, j) * sp.nsimplify(mass) / sp.nsimplify(hbar))
                add(f"[P{i}, K{j}] = -i delta_ij m", commutator(P[i], K[j]),
                    central, chart)
        for i in range(d):
            for j in range(i + 1, d):
                add(f"[P{i}, P{j}] = 0", commutator(P[i], P[j]),
                    FirstOrderOperator.zero(chart, d), chart)
                add(f"[K{i}, K{j}] = 0", commutator(K[i], K[j]),
                    FirstOrderOperator.zero(chart, d), chart)
        return Report(kind.variant, table, checks)

    if table == "ladder":
        chart = STATIC
        conv = dict(d=d, convention="hermitian", hbar=hbar, mass=mass)
        H = realize("H", chart, kind, **conv)
        lower = sp.I * hbar * nu if kind.variant == NH else -hbar * nu
        for i in range(d):
            A = realize("A", chart, kind, index=i, **conv)
            Adag = realize("A_dag", chart, kind, index=i, **conv)
            add(f"[H, A{i}] = (lowering factor) A{i}", commutator(H, A),
                lower * A, chart)
            add(f"[H, Adag{i}] = (raising factor) Adag{i}", commutator(H, Adag),
                (-lower) * Adag, chart)
        return Report(kind.variant, table, checks)

    if table == "so12":
        chart = STATIC
        Ht = realize("H", chart, kind, d=d, convention="antihermitian")
        D = realize("D", chart, kind, d=d)
        G = realize("G", chart, kind, d=d)
        add("[d_tau, d_D] = 2 d_G", commutator(Ht, D), 2 * G, chart)
        add("[d_tau, d_G] = (+-) 2 nu^2 d_D", commutator(Ht, G),
            (2 * s * nu**2) * D, chart)
        add("[d_G, d_D] = 2 d_tau", commutator(G, D), 2 * Ht, chart)
        return Report(kind.variant, table, checks)

    raise ValueError(f"unknown bracket table {table!r}")


# --- infinitesimal symmetry action on oscillator-chart wave functions -------

def _variation_factor(name: str, kind: SpacetimeKind, tau: float,
                      q_sq: np.ndarray, d: int, hbar: float,
                      mass: float) -> np.ndarray:
    nu = kind.nu
    if name == "H_tau":
        return np.zeros_like(q_sq)
    if kind.variant == NH:
        c2, s2 = math.cosh(2 * nu * tau), math.sinh(2 * nu * tau)
        if name == "D":
            return -0.5 * d * c2 + 1j * mass * nu * q_sq * s2 / hbar
        if name == "G":
            return -0.5 * d * nu * s2 + 1j * mass * nu**2 * q_sq * c2 / hbar
    elif kind.variant == ANH:
        c2, s2 = math.cos(2 * nu * tau), math.sin(2 * nu * tau)
        if name == "D":
            return -0.5 * d * c2 - 1j * mass * nu * q_sq * s2 / hbar
        if name == "G":
            return 0.5 * d * nu * s2 - 1j * mass * nu**2 * q_sq * c2 / hbar
    raise UnsupportedGenerator(
        f"no infinitesimal action for {name!r} on kind {kind.variant!r}")


def infinitesimal_action(name: str, kind: SpacetimeKind, psi: GridState,
                         eps: float, include_drag: bool = False) -> GridState:
    """First-order symmetry variation of a static-chart wave function.

    Returns psi + delta psi where delta psi is the multiplicative
    variation eps * phi(tau, q) * psi: phi = 0 for the invariant time
    translation, and for the dilatation / conformal partner the listed
    cosh-sinh (NH) or cos-sin (ANH) combinations of tau and q^2.

    With ``include_drag`` the coordinate-drag term -eps xi(psi) is added
    as well (xi the generating vector field, its tau-derivative taken
    from the oscillator equation); the result then solves the oscillator
    equation to O(eps^2), which is the executable invariance statement.
    """
    if psi.chart != STATIC:
        raise ChartMismatch("infinitesimal actions act on static-chart states")
    if name not in ("H_tau", "D", "G"):
        raise UnsupportedGenerator(f"unknown infinitesimal action {name!r}")
    tau = psi.time
    q_sq = psi.radius_sq()
    phi = _variation_factor(name, kind, tau, q_sq, psi.dim, psi.hbar, psi.mass)
    new_vals = psi.values * (1.0 + eps * phi)
    if include_drag:
        nu = kind.nu
        if kind.variant == NH:
            c2, s2 = math.cosh(2 * nu * tau), math.sinh(2 * nu * tau)
            euler_coeff = {"H_tau": 0.0, "D": c2, "G": nu * s2}[name]
            tau_coeff = {"H_tau": 1.0, "D": s2 / nu, "G": c2}[name]
        else:
            c2, s2 = math.cos(2 * nu * tau), math.sin(2 * nu * tau)
            euler_coeff = {"H_tau": 0.0, "D": c2, "G": -nu * s2}[name]
            tau_coeff = {"H_tau": 1.0, "D": s2 / nu, "G": c2}[name]
        # d_tau psi from the oscillator equation itself
        lap = spectral_laplacian(psi)
        dtau_psi = 1j * psi.hbar / (2 * psi.mass) * lap \
            + 1j * kind.sign * psi.mass * nu**2 * q_sq / (2 * psi.hbar) * psi.values
        grads = spectral_gradient(psi)
        euler = sum(g * grad for g, grad in zip(psi.meshgrid(), grads))
        new_vals = new_vals - eps * (tau_coeff * dtau_psi + euler_coeff * euler)
    return psi.with_values(new_vals)
