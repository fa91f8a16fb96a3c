"""Floating-point holonomy experiments for linear and nodal models.

This is the only floating-point module: closed-form loop multipliers, a
fourth-order lift of paths through the foliation, first-integral conservation
along leaves of nodal models, and the contraction constants with their
empirical reach checks.  Everything else in the package is exact.
"""
from __future__ import annotations

import cmath
import math
import random

from .errors import BadParameters, LeftDomain, StepTooLarge, ZeroLambda


class LinearModel:
    """sum_i (lam_i + b_i(x)) dx_i / x_i on a polydisc of radius delta.

    A nodal model is given by positive weights r_1..r_tau and a split index
    k with lam_i = r_i for i < k and lam_i = -r_i for i >= k.
    """

    def __init__(self, lam, delta=1.0, perturbations=None, rho=None,
                 weights=None, split=None):
        self.lam = tuple(complex(l) for l in lam)
        if any(l == 0 for l in self.lam):
            raise ZeroLambda("model residues must be nonzero")
        self.tau = len(self.lam)
        self.delta = float(delta)
        self.perturbations = perturbations or (None,) * self.tau
        self.rho = rho
        self.weights = tuple(float(r) for r in weights) if weights else None
        self.split = split
        if self.weights is not None:
            if not (self.split is not None and 1 <= self.split < self.tau):
                raise BadParameters("nodal split must satisfy 1 <= k < tau")
            if any(r <= 0 for r in self.weights):
                raise BadParameters("nodal weights must be positive")

    @classmethod
    def nodal(cls, weights, split, delta=1.0):
        lam = [r if i < split else -r for i, r in enumerate(weights)]
        return cls(lam, delta=delta, weights=weights, split=split)

    @property
    def is_nodal(self):
        return self.weights is not None

    def coefficient(self, i, point):
        b = self.perturbations[i]
        return self.lam[i] + (b(point) if b is not None else 0.0)

    def first_integral_log(self, point):
        """log of  prod_{i<k} |x_i|^{r_i} / prod_{i>=k} |x_i|^{r_i}."""
        if not self.is_nodal:
            raise BadParameters("first integral is defined for nodal models")
        out = 0.0
        for i, r in enumerate(self.weights):
            s = 1.0 if i < self.split else -1.0
            out += s * r * math.log(abs(point[i]))
        return out


class NumericConfig:
    def __init__(self, step=1e-3, tol=1e-9, max_length=200.0):
        if step <= 0 or tol <= 0 or max_length <= 0:
            raise BadParameters("numeric configuration values must be positive")
        self.step = step
        self.tol = tol
        self.max_length = max_length


DEFAULT_CONFIG = NumericConfig()


# ---------------------------------------------------------------------------
# base paths: t in [0, 1] -> (value, derivative) per moving coordinate
# ---------------------------------------------------------------------------

def circle_path(alpha, turns=1):
    """x(t) = alpha * exp(2 pi i * turns * t)."""
    w = 2j * math.pi * turns

    def f(t):
        v = alpha * cmath.exp(w * t)
        return v, w * v
    f.length = abs(alpha) * 2 * math.pi * abs(turns)
    return f


def spiral_path(start, end, turns=0):
    """Logarithmic spiral from start to end winding `turns` extra times."""
    if start == 0 or end == 0:
        raise BadParameters("spiral endpoints must avoid the divisor")
    a = cmath.log(start)
    b = cmath.log(end) + 2j * math.pi * turns

    def f(t):
        v = cmath.exp(a + (b - a) * t)
        return v, (b - a) * v
    f.length = abs(b - a) * max(abs(start), abs(end))
    return f


def constant_path(value):
    def f(t):
        return value, 0.0
    f.length = 0.0
    return f


# ---------------------------------------------------------------------------
# lifting
# ---------------------------------------------------------------------------

def lift_path(model, paths, fiber, start, config=DEFAULT_CONFIG):
    """Integrate the lifting of a base path through omega(gamma') = 0.

    paths maps each moving coordinate index to a base path; the fiber
    coordinate is integrated in logarithmic form
        u' = - sum_i (lam_i + b_i) (x_i'/x_i) / (lam_f + b_f),  x_f = e^u.
    Returns the end value of the fiber coordinate.
    """
    if start == 0:
        raise LeftDomain("start value lies on the divisor")
    length = sum(getattr(p, "length", 1.0) for p in paths.values())
    if length > config.max_length:
        raise StepTooLarge(f"path length {length:.3g} exceeds the configured bound")
    n = max(16, int(math.ceil(max(length, 1.0) / config.step)))
    h = 1.0 / n

    def point_at(t, u):
        pt = [0.0] * model.tau
        for i, p in paths.items():
            pt[i] = p(t)[0]
        pt[fiber] = cmath.exp(u)
        return pt

    def rhs(t, u):
        pt = point_at(t, u)
        num = 0.0
        for i, p in paths.items():
            v, dv = p(t)
            num += model.coefficient(i, pt) * (dv / v)
        den = model.coefficient(fiber, pt)
        if den == 0:
            raise ZeroLambda("fiber coefficient vanished along the path")
        return -num / den

    u = cmath.log(start)
    check_every = max(1, n // 64)
    for s in range(n):
        t = s * h
        k1 = rhs(t, u)
        k2 = rhs(t + h / 2, u + h * k1 / 2)
        k3 = rhs(t + h / 2, u + h * k2 / 2)
        k4 = rhs(t + h, u + h * k3)
        u = u + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        if s % check_every == 0:
            pt = point_at(t + h, u)
            if any(abs(c) > model.delta * (1 + 1e-9) for c in pt):
                raise LeftDomain("lifted path exited the polydisc")
    return cmath.exp(u)


def loop_multiplier(lam, turns=1):
    """Holonomy multiplier exp(-2 pi i turns / lam) of the model loop."""
    lam = complex(lam)
    if lam == 0:
        raise ZeroLambda("loop multiplier requires a nonzero residue")
    return cmath.exp(-2j * math.pi * turns / lam)


def nodal_first_integral_drift(model, paths, fiber, start, config=DEFAULT_CONFIG,
                               samples=64):
    """Max |log-drift| of the nodal first integral along the lifted path."""
    if not model.is_nodal:
        raise BadParameters("drift check requires a nodal model")
    length = sum(getattr(p, "length", 1.0) for p in paths.values())
    if length == 0:
        return 0.0
    base = None
    drift = 0.0
    sub = NumericConfig(step=config.step, tol=config.tol, max_length=config.max_length)
    for s in range(samples + 1):
        t = s / samples
        # lift the truncated path and evaluate the integral at its endpoint
        if s == 0:
            y = start
        else:
            trunc = {i: _truncate(p, t) for i, p in paths.items()}
            y = lift_path(model, trunc, fiber, start, sub)
        pt = [0.0] * model.tau
        for i, p in paths.items():
            pt[i] = p(t)[0]
        pt[fiber] = y
        val = model.first_integral_log(pt)
        if base is None:
            base = val
        drift = max(drift, abs(val - base))
    return drift


def _truncate(path, t1):
    def f(t):
        v, dv = path(t * t1)
        return v, dv * t1
    f.length = getattr(path, "length", 1.0) * t1
    return f


# ---------------------------------------------------------------------------
# contraction constants
# ---------------------------------------------------------------------------

def lemma4_constant(lam, rho, eps):
    """c = eps * exp(-2((pi + 1) rho + lam) / rho^2).

    rho is used as a positive lower bound for |lam + f|; the decay estimates
    only close with this orientation of the bound.
    """
    if lam <= 0 or rho <= 0 or eps <= 0:
        raise BadParameters("lemma4_constant needs positive lam, rho, eps")
    return eps * math.exp(-2 * ((math.pi + 1) * rho + lam) / (rho * rho))


def lemma4_reach_check(lam, rho, eps, alpha=0.5, delta=1.0, trials=100, seed=7,
                       config=DEFAULT_CONFIG):
    """Empirical companion to lemma4_constant on the model lam dx/x + dy/y.

    Random starts (alpha', beta') with |beta'| < c are driven to the
    transversal {x = alpha, |y| < eps} by an angular then a radial path;
    returns the fraction that arrive without exiting the polydisc.
    """
    c = lemma4_constant(lam, rho, eps)
    model = LinearModel([lam, 1.0], delta=delta)
    rng = random.Random(seed)
    reached = 0
    for _ in range(trials):
        ra = alpha * (0.2 + 0.8 * rng.random())
        aa = 2 * math.pi * rng.random()
        x0 = ra * cmath.exp(1j * aa)
        y0 = c * rng.random() * cmath.exp(2j * math.pi * rng.random())
        if y0 == 0:
            y0 = c / 2
        try:
            # angular leg back to the positive real axis, then radial leg
            y1 = lift_path(model, {0: spiral_path(x0, ra)}, 1, y0, config)
            y2 = lift_path(model, {0: spiral_path(ra, alpha)}, 1, y1, config)
        except LeftDomain:
            continue
        if abs(y2) < eps:
            reached += 1
    return {"constant": c, "reached": reached, "trials": trials,
            "fraction": reached / trials}


# ---------------------------------------------------------------------------
# saturation probe
# ---------------------------------------------------------------------------

def saturation_probe(model, alpha, eps, grid, config=DEFAULT_CONFIG,
                     max_turns=40, fiber=1):
    """Reachability of grid points from the transversal {x = alpha, |y| <= eps}.

    For each grid point (x_g, y_g) the probe solves for a start value on the
    transversal along a spiral path with k extra turns, then confirms the
    candidate by integrating the lift.  Nodal models leave exactly the points
    with first-integral value beyond the transversal range unreached.
    """
    if model.tau != 2:
        raise BadParameters("the probe drives two-variable models")
    base = 1 - fiber
    ratio = model.lam[base] / model.lam[fiber]
    records = []
    reached = 0
    for (xg, yg) in grid:
        if xg == 0 or yg == 0:
            raise LeftDomain("grid points must avoid the divisor")
        ok = False
        for k in _turn_candidates(ratio, alpha, xg, yg, eps, max_turns):
            shift = (cmath.log(xg) - math.log(alpha)) + 2j * math.pi * k
            y_start = yg * cmath.exp(ratio * shift)
            if abs(y_start) > eps or abs(y_start) == 0:
                continue
            path = {base: spiral_path(alpha, xg, turns=k)}
            try:
                y_end = lift_path(model, path, fiber, y_start, config)
            except (LeftDomain, StepTooLarge):
                continue
            if abs(y_end - yg) <= max(config.tol * 1e3, 1e-6) * max(1.0, abs(yg)):
                ok = True
                break
        fi = model.first_integral_log((xg, yg) if base == 0 else (yg, xg)) \
            if model.is_nodal else None
        records.append({"x": xg, "y": yg, "reached": ok, "first_integral_log": fi})
        reached += ok
    return {"fraction": reached / len(records) if records else 1.0,
            "unreached": [(r["x"], r["y"]) for r in records if not r["reached"]],
            "records": records}


def _turn_candidates(ratio, alpha, xg, yg, eps, max_turns):
    """Winding numbers worth trying, best contraction first."""
    if abs(ratio.imag) < 1e-12:
        return [0]
    # |y_start| = |yg| * exp(Re(ratio * shift)); extra turns scale it by
    # exp(-2 pi Im(ratio) k), so aim k at the value that lands inside eps
    base = (cmath.log(xg) - math.log(alpha))
    target = math.log(eps / 2) - math.log(abs(yg)) - (ratio * base).real
    k0 = int(round(target / (-2 * math.pi * ratio.imag)))
    ks = []
    for dk in range(max_turns):
        for s in (k0 + dk, k0 - dk):
            if abs(s) <= max_turns and s not in ks:
                ks.append(s)
    return ks or [0]


def sweep_csv(records):
    """CSV rows for a saturation sweep."""
    lines = ["re_x,im_x,re_y,im_y,reached,first_integral_log"]
    for r in records:
        fi = "" if r["first_integral_log"] is None else f"{r['first_integral_log']:.12g}"
        lines.append(f"{r['x'].real:.12g},{r['x'].imag:.12g},"
                     f"{r['y'].real:.12g},{r['y'].imag:.12g},"
                     f"{int(r['reached'])},{fi}")
    return "\n".join(lines) + "\n"
