"""Coordinate blow-ups of germs: point and axis centers, chart atlases.

Charts are indexed by their path of direction labels from the root germ.
A point blow-up in direction j uses x_j = x'_j, x_i = (x'_i + mu_i) x'_j;
an axis blow-up {x_a = x_b = 0} only mixes the two center variables.
"""
from __future__ import annotations

from .errors import (CenterNotInvariant, CenterNotSingularAdapted,
                     DimensionError, ScriptChartMissing)
from .field import FieldElement
from .forms import OneForm, invariant_axis, log_coefficient, saturate, singular_at_origin
from .poly import Polynomial, VARNAMES


class CenterSpec:
    """A blow-up center: a point (given by coordinates) or a coordinate axis."""

    def __init__(self, kind, point=None, axis_vars=None):
        if kind not in ("point", "curve"):
            raise DimensionError(f"unknown center kind {kind!r}")
        self.kind = kind
        self.point = tuple(point) if point is not None else None
        self.axis_vars = tuple(sorted(axis_vars)) if axis_vars is not None else None
        if kind == "point" and self.point is None:
            raise DimensionError("point center needs coordinates")
        if kind == "curve" and (self.axis_vars is None or len(self.axis_vars) != 2):
            raise DimensionError("axis center needs exactly two vanishing variables")

    @classmethod
    def origin(cls, nvars, d):
        return cls("point", point=[FieldElement(d, 0)] * nvars)

    @classmethod
    def axis(cls, a, b):
        return cls("curve", axis_vars=(a, b))

    def variables(self, nvars):
        """Variables participating in the blow-up."""
        return tuple(range(nvars)) if self.kind == "point" else self.axis_vars

    def describe(self):
        if self.kind == "point":
            return {"kind": "point", "coords": [str(c) for c in self.point]}
        return {"kind": "curve", "axis": [VARNAMES[v] for v in self.axis_vars]}


class Component:
    """An exceptional divisor component created by one blow-up."""

    def __init__(self, comp_id, center_kind, invariant, nvars):
        self.id = comp_id
        self.center_kind = center_kind
        self.compact = center_kind == "point"
        self.invariant = invariant
        self.self_intersection = -1 if (center_kind == "point" and nvars == 2) else None


class Chart:
    def __init__(self, path, form, divisor, exceptional_var=None, subst=None, r=None):
        self.path = tuple(path)
        self.form = form            # saturated plain OneForm in local coordinates
        self.divisor = dict(divisor)  # local variable index -> component id
        self.exceptional_var = exceptional_var
        self.subst = subst          # old coordinates as polynomials in local ones
        self.r = r                  # exceptional multiplicity removed on saturation

    @property
    def nvars(self):
        return self.form.nvars


def center_multiplicity(form: OneForm, center: CenterSpec) -> int:
    """Minimal vanishing order of the plain coefficients along the center."""
    vs = center.variables(form.nvars)
    orders = [c.order(vs) for c in form.plain_coefficients() if not c.is_zero()]
    return min(orders)


def initial_forms(form: OneForm, center: CenterSpec):
    vs = center.variables(form.nvars)
    r = center_multiplicity(form, center)
    return [c.homogeneous_part(r, vs) for c in form.plain_coefficients()]


def contraction_test(form: OneForm, center: CenterSpec) -> bool:
    """True when sum_i x_i A_{i,r} vanishes identically (dicritical signature)."""
    vs = center.variables(form.nvars)
    inis = initial_forms(form, center)
    total = Polynomial.zero(form.nvars, form.d)
    for i in vs:
        total = total + inis[i] * Polynomial.var(i, form.nvars, form.d)
    return total.is_zero()


def chart_substitution(nvars, d, center: CenterSpec, direction, translation=None):
    """Old coordinates as polynomials in chart coordinates.

    direction is the variable whose chart is taken; translation maps other
    participating variables to constants mu (off-origin chart points).
    """
    translation = translation or {}
    vs = center.variables(nvars)
    if direction not in vs:
        raise DimensionError("chart direction must participate in the center")
    xj = Polynomial.var(direction, nvars, d)
    subst = []
    for i in range(nvars):
        if i == direction:
            subst.append(xj)
        elif i in vs:
            xi = Polynomial.var(i, nvars, d)
            mu = translation.get(i)
            if mu is not None and not mu.is_zero():
                xi = xi + Polynomial.const(mu, nvars, d)
            subst.append(xi * xj)
        else:
            subst.append(Polynomial.var(i, nvars, d))
    return subst


def transform_form(form: OneForm, subst, exceptional_var):
    """Pull back a plain form through a substitution and saturate.

    Returns (saturated form, r) where r is the power of the exceptional
    variable removed together with any other common factor.
    """
    nvars, d = form.nvars, form.d
    plain = form.plain_coefficients()
    pulled = []
    for j in range(nvars):
        cj = Polynomial.zero(nvars, d)
        for i in range(nvars):
            dij = subst[i].derivative(j)
            if dij.is_zero():
                continue
            cj = cj + plain[i].substitute(subst) * dij
        pulled.append(cj)
    sat, removed = saturate(OneForm(pulled))
    return sat, removed.degree_in(exceptional_var)


def exceptional_order(form: OneForm, subst, exceptional_var) -> int:
    """Order of the pulled-back (unsaturated) form along the exceptional."""
    plain = form.plain_coefficients()
    best = None
    for j in range(form.nvars):
        cj = Polynomial.zero(form.nvars, form.d)
        for i in range(form.nvars):
            dij = subst[i].derivative(j)
            if not dij.is_zero():
                cj = cj + plain[i].substitute(subst) * dij
        if not cj.is_zero():
            o = cj.order([exceptional_var])
            best = o if best is None else min(best, o)
    return best


def detect_dicritical(form: OneForm, center: CenterSpec):
    """Dual-route dicriticality decision.

    Route one is the contraction test on initial forms; route two checks that
    every chart transform is divisible by the (r+1)-st power of the
    exceptional variable.  The two must agree; disagreement is a bug.
    """
    r = center_multiplicity(form, center)
    by_contraction = contraction_test(form, center)
    vs = center.variables(form.nvars)
    orders = []
    for j in vs:
        subst = chart_substitution(form.nvars, form.d, center, j)
        orders.append(exceptional_order(form, subst, j))
    by_divisibility = all(o >= r + 1 for o in orders)
    if by_contraction != by_divisibility:
        raise AssertionError(
            f"dicriticality routes disagree: contraction={by_contraction}, "
            f"divisibility={by_divisibility} (orders {orders}, r={r})")
    return {"dicritical": by_contraction, "multiplicity": r,
            "exceptional_orders": dict(zip([VARNAMES[j] for j in vs], orders))}


def center_is_invariant(form: OneForm, center: CenterSpec) -> bool:
    """The center must be invariant: tangent directions annihilated on it."""
    if center.kind == "point":
        return True
    a, b = center.axis_vars
    plain = form.plain_coefficients()
    for i in range(form.nvars):
        if i in (a, b):
            continue
        rest = plain[i].set_var(a, FieldElement(form.d, 0)).set_var(b, FieldElement(form.d, 0))
        if not rest.is_zero():
            return False
    return True


def center_in_singular_locus(form: OneForm, center: CenterSpec) -> bool:
    plain = form.plain_coefficients()
    if center.kind == "point":
        return singular_at_origin(form)
    a, b = center.axis_vars
    zero = FieldElement(form.d, 0)
    return all(c.set_var(a, zero).set_var(b, zero).is_zero() for c in plain)


class BlowupAtlas:
    """A tree of charts over a root germ together with its divisor components."""

    def __init__(self, form: OneForm):
        sat, _ = saturate(form)
        self.d = form.d
        self.nvars = form.nvars
        self.root = Chart(path=(), form=sat, divisor={})
        self.charts = {(): self.root}
        self.components = {}
        self.steps = []
        self._next_component = 1

    def chart(self, path):
        path = tuple(path)
        if path not in self.charts:
            raise ScriptChartMissing(f"no chart at path {path}")
        return self.charts[path]

    def leaf_charts(self):
        blown = {tuple(s["chart"]) for s in self.steps}
        return [c for p, c in sorted(self.charts.items()) if p not in blown]

    def blow_up(self, path, center: CenterSpec, translations=None, check_adapted=True):
        """Blow up the origin-centered center inside the chart at `path`.

        translations: list of (direction, {var: mu}) for extra off-origin
        charts; the standard charts (mu = 0) are always produced.
        """
        chart = self.chart(tuple(path))
        form = chart.form
        if center.kind == "point" and any(not c.is_zero() for c in center.point):
            form = OneForm([c.shift(center.point) for c in form.plain_coefficients()])
            form, _ = saturate(form)
        if check_adapted:
            if not center_is_invariant(form, center):
                raise CenterNotInvariant(f"center {center.describe()} is not invariant")
            if not center_in_singular_locus(form, center):
                raise CenterNotSingularAdapted(
                    f"center {center.describe()} is not inside the singular locus")
        info = detect_dicritical(form, center)
        comp_id = f"E{self._next_component}"
        self._next_component += 1
        comp = Component(comp_id, center.kind, invariant=not info["dicritical"], nvars=self.nvars)
        self.components[comp_id] = comp
        # a point blow-up decrements the self-intersection of every 2D
        # exceptional component through the blown point
        if self.nvars == 2 and center.kind == "point":
            for v, cid in chart.divisor.items():
                old = self.components[cid]
                if old.self_intersection is not None:
                    old.self_intersection -= 1
        vs = center.variables(self.nvars)
        jobs = [(j, None) for j in vs]
        for direction, mu in (translations or []):
            jobs.append((direction, mu))
        children = []
        for j, mu in jobs:
            subst = chart_substitution(self.nvars, self.d, center, j, translation=mu)
            newform, r = transform_form(form, subst, j)
            divisor = {j: comp_id}
            for v, cid in chart.divisor.items():
                if v == j:
                    continue  # strict transform sits in the other charts
                if v in vs and mu and v in mu and not mu[v].is_zero():
                    continue  # translated away from the old hyperplane
                divisor[v] = cid
            label = VARNAMES[j]
            if mu:
                label += "@" + ",".join(f"{VARNAMES[v]}={m}" for v, m in sorted(mu.items()))
            child = Chart(chart.path + (label,), newform, divisor,
                          exceptional_var=j, subst=subst, r=r)
            self.charts[child.path] = child
            children.append(child)
        self.steps.append({"chart": chart.path, "center": center.describe(),
                           "component": comp_id, "dicritical": info["dicritical"],
                           "multiplicity": info["multiplicity"]})
        return {"component": comp, "children": children, **info}

    def exceptional_residue(self, chart_path):
        """Residue of the exceptional hyperplane in a chart, when invariant."""
        chart = self.chart(tuple(chart_path))
        v = chart.exceptional_var
        if not invariant_axis(chart.form, v):
            return None
        inv = [w for w in range(chart.nvars) if invariant_axis(chart.form, w)]
        return log_coefficient(chart.form, v, inv).constant_term()


def run_script(form: OneForm, script, translations_key="translations"):
    """Execute a blow-up script: a list of {chart, center, translations}."""
    atlas = BlowupAtlas(form)
    for step in script:
        path = tuple(step.get("chart", ()))
        c = step["center"]
        if isinstance(c, CenterSpec):
            center = c
        elif "point" in c:
            center = CenterSpec("point", point=c["point"])
        else:
            center = CenterSpec("curve", axis_vars=c["axis"])
        atlas.blow_up(path, center, translations=step.get(translations_key))
    return atlas
