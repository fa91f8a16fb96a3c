"""Reduction of plane foliation germs by iterated point blow-ups.

Terminal points are the Seidenberg-simple ones (two nonzero eigenvalues of
the dual vector field whose ratio is not a positive rational) together with
saddle-nodes, which are kept as flagged terminal defects.  The tree records
exceptional components with self-intersections, per-leaf residues, nodal
separatrices and the Camacho-Sad sum audit.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dfield

from .classify import (PointClassification, PointKind, SaddleNodal,
                       classify_saddle_nodal, camacho_sad_index,
                       linear_part_matrix, normalized_coefficients)
from .errors import (DepthExceeded, DimensionError, IncompleteTree,
                     NonRationalEigenvalues, NonRationalSingularPoint,
                     SaddleNodeUnsupported, ZeroForm)
from .field import (FieldElement, RatioClass, classify_ratio, field_sqrt,
                    nonresonant)
from .forms import OneForm, invariant_axis, saturate, singular_at_origin
from .poly import Polynomial, poly_gcd
from .solve import univariate_roots


@dataclass
class Leaf:
    path: tuple
    form: OneForm
    kind: PointKind
    residues: tuple | None          # (alpha_x, alpha_y) attached to the local axes
    axes: dict                      # local variable -> exceptional component id
    saddle_nodal: SaddleNodal | None = None
    notes: tuple = ()


@dataclass
class ReductionTree:
    root: OneForm
    leaves: list = dfield(default_factory=list)
    components: dict = dfield(default_factory=dict)  # id -> {"self_intersection", "invariant"}
    blowups: int = 0
    steps: list = dfield(default_factory=list)

    def is_generalized_curve(self) -> bool:
        """No saddle-node appears in the reduction."""
        return all(l.kind is not PointKind.SADDLE_NODE for l in self.leaves)

    def nodal_separators(self):
        """Leaves conjugated to x dy - lam y dx with lam positive irrational."""
        out = []
        for l in self.leaves:
            if l.residues is None:
                continue
            ax, ay = l.residues
            if ax is None or ay is None or ay.is_zero():
                continue
            if classify_ratio(ax, ay) is RatioClass.NEGATIVE_IRRATIONAL:
                lam = -ax / ay
                if lam.reality_sign().value != "Positive":
                    lam = -ay / ax
                out.append({"path": l.path, "lambda": lam, "axes": dict(l.axes)})
        return out

    def cs_sum_audit(self):
        """Per-component check: sum of indices = self-intersection."""
        report = {}
        for cid, comp in sorted(self.components.items()):
            if not comp["invariant"]:
                continue
            total = FieldElement(self.root.d, 0)
            points = []
            for l in self.leaves:
                branch = None
                for var, c in l.axes.items():
                    if c == cid:
                        branch = var
                if branch is None:
                    continue
                if l.kind is PointKind.SADDLE_NODE:
                    raise SaddleNodeUnsupported(
                        f"saddle-node on component {cid}; index undefined")
                if l.kind is PointKind.NON_SINGULAR_NC or l.residues is None:
                    continue
                idx = camacho_sad_index(l.residues, branch)
                total = total + idx
                points.append({"path": l.path, "index": idx})
            report[cid] = {
                "sum": total,
                "self_intersection": comp["self_intersection"],
                "points": points,
                "ok": total == FieldElement(self.root.d, comp["self_intersection"]),
            }
        return report

    def to_dot(self):
        lines = ["digraph reduction {", '  node [shape=box, fontname="monospace"];']
        lines.append('  root [label="root"];')
        names = {(): "root"}
        order = sorted({l.path[:k] for l in self.leaves for k in range(len(l.path) + 1)})
        for p in order:
            if not p:
                continue
            names[p] = "n" + "_".join(s.replace("@", "_").replace(":", "_").replace("=", "_")
                                      .replace("-", "m").replace("/", "_") for s in p)
        for l in self.leaves:
            for k in range(1, len(l.path) + 1):
                pass
        drawn = set()
        for l in self.leaves:
            for k in range(1, len(l.path) + 1):
                a, b = l.path[:k - 1], l.path[:k]
                if (a, b) in drawn:
                    continue
                drawn.add((a, b))
                label = b[-1]
                extra = ""
                if b == l.path:
                    extra = f'\\n{l.kind.value}'
                    if l.residues and l.residues[0] is not None:
                        extra += f"\\n({l.residues[0]}, {l.residues[1]})"
                lines.append(f'  {names[b]} [label="{label}{extra}"];')
                lines.append(f"  {names[a]} -> {names[b]};")
        lines.append("}")
        return "\n".join(lines)


def dual_eigenvalues(form: OneForm):
    """Eigenvalues of the linear part of the dual field, as field elements.

    Returns (e1, e2, axis_attached) where axis_attached is True when e1
    belongs to the x-direction and e2 to the y-direction.
    """
    m = linear_part_matrix(form)
    if m[0][1].is_zero() or m[1][0].is_zero():
        return m[0][0], m[1][1], True
    tr = m[0][0] + m[1][1]
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    s = field_sqrt(tr * tr - 4 * det)
    if s is None:
        raise NonRationalEigenvalues(
            "eigenvalues leave the field; enlarge the discriminant")
    two = FieldElement(form.d, 2)
    return (tr + s) / two, (tr - s) / two, False


def leaf_residues(form: OneForm):
    """Axis-attached residue pair (alpha_x, alpha_y) of a terminal germ.

    For an invariant axis the matrix of the dual field is triangular and the
    residues are (M[1][1], -M[0][0]); with both axes invariant this agrees
    with the logarithmic residues.
    """
    m = linear_part_matrix(form)
    if m[0][1].is_zero() or m[1][0].is_zero():
        return m[1][1], -m[0][0], True
    e1, e2, _ = dual_eigenvalues(form)
    return e2, -e1, False


def _restrict_to_line(p: Polynomial, var, other):
    zero = FieldElement(p.d, 0)
    return p.set_var(var, zero)


def singular_points_on_exceptional(form: OneForm, exc_var):
    """Roots t with (0, t) (exc_var = first coord) singular for the form.

    Returns (roots, leftover) where leftover is a nonsplit factor, if any.
    """
    other = 1 - exc_var
    cs = form.plain_coefficients()
    zero = FieldElement(form.d, 0)
    r0 = cs[0].set_var(exc_var, zero)
    r1 = cs[1].set_var(exc_var, zero)
    if r0.is_zero() and r1.is_zero():
        raise ZeroForm("form vanishes on the exceptional line; not saturated")
    if r0.is_zero():
        g = r1
    elif r1.is_zero():
        g = r0
    else:
        g = poly_gcd(r0, r1)
    if g.is_constant():
        return [], []
    coeffs = g.univariate_coefficients(other)
    return univariate_roots(coeffs)


_CHARTS_2D = (
    # (label, direction var): chart x: (x, y) = (x', x' y'); chart y: (x, y) = (x' y', y')
    ("x", 0),
    ("y", 1),
)


def blow_up_plane(form: OneForm):
    """One point blow-up of a plane germ at the origin.

    Returns (dicritical, [(label, transformed form, exc_var, r)]).
    """
    from .blowup import CenterSpec, chart_substitution, detect_dicritical, transform_form
    center = CenterSpec.origin(2, form.d)
    info = detect_dicritical(form, center)
    charts = []
    for label, j in _CHARTS_2D:
        subst = chart_substitution(2, form.d, center, j)
        newform, r = transform_form(form, subst, j)
        charts.append((label, newform, j, r))
    return info["dicritical"], charts


def reduce(form: OneForm, max_depth: int = 24) -> ReductionTree:
    """Full reduction of singularities of a plane germ at the origin."""
    if form.nvars != 2:
        raise DimensionError("reduction is implemented for plane germs")
    sat, _ = saturate(form)
    tree = ReductionTree(root=sat)
    counter = [0]
    _reduce_node(sat, {}, (), tree, counter, max_depth)
    return tree


def _terminal_kind(form, axes):
    """Classify a germ already known to be terminal (or decide it is not).

    Returns (is_terminal, Leaf fields) following the eigenvalue criterion.
    """
    if not singular_at_origin(form):
        return True, (PointKind.NON_SINGULAR_NC, None, None, ())
    m = linear_part_matrix(form)
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    tr = m[0][0] + m[1][1]
    if det.is_zero():
        if tr.is_zero():
            return False, None
        return True, (PointKind.SADDLE_NODE, None, None, ())
    e1, e2, attached = dual_eigenvalues(form)
    ratio = classify_ratio(e1, e2)
    if ratio is RatioClass.POSITIVE_RATIONAL:
        return False, None
    ax, ay, axis_attached = leaf_residues(form)
    res = (ax, ay)
    verdict, witness = nonresonant(res)
    inv = [v for v in (0, 1) if invariant_axis(form, v)]
    on_divisor = sum(1 for v in inv if v in axes)
    notes = ()
    if not axis_attached:
        notes = ("residues not attached to coordinate axes",)
    if verdict == "nonresonant":
        kind = (PointKind.SIMPLE_CH_CORNER if len(inv) == 2 and on_divisor == 2
                else PointKind.SIMPLE_CH_TRACE)
    else:
        kind = PointKind.SEIDENBERG_SIMPLE_RESONANT
    sn = classify_saddle_nodal(res)
    return True, (kind, res, sn, notes)


def _reduce_node(form, axes, path, tree, counter, max_depth):
    terminal, data = _terminal_kind(form, axes)
    if terminal:
        kind, res, sn, notes = data
        tree.leaves.append(Leaf(path=path, form=form, kind=kind, residues=res,
                                axes=dict(axes), saddle_nodal=sn, notes=notes))
        return
    if counter[0] >= max_depth:
        raise DepthExceeded(f"more than {max_depth} blow-ups required")
    counter[0] += 1
    tree.blowups += 1
    comp_id = f"E{tree.blowups}"
    dicritical, charts = blow_up_plane(form)
    for cid in set(axes.values()):
        tree.components[cid]["self_intersection"] -= 1
    tree.components[comp_id] = {"self_intersection": -1, "invariant": not dicritical}
    tree.steps.append({"path": path, "component": comp_id, "dicritical": dicritical})
    for label, newform, exc, _r in charts:
        other = 1 - exc
        if label == "x":
            roots, leftover = singular_points_on_exceptional(newform, exc)
            if leftover:
                raise NonRationalSingularPoint(leftover)
            for t, _mult in sorted(roots, key=lambda rm: str(rm[0])):
                shifted = [c.shift([FieldElement(form.d, 0), t] if exc == 0
                                   else [t, FieldElement(form.d, 0)])
                           for c in newform.plain_coefficients()]
                child = saturate(OneForm(shifted))[0]
                child_axes = {exc: comp_id}
                if t.is_zero() and other in axes:
                    child_axes[other] = axes[other]
                _reduce_node(child, child_axes, path + (f"{label}:{t}",),
                             tree, counter, max_depth)
        else:
            # the second chart only contributes its origin (vertical direction)
            if singular_at_origin(newform):
                child_axes = {exc: comp_id}
                if other in axes:
                    child_axes[other] = axes[other]
                _reduce_node(newform, child_axes, path + (f"{label}:0",),
                             tree, counter, max_depth)


def first_blowup_index_sum(form: OneForm):
    """Blow up once and sum the Camacho-Sad indices along the exceptional.

    Every singular point of the transform must be terminal; the sum is -1 for
    a non-dicritical blow-up.
    """
    sat, _ = saturate(form)
    dicritical, charts = blow_up_plane(sat)
    total = FieldElement(form.d, 0)
    points = []
    for label, newform, exc, _r in charts:
        jobs = []
        if label == "x":
            roots, leftover = singular_points_on_exceptional(newform, exc)
            if leftover:
                raise NonRationalSingularPoint(leftover)
            for t, _m in roots:
                shifted = [c.shift([FieldElement(form.d, 0), t])
                           for c in newform.plain_coefficients()]
                jobs.append((t, saturate(OneForm(shifted))[0]))
        else:
            if singular_at_origin(newform):
                jobs.append((None, newform))
        for t, germ in jobs:
            terminal, data = _terminal_kind(germ, {exc: "E1"})
            if not terminal:
                raise SaddleNodeUnsupported("non-terminal point after one blow-up")
            kind, res, _sn, _notes = data
            if kind is PointKind.SADDLE_NODE:
                raise SaddleNodeUnsupported("saddle-node after one blow-up")
            if res is None:
                continue
            idx = camacho_sad_index(res, exc)
            total = total + idx
            points.append({"chart": label, "point": t, "index": idx})
    return {"dicritical": dicritical, "sum": total, "points": points}


def verdict_generalized_curve(tree: ReductionTree):
    """GeneralizedCurve, or SaddleNodeFound with the offending leaf path."""
    if not tree.leaves:
        raise IncompleteTree("reduction tree has no leaves")
    for l in tree.leaves:
        if l.kind is PointKind.SADDLE_NODE:
            return {"verdict": "SaddleNodeFound", "path": l.path}
    return {"verdict": "GeneralizedCurve", "path": None}
