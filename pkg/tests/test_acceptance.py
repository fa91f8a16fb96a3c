"""Acceptance gate: twelve criteria, one pass/fail line each."""
from __future__ import annotations

import cmath
import json
import math
import random
import time
from fractions import Fraction

from foliationlab.blowup import BlowupAtlas, CenterSpec, detect_dicritical
from foliationlab.classify import (PlaneFoliation, PointKind,
                                   classify_point, degree_identity_check,
                                   monomial_probe, multiplicity,
                                   restrict_to_exceptional)
from foliationlab.cli import corpus_files, render_report, run_corpus, run_scenario
from foliationlab.errors import SaddleNodeUnsupported
from foliationlab.field import FieldElement, nonresonant
from foliationlab.forms import OneForm, integrability_check
from foliationlab.holonomy import (LinearModel, NumericConfig, circle_path,
                                   lift_path, loop_multiplier,
                                   nodal_first_integral_drift, saturation_probe)
from foliationlab.poly import parse_polynomial
from foliationlab.reduce2d import (first_blowup_index_sum, reduce,
                                   verdict_generalized_curve)


def _verdict(number, text, ok):
    print(f"criterion {number:02d} ({text}): {'PASS' if ok else 'FAIL'}")
    assert ok, f"criterion {number} failed: {text}"


def F(x, d=0):
    return FieldElement(d, Fraction(x))


def _log_form(lams, d=0):
    n = len(lams)
    return OneForm.parse([str(l) for l in lams], nvars=n, d=d, log=[True] * n)


def test_criterion_01_jouanolou():
    t0 = time.time()
    jou = OneForm.parse(["y^2 - z*x", "z^2 - x*y", "x^2 - y*z"], nvars=3, d=0)
    ok = integrability_check(jou)
    nu = multiplicity(jou)
    ok = ok and nu == 2
    rep = detect_dicritical(jou, CenterSpec.origin(3, 0))
    ok = ok and rep["dicritical"]
    w = restrict_to_exceptional(jou)
    ok = ok and w.degree == 1 and w.degree + 1 == nu
    ok = ok and (time.time() - t0) < 1.0
    _verdict(1, "Jouanolou m=1: integrable, nu=2, dicritical, degree 1", ok)


def test_criterion_02_residue_additivity():
    rng = random.Random(23)
    checked = 0
    ok = True
    while checked < 100:
        n = rng.choice((2, 3))
        lams = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n)]
        if any(l == 0 for l in lams):
            continue
        if n == 3 and rng.random() < 0.5:
            a, b = sorted(rng.sample(range(3), 2))
            center, expected = CenterSpec.axis(a, b), lams[a] + lams[b]
        else:
            center, expected = CenterSpec.origin(n, 0), sum(lams)
        if expected == 0:
            continue
        atlas = BlowupAtlas(_log_form(lams))
        atlas.blow_up((), center)
        for chart in atlas.leaf_charts():
            if atlas.exceptional_residue(chart.path) != F(expected):
                ok = False
        checked += 1
    _verdict(2, "residue additivity on 100 random log forms", ok)


def test_criterion_03_pre_simple_corner_stability():
    rng = random.Random(31)
    checked = 0
    failures = 0
    while checked < 200:
        n = rng.choice((2, 3))
        lams = [Fraction(rng.randint(-7, 7), rng.randint(1, 3)) for _ in range(n)]
        if any(l == 0 for l in lams):
            continue
        if n == 3 and rng.random() < 0.4:
            a, b = sorted(rng.sample(range(3), 2))
            center, lam_new = CenterSpec.axis(a, b), lams[a] + lams[b]
        else:
            center, lam_new = CenterSpec.origin(n, 0), sum(lams)
        if lam_new == 0:
            continue
        atlas = BlowupAtlas(_log_form(lams))
        atlas.blow_up((), center)
        for chart in atlas.leaf_charts():
            cls = classify_point(chart.form, divisor_vars=tuple(range(n)))
            corner_kinds = (PointKind.SIMPLE_CH_CORNER,
                            PointKind.PRE_SIMPLE_CH_CORNER,
                            PointKind.SEIDENBERG_SIMPLE_RESONANT)
            if cls.kind not in corner_kinds:
                failures += 1
            elif cls.residues is None or any(r.is_zero() for _, r in cls.residues):
                failures += 1
        checked += 1
    _verdict(3, "200 pre-simple corners stay pre-simple corners", failures == 0)


def test_criterion_04_camacho_sad_sum():
    ok = True
    rep = first_blowup_index_sum(OneForm.parse(["2*y", "3*x"], nvars=2, d=0))
    ok = ok and rep["sum"] == F(-1)
    ok = ok and sorted(str(p["index"]) for p in rep["points"]) == ["-2/5", "-3/5"]
    for name, f in corpus_files():
        s = json.loads(f.read_text())
        if s.get("dimension") != 2 or "form" not in s:
            continue
        w = OneForm.parse(s["form"]["coefficients"], nvars=2, d=s.get("d", 0),
                          log=[bool(b) for b in s["form"].get("log", [])] or None)
        try:
            rep = first_blowup_index_sum(w)
        except SaddleNodeUnsupported:
            continue
        if not rep["dicritical"] and rep["sum"] != F(-1, w.d):
            ok = False
    _verdict(4, "index sum along the exceptional equals -1", ok)


def test_criterion_05_degree_identity():
    ok = True
    # degree 0: the pencil of lines X dY - Y dX
    w0 = PlaneFoliation([parse_polynomial(t, 3, 0) for t in ("-y", "x", "0")])
    ok = ok and w0.degree == 0
    for i in (0, 1):
        rep = degree_identity_check(w0, i)
        ok = ok and rep["identity_holds"] and rep["total"] == 1
    # degree 1: logarithmic triangle with residues (1, 1, -2)
    w1 = PlaneFoliation([parse_polynomial(t, 3, 0)
                         for t in ("y*z", "x*z", "-2*x*y")])
    ok = ok and w1.degree == 1
    for i in range(3):
        rep = degree_identity_check(w1, i)
        ok = ok and rep["identity_holds"] and rep["total"] == 2
    # degree 2: lines X, Y and the conic Z^2 + XY + Y^2, residues (1, 1, -1)
    w2 = PlaneFoliation([parse_polynomial(t, 3, 0)
                         for t in ("y*z^2 + y^3", "x*z^2 - x*y^2", "-2*x*y*z")])
    ok = ok and w2.degree == 2
    for i in (0, 1):
        rep = degree_identity_check(w2, i)
        ok = ok and rep["identity_holds"] and rep["total"] == 3
    _verdict(5, "degree identity d + 1 for d in {0, 1, 2}", ok)


def test_criterion_06_cusp_reduction():
    tree = reduce(OneForm.parse(["-3*x^2", "2*y"], nvars=2, d=0))
    ok = tree.blowups == 3
    ok = ok and verdict_generalized_curve(tree)["verdict"] == "GeneralizedCurve"
    ok = ok and tree.nodal_separators() == []
    audit = tree.cs_sum_audit()
    ok = ok and len(audit) == 3 and all(r["ok"] for r in audit.values())
    _verdict(6, "cusp resolves in 3 blow-ups with clean audits", ok)


def test_criterion_07_saddle_node():
    tree = reduce(OneForm.parse(["y", "-x^2"], nvars=2, d=0))
    ok = tree.blowups == 0
    ok = ok and verdict_generalized_curve(tree)["verdict"] == "SaddleNodeFound"
    probe = monomial_probe((F(1), F(-1)), (1, 1), (0, 1))
    ok = ok and probe["witness"]
    for lams in ((F(2), F(3)), (FieldElement(2, 1), FieldElement(2, 0, 0, 1))):
        for a, b in (((1, 0), (0, 1)), ((1, 1), (0, 1)), ((2, 3), (1, 1))):
            if monomial_probe(lams, a, b)["witness"]:
                ok = False
    _verdict(7, "saddle-node found at depth 0; probe witness for (1, -1)", ok)


def test_criterion_08_nodal_separator():
    tree = reduce(OneForm.parse(["-sqrt(2)*y", "x"], nvars=2, d=2))
    seps = tree.nodal_separators()
    ok = len(seps) == 1 and str(seps[0]["lambda"]) == "sqrt(2)"
    tree2 = reduce(OneForm.parse(["y", "-2*x"], nvars=2, d=0))
    ok = ok and tree2.nodal_separators() == []
    _verdict(8, "sqrt(2) separator detected, rational 2 rejected, exactly", ok)


def test_criterion_09_nonresonance_vs_bruteforce():
    rng = random.Random(47)
    bound = 30
    ok = True
    for _ in range(1000):
        n = rng.choice((2, 3))
        lams = []
        while len(lams) < n:
            l = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
            if l != 0:
                lams.append(l)
        verdict, witness = nonresonant(tuple(F(l) for l in lams))
        # integer-scaled brute force over sum(m) <= bound
        denom = math.lcm(*(l.denominator for l in lams))
        ints = [int(l * denom) for l in lams]
        brute = False
        if n == 2:
            a, b = ints
            for m1 in range(bound + 1):
                for m2 in range(bound + 1 - m1):
                    if (m1 or m2) and m1 * a + m2 * b == 0:
                        brute = True
        else:
            a, b, c = ints
            for m1 in range(bound + 1):
                for m2 in range(bound + 1 - m1):
                    rest = -(m1 * a + m2 * b)
                    if c != 0 and rest % c == 0:
                        m3 = rest // c
                        if 0 <= m3 <= bound - m1 - m2 and (m1 or m2 or m3):
                            brute = True
        if (verdict == "resonant") != brute:
            ok = False
        if verdict == "resonant":
            total = sum(m * l for m, l in zip(witness, lams))
            if total != 0 or not any(witness) or any(m < 0 for m in witness):
                ok = False
    _verdict(9, "non-resonance agrees with brute force on 1000 vectors", ok)


def test_criterion_10_divisor_graph_suite():
    ok = True
    for name in ("jouanolou_m1.json", "log_corner_3d.json"):
        scenario = json.loads(dict(corpus_files())[name].read_text())
        report, code, _ = run_scenario(scenario)
        g = report["analyses"]["graph"]
        ok = ok and code == 0 and g["violations"] == []
        ok = ok and g["nodal_verdict"]["verdict"] == "Holds"
        ok = ok and g["trace_incompatibilities"] == []
    scenario = json.loads(dict(corpus_files())["nodal_counterexample_graph.json"]
                          .read_text())
    report, code, _ = run_scenario(scenario)
    verdict = report["analyses"]["graph"]["nodal_verdict"]
    ok = ok and code == 2 and len(verdict["violations"]) == 1
    scenario = json.loads(dict(corpus_files())["trace_incompatibility_graph.json"]
                          .read_text())
    report, code, _ = run_scenario(scenario)
    ok = ok and code == 2
    ok = ok and len(report["analyses"]["graph"]["trace_incompatibilities"]) == 1
    _verdict(10, "graph validators, closure verdicts and fixtures", ok)


def test_criterion_11_holonomy_suite():
    t0 = time.time()
    ok = True
    model = LinearModel([1.0, 1j], delta=2.0)
    end = lift_path(model, {0: circle_path(0.5, 1)}, 1, 0.5)
    ok = ok and abs(end - 0.5 * loop_multiplier(1j, 1)) < 1e-9
    ok = ok and abs(abs(end / 0.5) - math.exp(-2 * math.pi)) < 1e-9
    nod = LinearModel.nodal([1.0, math.sqrt(2)], 1, delta=4.0)
    drift = nodal_first_integral_drift(nod, {0: circle_path(0.3, 1)}, 1, 0.4)
    ok = ok and drift < 1e-6
    cfg = NumericConfig(step=5e-3, max_length=2000.0)
    saddle = LinearModel([1.0, 1j], delta=50.0)
    grid = [((0.2 + 0.6 * i / 19), (0.2 + 0.6 * j / 19) * cmath.exp(1j * j))
            for i in range(20) for j in range(20)]
    ok = ok and saturation_probe(saddle, 0.5, 0.3, grid, cfg)["fraction"] == 1.0
    r = math.sqrt(2)
    nodal = LinearModel.nodal([1.0, r], 1, delta=50.0)
    grid2 = [((0.1 + 0.8 * i / 19), (0.05 + 0.9 * j / 19) * cmath.exp(0.7j * j))
             for i in range(20) for j in range(20)]
    res = saturation_probe(nodal, 0.5, 0.3, grid2, cfg)
    for rec in res["records"]:
        need = abs(rec["y"]) * (0.5 / abs(rec["x"])) ** (1 / r)
        if rec["reached"] != (need <= 0.3):
            ok = False
    ok = ok and (time.time() - t0) < 60.0
    _verdict(11, "holonomy tolerances met in under 60 s", ok)


def test_criterion_12_determinism():
    ok = True
    for name, f in corpus_files():
        scenario = json.loads(f.read_text())
        a = render_report(run_scenario(scenario)[0])
        b = render_report(run_scenario(scenario)[0])
        ok = ok and a == b
    s1 = run_corpus()[2]
    s2 = run_corpus()[2]
    ok = ok and s1 == s2
    _verdict(12, "byte-identical reports across two corpus runs", ok)
