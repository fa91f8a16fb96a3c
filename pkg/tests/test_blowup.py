"""Blow-up charts, residue bookkeeping and dicriticality."""
from __future__ import annotations

import random
from fractions import Fraction

import pytest

from foliationlab.blowup import (BlowupAtlas, CenterSpec, center_is_invariant,
                                 center_multiplicity, chart_substitution,
                                 detect_dicritical, transform_form)
from foliationlab.errors import DimensionError
from foliationlab.field import FieldElement
from foliationlab.forms import OneForm
from foliationlab.poly import parse_polynomial


def log_form(residue_texts, d=0):
    n = len(residue_texts)
    return OneForm.parse(residue_texts, nvars=n, d=d, log=[True] * n)


def test_chart_substitution_point_center():
    subst = chart_substitution(3, 0, CenterSpec.origin(3, 0), 0)
    assert [str(s) for s in subst] == ["x", "x*y", "x*z"]


def test_chart_substitution_curve_center():
    subst = chart_substitution(3, 0, CenterSpec.axis(0, 2), 2)
    assert [str(s) for s in subst] == ["x*z", "y", "z"]


def test_center_validation():
    with pytest.raises(DimensionError):
        CenterSpec("curve", axis_vars=(0,))
    w = log_form(["2", "3", "-5"])
    assert center_is_invariant(w, CenterSpec.axis(0, 1))
    assert not center_is_invariant(OneForm.parse(["y", "x", "1"], nvars=3, d=0),
                                   CenterSpec.axis(0, 1))


def test_residue_additivity_fixed_example():
    w = log_form(["2", "3", "-4"])
    atlas = BlowupAtlas(w)
    atlas.blow_up((), CenterSpec.origin(3, 0))
    for chart in atlas.leaf_charts():
        assert atlas.exceptional_residue(chart.path) == FieldElement(0, 1)


def test_residue_additivity_random():
    rng = random.Random(11)
    for _ in range(25):
        n = rng.choice((2, 3))
        lams = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n)]
        if any(l == 0 for l in lams):
            continue
        w = log_form([str(l) for l in lams][:n])
        if n == 3 and rng.random() < 0.5:
            a, b = sorted(rng.sample(range(3), 2))
            center = CenterSpec.axis(a, b)
            expected = lams[a] + lams[b]
        else:
            center = CenterSpec.origin(n, 0)
            expected = sum(lams)
        atlas = BlowupAtlas(w)
        atlas.blow_up((), center)
        for chart in atlas.leaf_charts():
            res = atlas.exceptional_residue(chart.path)
            if expected == 0:
                assert res is None or res.is_zero()
            else:
                assert res == FieldElement(0, expected)


def test_multiplicity_and_dicritical_radial():
    pencil = OneForm.parse(["-y", "x"], nvars=2, d=0)
    rep = detect_dicritical(pencil, CenterSpec.origin(2, 0))
    assert rep["dicritical"] and rep["multiplicity"] == 1
    exact = OneForm.parse(["x", "y"], nvars=2, d=0)  # d(x^2 + y^2)/2
    assert not detect_dicritical(exact, CenterSpec.origin(2, 0))["dicritical"]


def test_cusp_first_chart():
    cusp = OneForm.parse(["-3*x^2", "2*y"], nvars=2, d=0)
    assert center_multiplicity(cusp, CenterSpec.origin(2, 0)) == 1
    rep = detect_dicritical(cusp, CenterSpec.origin(2, 0))
    assert not rep["dicritical"]
    subst = chart_substitution(2, 0, CenterSpec.origin(2, 0), 0)
    sat, r = transform_form(cusp, subst, 0)
    assert r >= 1
    # transform of an invariant curve's differential keeps both axes invariant
    from foliationlab.forms import invariant_axis
    assert invariant_axis(sat, 0)


def test_jouanolou_dicritical():
    jou = OneForm.parse(["y^2 - z*x", "z^2 - x*y", "x^2 - y*z"], nvars=3, d=0)
    rep = detect_dicritical(jou, CenterSpec.origin(3, 0))
    assert rep["dicritical"] and rep["multiplicity"] == 2
    atlas = BlowupAtlas(jou)
    atlas.blow_up((), CenterSpec.origin(3, 0))
    comp = atlas.components["E1"]
    assert not comp.invariant and comp.compact


def test_translated_chart_points():
    # blow up and look at the chart centered at t = 1 on the exceptional line
    w = OneForm.parse(["-3*x^2", "2*y"], nvars=2, d=0)
    atlas = BlowupAtlas(w)
    one = FieldElement(0, 1)
    atlas.blow_up((), CenterSpec.origin(2, 0),
                  translations=[(0, {1: one})])
    paths = sorted(c.path for c in atlas.leaf_charts())
    assert any("@" in p[-1] or "=" in p[-1] or ":" in p[-1] or "y" in p[-1]
               for p in paths)
