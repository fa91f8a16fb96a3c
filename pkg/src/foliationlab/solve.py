"""Roots of univariate polynomials with coefficients in Q(i, sqrt(d)).

Linear and quadratic equations are solved directly; higher degrees are
factored through sympy over the matching extension field and only the linear
factors are kept.  The unsplit remainder is returned so callers can decide
whether off-field roots are an error.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import DivisionByZero
from .field import FieldElement, field_sqrt


def _strip(coeffs):
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return coeffs


def univariate_roots(coeffs):
    """All roots inside the field, with multiplicities.

    coeffs is a dense list, constant first.  Returns (roots, leftover) where
    roots is a list of (root, multiplicity) and leftover is the dense
    coefficient list of the unsplit (rootless) factor, [] when fully split.
    """
    coeffs = _strip(list(coeffs))
    if not coeffs:
        raise DivisionByZero("the zero polynomial has every point as a root")
    d = coeffs[0].d
    roots = []
    # zero roots
    k = 0
    while coeffs[k].is_zero():
        k += 1
    if k:
        roots.append((FieldElement(d, 0), k))
        coeffs = coeffs[k:]
    while len(coeffs) > 1:
        n = len(coeffs) - 1
        if n == 1:
            roots.append((-coeffs[0] / coeffs[1], 1))
            coeffs = [coeffs[1]]
            break
        if n == 2:
            a, b, c = coeffs[2], coeffs[1], coeffs[0]
            disc = b * b - 4 * a * c
            s = field_sqrt(disc)
            if s is None:
                break
            r1 = (-b + s) / (2 * a)
            r2 = (-b - s) / (2 * a)
            roots.append((r1, 1))
            if r1 == r2:
                roots[-1] = (r1, 2)
            else:
                roots.append((r2, 1))
            coeffs = [coeffs[2]]
            break
        root = _sympy_linear_roots(coeffs, d)
        if root is None:
            break
        coeffs = _deflate(coeffs, root)
        roots.append((root, 1))
    # merge duplicates
    merged = []
    for r, m in roots:
        for idx, (r2, m2) in enumerate(merged):
            if r == r2:
                merged[idx] = (r2, m2 + m)
                break
        else:
            merged.append((r, m))
    leftover = coeffs if len(coeffs) > 1 else []
    return merged, leftover


def _deflate(coeffs, root):
    """Synthetic division by (t - root)."""
    n = len(coeffs) - 1
    out = [None] * n
    carry = coeffs[n]
    for i in range(n - 1, -1, -1):
        out[i] = carry
        carry = coeffs[i] + carry * root
    if not carry.is_zero():
        raise DivisionByZero("deflation by a non-root")
    return out


def _sympy_linear_roots(coeffs, d):
    """One field root of a dense polynomial, via sympy factorisation."""
    import sympy

    t = sympy.Symbol("t")
    I, S = sympy.I, sympy.sqrt(d) if d else 0

    def to_sympy(c: FieldElement):
        out = sympy.Rational(c.ar.numerator, c.ar.denominator)
        out += I * sympy.Rational(c.ai.numerator, c.ai.denominator)
        if d:
            out += S * sympy.Rational(c.br.numerator, c.br.denominator)
            out += I * S * sympy.Rational(c.bi.numerator, c.bi.denominator)
        return out

    expr = sum(to_sympy(c) * t ** k for k, c in enumerate(coeffs))
    ext = [sympy.I] + ([sympy.sqrt(d)] if d else [])
    try:
        _, factors = sympy.factor_list(expr, t, extension=ext)
    except sympy.polys.polyerrors.PolynomialError:
        return None
    for fac, _ in factors:
        p = sympy.Poly(fac, t)
        if p.degree() == 1:
            r = sympy.simplify(-p.nth(0) / p.nth(1))
            conv = _from_sympy(r, d)
            if conv is not None:
                return conv
    return None


def _from_sympy(expr, d):
    import sympy

    s = sympy.sqrt(d) if d else None
    expr = sympy.expand(expr)
    basis = {1: (0,), sympy.I: (1,)}
    if d:
        basis[s] = (2,)
        basis[sympy.I * s] = (3,)
    comps = [Fraction(0)] * 4
    terms = expr.as_ordered_terms() if expr != 0 else []
    for term in terms:
        coeff, rest = term.as_coeff_Mul()
        if rest in basis:
            idx = basis[rest][0]
        elif rest == 1:
            idx = 0
        else:
            return None
        if not coeff.is_Rational:
            return None
        comps[idx] += Fraction(int(coeff.p), int(coeff.q))
    return FieldElement(d, *comps)
