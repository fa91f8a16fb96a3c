"""Multivariate polynomials over Q(i, sqrt(d)), canonical and exact.

Exponent tuples map to nonzero field coefficients; the zero polynomial has an
empty term map.  Up to three variables, named x, y, z (aliases x1, x2, x3).
"""
from __future__ import annotations

from fractions import Fraction

from .errors import DivisionByZero, FieldParseError, NotDivisible
from .field import FieldElement

VARNAMES = ("x", "y", "z")


def _grlex_key(exps):
    return (sum(exps), exps)


class Polynomial:
    __slots__ = ("nvars", "d", "terms")

    def __init__(self, nvars, d, terms=None):
        self.nvars = nvars
        self.d = d
        self.terms = {}
        if terms:
            for e, c in terms.items():
                if not c.is_zero():
                    self.terms[tuple(e)] = c

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, nvars, d):
        return cls(nvars, d)

    @classmethod
    def const(cls, c, nvars, d=None):
        if isinstance(c, (int, Fraction)):
            c = FieldElement(d if d is not None else 0, c)
        d = c.d if d is None else d
        return cls(nvars, d, {(0,) * nvars: c})

    @classmethod
    def var(cls, i, nvars, d):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, d, {tuple(e): FieldElement(d, 1)})

    def one_like(self):
        return Polynomial.const(FieldElement(self.d, 1), self.nvars, self.d)

    # -- predicates / views -------------------------------------------
    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(sum(e) == 0 for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, FieldElement(self.d, 0))

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def order(self, variables=None):
        """Minimal (weighted-by-subset) degree of a term; None when zero."""
        if not self.terms:
            return None
        if variables is None:
            return min(sum(e) for e in self.terms)
        return min(sum(e[i] for i in variables) for e in self.terms)

    def degree_in(self, i):
        return max((e[i] for e in self.terms), default=-1)

    def appearing_variables(self):
        out = []
        for i in range(self.nvars):
            if any(e[i] for e in self.terms):
                out.append(i)
        return out

    def leading(self):
        """Graded-lex leading (exponent, coefficient)."""
        if not self.terms:
            raise DivisionByZero("zero polynomial has no leading term")
        e = max(self.terms, key=_grlex_key)
        return e, self.terms[e]

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.const(other, self.nvars, self.d)
        if isinstance(other, FieldElement):
            return Polynomial(self.nvars, self.d, {(0,) * self.nvars: other})
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e)
            s = c if s is None else s + c
            if s.is_zero():
                terms.pop(e, None)
            else:
                terms[e] = s
        return Polynomial(self.nvars, self.d, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.nvars, self.d, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                s = terms.get(e)
                s = c if s is None else s + c
                if s.is_zero():
                    terms.pop(e, None)
                else:
                    terms[e] = s
        return Polynomial(self.nvars, self.d, terms)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = self.one_like()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale(self, c: FieldElement):
        return Polynomial(self.nvars, self.d, {e: v * c for e, v in self.terms.items()})

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- calculus -----------------------------------------------------
    def derivative(self, i):
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                terms[tuple(e2)] = c * e[i]
        return Polynomial(self.nvars, self.d, terms)

    def evaluate(self, point):
        out = FieldElement(self.d, 0)
        for e, c in self.terms.items():
            v = c
            for i, k in enumerate(e):
                for _ in range(k):
                    v = v * point[i]
            out = out + v
        return out

    def substitute(self, images):
        """Full substitution: variable i is replaced by polynomial images[i]."""
        if not self.terms:
            return images[0].__class__.zero(images[0].nvars, self.d) if images else self
        nv = images[0].nvars
        out = Polynomial.zero(nv, self.d)
        for e, c in self.terms.items():
            t = Polynomial.const(c, nv, self.d)
            for i, k in enumerate(e):
                if k:
                    t = t * images[i] ** k
            out = out + t
        return out

    def set_var(self, i, value):
        """Substitute a single variable, keeping the variable count."""
        images = [Polynomial.var(j, self.nvars, self.d) for j in range(self.nvars)]
        if isinstance(value, FieldElement):
            value = Polynomial.const(value, self.nvars, self.d)
        images[i] = value
        return self.substitute(images)

    def shift(self, offsets):
        """Translate: variable i -> variable i + offsets[i]."""
        images = []
        for i in range(self.nvars):
            v = Polynomial.var(i, self.nvars, self.d)
            if not offsets[i].is_zero():
                v = v + Polynomial.const(offsets[i], self.nvars, self.d)
            images.append(v)
        return self.substitute(images)

    def drop_var(self, i):
        """Forget variable i (which must not appear), reducing nvars by one."""
        if any(e[i] for e in self.terms):
            raise NotDivisible(VARNAMES[i])
        terms = {}
        for e, c in self.terms.items():
            terms[e[:i] + e[i + 1:]] = c
        return Polynomial(self.nvars - 1, self.d, terms)

    def homogeneous_part(self, k, variables=None):
        """Terms of (subset-)degree exactly k."""
        vs = range(self.nvars) if variables is None else variables
        terms = {e: c for e, c in self.terms.items() if sum(e[i] for i in vs) == k}
        return Polynomial(self.nvars, self.d, terms)

    def initial_form(self, variables=None):
        r = self.order(variables)
        if r is None:
            return Polynomial.zero(self.nvars, self.d)
        return self.homogeneous_part(r, variables)

    # -- division -----------------------------------------------------
    def div_var(self, i, k=1):
        """Exact division by variable i to the power k."""
        terms = {}
        for e, c in self.terms.items():
            if e[i] < k:
                raise NotDivisible(VARNAMES[i])
            e2 = list(e)
            e2[i] -= k
            terms[tuple(e2)] = c
        return Polynomial(self.nvars, self.d, terms)

    def exact_div(self, q):
        """Exact polynomial division; raises NotDivisible on a remainder."""
        q = self._coerce(q)
        if q.is_zero():
            raise DivisionByZero("division by zero polynomial")
        if q.is_constant():
            inv = q.constant_term().inverse()
            return self.scale(inv)
        rem = self
        quot = Polynomial.zero(self.nvars, self.d)
        le, lc = q.leading()
        lcinv = lc.inverse()
        while not rem.is_zero():
            re, rc = rem.leading()
            step = tuple(a - b for a, b in zip(re, le))
            if any(s < 0 for s in step):
                raise NotDivisible(repr(q))
            t = Polynomial(self.nvars, self.d, {step: rc * lcinv})
            quot = quot + t
            rem = rem - t * q
        return quot

    def divisible_by(self, q):
        try:
            self.exact_div(q)
            return True
        except (NotDivisible, DivisionByZero):
            return False

    def monic(self):
        if self.is_zero():
            return self
        _, lc = self.leading()
        return self.scale(lc.inverse())

    # -- univariate helpers -------------------------------------------
    def univariate_coefficients(self, i):
        """Dense coefficient list in variable i (entries are field elements).

        Requires the polynomial to involve only variable i.
        """
        for e in self.terms:
            if any(e[j] for j in range(self.nvars) if j != i):
                raise FieldParseError("polynomial is not univariate")
        n = self.degree_in(i)
        out = [FieldElement(self.d, 0)] * (n + 1)
        for e, c in self.terms.items():
            out[e[i]] = c
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=_grlex_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                f"{VARNAMES[i]}^{k}" if k > 1 else VARNAMES[i]
                for i, k in enumerate(e) if k
            )
            cs = str(c)
            if "+" in cs or "-" in cs[1:] or "*" in cs:
                cs = f"({cs})"
            if mono:
                parts.append(f"{cs}*{mono}" if cs != "1" else mono)
            else:
                parts.append(cs)
        return " + ".join(parts)

    __repr__ = __str__


# ---------------------------------------------------------------------------
# GCD (content / primitive-part recursion with primitive pseudo-remainders)
# ---------------------------------------------------------------------------

def _coeff_in_var(p, x, k):
    """Coefficient of x^k as a polynomial with x-degree zero."""
    terms = {}
    for e, c in p.terms.items():
        if e[x] == k:
            e2 = list(e)
            e2[x] = 0
            terms[tuple(e2)] = c
    return Polynomial(p.nvars, p.d, terms)


def _pseudo_rem(p, q, x):
    dp, dq = p.degree_in(x), q.degree_in(x)
    lq = _coeff_in_var(q, x, dq)
    r = p
    while not r.is_zero() and r.degree_in(x) >= dq:
        dr = r.degree_in(x)
        lr = _coeff_in_var(r, x, dr)
        xpow = Polynomial.var(x, p.nvars, p.d) ** (dr - dq)
        r = r * lq - q * lr * xpow
    return r


def poly_gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    if p.is_zero():
        return q.monic()
    if q.is_zero():
        return p.monic()
    vs = sorted(set(p.appearing_variables()) | set(q.appearing_variables()))
    if not vs:
        return p.one_like()
    x = vs[0]

    def content(f):
        c = Polynomial.zero(f.nvars, f.d)
        for k in range(f.degree_in(x) + 1):
            ck = _coeff_in_var(f, x, k)
            if not ck.is_zero():
                c = poly_gcd(c, ck)
        return c

    cp, cq = content(p), content(q)
    pp, qq = p.exact_div(cp), q.exact_div(cq)
    if pp.degree_in(x) < qq.degree_in(x):
        pp, qq = qq, pp
    while not qq.is_zero():
        r = _pseudo_rem(pp, qq, x)
        if not r.is_zero():
            r = r.exact_div(content(r))
        pp, qq = qq, r
        if not qq.is_zero() and pp.degree_in(x) < qq.degree_in(x):
            pp, qq = qq, pp
    return (poly_gcd(cp, cq) * pp).monic()


def gcd_many(polys):
    out = None
    for p in polys:
        out = p if out is None else poly_gcd(out, p)
        if out is not None and not out.is_zero() and out.is_constant():
            return out.monic()
    return out


# ---------------------------------------------------------------------------
# Parsing: field elements and polynomials from text
# ---------------------------------------------------------------------------

class _Tokens:
    def __init__(self, text):
        self.toks = []
        i = 0
        while i < len(text):
            ch = text[i]
            if ch.isspace():
                i += 1
            elif ch.isdigit():
                j = i
                while j < len(text) and text[j].isdigit():
                    j += 1
                self.toks.append(("num", int(text[i:j])))
                i = j
            elif ch.isalpha():
                j = i
                while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                self.toks.append(("name", text[i:j]))
                i = j
            elif text[i:i + 2] == "**":
                self.toks.append(("op", "^"))
                i += 2
            elif ch in "+-*/^()":
                self.toks.append(("op", ch))
                i += 1
            else:
                raise FieldParseError(f"unexpected character {ch!r}")
        self.pos = 0

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None)

    def next(self):
        t = self.peek()
        self.pos += 1
        return t

    def expect(self, kind, value=None):
        k, v = self.next()
        if k != kind or (value is not None and v != value):
            raise FieldParseError(f"expected {value or kind}, got {v!r}")
        return v


def parse_polynomial(text, nvars, d, varnames=None) -> Polynomial:
    names = {}
    for i, n in enumerate((varnames or VARNAMES)[:nvars]):
        names[n] = i
        names[f"x{i + 1}"] = i
    toks = _Tokens(text)

    def atom():
        k, v = toks.next()
        if k == "op" and v == "(":
            e = expr()
            toks.expect("op", ")")
            return e
        if k == "op" and v == "-":
            return -atom()
        if k == "op" and v == "+":
            return atom()
        if k == "num":
            return Polynomial.const(Fraction(v), nvars, d)
        if k == "name":
            if v == "i":
                return Polynomial.const(FieldElement(d, 0, 1), nvars, d)
            if v == "sqrt":
                toks.expect("op", "(")
                kk, arg = toks.next()
                if kk != "num":
                    raise FieldParseError("sqrt() takes an integer literal")
                toks.expect("op", ")")
                if arg != d and arg != 0:
                    raise FieldParseError(f"sqrt({arg}) is outside Q(i, sqrt({d}))")
                return Polynomial.const(FieldElement.sqrt_d(d) if arg else FieldElement(d, 0), nvars, d)
            if v in names:
                return Polynomial.var(names[v], nvars, d)
            raise FieldParseError(f"unknown symbol {v!r}")
        raise FieldParseError(f"unexpected token {v!r}")

    def power():
        base = atom()
        k, v = toks.peek()
        if k == "op" and v == "^":
            toks.next()
            kk, n = toks.next()
            neg = False
            if kk == "op" and n == "-":
                neg = True
                kk, n = toks.next()
            if kk != "num":
                raise FieldParseError("exponent must be an integer literal")
            if neg:
                if not base.is_constant():
                    raise FieldParseError("negative exponents only on constants")
                return Polynomial.const(base.constant_term() ** (-n), nvars, d)
            return base ** n
        return base

    def term():
        out = power()
        while True:
            k, v = toks.peek()
            if k == "op" and v == "*":
                toks.next()
                out = out * power()
            elif k == "op" and v == "/":
                toks.next()
                rhs = power()
                if not rhs.is_constant():
                    raise FieldParseError("division only by constants")
                out = out.scale(rhs.constant_term().inverse())
            else:
                return out

    def expr():
        out = term()
        while True:
            k, v = toks.peek()
            if k == "op" and v in "+-":
                toks.next()
                rhs = term()
                out = out + rhs if v == "+" else out - rhs
            else:
                return out

    out = expr()
    if toks.peek() != (None, None):
        raise FieldParseError(f"trailing input near {toks.peek()[1]!r}")
    return out


def parse_element(text, d) -> FieldElement:
    p = parse_polynomial(text, 1, d, varnames=("x",))
    if not p.is_constant():
        raise FieldParseError("expected a constant expression")
    return p.constant_term()
