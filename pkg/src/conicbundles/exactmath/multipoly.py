"""Sparse multivariate polynomials with exact rational coefficients.

A MultiPoly is immutable after construction: a fixed ordered tuple of
variable names plus a map from exponent vectors to nonzero coefficients.
Symbolic parameters are handled by enlarging the variable set, so the
same class serves both concrete binary forms and generic-coefficient
identities.  Coefficients are Fractions by default; any field-like
value (supporting +, -, *, bool) works for the generic ring operations,
which is how first-order jets slot in for derivative computations.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping


class NotDivisible(ArithmeticError):
    pass


def _coerce(c):
    if isinstance(c, (int, Fraction)):
        return Fraction(c)
    return c


def grlex_key(exps: tuple) -> tuple:
    # graded lexicographic: total degree first, then lex on the exponent vector
    return (sum(exps), exps)


class MultiPoly:
    __slots__ = ("vars", "terms")

    def __init__(self, variables: Iterable[str], terms: Mapping | None = None):
        vs = tuple(variables)
        if len(set(vs)) != len(vs):
            raise ValueError("duplicate variable names: %r" % (vs,))
        object.__setattr__(self, "vars", vs)
        clean = {}
        if terms:
            n = len(vs)
            for exps, c in terms.items():
                e = tuple(exps)
                if len(e) != n:
                    raise ValueError("exponent vector %r has wrong length" % (e,))
                if any(k < 0 for k in e):
                    raise ValueError("negative exponent in %r" % (e,))
                c = _coerce(c)
                if c:
                    if e in clean:
                        c = clean[e] + c
                        if c:
                            clean[e] = c
                        else:
                            del clean[e]
                    else:
                        clean[e] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("MultiPoly is immutable")

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls, variables) -> "MultiPoly":
        return cls(variables, {})

    @classmethod
    def const(cls, variables, c) -> "MultiPoly":
        vs = tuple(variables)
        return cls(vs, {(0,) * len(vs): c})

    @classmethod
    def monomial(cls, variables, exps, c=1) -> "MultiPoly":
        return cls(variables, {tuple(exps): c})

    @classmethod
    def variable(cls, variables, name: str) -> "MultiPoly":
        vs = tuple(variables)
        i = vs.index(name)
        e = [0] * len(vs)
        e[i] = 1
        return cls(vs, {tuple(e): 1})

    @classmethod
    def from_univariate(cls, variables, var: str, coeffs) -> "MultiPoly":
        """coeffs[k] is the coefficient of var**k."""
        vs = tuple(variables)
        i = vs.index(var)
        terms = {}
        for k, c in enumerate(coeffs):
            if c:
                e = [0] * len(vs)
                e[i] = k
                terms[tuple(e)] = c
        return cls(vs, terms)

    # -- predicates and access ---------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError("not a constant: %s" % self)
        return next(iter(self.terms.values()))

    def coeff(self, exps):
        return self.terms.get(tuple(exps), Fraction(0))

    def total_degree(self) -> int:
        # degree of the zero polynomial is -1 by convention
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def min_total_degree(self) -> int:
        """Order of vanishing at the origin; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return min(sum(e) for e in self.terms)

    def degree_in(self, var: str) -> int:
        i = self.vars.index(var)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def used_vars(self) -> set:
        out = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    out.add(self.vars[i])
        return out

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def leading_term_grlex(self):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=grlex_key)
        return e, self.terms[e]

    # -- arithmetic ---------------------------------------------------

    def _check_same_vars(self, other: "MultiPoly"):
        if self.vars != other.vars:
            raise ValueError(
                "variable mismatch: %r vs %r" % (self.vars, other.vars))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(self.vars, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __neg__(self):
        return MultiPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(self.vars, other)
        self._check_same_vars(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s:
                    out[e] = s
                else:
                    del out[e]
        p = MultiPoly.__new__(MultiPoly)
        object.__setattr__(p, "vars", self.vars)
        object.__setattr__(p, "terms", out)
        return p

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.const(self.vars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, MultiPoly):
            self._check_same_vars(other)
            out = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    c = c1 * c2
                    s = out.get(e)
                    if s is None:
                        if c:
                            out[e] = c
                    else:
                        s = s + c
                        if s:
                            out[e] = s
                        else:
                            del out[e]
            p = MultiPoly.__new__(MultiPoly)
            object.__setattr__(p, "vars", self.vars)
            object.__setattr__(p, "terms", out)
            return p
        c0 = _coerce(other)
        if not c0:
            return MultiPoly.zero(self.vars)
        return MultiPoly(self.vars, {e: c * c0 for e, c in self.terms.items()})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.const(self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    # -- calculus and structure ----------------------------------------

    def derivative(self, var: str) -> "MultiPoly":
        i = self.vars.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return MultiPoly(self.vars, out)

    def coefficient_of_power(self, var: str, k: int) -> "MultiPoly":
        """The coefficient of var**k, as a polynomial in the same ring
        (with the var-exponent zeroed out)."""
        i = self.vars.index(var)
        out = {}
        for e, c in self.terms.items():
            if e[i] == k:
                e2 = list(e)
                e2[i] = 0
                out[tuple(e2)] = c
        return MultiPoly(self.vars, out)

    def align(self, new_variables) -> "MultiPoly":
        """Embed into a ring with more variables (ordering may change)."""
        nv = tuple(new_variables)
        pos = []
        for v in self.vars:
            if v not in nv:
                raise ValueError("variable %s missing from target ring" % v)
            pos.append(nv.index(v))
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * len(nv)
            for i, k in enumerate(e):
                e2[pos[i]] = k
            out[tuple(e2)] = c
        return MultiPoly(nv, out)

    def drop_unused(self, keep=()) -> "MultiPoly":
        """Shrink the ring to the variables actually appearing (plus
        any listed in keep), preserving the original order."""
        used = self.used_vars() | set(keep)
        nv = tuple(v for v in self.vars if v in used)
        idx = [self.vars.index(v) for v in nv]
        out = {}
        for e, c in self.terms.items():
            out[tuple(e[i] for i in idx)] = c
        return MultiPoly(nv, out)

    def substitute(self, mapping: Mapping) -> "MultiPoly":
        """Substitute polynomials (or scalars) for variables.

        Values must all live in one common ring; unmapped variables must
        exist in that ring and pass through unchanged.  For rational
        function substitution see exactmath.ratfunc.substitute.
        """
        target = None
        vals = {}
        for name, v in mapping.items():
            if name not in self.vars:
                raise ValueError("substituting unknown variable %s" % name)
            if isinstance(v, MultiPoly):
                if target is None:
                    target = v.vars
                elif v.vars != target:
                    raise ValueError("substitution images live in different rings")
            vals[name] = v
        if target is None:
            target = self.vars
        tgt_index = {v: i for i, v in enumerate(target)}
        images = []
        for v in self.vars:
            if v in vals:
                img = vals[v]
                if not isinstance(img, MultiPoly):
                    img = MultiPoly.const(target, img)
            else:
                if v not in tgt_index:
                    raise ValueError(
                        "unmapped variable %s missing from target ring" % v)
                img = MultiPoly.variable(target, v)
            images.append(img)
        acc = MultiPoly.zero(target)
        one = MultiPoly.const(target, 1)
        pw_cache = [dict() for _ in images]
        for e, c in self.terms.items():
            m = one * c
            for i, k in enumerate(e):
                if k:
                    pk = pw_cache[i].get(k)
                    if pk is None:
                        pk = images[i] ** k
                        pw_cache[i][k] = pk
                    m = m * pk
            acc = acc + m
        return acc

    def evaluate(self, mapping: Mapping):
        """Evaluate at a point; every used variable must be assigned."""
        vals = []
        for v in self.vars:
            vals.append(_coerce(mapping.get(v, 0)) if v in mapping else None)
        acc = Fraction(0)
        for e, c in self.terms.items():
            m = c
            for i, k in enumerate(e):
                if k:
                    if vals[i] is None:
                        raise ValueError("no value for variable %s" % self.vars[i])
                    m = m * vals[i] ** k
            acc = acc + m
        return acc

    # -- content, normalization, division ------------------------------

    def content(self) -> Fraction:
        """Positive rational c with self/c integer-coefficient primitive;
        content of 0 is 0."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, c.numerator)
            den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive_normalized(self) -> "MultiPoly":
        """Scale to coprime integer coefficients with positive grlex
        leading coefficient.  Zero stays zero."""
        if not self.terms:
            return self
        c = self.content()
        p = self * (1 / c)
        if p.leading_term_grlex()[1] < 0:
            p = -p
        return p

    def monic_grlex(self) -> "MultiPoly":
        if not self.terms:
            return self
        _, lc = self.leading_term_grlex()
        return self * (1 / lc)

    def exact_div(self, divisor: "MultiPoly") -> "MultiPoly":
        """Exact polynomial division; raises NotDivisible otherwise."""
        self._check_same_vars(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return self
        de, dc = divisor.leading_term_grlex()
        rem = self
        q = {}
        while rem.terms:
            re, rc = rem.leading_term_grlex()
            qe = tuple(a - b for a, b in zip(re, de))
            if any(k < 0 for k in qe):
                raise NotDivisible("%s does not divide %s" % (divisor, self))
            qc = rc / dc
            q[qe] = qc
            rem = rem - divisor * MultiPoly.monomial(self.vars, qe, qc)
        return MultiPoly(self.vars, q)

    def divides(self, other: "MultiPoly") -> bool:
        try:
            other.exact_div(self)
            return True
        except NotDivisible:
            return False

    # -- printing -------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        items = sorted(self.terms.items(), key=lambda t: grlex_key(t[0]),
                       reverse=True)
        parts = []
        for e, c in items:
            factors = []
            for i, k in enumerate(e):
                if k == 1:
                    factors.append(self.vars[i])
                elif k > 1:
                    factors.append("%s^%d" % (self.vars[i], k))
            if isinstance(c, Fraction):
                neg = c < 0
                mag = -c if neg else c
                if not factors or mag != 1:
                    factors.insert(0, str(mag))
                body = "*".join(factors)
                if not parts:
                    parts.append("-" + body if neg else body)
                else:
                    parts.append((" - " if neg else " + ") + body)
            else:
                # non-Fraction coefficient ring (jets etc): crude but unambiguous
                factors.insert(0, "(%s)" % (c,))
                body = "*".join(factors)
                parts.append(body if not parts else " + " + body)
        return "".join(parts)

    def __repr__(self):
        return "MultiPoly(%r, %s)" % (list(self.vars), self)


def poly_gcd(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    """GCD via recursive content / primitive-part pseudo-remainders.

    Result is primitive with positive grlex leading coefficient (or a
    monic univariate when only one variable is involved).  Constants
    have gcd 1.
    """
    a._check_same_vars(b)
    if a.is_zero():
        return b.primitive_normalized()
    if b.is_zero():
        return a.primitive_normalized()
    used = sorted(a.used_vars() | b.used_vars(), key=a.vars.index)
    if not used:
        return MultiPoly.const(a.vars, 1)
    g = _gcd_rec(a, b, used)
    return g.align(a.vars).primitive_normalized()


def _as_coeff_polys(p: MultiPoly, main: str, rest: tuple):
    """Split p into coefficients of powers of the main variable, each a
    MultiPoly over rest."""
    i = p.vars.index(main)
    idx = [p.vars.index(v) for v in rest]
    d = p.degree_in(main)
    coeffs = [dict() for _ in range(d + 1)]
    for e, c in p.terms.items():
        coeffs[e[i]][tuple(e[j] for j in idx)] = c
    return [MultiPoly(rest, t) for t in coeffs]


def _rebuild(coeffs, main: str, rest: tuple) -> MultiPoly:
    allv = rest + (main,)
    out = {}
    for k, cp in enumerate(coeffs):
        for e, c in cp.terms.items():
            out[e + (k,)] = c
    return MultiPoly(allv, out)


def _gcd_rec(a: MultiPoly, b: MultiPoly, used) -> MultiPoly:
    vs = tuple(used)
    a = a.drop_unused(keep=vs).align(vs)
    b = b.drop_unused(keep=vs).align(vs)
    if len(vs) == 1:
        return _gcd_uni(a, b, vs[0])
    main = vs[-1]
    rest = vs[:-1]
    ca = _as_coeff_polys(a, main, rest)
    cb = _as_coeff_polys(b, main, rest)
    cont_a = _content_rec(ca, rest)
    cont_b = _content_rec(cb, rest)
    cont = _gcd_rec(cont_a, cont_b, rest)
    pa = _primitive_part(a, ca, cont_a, main, rest)
    pb = _primitive_part(b, cb, cont_b, main, rest)
    g = _primitive_prs(pa, pb, main, rest)
    return (g.align(vs) * cont.align(vs)).primitive_normalized()


def _gcd_uni(a: MultiPoly, b: MultiPoly, var: str) -> MultiPoly:
    fa = _uni_coeffs(a, var)
    fb = _uni_coeffs(b, var)
    while fb:
        fa, fb = fb, _uni_mod(fa, fb)
    inv = 1 / fa[-1]
    return MultiPoly.from_univariate((var,), var, [c * inv for c in fa])


def _uni_coeffs(p: MultiPoly, var: str):
    i = p.vars.index(var)
    d = p.degree_in(var)
    out = [Fraction(0)] * (d + 1)
    for e, c in p.terms.items():
        out[e[i]] += c
    while out and not out[-1]:
        out.pop()
    return out


def _uni_mod(a, b):
    a = list(a)
    db = len(b) - 1
    inv = 1 / b[-1]
    while len(a) - 1 >= db and a:
        k = len(a) - 1 - db
        q = a[-1] * inv
        for j in range(db + 1):
            a[k + j] -= q * b[j]
        a.pop()
        while a and not a[-1]:
            a.pop()
    return a


def _content_rec(coeffs, rest) -> MultiPoly:
    g = MultiPoly.zero(rest)
    for cp in coeffs:
        if cp.is_zero():
            continue
        used = sorted(g.used_vars() | cp.used_vars(), key=rest.index) or [rest[0]]
        if g.is_zero():
            g = cp
        else:
            g = _gcd_rec(g, cp, used).align(rest)
        if g.is_constant():
            return MultiPoly.const(rest, 1)
    return g.primitive_normalized() if not g.is_zero() else MultiPoly.const(rest, 1)


def _primitive_part(p, coeffs, cont, main, rest) -> MultiPoly:
    if cont.is_constant():
        return p.primitive_normalized()
    newc = [c.exact_div(cont) for c in coeffs]
    return _rebuild(newc, main, rest).align(p.vars).primitive_normalized()


def _primitive_prs(a: MultiPoly, b: MultiPoly, main: str, rest) -> MultiPoly:
    # primitive pseudo-remainder sequence in the main variable
    if a.degree_in(main) < b.degree_in(main):
        a, b = b, a
    while True:
        if b.is_zero():
            return a.primitive_normalized()
        r = _pseudo_rem(a, b, main, rest)
        if r.is_zero():
            # b divides a up to content
            cb = _as_coeff_polys(b, main, rest)
            contb = _content_rec(cb, rest)
            return _primitive_part(b, cb, contb, main, rest)
        cr = _as_coeff_polys(r, main, rest)
        contr = _content_rec(cr, rest)
        r = _primitive_part(r, cr, contr, main, rest)
        a, b = b, r
        if b.degree_in(main) == 0:
            # coprime in the main variable
            return MultiPoly.const(a.vars, 1)


def _pseudo_rem(a: MultiPoly, b: MultiPoly, main: str, rest) -> MultiPoly:
    da = a.degree_in(main)
    db = b.degree_in(main)
    lb = b.coefficient_of_power(main, db)
    vs = a.vars
    x = MultiPoly.variable(vs, main)
    r = a
    while not r.is_zero() and r.degree_in(main) >= db:
        dr = r.degree_in(main)
        lr = r.coefficient_of_power(main, dr)
        r = r * lb - b * lr * x ** (dr - db)
        if not r.is_zero() and r.degree_in(main) >= dr:
            raise ArithmeticError("pseudo-division failed to reduce degree")
    return r
