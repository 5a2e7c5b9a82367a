"""Ternary quadratic forms over Q and over Q(t): exact
diagonalization with a verified congruence certificate, the diagonal
conic model of a bundle's generic fiber, and the degree-8 normal form
that feeds the two-section construction for weights (4,0,0).

Coefficient ordering throughout:
alpha0*y0^2 + alpha1*y0*y1 + alpha2*y0*y2 + alpha3*y1^2
+ alpha4*y1*y2 + alpha5*y2^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

from .bundles import BundleError, ConicBundle, dehomogenize
from .exactmath import MultiPoly, RatFunc, is_square_rat, sqrt_rat
from .exactmath.univariate import as_univariate

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)


class DegeneratePivot(ValueError):
    pass


class MestreError(ValueError):
    pass


@dataclass(frozen=True)
class QuadraticForm3:
    alpha: tuple

    def __post_init__(self):
        if len(self.alpha) != 6:
            raise ValueError("a ternary quadratic form has six coefficients")
        if not any(bool(a) for a in self.alpha):
            raise ValueError("the zero form is not a quadratic form")

    def gram(self):
        """Symmetric matrix G with form(v) = v^T G v; off-diagonal
        entries carry the 1/2."""
        a0, a1, a2, a3, a4, a5 = self.alpha
        return [
            [a0, a1 * HALF, a2 * HALF],
            [a1 * HALF, a3, a4 * HALF],
            [a2 * HALF, a4 * HALF, a5],
        ]

    def value(self, v):
        a0, a1, a2, a3, a4, a5 = self.alpha
        y0, y1, y2 = v
        return (a0 * y0 * y0 + a1 * y0 * y1 + a2 * y0 * y2
                + a3 * y1 * y1 + a4 * y1 * y2 + a5 * y2 * y2)

    def bilinear(self, u, v):
        g = self.gram()
        acc = None
        for r in range(3):
            for s in range(3):
                term = u[r] * g[r][s] * v[s]
                acc = term if acc is None else acc + term
        return acc

    def discriminant(self):
        """Half-Gram determinant; for diagonal forms the product of
        the diagonal entries."""
        a0, a1, a2, a3, a4, a5 = self.alpha
        return (a0 * a3 * a5 - a0 * a4 * a4 * QUARTER
                - a1 * a1 * a5 * QUARTER + a1 * a2 * a4 * QUARTER
                - a2 * a2 * a3 * QUARTER)

    def permuted(self, perm) -> "QuadraticForm3":
        """Form in the re-ordered variables y_perm[0], y_perm[1],
        y_perm[2]."""
        g = self.gram()
        p = perm
        return QuadraticForm3((
            g[p[0]][p[0]],
            g[p[0]][p[1]] + g[p[1]][p[0]],
            g[p[0]][p[2]] + g[p[2]][p[0]],
            g[p[1]][p[1]],
            g[p[1]][p[2]] + g[p[2]][p[1]],
            g[p[2]][p[2]],
        ))


@dataclass(frozen=True)
class DiagonalForm:
    entries: tuple
    basis: tuple  # three column vectors


def diagonalize(q: QuadraticForm3) -> DiagonalForm:
    """Exact orthogonal basis for a form with invertible upper-left
    2x2 block.  The entries are (a0, a0*n, 4*n*disc) with
    n = 4*a0*a3 - a1^2; the congruence is re-verified before
    returning."""
    a0, a1, a2, a3, a4, a5 = q.alpha
    if not a0:
        raise DegeneratePivot("degenerate pivot: the y0^2 coefficient is zero")
    n = a0 * a3 * 4 - a1 * a1
    if not n:
        raise DegeneratePivot(
            "degenerate pivot: the upper-left 2x2 block is singular "
            "(alpha1^2 - 4*alpha0*alpha3 = 0)")
    disc = q.discriminant()
    d0 = a0
    d1 = a0 * n
    d2 = n * disc * 4
    e1 = (a0 - a0 + 1, a0 - a0, a0 - a0)  # (1, 0, 0) in the right ring
    # first entry carries a minus sign: forced by orthogonality to e1
    e2 = (-a1, a0 * 2, a0 - a0)
    e3 = (a1 * a4 - a2 * a3 * 2, a1 * a2 - a0 * a4 * 2, n)
    basis = (e1, e2, e3)
    for i in range(3):
        for j in range(3):
            want = (d0, d1, d2)[i] if i == j else None
            got = q.bilinear(basis[i], basis[j])
            if i == j:
                if got != want:
                    raise AssertionError(
                        "congruence check failed on diagonal entry %d" % i)
            elif bool(got):
                raise AssertionError(
                    "congruence check failed: basis not orthogonal (%d,%d)"
                    % (i, j))
    return DiagonalForm(entries=(d0, d1, d2), basis=basis)


# -- the diagonal conic model of the generic fiber ---------------------

PIVOT_ORDER = tuple(permutations((0, 1, 2)))


@dataclass(frozen=True)
class BrauerPair:
    a: RatFunc
    b: RatFunc
    pivot: tuple = (0, 1, 2)
    diagonal: tuple | None = None
    basis: tuple | None = None
    scale: RatFunc | None = None


def generic_fiber_form(cb: ConicBundle) -> QuadraticForm3:
    """Fiber form over the function field of the base: coefficients
    are the dehomogenized sigma forms as rational functions of t."""
    alphas = tuple(RatFunc(dehomogenize(s, cb.params)) for s in cb.sigma)
    return QuadraticForm3(alphas)


def brauer_model(cb: ConicBundle) -> BrauerPair:
    """Diagonal conic a*x^2 + b*y^2 - z^2 = 0 isomorphic over Q(t) to
    the generic fiber: a = -d0/d2, b = -d1/d2 from the diagonalized
    fiber form.  If the standard pivot degenerates, the variables are
    permuted (recorded in the result)."""
    if cb.has_flag("degenerate-discriminant"):
        raise BundleError("generic fiber is degenerate (discriminant is zero)")
    q = generic_fiber_form(cb)
    if not any(bool(q.alpha[k]) for k in (1, 2, 4)):
        # already diagonal: use the entries as they stand
        d0, d1, d2 = q.alpha[0], q.alpha[3], q.alpha[5]
        if all(bool(d) for d in (d0, d1, d2)):
            one = RatFunc.from_const(d2.num.vars, 1)
            zero = one - one
            return BrauerPair(
                a=-(d0 / d2), b=-(d1 / d2), pivot=(0, 1, 2),
                diagonal=(d0, d1, d2),
                basis=((one, zero, zero), (zero, one, zero),
                       (zero, zero, one)),
                scale=-(one / d2))
    last_err = None
    for perm in PIVOT_ORDER:
        try:
            diag = diagonalize(q.permuted(perm))
        except DegeneratePivot as exc:
            last_err = exc
            continue
        d0, d1, d2 = diag.entries
        if not bool(d2):
            last_err = DegeneratePivot(
                "degenerate pivot: third diagonal entry vanishes")
            continue
        a = -(d0 / d2)
        b = -(d1 / d2)
        scale = -(RatFunc.from_const(d2.num.vars, 1) / d2) \
            if isinstance(d2, RatFunc) else None
        return BrauerPair(a=a, b=b, pivot=perm, diagonal=diag.entries,
                          basis=diag.basis, scale=scale)
    raise DegeneratePivot(
        "cannot diagonalize generically: every variable ordering hits a "
        "degenerate pivot (%s)" % last_err)


# -- degree-8 normal form for weights (4, 0, 0) -------------------------

@dataclass(frozen=True)
class MestreModel:
    T: MultiPoly
    c: Fraction
    shift: Fraction
    xi: Fraction
    B: Fraction
    A: Fraction
    P: MultiPoly


@dataclass(frozen=True)
class MestreFailure:
    reason: str
    B: Fraction


def _scalar_field_coeffs(cb: ConicBundle):
    """Sigma data of a (4,0,0) bundle as scalars: Fractions for a
    numeric bundle, RatFuncs over the parameters otherwise."""
    if cb.weights.tuple != (4, 0, 0):
        raise MestreError("normal form needs weights (4,0,0), got %s"
                          % cb.weights)
    out = []
    if cb.params:
        pvars = cb.params
        for s in cb.sigma:
            aff = dehomogenize(s, cb.params)
            coeffs = [
                RatFunc(aff.coefficient_of_power("t", k).drop_unused(pvars))
                for k in range(9)
            ]
            out.append(coeffs)
        one = RatFunc.from_const(pvars, 1)
    else:
        for s in cb.sigma:
            aff = dehomogenize(s)
            _, cs = as_univariate(aff, "t")
            cs = cs + [Fraction(0)] * (9 - len(cs))
            out.append(cs)
        one = Fraction(1)
    return out, one


def mestre_core(cb: ConicBundle):
    """Shared pipeline: P = -4*delta/sigma22, its leading coefficient
    B and next coefficient A, and the recentred polynomial
    R(u) = P(-A/(8B) - u); works symbolically when the bundle has
    parameters."""
    coeffs, one = _scalar_field_coeffs(cb)
    s00, s01, s02, s11, s12, s22 = [list(c) for c in coeffs]
    c2 = s22[0]
    if not bool(c2):
        raise MestreError("degenerate pivot: sigma22 = 0")
    disc0 = s12[0] * s12[0] - s11[0] * s22[0] * 4
    if not bool(disc0):
        raise MestreError(
            "degenerate pivot: sigma12^2 - 4*sigma11*sigma22 = 0")
    # delta coefficients in t, degree 8; sigma11/12/22 are constants
    c0, c1 = s11[0], s12[0]
    delta = [None] * 9
    for k in range(9):
        acc = s00[k] * (c0 * c2 - c1 * c1 * QUARTER)
        for i in range(k + 1):
            j = k - i
            if i <= 8 and j <= 8:
                acc = acc + (s01[i] * s02[j] * c1 * QUARTER
                             - s01[i] * s01[j] * c2 * QUARTER
                             - s02[i] * s02[j] * c0 * QUARTER)
        delta[k] = acc
    p_low = [d * (-4) / c2 for d in delta]
    B = p_low[8]
    A = p_low[7]
    if not bool(B):
        raise MestreError("precondition failed: deg P < 8 "
                          "(leading coefficient vanishes)")
    shift = -(A / (B * 8))
    # R(u) = P(shift - u), expanded exactly
    r_low = [one - one] * 9
    pw = [one]  # powers of (shift - u) as coefficient lists in u
    for k in range(9):
        if bool(p_low[k]):
            for e, ce in enumerate(pw):
                r_low[e] = r_low[e] + p_low[k] * ce
        if k < 8:
            new = [one - one] * (len(pw) + 1)
            for e, ce in enumerate(pw):
                new[e] = new[e] + ce * shift
                new[e + 1] = new[e + 1] - ce
            pw = new
    t_low = [r / B for r in r_low]
    return {
        "P_low": p_low, "A": A, "B": B, "shift": shift,
        "T_low": t_low, "disc0": disc0, "c2": c2, "one": one,
    }


def mestre_normal_form(cb: ConicBundle):
    """Monic degree-8 model T(u) with no u^7 term, plus the conic
    scalar c = 1/((sigma12^2 - 4*sigma11*sigma22) * B).  Needs 1/B to
    be a rational square; otherwise reports the failure."""
    if cb.params:
        raise MestreError("normal form needs a numeric bundle; "
                          "fix the parameters first")
    core = mestre_core(cb)
    B = core["B"]
    t_low = core["T_low"]
    if t_low[8] != 1:
        raise AssertionError("T failed to come out monic")
    if t_low[7] != 0:
        raise AssertionError("u^7 coefficient failed to vanish")
    if not is_square_rat(1 / B):
        return MestreFailure(
            reason="hypotheses fail: leading coefficient not a square "
                   "(1/B = %s)" % (1 / B), B=B)
    xi = sqrt_rat(1 / B)
    c = 1 / (core["disc0"] * B)
    T = MultiPoly.from_univariate(("u",), "u", t_low)
    return MestreModel(T=T, c=c, shift=core["shift"], xi=xi, B=B,
                       A=core["A"],
                       P=MultiPoly.from_univariate(("t",), "t",
                                                   core["P_low"]))


def u_delta_witness(a0, b0, c0, c1, c2, d0, xi) -> bool:
    """Exact membership test for the incidence relation
    xi^2*c2 - (b0^2 - 4*a0*c0)*c2 - a0*c1^2 + b0*c1*d0 - d0^2*c0 = 0."""
    a0, b0, c0 = Fraction(a0), Fraction(b0), Fraction(c0)
    c1, c2, d0, xi = Fraction(c1), Fraction(c2), Fraction(d0), Fraction(xi)
    z = (xi * xi * c2 - (b0 * b0 - a0 * c0 * 4) * c2
         - a0 * c1 * c1 + b0 * c1 * d0 - d0 * d0 * c0)
    return z == 0
