"""Ternary quadratic forms: exact diagonalization with congruence
checks, the diagonal conic model of a generic fiber, and the degree-8
normal form for weights (4,0,0)."""

import random
from fractions import Fraction

import pytest

from conicbundles.bundles import BundleError, make_bundle, validate_bundle
from conicbundles.exactmath import mat_det
from conicbundles.quadforms import (
    DegeneratePivot,
    MestreError,
    MestreFailure,
    MestreModel,
    QuadraticForm3,
    brauer_model,
    diagonalize,
    generic_fiber_form,
    mestre_normal_form,
    u_delta_witness,
)

PERMS = ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0))


def rand_form(rng, lo=-6, hi=6):
    while True:
        alpha = tuple(Fraction(rng.randint(lo, hi)) for _ in range(6))
        if any(alpha):
            return QuadraticForm3(alpha)


def test_form_needs_six_coefficients():
    with pytest.raises(ValueError):
        QuadraticForm3((1, 2, 3))


def test_zero_form_rejected():
    with pytest.raises(ValueError):
        QuadraticForm3((0,) * 6)


def test_gram_matches_value():
    rng = random.Random(11)
    for _ in range(40):
        q = rand_form(rng)
        g = q.gram()
        v = [Fraction(rng.randint(-5, 5)) for _ in range(3)]
        via_gram = sum(v[i] * g[i][j] * v[j]
                       for i in range(3) for j in range(3))
        assert via_gram == q.value(v)
        for i in range(3):
            for j in range(3):
                assert g[i][j] == g[j][i]


def test_discriminant_is_gram_determinant():
    rng = random.Random(12)
    for _ in range(40):
        q = rand_form(rng)
        assert q.discriminant() == mat_det(q.gram())


def test_permuted_value_invariance():
    # q.permuted(p) is q written in the variables y_p[0], y_p[1], y_p[2]
    rng = random.Random(13)
    for _ in range(30):
        q = rand_form(rng)
        perm = PERMS[rng.randrange(6)]
        v = [Fraction(rng.randint(-4, 4)) for _ in range(3)]
        w = [None] * 3
        for i in range(3):
            w[perm[i]] = v[i]
        assert q.permuted(perm).value(v) == q.value(w)


def test_diagonalize_entries_and_congruence():
    rng = random.Random(14)
    checked = 0
    while checked < 30:
        q = rand_form(rng)
        a0, a1, _, a3, _, _ = q.alpha
        n = 4 * a0 * a3 - a1 * a1
        if not a0 or not n:
            continue
        d = diagonalize(q)
        assert d.entries == (a0, a0 * n, 4 * n * q.discriminant())
        # external congruence re-check: basis^T G basis is diagonal
        for i in range(3):
            for j in range(3):
                got = q.bilinear(d.basis[i], d.basis[j])
                assert got == (d.entries[i] if i == j else 0)
        # product of entries lands in the square class of disc
        assert (d.entries[0] * d.entries[1] * d.entries[2]
                == 4 * a0 * a0 * n * n * q.discriminant())
        checked += 1


def test_diagonalize_degenerate_pivots():
    with pytest.raises(DegeneratePivot, match="y0\\^2"):
        diagonalize(QuadraticForm3((0, 1, 0, 1, 0, 1)))
    # a1^2 = 4*a0*a3 makes the 2x2 block singular
    with pytest.raises(DegeneratePivot, match="2x2"):
        diagonalize(QuadraticForm3((1, 2, 0, 1, 0, 1)))


def diag_bundle_844(s00_text, s11, s22):
    return validate_bundle(make_bundle(
        (4, 0, 0), (s00_text, "0", "0", str(s11), "0", str(s22))))


def test_generic_fiber_form_dehomogenizes():
    cb = diag_bundle_844("x0^8", 2, -1)
    q = generic_fiber_form(cb)
    assert str(q.alpha[0]) == "t^8"
    assert q.alpha[3].evaluate({"t": Fraction(5)}) == 2
    assert q.alpha[5].evaluate({"t": Fraction(5)}) == -1


def test_brauer_model_already_diagonal():
    cb = diag_bundle_844("x0^8 - x0*x1^7", 2, -1)
    bp = brauer_model(cb)
    assert bp.pivot == (0, 1, 2)
    t = Fraction(3)
    assert bp.a.evaluate({"t": t}) == t ** 8 - t  # -(t^8 - t)/(-1)
    assert bp.b.evaluate({"t": t}) == 2


def test_brauer_model_pivot_permutation():
    # sigma00 = 0 kills the standard pivot; a permutation recovers it
    cb = make_bundle((2, 2, 0),
                     ("0", "x0^4", "x0^2", "x0^4 + x1^4", "x1^2", "1"))
    bp = brauer_model(cb)
    assert bp.pivot != (0, 1, 2)
    q = generic_fiber_form(cb).permuted(bp.pivot)
    for i in range(3):
        for j in range(3):
            got = q.bilinear(bp.basis[i], bp.basis[j])
            if i == j:
                assert got == bp.diagonal[i]
            else:
                assert not bool(got)
    # a, b are read off the diagonal, scaled so the last slot is -1
    d0, d1, d2 = bp.diagonal
    assert bp.a == -(d0 / d2)
    assert bp.b == -(d1 / d2)


def test_brauer_model_rejects_degenerate_discriminant():
    cb = validate_bundle(make_bundle(
        (4, 0, 0), ("x0^8", "0", "0", "0", "0", "0")))
    with pytest.raises(BundleError, match="degenerate"):
        brauer_model(cb)


def test_mestre_diagonal_oracle():
    # sigma = (t^8, 0, 0, -1/4, 0, 1): P = t^8, B = 1, A = 0,
    # shift = 0, T = u^8, disc0 = 1, c = 1, xi = 1
    cb = diag_bundle_844("x0^8", "-1/4", 1)
    m = mestre_normal_form(cb)
    assert isinstance(m, MestreModel)
    assert m.B == 1 and m.A == 0 and m.shift == 0
    assert m.c == 1 and m.xi == 1
    assert str(m.T) == "u^8"
    assert str(m.P) == "t^8"


def test_mestre_shift_kills_degree_seven():
    rng = random.Random(15)
    hits = 0
    while hits < 10:
        coeffs = [rng.randint(-5, 5) for _ in range(9)]
        if not coeffs[8]:
            continue
        terms = " + ".join("%d*x0^%d*x1^%d" % (c, k, 8 - k)
                           for k, c in enumerate(coeffs) if c)
        cb = make_bundle((4, 0, 0),
                         (terms, "0", "0", "-1/4", "0", "1"))
        m = mestre_normal_form(cb)
        if isinstance(m, MestreFailure):
            assert m.B == coeffs[8]
            hits += 1
            continue
        got = m.T.coefficient_of_power("u", 7)
        assert not bool(got)
        assert m.T.coefficient_of_power("u", 8) == 1
        hits += 1


def test_mestre_failure_nonsquare_leading():
    cb = diag_bundle_844("x0^8", 2, -1)  # B = -8, 1/B not a square
    m = mestre_normal_form(cb)
    assert isinstance(m, MestreFailure)
    assert m.B == -8
    assert "not a square" in m.reason


def test_mestre_wrong_weights_rejected():
    cb = make_bundle((2, 1, 1), ("x0^4", "0", "0", "x0^2", "0", "x1^2"))
    with pytest.raises(MestreError, match="weights"):
        mestre_normal_form(cb)


def test_mestre_degenerate_pivots():
    with pytest.raises(MestreError, match="sigma22 = 0"):
        mestre_normal_form(make_bundle(
            (4, 0, 0), ("x0^8", "0", "0", "1", "0", "0")))
    # sigma12^2 = 4*sigma11*sigma22
    with pytest.raises(MestreError, match="sigma12"):
        mestre_normal_form(make_bundle(
            (4, 0, 0), ("x0^8", "0", "0", "1", "2", "1")))
    with pytest.raises(MestreError, match="deg P < 8"):
        mestre_normal_form(make_bundle(
            (4, 0, 0), ("x0^7*x1", "0", "0", "-1/4", "0", "1")))


def test_mestre_needs_numeric_bundle():
    cb = make_bundle((4, 0, 0), ("a*x0^8", "0", "0", "1", "0", "-1"),
                     params=("a",))
    with pytest.raises(MestreError, match="numeric"):
        mestre_normal_form(cb)


def test_u_delta_witness_zero_relation():
    # xi^2*c2 = (b0^2 - 4*a0*c0)*c2 + a0*c1^2 - b0*c1*d0 + d0^2*c0
    assert u_delta_witness(0, 1, 0, 0, 1, 5, 1)
    assert not u_delta_witness(0, 1, 0, 0, 1, 5, 2)
    # a0=1, b0=0, c0=-1, c1=0, c2=1, d0=2: rhs = 4*1 + 0 - 0 + 4*(-1) = 0
    assert u_delta_witness(1, 0, -1, 0, 1, 2, 0)
