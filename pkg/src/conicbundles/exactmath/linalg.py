"""Exact linear algebra over Q: fraction-free Bareiss rank and
determinant, Gauss-Jordan reduction, nullspace bases."""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def _int_rows(rows):
    """Clear denominators row by row; rank is unchanged, det scales by
    the product of multipliers (returned)."""
    out = []
    scale = Fraction(1)
    for row in rows:
        den = 1
        frow = [Fraction(c) for c in row]
        for c in frow:
            den = den * c.denominator // gcd(den, c.denominator)
        out.append([int(c * den) for c in frow])
        scale *= den
    return out, scale


def mat_rank(rows) -> int:
    """Rank via fraction-free Bareiss elimination with pivoting."""
    if not rows or not rows[0]:
        return 0
    m, _ = _int_rows(rows)
    nr, nc = len(m), len(m[0])
    rank = 0
    prev = 1
    for col in range(nc):
        piv = None
        for r in range(rank, nr):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        pv = m[rank][col]
        for r in range(rank + 1, nr):
            for c in range(col + 1, nc):
                m[r][c] = (m[r][c] * pv - m[r][col] * m[rank][c]) // prev
            m[r][col] = 0
        prev = pv
        rank += 1
        if rank == nr:
            break
    return rank


def mat_det(rows) -> Fraction:
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    m, scale = _int_rows(rows)
    sign = 1
    prev = 1
    for col in range(n):
        piv = None
        for r in range(col, n):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        pv = m[col][col]
        for r in range(col + 1, n):
            for c in range(col + 1, n):
                m[r][c] = (m[r][c] * pv - m[r][col] * m[col][c]) // prev
            m[r][col] = 0
        prev = pv
    return Fraction(sign * m[n - 1][n - 1], 1) / scale


def rref(rows):
    """Reduced row echelon form over Q; returns (matrix, pivot cols)."""
    m = [[Fraction(c) for c in row] for row in rows]
    if not m:
        return m, []
    nr, nc = len(m), len(m[0])
    pivots = []
    r = 0
    for col in range(nc):
        piv = None
        for i in range(r, nr):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [c * inv for c in m[r]]
        for i in range(nr):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == nr:
            break
    return m, pivots


def nullspace(rows):
    """Basis of the right kernel, one vector per free column."""
    if not rows or not rows[0]:
        return []
    nc = len(rows[0])
    m, pivots = rref(rows)
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * nc
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][fc]
        basis.append(v)
    return basis


def solve_linear(rows, rhs):
    """One solution of A x = b over Q, or None if inconsistent."""
    if not rows:
        return []
    nc = len(rows[0])
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    m, pivots = rref(aug)
    for r in range(len(m)):
        if all(not c for c in m[r][:nc]) and m[r][nc]:
            return None
    x = [Fraction(0)] * nc
    for r, pc in enumerate(pivots):
        if pc < nc:
            x[pc] = m[r][nc]
    return x
