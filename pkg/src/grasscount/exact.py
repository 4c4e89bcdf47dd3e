"""Exact integer and rational linear algebra.

Matrices are plain row-major tuples of tuples holding Python ints or
``fractions.Fraction`` values.  Every routine here is exact; floating point
never enters.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Matrix = tuple  # tuple[tuple[int | Fraction, ...], ...]


class RankError(ValueError):
    """Raised when a matrix that must have full row rank does not."""


# -- rationals ---------------------------------------------------------------

def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact input; pass 'p/q' strings")
    return Fraction(x)


def format_rational(x) -> str:
    x = as_fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s) -> Fraction:
    return as_fraction(s)


# -- construction helpers ----------------------------------------------------

def to_int_matrix(rows: Iterable[Iterable]) -> Matrix:
    out = []
    for r in rows:
        row = []
        for x in r:
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"non-integer entry {x}")
                x = x.numerator
            row.append(int(x))
        out.append(tuple(row))
    if not out or not out[0]:
        raise ValueError("matrix dimensions must be at least 1")
    if any(len(r) != len(out[0]) for r in out):
        raise ValueError("ragged matrix")
    return tuple(out)


def to_rat_matrix(rows: Iterable[Iterable]) -> Matrix:
    out = tuple(tuple(as_fraction(x) for x in r) for r in rows)
    if not out or not out[0]:
        raise ValueError("matrix dimensions must be at least 1")
    if any(len(r) != len(out[0]) for r in out):
        raise ValueError("ragged matrix")
    return out


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(m: Sequence[Sequence]) -> Matrix:
    return tuple(zip(*m))


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = tuple(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def vecmat(v: Sequence, m: Sequence[Sequence]) -> tuple:
    """Row vector times matrix."""
    return tuple(sum(v[i] * m[i][j] for i in range(len(v))) for j in range(len(m[0])))


# -- echelon forms -----------------------------------------------------------

def _echelon(m: Sequence[Sequence[int]]):
    """Row-style Hermite reduction of an arbitrary-rank integer matrix.

    Returns ``(h, u, rank)`` with ``h = u @ m``, ``u`` unimodular, the first
    ``rank`` rows of ``h`` in HNF and the remaining rows zero.
    """
    h = [list(r) for r in m]
    rows = len(h)
    cols = len(h[0])
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    r = 0
    for c in range(cols):
        if r == rows:
            break
        while True:
            piv = -1
            best = 0
            for i in range(r, rows):
                x = h[i][c]
                if x and (piv < 0 or abs(x) < best):
                    piv, best = i, abs(x)
            if piv < 0:
                break
            if piv != r:
                h[r], h[piv] = h[piv], h[r]
                u[r], u[piv] = u[piv], u[r]
            p = h[r][c]
            clean = True
            for i in range(r + 1, rows):
                x = h[i][c]
                if x:
                    q = x // p
                    if q:
                        hi, hr = h[i], h[r]
                        for j in range(c, cols):
                            hi[j] -= q * hr[j]
                        ui, ur = u[i], u[r]
                        for j in range(rows):
                            ui[j] -= q * ur[j]
                    if h[i][c]:
                        clean = False
            if clean:
                break
        if r == rows or h[r][c] == 0:
            continue
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        p = h[r][c]
        for i in range(r):
            q = h[i][c] // p
            if q:
                hi, hr = h[i], h[r]
                for j in range(c, cols):
                    hi[j] -= q * hr[j]
                ui, ur = u[i], u[r]
                for j in range(rows):
                    ui[j] -= q * ur[j]
        r += 1
    return tuple(map(tuple, h)), tuple(map(tuple, u)), r


def hnf(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Canonical row-style Hermite normal form ``h = u @ m``.

    Pivots are positive, pivot columns strictly increase and entries above
    a pivot lie in ``[0, pivot)``.  Raises :class:`RankError` unless ``m``
    has full row rank.
    """
    m = to_int_matrix(m)
    h, u, rank = _echelon(m)
    if rank != len(m):
        raise RankError(f"matrix has rank {rank} < {len(m)} rows")
    return h, u


def hnf_rows(m: Sequence[Sequence[int]]) -> Matrix:
    """HNF of the row lattice of ``m`` with zero rows dropped (any rank)."""
    h, _, rank = _echelon(to_int_matrix(m))
    return h[:rank]


def int_rank(m: Sequence[Sequence[int]]) -> int:
    return _echelon(to_int_matrix(m))[2]


def snf(m: Sequence[Sequence[int]]) -> list[int]:
    """Invariant factors ``a_1 | a_2 | ... | a_r`` of an integer matrix."""
    cur = to_int_matrix(m)
    if all(x == 0 for r in cur for x in r):
        return []
    # Alternate row and column echelon passes until diagonal.
    while True:
        h, _, rank = _echelon(cur)
        h = h[:rank]
        off = any(h[i][j] for i in range(rank) for j in range(len(h[0])) if j != i)
        if not off:
            diag = [abs(h[i][i]) for i in range(rank)]
            break
        cur = transpose(h)
    # Enforce the divisibility chain.
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            a, b = diag[i], diag[j]
            g = gcd(a, b)
            diag[i], diag[j] = g, a // g * b
    return diag


def is_primitive(m: Sequence[Sequence[int]]) -> bool:
    """True iff ``m`` can be completed to an element of GL(n, Z)."""
    m = to_int_matrix(m)
    if len(m) > len(m[0]):
        return False
    if int_rank(m) != len(m):
        raise RankError("matrix must have full row rank")
    return all(a == 1 for a in snf(m))


def integer_kernel(m: Sequence[Sequence[int]]) -> Matrix:
    """Basis (as rows) of ``{x in Z^n : m x = 0}``, in HNF.  May be empty."""
    m = to_int_matrix(m)
    _, u, rank = _echelon(transpose(m))
    ker = u[rank:]
    if not ker:
        return ()
    return hnf_rows(ker)


def saturate(m: Sequence[Sequence[int]]) -> Matrix:
    """HNF basis of ``(Q-row-space of m) ∩ Z^n``."""
    m = to_int_matrix(m)
    n = len(m[0])
    if int_rank(m) != len(m):
        raise RankError("matrix must have full row rank")
    k = integer_kernel(m)
    if not k:
        return identity(n)
    return integer_kernel(k)


def random_unimodular(d: int, rng, steps: int = 12, bound: int = 3) -> Matrix:
    """Random product of elementary unimodular matrices (for testing)."""
    u = [[int(i == j) for j in range(d)] for i in range(d)]
    for _ in range(steps):
        if d == 1:
            break
        i, j = rng.choice(d, size=2, replace=False)
        c = int(rng.integers(-bound, bound + 1))
        u[int(i)] = [a + c * b for a, b in zip(u[int(i)], u[int(j)])]
        if rng.random() < 0.3:
            u[int(i)], u[int(j)] = u[int(j)], u[int(i)]
    if d == 1 or rng.random() < 0.5:
        u[0] = [-x for x in u[0]]
    return tuple(map(tuple, u))


# -- rational linear algebra -------------------------------------------------

def gram(b: Sequence[Sequence]) -> Matrix:
    """Matrix of pairwise inner products ``b @ b.T``."""
    return tuple(tuple(dot(r, s) for s in b) for r in b)


def det(m: Sequence[Sequence]):
    """Exact determinant of a square integer or rational matrix."""
    n = len(m)
    if any(len(r) != n for r in m):
        raise ValueError("determinant of a non-square matrix")
    if all(not isinstance(x, Fraction) for r in m for x in r):
        return _bareiss(m)
    a = [[as_fraction(x) for x in r] for r in m]
    sign = 1
    result = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        p = a[c][c]
        result *= p
        for i in range(c + 1, n):
            f = a[i][c] / p
            if f:
                ai, ac = a[i], a[c]
                for j in range(c, n):
                    ai[j] -= f * ac[j]
    return sign * result


def _bareiss(m) -> int:
    n = len(m)
    a = [list(map(int, r)) for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k]), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def det_squared(b: Sequence[Sequence]) -> Fraction:
    """``det(b b^T)``: squared covolume of the row span (0 if rank-deficient)."""
    return as_fraction(det(gram(b)))


def inverse(m: Sequence[Sequence]) -> Matrix:
    """Exact inverse of a square rational matrix."""
    n = len(m)
    a = [[as_fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(m)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            raise RankError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [x / p for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return tuple(tuple(r[n:]) for r in a)


def rat_rank(m: Sequence[Sequence]) -> int:
    a = [[as_fraction(x) for x in r] for r in m]
    rows, cols = len(a), len(a[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, rows):
            if a[i][c] != 0:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == rows:
            break
    return r


def common_denominator(m: Sequence[Sequence]) -> int:
    den = 1
    for r in m:
        for x in r:
            q = as_fraction(x).denominator
            den = den * q // gcd(den, q)
    return den


def minors(m: Sequence[Sequence], k: int) -> list:
    """All k x k minors of ``m`` taken from its first k rows, columns in
    lexicographic order (Plücker coordinates when ``m`` has k rows)."""
    from itertools import combinations
    cols = len(m[0])
    return [det(tuple(tuple(r[j] for j in c) for r in m[:k])) for c in combinations(range(cols), k)]
