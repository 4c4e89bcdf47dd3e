"""Arithmetic functions and Hecke coset combinatorics."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .exact import hnf_rows, snf


def factorize(m: int) -> dict[int, int]:
    if m < 1:
        raise ValueError("factorize needs a positive integer")
    out = {}
    p = 2
    while p * p <= m:
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def divisors(m: int) -> list[int]:
    divs = [1]
    for p, a in factorize(m).items():
        divs = [x * p ** e for x in divs for e in range(a + 1)]
    return sorted(divs)


@lru_cache(maxsize=None)
def sigma_d(d: int, m: int) -> int:
    """Number of index-m sublattices of a rank-d lattice, by recursion on d."""
    if d < 1 or m < 1:
        raise ValueError("sigma_d needs d >= 1 and m >= 1")
    if d == 1:
        return 1
    return sum(r ** (d - 1) * sigma_d(d - 1, m // r) for r in divisors(m))


def moebius(m: int) -> int:
    f = factorize(m)
    if any(a > 1 for a in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def euler_phi(k: int) -> int:
    out = k
    for p in factorize(k):
        out = out // p * (p - 1)
    return out


def enumerate_hnfs(d: int, m: int):
    """Yield every d x d upper-triangular HNF of determinant m."""
    def diags(rem, slots):
        if slots == 1:
            yield (rem,)
            return
        for a in divisors(rem):
            for rest in diags(rem // a, slots - 1):
                yield (a,) + rest

    for diag in diags(m, d):
        # entries above pivot j lie in [0, diag[j])
        cells = [(i, j) for j in range(d) for i in range(j)]
        ranges = [range(diag[j]) for (_, j) in cells]
        for vals in product(*ranges):
            h = [[0] * d for _ in range(d)]
            for i in range(d):
                h[i][i] = diag[i]
            for (i, j), v in zip(cells, vals):
                h[i][j] = v
            yield tuple(map(tuple, h))


def count_hnfs(d: int, m: int) -> int:
    return sum(1 for _ in enumerate_hnfs(d, m))


# -- Hecke representatives -------------------------------------------------------

@dataclass(frozen=True)
class HeckeRep:
    matrix: tuple
    k: int


def _rank_mod_p(m, p: int) -> int:
    a = [[x % p for x in r] for r in m]
    rows, cols = len(a), len(a[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c] * inv % p
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        r += 1
    return r


def _reduced_lower(diag):
    """All lower-triangular matrices with the given diagonal and
    0 <= h[j][i] < h[i][i] for j > i."""
    d = len(diag)
    cells = [(j, i) for i in range(d) for j in range(i + 1, d)]
    for vals in product(*[range(diag[i]) for (_, i) in cells]):
        h = [[0] * d for _ in range(d)]
        for i in range(d):
            h[i][i] = diag[i]
        for (j, i), v in zip(cells, vals):
            h[j][i] = v
        yield tuple(map(tuple, h))


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for a in range(total + 1):
        for rest in _compositions(total - a, parts - 1):
            yield (a,) + rest


def _prime_power_reps(d: int, p: int, alpha: int) -> list:
    # h lies in Gamma e(p^alpha) Gamma iff it has exactly one invariant factor
    # divisible by p, i.e. rank d - 1 over F_p.
    reps = []
    for exps in _compositions(alpha, d):
        for h in _reduced_lower([p ** a for a in exps]):
            if _rank_mod_p(h, p) == d - 1:
                reps.append(h)
    return reps


def lower_standard_form(rows, d: int):
    """Standard lower-triangular basis (entries below the diagonal reduced
    modulo the diagonal entry of their column) of a full-rank row lattice."""
    rev = [tuple(reversed(r)) for r in rows]
    h = hnf_rows(rev)
    return tuple(tuple(reversed(r)) for r in reversed(h))


def _glue(h1, k1: int, h2, k2: int, d: int):
    # Coprime indices: M1 ∩ M2 = k2 M1 + k1 M2.
    rows = [tuple(k2 * x for x in r) for r in h1] + [tuple(k1 * x for x in r) for r in h2]
    return lower_standard_form(rows, d)


def hecke_reps(d: int, k: int) -> list[HeckeRep]:
    """Standard-form right coset representatives of GL(d,Z) in GL(d,Z) e(k) GL(d,Z)."""
    if d < 1 or k < 1:
        raise ValueError("hecke_reps needs d >= 1 and k >= 1")
    cur = [tuple(tuple(int(i == j) for j in range(d)) for i in range(d))]
    cur_k = 1
    for p, a in sorted(factorize(k).items()) if k > 1 else []:
        block = _prime_power_reps(d, p, a)
        q = p ** a
        cur = [_glue(h1, cur_k, h2, q, d) for h1 in cur for h2 in block]
        cur_k *= q
    cur.sort()
    return [HeckeRep(h, k) for h in cur]


def hecke_count(d: int, k: int) -> int:
    out = 1
    for p, a in factorize(k).items():
        out *= p ** ((a - 1) * (d - 1)) * sum(p ** i for i in range(d))
    return out


def smith_invariants_of_rep(h) -> list[int]:
    m = h.matrix if isinstance(h, HeckeRep) else h
    return snf(m)


def brute_force_hecke_reps(d: int, k: int) -> list:
    """Every reduced lower-triangular matrix of determinant k with Smith
    invariants (1, ..., 1, k); the independent oracle for :func:`hecke_reps`."""
    target = [1] * (d - 1) + [k]

    def diags(rem, slots):
        if slots == 1:
            yield (rem,)
            return
        for a in divisors(rem):
            for rest in diags(rem // a, slots - 1):
                yield (a,) + rest

    out = []
    for diag in diags(k, d):
        for h in _reduced_lower(diag):
            if snf(h) == target:
                out.append(h)
    return sorted(out)


def _spf_sieve(limit: int) -> np.ndarray:
    spf = np.zeros(limit + 1, dtype=np.int64)
    for i in range(2, limit + 1):
        if spf[i] == 0:
            spf[i::i][spf[i::i] == 0] = i
    return spf


def hecke_dirichlet(d: int, m: int, terms: int) -> tuple[float, float]:
    """Partial sum of hecke_count(d,k) phi(k) k^-m over k <= terms.

    Returns ``(value, tail_bound)``.  Each term is at most k^(d-m), so the
    tail is bounded by terms^(d-m+1) / (m-d-1).
    """
    if m <= d + 1:
        raise ValueError(f"series diverges unless m > d + 1 (got m={m}, d={d})")
    if terms < 1:
        raise ValueError("need at least one term")
    spf = _spf_sieve(terms)
    parts = [1.0]
    for k in range(2, terms + 1):
        hc, phi, x = 1, 1, k
        while x > 1:
            p = int(spf[x])
            a = 0
            while x % p == 0:
                x //= p
                a += 1
            hc *= p ** ((a - 1) * (d - 1)) * sum(p ** i for i in range(d))
            phi *= p ** (a - 1) * (p - 1)
        parts.append(hc * phi / float(k) ** m)
    tail = float(terms) ** (d - m + 1) / (m - d - 1)
    return math.fsum(parts), tail
