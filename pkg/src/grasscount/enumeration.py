"""Bridge between exact Gram data and the enumeration kernels.

Everything here works on a Gram matrix, so lattices of any rank embedded in
any ambient space are handled the same way.  Coordinates are always integer
coefficient vectors relative to the basis the Gram matrix came from.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import kernels
from . import _config
from ._config import CapacityError
from .exact import as_fraction, common_denominator, det, identity, inverse

INT64_SAFE = 2 ** 62
DELTA = Fraction(3, 4)


def gram_schmidt(g):
    """Exact Gram-Schmidt data ``(mu, bstar)`` of a positive definite Gram."""
    n = len(g)
    mu = [[Fraction(0)] * n for _ in range(n)]
    bstar = [Fraction(0)] * n
    for i in range(n):
        mu[i][i] = Fraction(1)
        for j in range(i):
            s = as_fraction(g[i][j])
            for k in range(j):
                s -= mu[j][k] * mu[i][k] * bstar[k]
            mu[i][j] = s / bstar[j]
        s = as_fraction(g[i][i])
        for k in range(i):
            s -= mu[i][k] * mu[i][k] * bstar[k]
        bstar[i] = s
    return mu, bstar


def lll_gram(g, delta=DELTA):
    """Exact LLL reduction on a Gram matrix.

    Returns ``(u, g_red)`` with ``g_red = u g u^T`` and ``u`` unimodular.
    """
    n = len(g)
    g = [[as_fraction(x) for x in r] for r in g]
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    if n == 1:
        return tuple(map(tuple, u)), tuple(map(tuple, g))
    mu, bstar = gram_schmidt(g)
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = math.floor(mu[k][j] + Fraction(1, 2))
            if q:
                # b_k -= q b_j
                g[k] = [a - q * b for a, b in zip(g[k], g[j])]
                for r in range(n):
                    g[r][k] -= q * g[r][j]
                u[k] = [a - q * b for a, b in zip(u[k], u[j])]
                for l in range(j):
                    mu[k][l] -= q * mu[j][l]
                mu[k][j] -= q
        if bstar[k] >= (delta - mu[k][k - 1] ** 2) * bstar[k - 1]:
            k += 1
        else:
            g[k], g[k - 1] = g[k - 1], g[k]
            for r in g:
                r[k], r[k - 1] = r[k - 1], r[k]
            u[k], u[k - 1] = u[k - 1], u[k]
            mu, bstar = gram_schmidt(g)
            k = max(k - 1, 1)
    return tuple(map(tuple, u)), tuple(map(tuple, g))


def _float_gso(g):
    mu, bstar = gram_schmidt(g)
    n = len(g)
    q = np.array([float(b) for b in bstar], dtype=np.float64)
    m = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(i + 1, n):
            m[i, j] = float(mu[j][i])
    return q, m


class Ellipsoid:
    """Prepared enumeration data for one Gram matrix.

    Holds the LLL transform ``u`` (reduced basis = ``u`` @ original basis),
    the reduced Gram scaled to integers by ``scale`` and its float
    Gram-Schmidt data.
    """

    def __init__(self, g, reduce: bool = True):
        g = tuple(tuple(as_fraction(x) for x in r) for r in g)
        self.n = len(g)
        self.gram = g
        if reduce:
            self.u, self.g_red = lll_gram(g)
        else:
            self.u, self.g_red = identity(self.n), g
        self.scale = common_denominator(self.g_red)
        self.gi = tuple(tuple(int(x * self.scale) for x in r) for r in self.g_red)
        self.q, self.mu = _float_gso(self.gi)
        self.g_red_inv = inverse(self.g_red)
        self._u_np = np.array(self.u, dtype=object)

    def coeff_bound(self, r2) -> float:
        """Upper bound on ``|x_i|`` for points of norm squared <= r2."""
        r2 = float(r2)
        return max(math.sqrt(max(r2, 0.0) * float(self.g_red_inv[i][i])) for i in range(self.n)) + 1.0

    def to_original(self, x):
        """Map reduced-basis coefficient rows to original-basis rows."""
        return np.asarray(x, dtype=object).dot(self._u_np)

    def enumerate(self, r2, half: bool = True, shift=None, count_only: bool = False,
                  max_points: int | None = None):
        """Integer points of the reduced lattice in a ball of squared radius r2.

        ``shift`` (rational, reduced coordinates) enumerates the affine
        lattice ``Z^n + shift``.  Returns ``(coeffs, norms, den)``: the exact
        squared norm of row i is ``norms[i] / den``.  With ``count_only``
        just the number of points.
        """
        n = self.n
        if max_points is None:
            max_points = _config.MAX_POINTS
        r2 = as_fraction(r2)
        if r2 < 0:
            return 0 if count_only else (np.zeros((0, n), dtype=object), np.zeros(0, dtype=object), 1)
        if shift is None:
            shift = [Fraction(0)] * n
            half_ok = half
        else:
            shift = [as_fraction(s) for s in shift]
            half_ok = False
        sden = common_denominator([shift])
        off = [int(s * sden) for s in shift]
        # exact test: (sden x + off)^T gi (sden x + off) <= sden^2 * scale * r2
        r_exact = math.floor(r2 * self.scale * sden * sden)
        r_float = float(r2 * self.scale)
        cf = np.array([float(s) for s in shift], dtype=np.float64)
        bound = self.coeff_bound(r2) + max((abs(float(s)) for s in shift), default=0.0)
        vmax = sden * bound + max((abs(o) for o in off), default=0)
        gmax = max(abs(x) for r in self.gi for x in r)
        safe = (kernels.numba_active() and n * n * gmax * vmax * vmax < INT64_SAFE
                and r_exact < INT64_SAFE)
        if safe:
            fn = kernels.fp_enumerate_nb
            gi = np.array(self.gi, dtype=np.int64)
            offa = np.array(off, dtype=np.int64)
            dtype = np.int64
            r_ex = np.int64(r_exact)
        else:
            fn = kernels.fp_enumerate_py
            gi = np.array(self.gi, dtype=object)
            offa = np.array(off, dtype=object)
            dtype = object
            r_ex = r_exact
        empty = np.zeros((0, n), dtype=dtype)
        empty_n = np.zeros(0, dtype=dtype)
        cnt, visited = fn(self.q, self.mu, cf, gi, offa, sden, r_ex, r_float, half_ok,
                          empty, empty_n, max_points)
        if cnt < 0:
            raise CapacityError(f"enumeration visited more than {max_points} points")
        if count_only:
            return int(cnt)
        out = np.zeros((cnt, n), dtype=dtype)
        norms = np.zeros(cnt, dtype=dtype)
        fn(self.q, self.mu, cf, gi, offa, sden, r_ex, r_float, half_ok, out, norms, max_points)
        return out, norms, self.scale * sden * sden


def wedge_gram(gi, d: int):
    """d-th exterior power of an integer Gram matrix (Cauchy-Binet)."""
    n = len(gi)
    combos = list(combinations(range(n), d))
    w = [[det(tuple(tuple(gi[r][c] for c in cs) for r in rs)) for cs in combos] for rs in combos]
    return combos, w


def subset_keys(ell: Ellipsoid, vecs, norms, d: int, prod_bound, det_bound, workers: int = 1):
    """Run the pruned d-subset search over reduced-coordinate vectors.

    ``norms`` are the kernel's scaled integer norms (units of ``1/ell.scale``).
    ``prod_bound`` and ``det_bound`` are exact rationals in unscaled units.
    Returns ``(keys, dets, idx)``: distinct sign-normalized primitive Plücker
    vectors, their squared determinants in units of ``1/ell.scale**d`` (all
    exactly ``<= det_bound``) and one generating index tuple into ``vecs``
    for each.
    """
    nvec = len(norms)
    combos, w = wedge_gram(ell.gi, d)
    ncomb = len(combos)
    scale_d = ell.scale ** d
    if nvec == 0:
        return np.zeros((0, ncomb), dtype=object), np.zeros(0, dtype=object), np.zeros((0, d), dtype=np.int64)
    nf = np.asarray(norms, dtype=np.float64)
    order = np.argsort(nf, kind="stable")
    vecs = vecs[order]
    nf = nf[order]
    pb = float(as_fraction(prod_bound) * scale_d)
    dbound = as_fraction(det_bound)
    db = float(dbound * scale_d)
    # integer dets: dt <= det_bound * scale_d  <=>  dt <= floor(...)
    thr = (dbound.numerator * scale_d) // dbound.denominator
    mmax = max(abs(int(x)) for x in vecs.ravel()) if vecs.size else 0
    pmax = (math.sqrt(d) * mmax) ** d + 1
    wmax = max(abs(x) for r in w for x in r)
    safe = (kernels.numba_active() and pmax * pmax < INT64_SAFE
            and ncomb * ncomb * wmax * pmax * pmax < INT64_SAFE)
    if safe:
        fn = kernels.subset_keys_nb
        dtype = np.int64
    else:
        fn = kernels.subset_keys_py
        dtype = object
    va = np.array(vecs, dtype=dtype)
    ca = np.array(combos, dtype=np.int64)
    wa = np.array(w, dtype=dtype)

    def run(start, stop):
        e_k = np.zeros((0, ncomb), dtype=dtype)
        e_d = np.zeros(0, dtype=dtype)
        e_i = np.zeros((0, d), dtype=np.int64)
        cnt = fn(va, nf, ca, wa, d, pb, db, start, stop, e_k, e_d, e_i)
        keys = np.zeros((cnt, ncomb), dtype=dtype)
        dets = np.zeros(cnt, dtype=dtype)
        idx = np.zeros((cnt, d), dtype=np.int64)
        fn(va, nf, ca, wa, d, pb, db, start, stop, keys, dets, idx)
        return keys, dets, idx

    if workers > 1 and safe:
        cuts = np.linspace(0, nvec, workers + 1).astype(int)
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(lambda ab: run(*ab), zip(cuts[:-1], cuts[1:])))
    else:
        parts = [run(0, nvec)]
    keys = np.concatenate([p[0] for p in parts])
    dets = np.concatenate([p[1] for p in parts])
    idx = np.concatenate([p[2] for p in parts])
    if dtype is object:
        ok = [i for i in range(len(dets)) if int(dets[i]) <= thr]
        seen = {}
        for i in ok:
            seen.setdefault(tuple(int(x) for x in keys[i]), i)
        first = np.array(sorted(seen.values()), dtype=np.int64)
    else:
        ok = np.nonzero(dets <= thr)[0] if thr < INT64_SAFE else np.arange(len(dets))
        if len(ok):
            _, pos = np.unique(keys[ok], axis=0, return_index=True)
            first = np.sort(ok[pos])
        else:
            first = ok
    return keys[first], dets[first], order[idx[first]]
