"""Enumeration kernels.

Two hot loops live here: Fincke-Pohst enumeration of lattice points in an
(optionally shifted) ellipsoid, and the pruned d-subset search that turns
short vectors into Plücker keys of candidate sublattices.

Each kernel is written once as plain Python over numpy arrays.  When numba
is available and ``GRASSCOUNT_NUMBA`` is not ``0`` the same source is
compiled with ``@njit`` and used for int64-safe inputs; the interpreted
version runs on ``dtype=object`` arrays and is exact for any input size.
Floating point is only used to prune; every accepted point is confirmed
with an exact integer quadratic form.
"""
from __future__ import annotations

import math

import numpy as np

from ._config import USE_NUMBA

# Relative slack applied to float pruning bounds so they stay outer bounds.
SLACK = 1e-9


def _fp_enumerate(q, mu, cf, gi, off, scale, r_exact, r_float, half, out, norms_out, max_visit):
    """Enumerate integer x with (x + c)^T G (x + c) <= R.

    ``q``/``mu`` are the float Gram-Schmidt data of G (``mu[i, j]`` for
    ``j > i``), ``cf`` the float shift c.  The exact test is
    ``v^T gi v <= r_exact`` with ``v = scale * x + off``.  With ``half`` set
    only one of each pair +-x is produced and the origin is skipped.
    Matches are written to ``out``/``norms_out`` when those have rows.
    Returns ``(count, visited)``; ``count == -1`` signals the visit cap.
    """
    n = q.shape[0]
    store = out.shape[0] > 0
    x = np.zeros_like(off)
    v = np.zeros_like(off)
    lo = np.zeros(n, np.float64)
    hi = np.zeros(n, np.float64)
    ctr = np.zeros(n, np.float64)
    rem = np.zeros(n + 1, np.float64)
    zero_above = np.zeros(n + 1, np.bool_)
    rem[n] = r_float
    zero_above[n] = True
    count = 0
    visited = 0
    k = n - 1
    need = True
    while True:
        if need:
            s = 0.0
            for j in range(k + 1, n):
                s += mu[k, j] * (float(x[j]) + cf[j])
            c = -cf[k] - s
            r = rem[k + 1]
            if r < 0.0:
                r = 0.0
            w = math.sqrt(r / q[k])
            eps = SLACK * (1.0 + abs(c) + w)
            lo[k] = math.ceil(c - w - eps)
            hi[k] = math.floor(c + w + eps)
            if half and zero_above[k + 1] and lo[k] < 0.0:
                lo[k] = 0.0
            ctr[k] = c
            x[k] = int(lo[k])
            need = False
        if float(x[k]) > hi[k]:
            k += 1
            if k == n:
                break
            x[k] += 1
            continue
        t = float(x[k]) - ctr[k]
        val = rem[k + 1] - q[k] * t * t
        if k == 0:
            visited += 1
            if visited > max_visit:
                return -1, visited
            if not (half and zero_above[1] and x[0] == 0):
                for i in range(n):
                    v[i] = scale * x[i] + off[i]
                nrm = v[0] * 0
                for i in range(n):
                    row = v[0] * 0
                    for j in range(n):
                        row += gi[i, j] * v[j]
                    nrm += row * v[i]
                if nrm <= r_exact:
                    if store:
                        for i in range(n):
                            out[count, i] = x[i]
                        norms_out[count] = nrm
                    count += 1
            x[0] += 1
        else:
            rem[k] = val
            zero_above[k] = zero_above[k + 1] and x[k] == 0
            k -= 1
            need = True
    return count, visited


def _subset_keys(vecs, nf, combos, wedge, d, prod_bound, det_bound, start, stop,
                 keys_out, det_out, idx_out):
    """Pruned search over index tuples i_1 < ... < i_d of short vectors.

    ``vecs`` are sorted by norm ``nf`` (floats, ascending).  A tuple
    survives when the product of its norms can still meet ``prod_bound``;
    its Plücker vector (d x d minors over ``combos``) is reduced by its gcd
    and sign-normalized, and the squared determinant ``p^T wedge p`` is
    compared (loosely, in float) against ``det_bound``.  First index ranges
    over ``[start, stop)``.  Returns the number of surviving keys; rows are
    written when the output arrays have room.
    """
    nvec = vecs.shape[0]
    ncomb = combos.shape[0]
    store = keys_out.shape[0] > 0
    idx = np.zeros(d, np.int64)
    pp = np.ones(d + 1, np.float64)
    zero = vecs[0, 0] * 0 if nvec > 0 else 0
    p = np.zeros(ncomb, vecs.dtype)
    a = np.zeros((d, d), vecs.dtype)
    pb = prod_bound * (1.0 + SLACK)
    db = det_bound * (1.0 + SLACK)
    count = 0
    if start >= stop:
        return 0
    level = 0
    idx[0] = start
    while True:
        i = idx[level]
        limit = stop if level == 0 else nvec
        if i >= limit:
            level -= 1
            if level < 0:
                break
            idx[level] += 1
            continue
        val = pp[level] * nf[i]
        if val * nf[i] ** (d - level - 1) > pb:
            level -= 1
            if level < 0:
                break
            idx[level] += 1
            continue
        pp[level + 1] = val
        if level < d - 1:
            level += 1
            idx[level] = i + 1
            continue
        # Plücker coordinates via fraction-free elimination per minor.
        nonzero = False
        for c in range(ncomb):
            for r in range(d):
                for s in range(d):
                    a[r, s] = vecs[idx[r], combos[c, s]]
            sign = 1
            prev = zero + 1
            singular = False
            for kk in range(d - 1):
                if a[kk, kk] == 0:
                    piv = -1
                    for rr in range(kk + 1, d):
                        if a[rr, kk] != 0:
                            piv = rr
                            break
                    if piv < 0:
                        singular = True
                        break
                    for s in range(d):
                        tmp = a[kk, s]
                        a[kk, s] = a[piv, s]
                        a[piv, s] = tmp
                    sign = -sign
                for rr in range(kk + 1, d):
                    for s in range(kk + 1, d):
                        a[rr, s] = (a[rr, s] * a[kk, kk] - a[rr, kk] * a[kk, s]) // prev
                prev = a[kk, kk]
            if singular:
                p[c] = zero
            else:
                p[c] = sign * a[d - 1, d - 1]
                if p[c] != 0:
                    nonzero = True
        if nonzero:
            g = zero
            for c in range(ncomb):
                y = p[c] if p[c] >= 0 else -p[c]
                while y != 0:
                    g, y = y, g % y
            first = zero
            for c in range(ncomb):
                if p[c] != 0:
                    first = p[c]
                    break
            if first < 0:
                g = -g
            for c in range(ncomb):
                p[c] = p[c] // g
            dt = zero
            for r in range(ncomb):
                if p[r] != 0:
                    row = zero
                    for s in range(ncomb):
                        row += wedge[r, s] * p[s]
                    dt += row * p[r]
            if float(dt) <= db:
                if store:
                    for c in range(ncomb):
                        keys_out[count, c] = p[c]
                    det_out[count] = dt
                    for r in range(d):
                        idx_out[count, r] = idx[r]
                count += 1
        idx[level] += 1
    return count


fp_enumerate_py = _fp_enumerate
subset_keys_py = _subset_keys
fp_enumerate_nb = None
subset_keys_nb = None

if USE_NUMBA:
    try:
        import numba

        fp_enumerate_nb = numba.njit(cache=True, nogil=True)(_fp_enumerate)
        subset_keys_nb = numba.njit(cache=True, nogil=True)(_subset_keys)
    except ImportError:  # pragma: no cover - numba is a declared dependency
        pass


def numba_active() -> bool:
    return fp_enumerate_nb is not None
