"""Acceptance criteria, one test per criterion.

Each test prints a single ``ACCEPT k: PASS|FAIL ...`` line; the lines are
also collected into the pytest terminal summary.  Run directly with
``python3 tests/test_acceptance.py`` for just the report.
"""
import math
import time
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from grasscount.arithmetic import count_hnfs, hecke_count, hecke_dirichlet, hecke_reps, sigma_d
from grasscount.asymptotics import a_const, ball_volume, epsilon_min, zeta
from grasscount.counting import (
    count_affine_ball,
    count_all,
    count_flags,
    duality_count,
    enumerate_primitive,
    split_p1_p2,
)
from grasscount.enumeration import lll_gram
from grasscount.exact import hnf, snf
from grasscount.lattice import (
    Lattice,
    diagonal_lattice,
    identity_lattice,
    polar,
    project_quotient,
    random_lattice,
    shortest_vector,
    successive_minima,
)

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []

SEED = 20240601


def record(k, ok, detail, t0):
    line = f"ACCEPT {k}: {'PASS' if ok else 'FAIL'} ({time.perf_counter() - t0:.1f}s) {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def P(lat, d, h2):
    return enumerate_primitive(lat, d, h2).count


def rational_lattice(n, rng):
    """Integer basis with rows divided by small random denominators."""
    base = random_lattice(n, int(rng.integers(0, 2**31)), bound=3)
    dens = [int(rng.integers(1, 4)) for _ in range(n)]
    return Lattice(tuple(tuple(x / q for x in row) for row, q in zip(base.basis, dens)))


def test_criterion_01_duality():
    t0 = time.perf_counter()
    rng = np.random.Generator(np.random.PCG64(SEED + 1))
    checked, bad = 0, []
    for i in range(20):
        n = (2, 3, 4)[i % 3]
        lat = rational_lattice(n, rng)
        dual = polar(lat)
        for d in range(1, n):
            base = epsilon_min(lat, d)
            for f in (1, 3, 8):
                h2 = base * f
                lhs = P(lat, d, h2)
                rhs = P(dual, n - d, h2 / lat.det_squared)
                checked += 1
                if lhs != rhs:
                    bad.append((i, d, f, lhs, rhs))
    record(1, not bad, f"duality exact on {checked} (L,d,H) cases; mismatches={bad[:3]}", t0)


def test_criterion_02_split():
    t0 = time.perf_counter()
    rng = np.random.Generator(np.random.PCG64(SEED + 2))
    bad = []
    for i in range(20):
        n = 3 if i % 2 == 0 else 4
        d = int(rng.integers(2, n))
        lat = rational_lattice(n, rng)
        j = int(rng.integers(0, n))
        v = tuple(int(k == j) for k in range(n))
        h2 = epsilon_min(lat, d) * 6
        p1, p2 = split_p1_p2(lat, d, h2, v)
        rhs = P(project_quotient(lat, v), d - 1, h2 / lat.norm2(v))
        if p2 != rhs or p1 + p2 != P(lat, d, h2):
            bad.append((i, n, d, j, p1, p2, rhs))
    record(2, not bad, f"p2 = P(Lbar, d-1, H^2/|v|^2) on 20 instances; mismatches={bad[:3]}", t0)


def test_criterion_03_moebius():
    t0 = time.perf_counter()
    rng = np.random.Generator(np.random.PCG64(SEED + 3))
    bad = []
    for i in range(20):
        n = (2, 3, 4)[i % 3]
        d = int(rng.integers(1, n))
        lat = random_lattice(n, int(rng.integers(0, 2**31)), bound=2)
        eps = epsilon_min(lat, d)
        h2 = min(Fraction(64), eps * int(rng.integers(4, 12)))
        total = count_all(lat, d, h2).count
        rhs, m = 0, 1
        while m * m * eps <= h2:
            rhs += sigma_d(d, m) * P(lat, d, h2 / (m * m))
            m += 1
        if total != rhs:
            bad.append((i, n, d, h2, total, rhs))
    record(3, not bad, f"N = sum sigma_d(m) P(H^2/m^2) on 20 instances, H^2 <= 64; mismatches={bad[:3]}", t0)


def test_criterion_04_sigma():
    t0 = time.perf_counter()
    bad = [(d, m) for d in (1, 2, 3) for m in range(1, 61) if sigma_d(d, m) != count_hnfs(d, m)]
    record(4, not bad, f"sigma_d(m) = #HNF(d, m) for d <= 3, m <= 60; mismatches={bad[:5]}", t0)


def test_criterion_05_hecke():
    t0 = time.perf_counter()
    bad = []
    for d in (1, 2, 3):
        for k in range(1, 17):
            mats = [r.matrix for r in hecke_reps(d, k)]
            target = [1] * (d - 1) + [k]
            if len(mats) != hecke_count(d, k):
                bad.append(("count", d, k))
            if any(snf(h) != target for h in mats):
                bad.append(("smith", d, k))
            # h' h^-1 in GL(d,Z)  <=>  same row lattice  <=>  same HNF
            if len({hnf(h)[0] for h in mats}) != len(mats):
                bad.append(("coset", d, k))
    record(5, not bad, f"|reps| = hecke_count, Smith (1,..,1,k), distinct cosets, d <= 3, k <= 16; issues={bad[:3]}", t0)


def test_criterion_06_dirichlet():
    t0 = time.perf_counter()
    val, tail = hecke_dirichlet(2, 6, 10 ** 5)
    with mpmath.workdps(60):
        target = float(zeta(4) / zeta(6))
    err = abs(val - target)
    record(6, err < 1e-6, f"|partial - zeta(4)/zeta(6)| = {err:.2e} (tail bound {tail:.1e})", t0)


def test_criterion_07_constants():
    t0 = time.perf_counter()
    with mpmath.workdps(60):
        worst = max(abs(a_const(n, d) - a_const(n, n - d)) for n in range(2, 9) for d in range(1, n))
        zerr = max(abs(zeta(2) - mpmath.pi ** 2 / 6), abs(zeta(4) - mpmath.pi ** 4 / 90),
                   abs(zeta(6) - mpmath.pi ** 6 / 945))
    ok = worst < 1e-10 and zerr < mpmath.mpf(10) ** -30
    record(7, ok, f"max |a(n,d)-a(n,n-d)| = {mpmath.nstr(worst, 3)}, max zeta closed-form error = {mpmath.nstr(zerr, 3)}", t0)


def test_criterion_08_large_budget_ratio():
    t0 = time.perf_counter()
    c3 = P(identity_lattice(3), 1, 1600)
    r3 = c3 / (float(a_const(3, 1)) * 40 ** 3)
    c4 = duality_count(identity_lattice(4), 3, 400).count
    r4 = c4 / (float(a_const(4, 3)) * 20 ** 4)
    ok = 0.95 <= r3 <= 1.05 and 0.93 <= r4 <= 1.07
    record(8, ok, f"P(Z^3,1,40)={c3} ratio {r3:.4f}; P(Z^4,3,20)={c4} ratio {r4:.4f}", t0)


def test_criterion_09_mid_dimension():
    t0 = time.perf_counter()
    a = float(a_const(4, 2))
    ratios = [P(identity_lattice(4), 2, h * h) / (a * h ** 4) for h in (2, 3, 4, 5, 6)]
    ok = all(math.isfinite(r) for r in ratios) and abs(ratios[-1] - 1) <= 0.5
    record(9, ok, "ratios H=2..6: " + ", ".join(f"{r:.4f}" for r in ratios), t0)


def test_criterion_10_scale():
    t0 = time.perf_counter()
    rng = np.random.Generator(np.random.PCG64(SEED + 10))
    bad = []
    for i in range(10):
        n = (2, 3, 4)[i % 3]
        d = int(rng.integers(1, n))
        lat = random_lattice(n, int(rng.integers(0, 2**31)), bound=2)
        h2 = epsilon_min(lat, d) * 5
        base = P(lat, d, h2)
        for c in (Fraction(2), Fraction(1, 3)):
            if P(lat.scaled(c), d, c ** (2 * d) * h2) != base:
                bad.append((i, c))
    record(10, not bad, f"P(cL, d, c^(2d) H^2) = P(L, d, H^2), c in {{2, 1/3}}, 10 instances; mismatches={bad}", t0)


def test_criterion_11_projection():
    t0 = time.perf_counter()
    rng = np.random.Generator(np.random.PCG64(SEED + 11))
    bad = []
    for i in range(20):
        n = (2, 3, 4)[i % 3]
        lat = random_lattice(n, int(rng.integers(0, 2**31)), bound=3)
        v = shortest_vector(lat)
        bar = project_quotient(lat, v)
        lam = successive_minima(lat).lambda_squared
        lam_bar = successive_minima(bar).lambda_squared
        if any(lam_bar[k] > lam[k + 1] for k in range(n - 1)):
            bad.append(("lambda", i))
        u, _ = lll_gram(lat.gram)
        vv = lat.vector(v)
        nv = sum(x * x for x in vv)
        for row in u:
            w = lat.vector(row)
            f = sum(a * b for a, b in zip(w, vv)) / nv
            if sum((a - f * b) ** 2 for a, b in zip(w, vv)) > sum(a * a for a in w):
                bad.append(("lll", i))
    record(11, not bad, f"lambda_i(Lbar)^2 <= lambda_(i+1)(L)^2 and |wbar_i|^2 <= |w_i|^2 on 20 lattices; issues={bad[:3]}", t0)


def test_criterion_12_flags():
    t0 = time.perf_counter()
    base = count_flags(identity_lattice(3), 1, 2, 1).count
    rng = np.random.Generator(np.random.PCG64(SEED + 12))
    bad = []
    for i in range(10):
        n = 3 if i % 2 == 0 else 4
        lat = random_lattice(n, int(rng.integers(0, 2**31)), bound=2)
        e1, e2 = epsilon_min(lat, 1), epsilon_min(lat, 2)
        h2 = e1 ** 2 * e2 ** (n - 1) * 16
        a = count_flags(lat, 1, 2, h2).count
        g = count_flags(lat, 1, 2, h2, generic_only=True).count
        if g > a:
            bad.append((i, g, a))
    record(12, base == 6 and not bad, f"flags(Z^3,1,2,H^2=1) = {base}; generic <= all on 10 instances; issues={bad}", t0)


def test_criterion_13_affine():
    t0 = time.perf_counter()
    half = count_affine_ball(identity_lattice(2), (Fraction(1, 2), Fraction(1, 2)), 1)
    errs = []
    for lam in (identity_lattice(2), diagonal_lattice([1, 2])):
        n_r = count_affine_ball(lam, (Fraction(1, 3), Fraction(1, 7)), 900)
        expect = float(ball_volume(2)) / math.sqrt(lam.det_squared)
        errs.append(abs(n_r / 30 ** 2 / expect - 1))
    ok = half == 4 and max(errs) < 0.05
    record(13, ok, f"count((1/2,1/2), r=1) = {half}; shift (1/3,1/7): |N(30)/30^2 / (V(2)/det) - 1| = " +
           ", ".join(f"{e:.4f}" for e in errs), t0)


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
