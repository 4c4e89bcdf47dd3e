"""Exact counts of sublattices with bounded determinant.

Every count is a complete enumeration: candidate sublattices come from short
lattice vectors (Minkowski's second theorem bounds how long the minima
witnesses of a qualifying sublattice can be), are identified by their
primitive Plücker vector and compared against the budget exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd

from ._config import CAP_N, CapacityError
from .arithmetic import count_hnfs, enumerate_hnfs
from .enumeration import subset_keys
from .exact import as_fraction, dot, format_rational, int_rank, inverse, matmul, saturate, to_int_matrix, vecmat
from .lattice import Lattice, Sublattice, minima_filtration, orthogonal, polar


@dataclass(frozen=True)
class HeightBudget:
    """A height bound H, carried as the exact square H^2."""

    h_squared: Fraction

    def __post_init__(self):
        h2 = as_fraction(self.h_squared)
        if h2 < 0:
            raise ValueError("squared height budget must be nonnegative")
        object.__setattr__(self, "h_squared", h2)

    @classmethod
    def of(cls, h2) -> "HeightBudget":
        return h2 if isinstance(h2, cls) else cls(h2)


@dataclass
class CountResult:
    count: int
    budget: HeightBudget
    params: dict
    sublattices: list | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        out = {"count": self.count, "params": dict(self.params, h2=format_rational(self.budget.h_squared))}
        if self.sublattices is not None:
            out["sublattices"] = [s.to_json() for s in self.sublattices]
        return out


@dataclass(frozen=True)
class FlagCount:
    count: int
    type: tuple
    generic_only: bool


def _check(lat: Lattice, d: int):
    n = lat.rank
    if n > CAP_N:
        raise CapacityError(f"rank {n} exceeds the enumeration cap {CAP_N}")
    if not 1 <= d <= n - 1:
        raise ValueError(f"need 1 <= d <= n - 1 (got n={n}, d={d})")


class PrimitiveTable:
    """Distinct primitive sublattices found by one enumeration.

    Entry ``i`` has exact squared determinant ``det2[i]`` and generating
    rows ``rows(i)``: d integer coordinate vectors (original basis) spanning
    a full-rank sublattice of it.  Rows are built on demand.
    """

    def __init__(self, lat: Lattice, d: int, vecs=None, dets=None, idx=None):
        self.lattice = lat
        self.d = d
        self._vecs = vecs
        self._dets = dets if dets is not None else []
        self._idx = idx

    def __len__(self) -> int:
        return len(self._dets)

    @cached_property
    def det2(self) -> list:
        den = self.lattice.ellipsoid.scale ** self.d
        return [Fraction(int(x), den) for x in self._dets]

    def rows(self, i: int) -> tuple:
        ell = self.lattice.ellipsoid
        return tuple(tuple(int(x) for x in ell.to_original(self._vecs[j])) for j in self._idx[i])

    def entries(self):
        for i in range(len(self)):
            yield self.det2[i], self.rows(i)


def primitive_table(lat: Lattice, d: int, h2, workers: int = 1) -> PrimitiveTable:
    """All primitive rank-d sublattices of ``lat`` with det^2 <= h2."""
    _check(lat, d)
    h2 = HeightBudget.of(h2).h_squared
    ell = lat.ellipsoid
    m1 = lat.minima(1).lambda_squared[0]
    # prod lambda_i(B)^2 <= gamma_d^d det(B)^2 <= (4/3)^(d(d-1)/2) H^2, lambda_i(B) >= lambda_1(L)
    prod_bound = Fraction(4, 3) ** (d * (d - 1) // 2) * h2
    lam_max = prod_bound / m1 ** (d - 1)
    if lam_max < m1 or h2 == 0:
        return PrimitiveTable(lat, d)
    vecs, norms, _ = ell.enumerate(lam_max)
    _, dets, idx = subset_keys(ell, vecs, norms, d, prod_bound, h2, workers=workers)
    return PrimitiveTable(lat, d, vecs, dets, idx)


def _materialize(lat: Lattice, table, keep=None) -> list:
    picks = range(len(table)) if keep is None else keep
    subs = [Sublattice(lat, saturate(table.rows(i))) for i in picks]
    subs.sort(key=lambda s: s.coords)
    return subs


def enumerate_primitive(lat: Lattice, d: int, h2, materialize: bool = False, workers: int = 1) -> CountResult:
    """P(L, d, H): primitive rank-d sublattices with det^2 <= H^2."""
    budget = HeightBudget.of(h2)
    table = primitive_table(lat, d, budget.h_squared, workers=workers)
    subs = _materialize(lat, table) if materialize else None
    return CountResult(len(table), budget, {"n": lat.rank, "d": d, "variant": "primitive"}, subs)


def duality_count(lat: Lattice, d: int, h2, materialize: bool = False, workers: int = 1) -> CountResult:
    """P(L, d, H) computed as P(L^P, n - d, H / det L)."""
    budget = HeightBudget.of(h2)
    n = lat.rank
    _check(lat, d)
    dual = polar(lat)
    table = primitive_table(dual, n - d, budget.h_squared / lat.det_squared, workers=workers)
    subs = None
    if materialize:
        subs = []
        for i in range(len(table)):
            perp = orthogonal(Sublattice(dual, saturate(table.rows(i))))
            subs.append(Sublattice(lat, perp.coords))
        subs.sort(key=lambda s: s.coords)
    return CountResult(len(table), budget, {"n": n, "d": d, "variant": "primitive-dual"}, subs)


def count_primitive(lat: Lattice, d: int, h2, workers: int = 1) -> int:
    """P(L, d, H) via whichever side of the duality has the smaller rank."""
    if lat.rank - d < d:
        return duality_count(lat, d, h2, workers=workers).count
    return enumerate_primitive(lat, d, h2, workers=workers).count


@lru_cache(maxsize=None)
def _hnf_count(d: int, m: int) -> int:
    return count_hnfs(d, m)


def _max_index(det2: Fraction, h2: Fraction) -> int:
    m = 0
    while (m + 1) ** 2 * det2 <= h2:
        m += 1
    return m


def count_all(lat: Lattice, d: int, h2, materialize: bool = False, workers: int = 1) -> CountResult:
    """N(L, d, H): all rank-d sublattices (primitive or not) with det^2 <= H^2."""
    budget = HeightBudget.of(h2)
    table = primitive_table(lat, d, budget.h_squared, workers=workers)
    total = 0
    subs = [] if materialize else None
    for i, det2 in enumerate(table.det2):
        top = _max_index(det2, budget.h_squared)
        total += sum(_hnf_count(d, m) for m in range(1, top + 1))
        if materialize:
            base = saturate(table.rows(i))
            for m in range(1, top + 1):
                for h in enumerate_hnfs(d, m):
                    subs.append(Sublattice(lat, matmul(h, base)))
    if subs is not None:
        subs.sort(key=lambda s: s.coords)
    return CountResult(total, budget, {"n": lat.rank, "d": d, "variant": "all"}, subs)


def count_avoiding(lat: Lattice, d: int, h2, s, materialize: bool = False, workers: int = 1) -> CountResult:
    """P_S(L, d, H): primitive rank-d sublattices meeting S only in 0."""
    budget = HeightBudget.of(h2)
    s_coords = s.coords if isinstance(s, Sublattice) else to_int_matrix(s)
    rs = int_rank(s_coords)
    if rs > lat.rank - d:
        raise ValueError(f"rank(S)={rs} exceeds n - d = {lat.rank - d}")
    table = primitive_table(lat, d, budget.h_squared, workers=workers)
    kept = [i for i in range(len(table)) if int_rank(table.rows(i) + tuple(s_coords)) == d + rs]
    subs = _materialize(lat, table, kept) if materialize else None
    return CountResult(len(kept), budget, {"n": lat.rank, "d": d, "variant": "avoiding"}, subs)


def split_p1_p2(lat: Lattice, d: int, h2, v, workers: int = 1) -> tuple[int, int]:
    """Split P(L, d, H) by whether the sublattice's span contains v."""
    n = lat.rank
    if not 2 <= d <= n - 1:
        raise ValueError(f"split needs 2 <= d <= n - 1 (got d={d})")
    v = tuple(int(x) for x in v)
    g = 0
    for x in v:
        g = gcd(g, x)
    if g != 1:
        raise ValueError(f"vector {v} is not primitive")
    table = primitive_table(lat, d, h2, workers=workers)
    p2 = sum(1 for i in range(len(table)) if int_rank(table.rows(i) + (v,)) == d)
    return len(table) - p2, p2


def root_upper(x, k: int, bits: int = 40) -> Fraction:
    """A rational y >= x^(1/k), tight to about 2^-bits relative."""
    x = as_fraction(x)
    if x <= 0:
        return Fraction(0)
    if k == 1:
        return x
    a, b = x.numerator, x.denominator
    scale = 1 << bits
    target = a * b ** (k - 1) * scale ** k
    r = _iroot_ceil(target, k)
    return Fraction(r, b * scale)


def _iroot_ceil(n: int, k: int) -> int:
    lo, hi = 0, 1
    while hi ** k < n:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if mid ** k >= n:
            hi = mid
        else:
            lo = mid + 1
    return lo


def count_flags(lat: Lattice, e: int, d: int, h2, generic_only: bool = False) -> FlagCount:
    """Flags S_e ⊂ S_d of primitive sublattices with (det S_e)^d (det S_d)^(n-e) <= H."""
    from .asymptotics import epsilon_min

    n = lat.rank
    if not 1 <= e < d < n:
        raise ValueError(f"flag type needs 1 <= e < d < n (got e={e}, d={d}, n={n})")
    h2 = HeightBudget.of(h2).h_squared
    if h2 == 0:
        return FlagCount(0, (e, d), generic_only)
    eps_e = epsilon_min(lat, e)
    table_d = primitive_table(lat, d, root_upper(h2 / eps_e ** d, n - e))
    count = 0
    for dd2, rows in table_d.entries():
        if dd2 ** (n - e) * eps_e ** d > h2:
            continue
        sd = Sublattice(lat, saturate(rows)).as_lattice()
        inner = primitive_table(sd, e, root_upper(h2 / dd2 ** (n - e), d))
        filt = minima_filtration(sd, e).coords if generic_only else None
        for de2, rows_e in inner.entries():
            if de2 ** d * dd2 ** (n - e) > h2:
                continue
            if generic_only and int_rank(rows_e + filt) != d:
                continue
            count += 1
    return FlagCount(count, (e, d), generic_only)


def count_affine_ball(lam: Lattice, t, r) -> int:
    """Points of the affine lattice lam + t with squared norm <= r."""
    if lam.rank > CAP_N:
        raise CapacityError(f"rank {lam.rank} exceeds the enumeration cap {CAP_N}")
    r = as_fraction(r)
    t = tuple(as_fraction(x) for x in t)
    if len(t) != lam.ambient_dim:
        raise ValueError("shift must live in the ambient space")
    b = lam.basis
    ginv = inverse(lam.gram)
    # coordinates of the component of t inside span(b), and the orthogonal rest
    tb = tuple(dot(row, t) for row in b)
    c = vecmat(tb, ginv)
    par = vecmat(c, b)
    perp2 = sum((x - y) ** 2 for x, y in zip(t, par))
    ell = lam.ellipsoid
    c_red = vecmat(c, inverse(ell.u))
    return ell.enumerate(r - perp2, half=False, shift=c_red, count_only=True)
