"""Lattices, sublattices and their basic constructions.

A :class:`Lattice` is given by a rational basis (rows).  The basis may have
fewer rows than the ambient dimension, which is how projected lattices and
sublattices viewed as lattices in their own right are represented.
"""
from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd

import numpy as np

from ._config import CAP_N, CapacityError
from .enumeration import Ellipsoid, lll_gram
from .exact import (
    RankError,
    as_fraction,
    det,
    dot,
    format_rational,
    gram,
    hnf,
    integer_kernel,
    inverse,
    is_primitive,
    matmul,
    rat_rank,
    saturate,
    to_int_matrix,
    to_rat_matrix,
    transpose,
    vecmat,
    _echelon,
)


@dataclass(frozen=True)
class Lattice:
    basis: tuple

    def __post_init__(self):
        b = to_rat_matrix(self.basis)
        if rat_rank(b) != len(b):
            raise RankError("lattice basis must have full row rank")
        object.__setattr__(self, "basis", b)
        object.__setattr__(self, "_lock", threading.Lock())
        object.__setattr__(self, "_minima", None)

    @property
    def ambient_dim(self) -> int:
        return len(self.basis[0])

    @property
    def rank(self) -> int:
        return len(self.basis)

    @cached_property
    def gram(self):
        return gram(self.basis)

    @cached_property
    def det_squared(self) -> Fraction:
        return as_fraction(det(self.gram))

    @cached_property
    def ellipsoid(self) -> Ellipsoid:
        return Ellipsoid(self.gram)

    def vector(self, coords) -> tuple:
        """Ambient vector with the given integer coordinates."""
        return vecmat(coords, self.basis)

    def norm2(self, coords) -> Fraction:
        g = self.gram
        n = len(coords)
        return sum((coords[i] * coords[j] * g[i][j] for i in range(n) for j in range(n)), Fraction(0))

    def scaled(self, c) -> "Lattice":
        c = as_fraction(c)
        return Lattice(tuple(tuple(c * x for x in r) for r in self.basis))

    def minima(self, upto: int | None = None) -> "MinimaProfile":
        """Successive minima, computed once per lattice (thread-safe)."""
        k = self.rank if upto is None else upto
        with self._lock:
            cached = self._minima
            if cached is None or len(cached.lambda_squared) < k:
                cached = _compute_minima(self, k)
                object.__setattr__(self, "_minima", cached)
        return MinimaProfile(cached.lambda_squared[:k], cached.witnesses[:k])

    def to_json(self) -> dict:
        return {
            "ambient_dim": self.ambient_dim,
            "basis": [[format_rational(x) for x in r] for r in self.basis],
        }

    @classmethod
    def from_json(cls, obj) -> "Lattice":
        if isinstance(obj, str):
            obj = json.loads(obj)
        lat = cls(obj["basis"])
        if "ambient_dim" in obj and obj["ambient_dim"] != lat.ambient_dim:
            raise ValueError("ambient_dim does not match basis width")
        return lat


@dataclass(frozen=True)
class Sublattice:
    """Sublattice of ``host`` with canonical HNF integer coordinates."""

    host: Lattice
    coords: tuple

    def __post_init__(self):
        c = to_int_matrix(self.coords)
        if len(c[0]) != self.host.rank:
            raise ValueError("coordinate width must equal the host rank")
        h, _ = hnf(c)
        object.__setattr__(self, "coords", h)

    @property
    def rank(self) -> int:
        return len(self.coords)

    @cached_property
    def primitive(self) -> bool:
        return is_primitive(self.coords)

    @cached_property
    def gram(self):
        g = self.host.gram
        return matmul(matmul(self.coords, g), transpose(self.coords))

    @cached_property
    def det_squared(self) -> Fraction:
        return as_fraction(det(self.gram))

    @property
    def basis(self):
        return matmul(self.coords, self.host.basis)

    def as_lattice(self) -> Lattice:
        return Lattice(self.basis)

    def to_json(self) -> dict:
        return {"coords": [list(r) for r in self.coords]}

    @classmethod
    def from_json(cls, host: Lattice, obj) -> "Sublattice":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(host, obj["coords"])


@dataclass(frozen=True)
class MinimaProfile:
    lambda_squared: tuple
    witnesses: tuple = field(repr=False)


# -- named constructors -------------------------------------------------------

def identity_lattice(n: int) -> Lattice:
    return Lattice(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))


def diagonal_lattice(entries) -> Lattice:
    entries = [as_fraction(x) for x in entries]
    n = len(entries)
    return Lattice(tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)))


def random_lattice(n: int, seed: int, bound: int = 3) -> Lattice:
    """Integer basis with entries uniform in [-bound, bound], resampled until full rank."""
    rng = np.random.Generator(np.random.PCG64(seed))
    while True:
        b = rng.integers(-bound, bound + 1, size=(n, n))
        rows = tuple(tuple(int(x) for x in r) for r in b)
        if det(rows) != 0:
            return Lattice(rows)


def lattice_from_spec(spec: str) -> Lattice:
    """``identity:n``, ``diag:a,b,...``, ``random:n:seed[:bound]`` or a JSON file path."""
    kind, _, rest = spec.partition(":")
    if kind == "identity":
        return identity_lattice(int(rest))
    if kind == "diag":
        return diagonal_lattice(rest.split(","))
    if kind == "random":
        parts = rest.split(":")
        if len(parts) not in (2, 3):
            raise ValueError(f"bad random lattice spec {spec!r}")
        bound = int(parts[2]) if len(parts) == 3 else 3
        if bound < 1:
            raise ValueError("entry bound must be positive")
        return random_lattice(int(parts[0]), int(parts[1]), bound)
    with open(spec) as fh:
        return Lattice.from_json(json.load(fh))


# -- constructions -------------------------------------------------------------

def polar(lat: Lattice) -> Lattice:
    """Dual basis ``G^{-1} B``; the inverse transpose for square bases."""
    return Lattice(matmul(inverse(lat.gram), lat.basis))


def orthogonal(s: Sublattice) -> Sublattice:
    """S^perp inside the polar lattice, in polar-basis coordinates."""
    if not s.primitive:
        raise ValueError("orthogonal lattice needs a primitive sublattice")
    ker = integer_kernel(s.coords)
    if not ker:
        raise ValueError("sublattice has full rank; its orthogonal lattice is zero")
    return Sublattice(polar(s.host), ker)


def lll_reduce(lat: Lattice) -> Lattice:
    u, _ = lll_gram(lat.gram)
    return Lattice(matmul(u, lat.basis))


class _Span:
    """Incremental rational row echelon for independence tests."""

    def __init__(self):
        self.rows = []  # (pivot, row)

    def reduce(self, v):
        v = [Fraction(x) for x in v]
        for p, r in self.rows:
            if v[p]:
                f = v[p] / r[p]
                v = [a - f * b for a, b in zip(v, r)]
        return v

    def add(self, v) -> bool:
        v = self.reduce(v)
        for p, x in enumerate(v):
            if x:
                self.rows.append((p, v))
                return True
        return False

    def contains(self, v) -> bool:
        return not any(self.reduce(v))


def _tie_key(lat: Lattice, coords):
    """Sign-normalize so the ambient vector's first nonzero entry is positive;
    return (key, coords).  Ties go to the lexicographically largest ambient
    vector, which makes e_1 the first choice in Z^n."""
    amb = lat.vector(coords)
    first = next(x for x in amb if x != 0)
    if first < 0:
        coords = tuple(-c for c in coords)
        amb = tuple(-x for x in amb)
    return tuple(-x for x in amb), coords


def _compute_minima(lat: Lattice, upto: int) -> MinimaProfile:
    n = lat.rank
    if n > CAP_N:
        raise CapacityError(f"rank {n} exceeds the exact-minima cap {CAP_N}")
    ell = lat.ellipsoid
    red_rows = [tuple(int(x) for x in r) for r in ell.u]
    red_norms = [ell.g_red[i][i] for i in range(n)]
    span = _Span()
    lam, wit = [], []
    for _ in range(upto):
        bound = min(nm for r, nm in zip(red_rows, red_norms) if not span.contains(r))
        vecs, scaled, den = ell.enumerate(bound)
        norms = [Fraction(int(x), den) for x in scaled]
        orig = ell.to_original(vecs) if len(norms) else []
        order = sorted(range(len(norms)), key=lambda i: norms[i])
        pos = 0
        chosen = None
        while pos < len(order):
            nm = norms[order[pos]]
            group = []
            while pos < len(order) and norms[order[pos]] == nm:
                c = tuple(int(x) for x in orig[order[pos]])
                if not span.contains(c):
                    group.append(_tie_key(lat, c))
                pos += 1
            if group:
                chosen = (nm, min(group)[1])
                break
        if chosen is None:  # pragma: no cover - bound always admits a basis vector
            raise RuntimeError("minima enumeration failed")
        span.add(chosen[1])
        lam.append(chosen[0])
        wit.append(chosen[1])
    return MinimaProfile(tuple(lam), tuple(wit))


def successive_minima(lat: Lattice) -> MinimaProfile:
    return lat.minima()


def shortest_vector(lat: Lattice) -> tuple:
    return lat.minima(1).witnesses[0]


def minima_filtration(lat: Lattice, i: int) -> Sublattice:
    """L^(|-i): saturation of the first n - i minima witnesses."""
    n = lat.rank
    if not 1 <= i <= n - 1:
        raise ValueError(f"filtration index must lie in [1, {n - 1}]")
    prof = lat.minima(n - i)
    return Sublattice(lat, saturate(prof.witnesses))


def complete_basis(v) -> tuple:
    """Unimodular integer matrix whose first row is the primitive vector v."""
    v = tuple(int(x) for x in v)
    n = len(v)
    g = 0
    for x in v:
        g = gcd(g, x)
    if g != 1:
        raise ValueError(f"vector {v} is not primitive")
    nz = [i for i, x in enumerate(v) if x]
    if len(nz) == 1:
        j = nz[0]
        rows = [v] + [tuple(int(k == i) for k in range(n)) for i in range(n) if i != j]
        return tuple(rows)
    _, u, _ = _echelon(tuple((x,) for x in v))
    # u v^T = e_1, so v is the first row of (u^{-1})^T.
    m = transpose(inverse(u))
    return tuple(tuple(int(x) for x in r) for r in m)


def project_quotient(lat: Lattice, v) -> Lattice:
    """L / <v> realized as the projection of L onto v's orthogonal complement."""
    m = complete_basis(v)
    vv = lat.vector(m[0])
    nv = dot(vv, vv)
    rows = []
    for r in m[1:]:
        w = lat.vector(r)
        f = dot(w, vv) / nv
        rows.append(tuple(a - f * b for a, b in zip(w, vv)))
    return Lattice(tuple(rows))
