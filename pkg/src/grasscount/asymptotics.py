"""Asymptotic constants and main-term predictions for sublattice counts."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from . import _config


def _dps() -> int:
    return _config.PRECISION + 10


@lru_cache(maxsize=None)
def _bernoulli(n: int) -> Fraction:
    # Akiyama-Tanigawa; returns B_n with B_1 = +1/2 (unused, only even n are asked for).
    a = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    return a[0]


def ball_volume(i: int):
    """Volume of the unit ball in R^i, using half-integer Gamma closed forms."""
    if i < 0:
        raise ValueError("dimension must be nonnegative")
    with mpmath.workdps(_dps()):
        pi = mpmath.pi
        if i % 2 == 0:
            # Gamma(i/2 + 1) = (i/2)!
            return +(pi ** (i // 2) / math.factorial(i // 2))
        # Gamma(i/2 + 1) = i!! sqrt(pi) / 2^((i+1)/2)
        dfact = 1
        for t in range(i, 0, -2):
            dfact *= t
        return +(pi ** ((i - 1) // 2) * 2 ** ((i + 1) // 2) / dfact)


@lru_cache(maxsize=None)
def _zeta_cached(s: int, dps: int):
    with mpmath.workdps(dps):
        # cut and correction count grow with precision; at dps 60 the remainder is ~1e-62
        n_terms = max(40, dps)
        p_terms = max(30, dps // 2)
        ssum = mpmath.fsum(mpmath.mpf(k) ** (-s) for k in range(1, n_terms))
        big = mpmath.mpf(n_terms)
        # integral tail plus Euler-Maclaurin corrections at the cut
        tail = big ** (1 - s) / (s - 1) + big ** (-s) / 2
        rising = mpmath.mpf(s)
        for j in range(1, p_terms + 1):
            b = _bernoulli(2 * j)
            tail += mpmath.mpf(b.numerator) / b.denominator / math.factorial(2 * j) * rising * big ** (-s - 2 * j + 1)
            rising *= (s + 2 * j - 1) * (s + 2 * j)
        return ssum + tail


def zeta(s: int):
    """Riemann zeta at an integer s >= 2, with zeta(1) taken to be 1."""
    if int(s) != s or s < 1:
        raise ValueError("zeta is only defined here for integers s >= 1")
    s = int(s)
    if s == 1:
        return mpmath.mpf(1)
    return _zeta_cached(s, _dps())


def _check_nd(n: int, d: int):
    if not 1 <= d <= n - 1:
        raise ValueError(f"need 1 <= d <= n - 1 (got n={n}, d={d})")


def a_const(n: int, d: int):
    _check_nd(n, d)
    with mpmath.workdps(_dps()):
        out = mpmath.mpf(math.comb(n, d)) / n
        for i in range(1, d + 1):
            out *= ball_volume(n - i + 1) / ball_volume(i) * zeta(i) / zeta(n - i + 1)
        return out


def b_exp(n: int, d: int) -> Fraction:
    _check_nd(n, d)
    return max(Fraction(1, d), Fraction(1, n - d))


def c_const(n: int, d: int):
    _check_nd(n, d)
    with mpmath.workdps(_dps()):
        out = a_const(n, d)
        for i in range(1, d + 1):
            out *= zeta(n - i + 1)
        return out


@dataclass(frozen=True)
class AsymptoticModel:
    n: int
    d: int
    a: object
    b: Fraction
    c: object

    @classmethod
    def build(cls, n: int, d: int) -> "AsymptoticModel":
        return cls(n, d, a_const(n, d), b_exp(n, d), c_const(n, d))

    def main_term(self, det_l: float, h: float) -> float:
        return predict_P(self.n, self.d, det_l, h)

    def main_term_all(self, det_l: float, h: float) -> float:
        return float(self.c) * h ** self.n / det_l ** self.d

    @property
    def secondary_degree_note(self) -> str:
        if self.d == self.n - 1:
            return f"N(L,{self.d},H) secondary term has degree {self.n - 1}+eta for any eta>0"
        return f"N(L,{self.d},H) secondary term matches the leading error shape"


def predict_P(n: int, d: int, det_l: float, h: float) -> float:
    """Main term a(n,d) H^n / (det L)^d."""
    if det_l <= 0 or h < 0:
        raise ValueError("need det_l > 0 and h >= 0")
    return float(a_const(n, d)) * h ** n / det_l ** d


def predict_leading_error(lat, d: int, h: float) -> float:
    """Leading error shape H^(n-b) / ((det L)^(d-b) (det L^(|-d))^b)."""
    from .lattice import minima_filtration

    n = lat.rank
    b = float(b_exp(n, d))
    det_l = math.sqrt(lat.det_squared)
    det_f = math.sqrt(minima_filtration(lat, d).det_squared)
    return h ** (n - b) / (det_l ** (d - b) * det_f ** b)


def epsilon_min(lat, e: int) -> Fraction:
    """Smallest squared determinant of a rank-e sublattice of ``lat``."""
    from .counting import primitive_table

    n = lat.rank
    if not 1 <= e <= n - 1:
        raise ValueError(f"need 1 <= e <= n - 1 (got e={e})")
    from .exact import saturate
    from .lattice import Sublattice

    # The saturated span of the first e minima witnesses gives a finite budget.
    wit = lat.minima(e).witnesses
    budget = Sublattice(lat, saturate(wit)).det_squared
    table = primitive_table(lat, e, budget)
    return min(table.det2)


@dataclass(frozen=True)
class FlagModel:
    n: int
    d: int
    e: int
    a_flag: object
    epsilon_e: Fraction
    epsilon_d: Fraction

    @classmethod
    def build(cls, lat, e: int, d: int) -> "FlagModel":
        n = lat.rank
        if not 1 <= e < d < n:
            raise ValueError("flag type needs 1 <= e < d < n")
        with mpmath.workdps(_dps()):
            a = a_const(n, d) * a_const(d, e) * mpmath.mpf(n) / (n - e)
        return cls(n, d, e, a, epsilon_min(lat, e), epsilon_min(lat, d))

    def exponents(self) -> tuple:
        """Candidate exponents of the second-largest error term."""
        n, d, e = self.n, self.d, self.e
        bnd, bde = b_exp(n, d), b_exp(d, e)
        return (
            1 - bnd / n,
            1 - bde * (n - e) / (n * d),
            1 - Fraction(1, n) * (1 - 2 * bde / d + (1 - bde) / (n - e)),
        )


def predict_flag_main(lat, e: int, d: int, h: float, model: FlagModel | None = None) -> float:
    """a(n,d) a(d,e) n/(n-e) H/(det L)^d log(H / (eps_e^d eps_d^(n-e)))."""
    model = model or FlagModel.build(lat, e, d)
    n = lat.rank
    cutoff = math.sqrt(model.epsilon_e) ** d * math.sqrt(model.epsilon_d) ** (n - e)
    if h < cutoff:
        raise ValueError(f"H={h} lies below the log cutoff {cutoff}")
    det_l = math.sqrt(lat.det_squared)
    return float(model.a_flag) * h / det_l ** d * math.log(h / cutoff)
