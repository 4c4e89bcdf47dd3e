"""Parameter sweeps, identity verification suites and report emission."""
from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _config
from ._config import CapacityError
from .arithmetic import hecke_count, hecke_dirichlet, hecke_reps, sigma_d, count_hnfs, smith_invariants_of_rep
from .asymptotics import a_const, b_exp, c_const, predict_leading_error, predict_P, zeta
from .counting import (
    count_all,
    count_flags,
    enumerate_primitive,
    split_p1_p2,
)
from .exact import format_rational, parse_rational
from .lattice import Lattice, lattice_from_spec, polar, project_quotient, random_lattice, shortest_vector, successive_minima
from .enumeration import lll_gram

VARIANTS = ("primitive", "all", "flags")
SUITES = ("duality", "split", "moebius", "hecke", "dirichlet", "projection", "scale")
CSV_COLUMNS = ("h2", "count", "predicted", "ratio", "leading_error", "ms")


@dataclass
class SweepConfig:
    lattice: str
    d: int
    ladder: list
    variant: str = "primitive"
    e: int | None = None
    format: str = "json"
    workers: int = 1
    seed: int = 0
    record_timing: bool = True

    def __post_init__(self):
        self.ladder = [parse_rational(x) if isinstance(x, str) else Fraction(x) for x in self.ladder]
        if any(b <= a for a, b in zip(self.ladder, self.ladder[1:])):
            raise ValueError("budget ladder must be strictly increasing")
        if any(x < 0 for x in self.ladder):
            raise ValueError("squared budgets must be nonnegative")
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.variant == "flags" and self.e is None:
            raise ValueError("flag sweeps need e")
        if self.format not in ("json", "csv"):
            raise ValueError(f"unknown format {self.format!r}")
        if self.workers < 1:
            raise ValueError("workers must be positive")

    @classmethod
    def from_json(cls, obj) -> "SweepConfig":
        if isinstance(obj, str):
            obj = json.loads(obj)
        known = {"lattice", "d", "ladder", "variant", "e", "format", "workers", "seed", "record_timing"}
        extra = set(obj) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        return cls(**obj)


@dataclass
class SweepRow:
    h2: Fraction
    count: int | None
    predicted: float | None
    ratio: float | None
    leading_error: float | None
    ms: float | None
    skipped: str | None = None


@dataclass
class SweepReport:
    rows: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "metadata": self.metadata,
            "rows": [
                {
                    "h2": format_rational(r.h2),
                    "count": r.count,
                    "predicted": r.predicted,
                    "ratio": r.ratio,
                    "leading_error": r.leading_error,
                    "ms": r.ms,
                    "skipped": r.skipped,
                }
                for r in self.rows
            ],
        }


def _lattice_for(cfg: SweepConfig) -> Lattice:
    return lattice_from_spec(cfg.lattice)


def _run_row(cfg: SweepConfig, lat: Lattice, h2: Fraction) -> SweepRow:
    n = lat.rank
    t0 = time.perf_counter()
    try:
        if cfg.variant == "primitive":
            count = enumerate_primitive(lat, cfg.d, h2, workers=1).count
        elif cfg.variant == "all":
            count = count_all(lat, cfg.d, h2).count
        else:
            count = count_flags(lat, cfg.e, cfg.d, h2).count
    except CapacityError as exc:
        return SweepRow(h2, None, None, None, None, None, skipped=str(exc))
    ms = (time.perf_counter() - t0) * 1000 if cfg.record_timing else None
    h = math.sqrt(h2)
    det_l = math.sqrt(lat.det_squared)
    predicted = lead = None
    if cfg.variant == "primitive":
        predicted = predict_P(n, cfg.d, det_l, h)
        lead = predict_leading_error(lat, cfg.d, h)
    elif cfg.variant == "all":
        predicted = float(c_const(n, cfg.d)) * h ** n / det_l ** cfg.d
        lead = predict_leading_error(lat, cfg.d, h)
    ratio = count / predicted if predicted else None
    return SweepRow(h2, count, predicted, ratio, lead, ms)


def run_sweep(cfg: SweepConfig) -> SweepReport:
    """One row per ladder step, in ladder order; capacity failures skip the row."""
    lat = _lattice_for(cfg)
    n = lat.rank
    meta = {
        "lattice": cfg.lattice,
        "n": n,
        "d": cfg.d,
        "variant": cfg.variant,
        "seed": cfg.seed,
        "precision": _config.PRECISION,
        "det_squared": format_rational(lat.det_squared),
    }
    if cfg.variant != "flags":
        meta["a"] = mpstr(a_const(n, cfg.d))
        meta["b"] = format_rational(b_exp(n, cfg.d))
        meta["c"] = mpstr(c_const(n, cfg.d))
    else:
        meta["e"] = cfg.e
    if cfg.workers > 1 and len(cfg.ladder) > 1:
        lat.minima()  # warm the shared cache before threads touch it
        with ThreadPoolExecutor(cfg.workers) as ex:
            rows = list(ex.map(lambda h2: _run_row(cfg, lat, h2), cfg.ladder))
    else:
        rows = [_run_row(cfg, lat, h2) for h2 in cfg.ladder]
    return SweepReport(rows, meta)


def mpstr(x) -> str:
    import mpmath

    return mpmath.nstr(x, _config.PRECISION, strip_zeros=False)


def _fmt_float(x) -> str:
    return "" if x is None else repr(float(x))


def emit(report: SweepReport, fmt: str = "json", path=None) -> str:
    """Serialize a report; CSV columns are h2,count,predicted,ratio,leading_error,ms."""
    if fmt == "json":
        text = json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in report.rows:
            w.writerow([
                format_rational(r.h2),
                "" if r.count is None else r.count,
                _fmt_float(r.predicted),
                _fmt_float(r.ratio),
                _fmt_float(r.leading_error),
                "" if r.ms is None else f"{r.ms:.3f}",
            ])
        text = buf.getvalue()
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


# -- verification suites ---------------------------------------------------------

@dataclass
class SuiteResult:
    suite: str
    checked: int
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


@dataclass
class VerifyReport:
    seed: int
    results: list

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "passed": self.passed,
            "suites": [
                {"suite": r.suite, "checked": r.checked, "passed": r.passed, "counterexamples": r.failures}
                for r in self.results
            ],
        }


def _rng(seed: int, salt: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64([seed, salt]))


def _budget_for(lat: Lattice, d: int, factor: int) -> Fraction:
    # a budget a few times the minimal det^2, so counts are non-trivial but small
    lam = lat.minima(d).lambda_squared
    base = Fraction(1)
    for x in lam:
        base *= x
    return base * factor


def _random_instances(seed: int, salt: int, count: int, dims):
    rng = _rng(seed, salt)
    for _ in range(count):
        n = int(rng.choice(dims))
        yield n, random_lattice(n, int(rng.integers(0, 2**31)), bound=2)


def suite_duality(seed: int, count_fn=None, size: int = 20) -> SuiteResult:
    count_fn = count_fn or (lambda lat, d, h2: enumerate_primitive(lat, d, h2).count)
    res = SuiteResult("duality", 0)
    for n, lat in _random_instances(seed, 1, size, (2, 3, 4)):
        dual = polar(lat)
        for d in range(1, n):
            for factor in (1, 2, 4):
                h2 = _budget_for(lat, d, factor)
                lhs = count_fn(lat, d, h2)
                rhs = count_fn(dual, n - d, h2 / lat.det_squared)
                res.checked += 1
                if lhs != rhs:
                    res.failures.append({"lattice": lat.to_json(), "d": d, "h2": format_rational(h2),
                                         "primal": lhs, "polar": rhs})
    return res


def suite_split(seed: int, count_fn=None, size: int = 20) -> SuiteResult:
    count_fn = count_fn or (lambda lat, d, h2: enumerate_primitive(lat, d, h2).count)
    res = SuiteResult("split", 0)
    rng = _rng(seed, 2)
    for n, lat in _random_instances(seed, 2, size, (3, 4)):
        d = int(rng.integers(2, n))
        j = int(rng.integers(0, n))
        v = tuple(int(i == j) for i in range(n))
        h2 = _budget_for(lat, d, 3)
        p1, p2 = split_p1_p2(lat, d, h2, v)
        nv = lat.norm2(v)
        bar = project_quotient(lat, v)
        rhs = count_fn(bar, d - 1, h2 / nv)
        total = count_fn(lat, d, h2)
        res.checked += 1
        if p2 != rhs or p1 + p2 != total:
            res.failures.append({"lattice": lat.to_json(), "d": d, "v": list(v), "h2": format_rational(h2),
                                 "p1": p1, "p2": p2, "projected": rhs, "total": total})
    return res


def suite_moebius(seed: int, count_fn=None, size: int = 20) -> SuiteResult:
    count_fn = count_fn or (lambda lat, d, h2: enumerate_primitive(lat, d, h2).count)
    res = SuiteResult("moebius", 0)
    rng = _rng(seed, 3)
    for n, lat in _random_instances(seed, 3, size, (2, 3, 4)):
        d = int(rng.integers(1, n))
        h2 = min(_budget_for(lat, d, 4 if d < 3 else 1), Fraction(64))
        total = count_all(lat, d, h2).count
        rhs, m = 0, 1
        lam = lat.minima(d).lambda_squared
        floor = Fraction(1)
        for x in lam:
            floor *= x
        # det^2 >= prod(lambda_i^2) / gamma bound, so past this m nothing remains
        floor = floor / Fraction(4, 3) ** (d * (d - 1) // 2)
        while m * m * floor <= h2:
            rhs += sigma_d(d, m) * count_fn(lat, d, h2 / (m * m))
            m += 1
        res.checked += 1
        if total != rhs:
            res.failures.append({"lattice": lat.to_json(), "d": d, "h2": format_rational(h2),
                                 "count_all": total, "moebius_sum": rhs})
    return res


def suite_hecke(seed: int, max_d: int = 3, max_k: int = 16) -> SuiteResult:
    res = SuiteResult("hecke", 0)
    for d in range(1, max_d + 1):
        for m in range(1, 61 if d <= 3 else 13):
            res.checked += 1
            if sigma_d(d, m) != count_hnfs(d, m):
                res.failures.append({"check": "sigma", "d": d, "m": m})
        for k in range(1, max_k + 1):
            reps = hecke_reps(d, k)
            res.checked += 1
            target = [1] * (d - 1) + [k]
            bad = len(reps) != hecke_count(d, k)
            bad = bad or any(smith_invariants_of_rep(r) != target for r in reps)
            bad = bad or len({r.matrix for r in reps}) != len(reps)
            if bad:
                res.failures.append({"check": "hecke", "d": d, "k": k, "reps": len(reps),
                                     "expected": hecke_count(d, k)})
    return res


def suite_dirichlet(seed: int, terms: int = 100000) -> SuiteResult:
    import mpmath

    res = SuiteResult("dirichlet", 1)
    val, tail = hecke_dirichlet(2, 6, terms)
    with mpmath.workdps(_config.PRECISION + 10):
        target = float(zeta(4) / zeta(6))
    if abs(val - target) > 1e-6:
        res.failures.append({"d": 2, "m": 6, "terms": terms, "value": val, "target": target, "tail": tail})
    return res


def suite_projection(seed: int, size: int = 20) -> SuiteResult:
    res = SuiteResult("projection", 0)
    for n, lat in _random_instances(seed, 5, size, (2, 3, 4)):
        v = shortest_vector(lat)
        bar = project_quotient(lat, v)
        lam = successive_minima(lat).lambda_squared
        lam_bar = successive_minima(bar).lambda_squared
        ok = all(lam_bar[i] <= lam[i + 1] for i in range(n - 1))
        # LLL basis with w_1 shortest: projected basis vectors do not grow
        u, g_red = lll_gram(lat.gram)
        w = [lat.vector(r) for r in u]
        vv = lat.vector(v)
        nv = sum(x * x for x in vv)
        for wi in w:
            f = sum(a * b for a, b in zip(wi, vv)) / nv
            wbar2 = sum((a - f * b) ** 2 for a, b in zip(wi, vv))
            ok = ok and wbar2 <= sum(a * a for a in wi)
        res.checked += 1
        if not ok:
            res.failures.append({"lattice": lat.to_json(), "v": list(v),
                                 "lambda2": [format_rational(x) for x in lam],
                                 "lambda2_bar": [format_rational(x) for x in lam_bar]})
    return res


def suite_scale(seed: int, count_fn=None, size: int = 10) -> SuiteResult:
    count_fn = count_fn or (lambda lat, d, h2: enumerate_primitive(lat, d, h2).count)
    res = SuiteResult("scale", 0)
    rng = _rng(seed, 6)
    for n, lat in _random_instances(seed, 6, size, (2, 3, 4)):
        d = int(rng.integers(1, n))
        h2 = _budget_for(lat, d, 3)
        base = count_fn(lat, d, h2)
        for c in (Fraction(2), Fraction(1, 3)):
            scaled = count_fn(lat.scaled(c), d, c ** (2 * d) * h2)
            res.checked += 1
            if scaled != base:
                res.failures.append({"lattice": lat.to_json(), "d": d, "h2": format_rational(h2),
                                     "c": format_rational(c), "count": base, "scaled_count": scaled})
    return res


_SUITE_FNS = {
    "duality": suite_duality,
    "split": suite_split,
    "moebius": suite_moebius,
    "hecke": suite_hecke,
    "dirichlet": suite_dirichlet,
    "projection": suite_projection,
    "scale": suite_scale,
}


def verify(suite: str = "all", seed: int = 42, count_fn=None) -> VerifyReport:
    """Run identity checks; ``count_fn(lat, d, h2) -> int`` replaces the P oracle
    in the count-based suites (used to self-test the harness)."""
    if suite == "all":
        names = list(SUITES)
    elif suite in _SUITE_FNS:
        names = [suite]
    else:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES + ('all',))}")
    results = []
    for name in names:
        fn = _SUITE_FNS[name]
        if count_fn is not None and name in ("duality", "split", "moebius", "scale"):
            results.append(fn(seed, count_fn=count_fn))
        else:
            results.append(fn(seed))
    return VerifyReport(seed, results)
