from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from grasscount import CapacityError
from grasscount.counting import (
    HeightBudget,
    count_affine_ball,
    count_all,
    count_avoiding,
    count_flags,
    count_primitive,
    duality_count,
    enumerate_primitive,
    split_p1_p2,
)
from grasscount.exact import int_rank
from grasscount.lattice import (
    Lattice,
    Sublattice,
    diagonal_lattice,
    identity_lattice,
    polar,
    project_quotient,
    random_lattice,
)

import oracles

seeds = st.integers(0, 10_000)


def P(lat, d, h2):
    return enumerate_primitive(lat, d, h2).count


def test_budget_validation():
    assert HeightBudget(4).h_squared == 4
    with pytest.raises(ValueError):
        HeightBudget(-1)
    with pytest.raises(ValueError):
        enumerate_primitive(identity_lattice(2), 2, 4)


def test_primitive_examples():
    z2 = identity_lattice(2)
    assert P(z2, 1, 1) == 2
    assert P(z2, 1, 4) == 4
    assert P(z2, 1, Fraction(1, 2)) == 0
    assert P(random_lattice(3, 1), 2, 0) == 0


@given(st.integers(2, 4), seeds, st.integers(1, 80))
def test_rank_one_against_gcd_scan(n, seed, h2):
    lat = random_lattice(n, seed)
    assume(oracles.coord_box(lat.gram, h2) <= 14)
    assert P(lat, 1, h2) == oracles.primitive_vectors_up_to_sign(lat.gram, h2)


@pytest.mark.parametrize("h2", [1, 2, 4, 9, 16, 25, 36])
def test_z4_planes_against_pluecker_scan(h2):
    assert P(identity_lattice(4), 2, h2) == oracles.z4_planes(h2)


@given(st.integers(2, 4), seeds, st.integers(1, 12))
def test_hyperplanes_against_dual_vectors(n, seed, k):
    # rank n-1 sublattice <-> primitive dual vector, det^2 scales by det^2(L)
    lat = random_lattice(n, seed, bound=2)
    h2 = lat.det_squared * k
    dual = polar(lat)
    assume(oracles.coord_box(dual.gram, k) <= 14)
    assert P(lat, n - 1, h2) == oracles.primitive_vectors_up_to_sign(dual.gram, k)


def test_materialized_list_is_canonical():
    lat = random_lattice(3, 4)
    res = enumerate_primitive(lat, 2, 60, materialize=True)
    assert res.count == len(res.sublattices) == len({s.coords for s in res.sublattices})
    for s in res.sublattices:
        assert s.primitive and s.det_squared <= 60
    out = res.to_json()
    assert out["count"] == res.count and out["params"]["h2"] == "60"


def test_duality_materialized_sets_agree():
    lat = random_lattice(3, 9)
    h2 = 3 * lat.det_squared
    a = enumerate_primitive(lat, 2, h2, materialize=True)
    b = duality_count(lat, 2, h2, materialize=True)
    assert {s.coords for s in a.sublattices} == {s.coords for s in b.sublattices}


def test_duality_examples():
    z4 = identity_lattice(4)
    assert duality_count(z4, 3, 25).count == P(z4, 1, 25)
    assert duality_count(random_lattice(3, 2), 1, Fraction(1, 100)).count == 0
    assert count_primitive(z4, 3, 25) == count_primitive(z4, 1, 25)


@given(st.integers(2, 4).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n - 1))), seeds, st.integers(1, 6))
def test_duality_identity(nd, seed, k):
    n, d = nd
    lat = random_lattice(n, seed, bound=2)
    h2 = Fraction(k * k)
    assert P(lat, d, h2) == P(polar(lat), n - d, h2 / lat.det_squared)


@given(st.integers(2, 4).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n - 1))), seeds,
       st.sampled_from([Fraction(2), Fraction(1, 3), Fraction(3, 2)]))
def test_scale_equivariance(nd, seed, c):
    n, d = nd
    lat = random_lattice(n, seed, bound=2)
    h2 = Fraction(20)
    assert P(lat.scaled(c), d, c ** (2 * d) * h2) == P(lat, d, h2)


@given(st.integers(2, 3), seeds)
def test_monotone_in_budget(n, seed):
    lat = random_lattice(n, seed, bound=2)
    counts = [P(lat, 1, h2) for h2 in (1, 5, 10, 20, 40)]
    assert counts == sorted(counts)


def test_workers_do_not_change_counts():
    lat = random_lattice(4, 21)
    assert enumerate_primitive(lat, 2, 400, workers=3).count == P(lat, 2, 400)


def test_capacity_cap(monkeypatch):
    import grasscount.counting as cm

    monkeypatch.setattr(cm, "CAP_N", 3)
    with pytest.raises(CapacityError):
        P(identity_lattice(4), 2, 4)


def test_count_all_examples():
    z2 = identity_lattice(2)
    assert count_all(z2, 1, 4).count == 6
    assert count_all(z2, 1, 1).count == 2


@given(st.integers(2, 4), seeds, st.integers(1, 60))
def test_count_all_rank_one_against_scan(n, seed, h2):
    lat = random_lattice(n, seed)
    assume(oracles.coord_box(lat.gram, h2) <= 14)
    assert count_all(lat, 1, h2).count == oracles.all_vectors_up_to_sign(lat.gram, h2)


def test_count_all_materialized():
    lat = identity_lattice(3)
    res = count_all(lat, 2, 9, materialize=True)
    assert res.count == len({s.coords for s in res.sublattices})
    assert all(s.det_squared <= 9 for s in res.sublattices)
    assert res.count >= P(lat, 2, 9)


def test_avoiding_examples():
    z2 = identity_lattice(2)
    assert count_avoiding(z2, 1, 4, [[1, 0]]).count == 3
    assert count_avoiding(z2, 1, Fraction(1, 2), [[1, 0]]).count == 0
    with pytest.raises(ValueError):
        count_avoiding(identity_lattice(3), 2, 4, [[1, 0, 0], [0, 1, 0]])


@given(st.integers(3, 4), seeds)
def test_avoiding_partition(n, seed):
    lat = random_lattice(n, seed, bound=2)
    s = Sublattice(lat, [[1] + [0] * (n - 1)])
    h2 = 40
    allp = enumerate_primitive(lat, 2, h2, materialize=True).sublattices
    meets = sum(1 for b in allp if int_rank(b.coords + s.coords) < b.rank + s.rank)
    assert count_avoiding(lat, 2, h2, s).count + meets == len(allp)


def test_split_examples():
    z3 = identity_lattice(3)
    p1, p2 = split_p1_p2(z3, 2, 4, (0, 0, 1))
    assert p2 == 4 == P(identity_lattice(2), 1, 4)
    assert split_p1_p2(z3, 2, Fraction(1, 2), (0, 0, 1)) == (0, 0)
    with pytest.raises(ValueError):
        split_p1_p2(z3, 2, 4, (0, 0, 2))
    with pytest.raises(ValueError):
        split_p1_p2(z3, 1, 4, (0, 0, 1))


@given(st.integers(3, 4).flatmap(lambda n: st.tuples(st.just(n), st.integers(2, n - 1), st.integers(0, n - 1))), seeds)
def test_split_identity(case, seed):
    n, d, j = case
    lat = random_lattice(n, seed, bound=2)
    v = tuple(int(i == j) for i in range(n))
    h2 = Fraction(60)
    p1, p2 = split_p1_p2(lat, d, h2, v)
    assert p1 + p2 == P(lat, d, h2)
    assert p2 == P(project_quotient(lat, v), d - 1, h2 / lat.norm2(v))


def test_flag_examples():
    z3 = identity_lattice(3)
    assert count_flags(z3, 1, 2, 1).count == 6
    assert count_flags(z3, 1, 2, Fraction(1, 2)).count == 0
    with pytest.raises(ValueError):
        count_flags(z3, 2, 2, 4)


@pytest.mark.parametrize("h2", [1, 4, 16, 64, 144])
def test_flags_against_orthogonal_pairs(h2):
    assert count_flags(identity_lattice(3), 1, 2, h2).count == oracles.z3_flags(h2)


@given(st.integers(3, 4), seeds)
def test_generic_flags_bounded(n, seed):
    lat = random_lattice(n, seed, bound=2)
    h2 = Fraction(4 * lat.minima(1).lambda_squared[0] ** 4) * 9
    a = count_flags(lat, 1, 2, h2)
    g = count_flags(lat, 1, 2, h2, generic_only=True)
    assert g.count <= a.count and g.generic_only


def test_affine_examples():
    z2 = identity_lattice(2)
    assert count_affine_ball(z2, (Fraction(1, 2), Fraction(1, 2)), 1) == 4
    assert count_affine_ball(z2, (0, 0), 0) == 1
    for k in range(5):
        assert count_affine_ball(identity_lattice(1), (0,), k * k) == 2 * k + 1


@given(st.integers(1, 3), seeds,
       st.lists(st.fractions(-2, 2, max_denominator=5), min_size=3, max_size=3),
       st.fractions(0, 20, max_denominator=4))
def test_affine_against_box_scan(n, seed, t, r):
    lat = random_lattice(n, seed, bound=2) if n > 1 else diagonal_lattice([Fraction(3, 2)])
    t = t[:n]
    assume((2 * oracles.affine_box(lat.basis, t, r) + 1) ** n <= 2_000_000)
    assert count_affine_ball(lat, t, r) == oracles.affine_points(lat.basis, t, r)


def test_affine_low_rank_in_higher_space():
    # rank-1 lattice in R^2; shift has a component orthogonal to the line
    lam = Lattice(((1, 0),))
    assert count_affine_ball(lam, (Fraction(1, 2), 1), Fraction(5, 4)) == 2
    assert count_affine_ball(lam, (0, 2), 3) == 0
