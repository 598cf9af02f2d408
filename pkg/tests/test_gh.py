import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

import oracles
from conftest import metric_spaces
from finmetric import (
    SizeLimitExceeded,
    gh_bounds,
    gh_convergence_certificate,
    gh_estimate,
    gh_exact,
    iso_height,
    scale,
    validate_space,
    verify_disjoint_sum_convergence,
)
from finmetric.corpus import egyptian_triangle, height_tower, path, point, two_point
from finmetric.metric import TriangleError


def test_exact_examples():
    T = egyptian_triangle()
    e = gh_exact(T, T)
    assert e.value == 0 and e.witness.distortion(T, T) == 0 and e.witness.is_valid(T, T)
    assert gh_exact(point(), T).value == Fraction(5, 2)
    assert gh_exact(two_point(), two_point(2)).value == Fraction(1, 2)


def test_bounds_examples():
    T = egyptian_triangle()
    b = gh_bounds(T, T)
    assert b.lower == b.upper == 0
    b = gh_bounds(point(), T)
    assert b.lower == b.upper == Fraction(5, 2)
    assert gh_bounds(two_point(), two_point(10)).lower >= Fraction(9, 2)


def test_size_limit(monkeypatch):
    big = path(8)
    with pytest.raises(SizeLimitExceeded):
        gh_exact(big, big, size_limit=6)
    monkeypatch.setenv("FINMETRIC_GH_SIZE_LIMIT", "3")
    with pytest.raises(SizeLimitExceeded):
        gh_exact(path(4), path(4))
    est = gh_estimate(path(4), path(4))
    assert est.lower <= 0 <= est.upper


def test_estimate_is_exact_when_small():
    e = gh_estimate(path(3), egyptian_triangle())
    assert e.exact and e.value == gh_exact(path(3), egyptian_triangle()).value


def test_estimate_value_requires_exact():
    e = gh_bounds(path(4), egyptian_triangle())
    if not e.exact:
        with pytest.raises(ValueError):
            e.value


def test_witness_achieves_value():
    rng = random.Random(11)
    for _ in range(20):
        X = validate_space(list("abcde")[:3], oracles.rand_metric(rng, 3))
        Y = validate_space(list("uvwxy")[:4], oracles.rand_metric(rng, 4))
        e = gh_exact(X, Y)
        assert e.witness.is_valid(X, Y)
        assert e.witness.distortion(X, Y) / 2 == e.value


def test_oracle_agreement_small():
    rng = random.Random(5)
    for _ in range(25):
        nx, ny = rng.randint(1, 3), rng.randint(1, 3)
        dx, dy = oracles.rand_metric(rng, nx), oracles.rand_metric(rng, ny)
        X = validate_space([str(i) for i in range(nx)], dx)
        Y = validate_space([str(i) for i in range(ny)], dy)
        assert gh_exact(X, Y).value == oracles.brute_gh(dx, dy)


def test_map_oracle_agreement_four_points():
    rng = random.Random(6)
    for _ in range(4):
        dx, dy = oracles.rand_symmetric_metric(rng, 4), oracles.rand_metric(rng, 3)
        X = validate_space([str(i) for i in range(4)], dx)
        Y = validate_space([str(i) for i in range(3)], dy)
        assert gh_exact(X, Y).value == oracles.brute_gh_maps(dx, dy)


@given(metric_spaces(max_n=4), metric_spaces(max_n=4))
def test_bounds_bracket_exact(X, Y):
    e = gh_exact(X, Y)
    b = gh_bounds(X, Y)
    assert b.lower <= e.value <= b.upper
    assert gh_exact(Y, X).value == e.value


@settings(max_examples=30)
@given(metric_spaces(max_n=3), metric_spaces(max_n=3), metric_spaces(max_n=3))
def test_triangle_inequality(X, Y, Z):
    assert gh_exact(X, Z).value <= gh_exact(X, Y).value + gh_exact(Y, Z).value


@given(metric_spaces(max_n=5))
def test_diameter_bound(X):
    assert gh_exact(point(), X).value == X.diameter / 2


def test_certificate_two_point_sequence():
    cert = gh_convergence_certificate(lambda n: two_point(Fraction(1, n)), "1/10", N=15)
    assert cert.certified and cert.tail_index <= 11
    assert all(n - m < cert.window for m, n, _ in cert.pair_bounds)
    assert all(b <= Fraction(1, 10) for *_, b in cert.pair_bounds)


def test_certificate_constant_and_tower():
    cert = gh_convergence_certificate([path(3)] * 4, 0)
    assert cert.certified and cert.tail_index == 1
    tower = list(iso_height(height_tower(3)).tower)
    tower += [tower[-1]] * 3
    cert = gh_convergence_certificate(tower, 0)
    assert cert.certified and cert.tail_index == 4


def test_certificate_failure_reports_violation():
    seq = [two_point(k) for k in range(1, 6)]
    cert = gh_convergence_certificate(seq, "1/10")
    assert not cert.certified and cert.violation is not None
    m, n, b = cert.violation
    assert b > Fraction(1, 10)


def test_certificate_needs_length():
    with pytest.raises(ValueError):
        gh_convergence_certificate(lambda n: point(), 0)


def test_disjoint_sums():
    rep = verify_disjoint_sum_convergence(lambda n: scale(two_point(), 1 + Fraction(1, n)), lambda n: point(),
                                          two_point(), point(), 2, "1/10", N=12)
    assert rep.certified and rep.inequality_holds and rep.tail_index == 5
    same = verify_disjoint_sum_convergence([path(3)] * 3, [point()] * 3, path(3), point(), 3, 0)
    assert same.certified and all(r.union_upper == 0 for r in same.rows)
    with pytest.raises(TriangleError):
        verify_disjoint_sum_convergence([two_point(4)], [two_point(4)], two_point(4), two_point(4), 1, 0)


def test_numpy_and_numba_paths_agree(monkeypatch):
    from finmetric import _accel
    rng = random.Random(9)
    spaces = [validate_space([str(i) for i in range(n)], oracles.rand_metric(rng, n)) for n in (2, 3, 4, 5)]
    fast = [gh_exact(a, b).value for a in spaces for b in spaces]
    monkeypatch.setattr(_accel, "USE_NUMBA", False)
    slow = [gh_exact(a, b).value for a in spaces for b in spaces]
    assert fast == slow
