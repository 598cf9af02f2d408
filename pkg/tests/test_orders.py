from fractions import Fraction

import pytest
from hypothesis import given, settings

import oracles
from conftest import metric_spaces
from finmetric import (
    NotMonotoneError,
    common_superspace,
    iso_height,
    monotone_limit,
    preceq,
    preceq_i,
    preceq_s,
    scale,
    uniform_compactness,
    verify_verdict,
)
from finmetric.corpus import discrete, egyptian_triangle, equilateral, path, point, two_point
from finmetric.metric import MetricError
from finmetric.orders import decide, isometric_embeddings, minimal_dense_subset, nonexpansive_surjections


def test_preceq_examples():
    v = preceq(point(), egyptian_triangle())
    assert v.holds and verify_verdict(v, point(), egyptian_triangle())
    v = preceq(two_point(), path(3))
    assert v.holds and verify_verdict(v, two_point(), path(3))
    assert not preceq(two_point(10), two_point()).holds


def test_preceq_i_examples():
    T = egyptian_triangle()
    v = preceq_i(two_point(3), T)
    assert v.holds and v.witness.isometric
    assert not preceq_i(equilateral(), path(3)).holds
    v = preceq_i(T, T)
    assert v.holds and verify_verdict(v, T, T)


def test_preceq_s_uses_subspace():
    # {0,2} is not a contraction of {0,1}, but it sits inside {0,1,2}
    X = two_point(2)
    Y = path(3)
    v = preceq_s(X, Y)
    assert v.holds and v.subset is not None and verify_verdict(v, X, Y)
    assert not preceq_s(two_point(5), Y).holds


def test_decide_dispatch():
    assert decide("preceq_i", point(), path(3)).holds
    with pytest.raises(MetricError):
        decide("less", point(), path(3))


def test_tampered_witness_fails_verification():
    v = preceq(two_point(), path(3))
    bad = type(v)(v.relation, True, v.witness.__class__(path(3), two_point(), (0, 0, 0)))
    assert not verify_verdict(bad, two_point(), path(3))


def test_enumeration_matches_oracles():
    for S, T in [(path(4), two_point()), (egyptian_triangle(), path(3)), (discrete(3), two_point())]:
        got = sorted(f.image for f in nonexpansive_surjections(S, T))
        assert got == sorted(oracles.brute_surjections(S.dist, T.dist))
        got = sorted(f.image for f in isometric_embeddings(T, S))
        assert got == sorted(oracles.brute_embeddings(T.dist, S.dist))


@settings(max_examples=40)
@given(metric_spaces(max_n=5, values=(1, 2)), metric_spaces(max_n=4, values=(1, 2)))
def test_deciders_match_brute_force(Y, X):
    assert preceq(X, Y).holds == bool(oracles.brute_surjections(Y.dist, X.dist))
    assert preceq_i(X, Y).holds == bool(oracles.brute_embeddings(X.dist, Y.dist))
    for rel in (preceq, preceq_s, preceq_i):
        v = rel(X, Y)
        if v.holds:
            assert verify_verdict(v, X, Y)


@given(metric_spaces(max_n=5))
def test_orders_reflexive(X):
    assert preceq_s(X, X).holds and preceq(X, X).holds and preceq_i(X, X).holds


def test_dense_subsets():
    assert len(minimal_dense_subset(point(), Fraction(1, 2))) == 1
    for n in range(1, 6):
        X = discrete(n)
        A = minimal_dense_subset(X, Fraction(1, 2))
        assert len(A) == n + 1 == oracles.brute_min_dense(X.dist, Fraction(1, 2))
    X = path(5)
    assert len(minimal_dense_subset(X, Fraction(3, 2))) == oracles.brute_min_dense(X.dist, Fraction(3, 2))


def test_uniform_compactness_reports():
    rep = uniform_compactness([point()] * 3, ["1/2", "1/10"])
    assert all(row.N == 1 for row in rep.per_epsilon)
    rep = uniform_compactness([discrete(n) for n in range(1, 6)], ["1/2"])
    row = rep.per_epsilon[0]
    assert row.sizes == (2, 3, 4, 5, 6) and row.strictly_increasing
    rep = uniform_compactness([scale(two_point(), Fraction(1, n)) for n in range(1, 5)], ["2"])
    assert rep.per_epsilon[0].N == 1


def test_superspace_examples():
    T = egyptian_triangle()
    sup = common_superspace([T, T])
    assert sup.r == 5 and sup.space.n == 6
    one = common_superspace([path(3)])
    assert one.space == path(3)
    sup = common_superspace([two_point(), two_point(2)])
    assert sup.space.n == 4
    for X in (two_point(), two_point(2)):
        v = preceq_i(X, sup.space)
        assert v.holds and verify_verdict(v, X, sup.space)


def test_superspace_of_points():
    sup = common_superspace([point(), point()])
    assert sup.r == 1 and sup.space.n == 2


def test_non_monotone_height():
    T = egyptian_triangle()
    sub = T.subspace([0, 1])
    assert preceq_i(sub, T).holds
    assert iso_height(sub).height == 1 > iso_height(T).height


def test_monotone_decreasing_tower():
    tower = list(iso_height(path(4)).tower)
    res = monotone_limit(tower)
    assert res.status == "exact" and res.object.n == 1


def test_monotone_constant_chain():
    res = monotone_limit([path(3)] * 3)
    assert res.status == "exact" and res.object == path(3)
    assert res.certificate.tail_index == 1


def test_monotone_increasing_bounded():
    # index offset by one so every member has two distinct points
    res = monotone_limit(lambda n: scale(two_point(), 1 - Fraction(1, n + 1)), "increasing",
                         bound=two_point(), tol="1/10", N_max=12)
    assert res.status == "certified"
    assert all(v.holds for v in res.bound_witnesses)


def test_monotone_errors():
    with pytest.raises(NotMonotoneError) as info:
        monotone_limit([point(), two_point()])
    assert info.value.index == 1
    with pytest.raises(MetricError):
        monotone_limit([point()], "increasing")
    with pytest.raises(MetricError):
        monotone_limit([point()], "sideways")
    with pytest.raises(NotMonotoneError):
        monotone_limit([point(), two_point(3)], "increasing", bound=two_point())


def test_monotone_inconclusive():
    seq = [two_point(Fraction(1, n)) for n in range(1, 7)]
    res = monotone_limit(seq, tol="1/1000")
    assert res.status == "inconclusive" and res.object is None
