import random
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import oracles
from conftest import metric_spaces
from finmetric import (
    AdmissibilityWarning,
    AdmissibleUnionSpec,
    AsymmetryError,
    DiagonalError,
    NonPositiveError,
    PointMap,
    ShapeError,
    TriangleError,
    admissible_union,
    diameter,
    dist_sets,
    hausdorff_distance,
    pseudometric_closure,
    quotient_by_zero,
    scale,
    to_rational,
    validate_space,
)
from finmetric.corpus import egyptian_triangle, line_points, path, point, two_point, two_triangles_r
from finmetric.metric import MetricError


def test_egyptian_triangle_validates():
    T = validate_space(["A", "B", "C"], [[0, 3, 4], [3, 0, 5], [4, 5, 0]])
    assert T.n == 3 and T.diameter == 5


def test_one_point():
    assert validate_space(["P"], [[0]]).diameter == 0


def test_triangle_witness():
    with pytest.raises(TriangleError) as info:
        validate_space(["A", "B", "C"], [[0, 1, 10], [1, 0, 2], [10, 2, 0]])
    assert (info.value.i, info.value.j, info.value.k) == (0, 1, 2)


@pytest.mark.parametrize("matrix, err", [
    ([[0, 1], [2, 0]], AsymmetryError),
    ([[1, 1], [1, 0]], DiagonalError),
    ([[0, 0], [0, 0]], NonPositiveError),
    ([[0, -1], [-1, 0]], NonPositiveError),
])
def test_axiom_errors(matrix, err):
    with pytest.raises(err):
        validate_space(["a", "b"], matrix)


def test_shape_errors():
    with pytest.raises(ShapeError):
        validate_space(["a"], [[0, 1], [1, 0]])
    with pytest.raises(ShapeError):
        validate_space(["a", "a"], [[0, 1], [1, 0]])
    with pytest.raises(ShapeError):
        validate_space(["a", "b"], [[0, 1], [1]])


def test_rational_parsing():
    assert to_rational("2.5") == Fraction(5, 2)
    assert to_rational("7/3") == Fraction(7, 3)
    with pytest.raises(TypeError):
        to_rational(0.5)
    with pytest.raises(TypeError):
        to_rational(True)
    with pytest.raises(MetricError):
        to_rational("abc")


def test_scale_examples():
    assert scale(two_point(), 2).dist == two_point(2).dist
    T = egyptian_triangle()
    assert scale(T, 1) == T
    assert scale(T, Fraction(1, 5)).dist[0] == (0, Fraction(3, 5), Fraction(4, 5))
    assert scale(T, Fraction(1, 5)).dist[1][2] == 1
    with pytest.raises(MetricError):
        scale(T, 0)


def test_diameter_and_set_distance():
    assert diameter(egyptian_triangle()) == 5
    assert dist_sets(path(4), [0], [2, 3]) == 2
    assert diameter(point()) == 0
    with pytest.raises(MetricError):
        dist_sets(path(4), [], [1])


def test_hausdorff_examples():
    X = path(3)
    assert hausdorff_distance(X, [0, 1], [0, 1]) == 0
    assert hausdorff_distance(X, [0], [2]) == 2
    assert hausdorff_distance(X, [0, 2], [1]) == 1


def test_union_two_triangles():
    X = two_triangles_r()
    assert X.n == 6
    assert X.labels[:3] == ("1:A", "1:B", "1:C")


def test_union_with_point():
    X = line_points([0, 1, 3])
    Y, owner = admissible_union(AdmissibleUnionSpec((X, point()), (Fraction(3, 2),)))
    assert Y.n == 4 and owner == (0, 0, 0, 1)


def test_union_rejects_small_parameter():
    A = two_point(2)
    with pytest.raises(TriangleError) as info:
        admissible_union(AdmissibleUnionSpec((A, A), (Fraction(1, 2),)))
    assert "diam" in str(info.value)


def test_union_brute_force_triangle_scan():
    # independent check of the small-parameter case
    A = two_point(2)
    d = [[0, 2, Fraction(1, 2), Fraction(1, 2)], [2, 0, Fraction(1, 2), Fraction(1, 2)],
         [Fraction(1, 2), Fraction(1, 2), 0, 2], [Fraction(1, 2), Fraction(1, 2), 2, 0]]
    assert not oracles.is_pseudometric(d)
    assert A.diameter == 2


def test_union_warns_on_growing_components():
    # still a metric, but the component diameters grow
    with pytest.warns(AdmissibilityWarning):
        admissible_union(AdmissibleUnionSpec((point(), two_point()), (1,), include_tail_point=False))


def test_union_rejects_fast_growing_parameters():
    X = point()
    with pytest.raises(TriangleError):
        admissible_union(AdmissibleUnionSpec((X, X, X), (1, 4), include_tail_point=False))


def test_union_param_count():
    with pytest.raises(ShapeError):
        AdmissibleUnionSpec((point(), point()), (1, 1))
    with pytest.raises(MetricError):
        AdmissibleUnionSpec((point(), point()), (0,))


def test_union_tail_point():
    X = two_point()
    Y, owner = admissible_union(AdmissibleUnionSpec((X,), (1,), include_tail_point=True))
    assert Y.labels[-1] == "inf" and owner[-1] == 1


def test_closure_examples():
    T = egyptian_triangle()
    assert pseudometric_closure(T.dist).dist == T.dist
    c = [[0, 1, 5], [1, 0, 1], [5, 1, 0]]
    assert pseudometric_closure(c)[0, 2] == 2


def test_closure_matches_chain_enumeration():
    rng = random.Random(7)
    for _ in range(5):
        n = 6
        c = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                c[i][j] = c[j][i] = Fraction(rng.randint(0, 12), rng.randint(1, 4))
        assert [list(r) for r in pseudometric_closure(c).dist] == oracles.chain_closure(c)


def test_closure_rejects_malformed():
    with pytest.raises(MetricError):
        pseudometric_closure([[0, 1], [2, 0]])
    with pytest.raises(MetricError):
        pseudometric_closure([[1, 1], [1, 0]])


def test_quotient_examples():
    X = path(4)
    one = quotient_by_zero(X, [[0] * 4 for _ in range(4)])
    assert one.quotient.n == 1
    same = quotient_by_zero(X, X.dist)
    assert same.quotient.dist == X.dist and same.projection.injective
    p = [[0, 1, 1, 0], [1, 0, 0, 1], [1, 0, 0, 1], [0, 1, 1, 0]]
    q = quotient_by_zero(X, p)
    assert q.classes == ((0, 3), (1, 2))
    assert q.quotient.dist == ((0, 1), (1, 0))
    assert q.quotient.labels == ("0", "1")


def test_pointmap_flags_recomputed():
    X = path(3)
    f = PointMap(X, two_point(), (0, 1, 1))
    assert f.non_expansive and f.surjective and not f.injective
    g = PointMap(two_point(), X, (0, 2))
    assert not g.non_expansive and g.expansion_witness() == (0, 1)
    with pytest.raises(ShapeError):
        PointMap(X, X, (0, 1))


# -- properties ----------------------------------------------------------------


@given(metric_spaces(), st.randoms(use_true_random=False))
def test_axioms_label_invariant(X, rnd):
    perm = list(range(X.n))
    rnd.shuffle(perm)
    permuted = [[X.dist[perm[i]][perm[j]] for j in range(X.n)] for i in range(X.n)]
    validate_space([X.labels[p] for p in perm], permuted)


@given(st.integers(1, 6), st.randoms(use_true_random=False))
def test_closure_idempotent_and_maximal(n, rnd):
    c = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            c[i][j] = c[j][i] = Fraction(rnd.randint(0, 9), rnd.randint(1, 3))
    cl = pseudometric_closure(c)
    assert pseudometric_closure(cl.dist).dist == cl.dist
    assert oracles.is_pseudometric(cl.dist)
    # a minorant of c that is a pseudometric stays below the closure
    m = [[c[i][j] * Fraction(rnd.randint(0, 4), 4) for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i):
            m[i][j] = m[j][i]
    q = pseudometric_closure(m)
    assert all(q[i, j] <= cl[i, j] for i in range(n) for j in range(n))


@given(metric_spaces(max_n=5), st.randoms(use_true_random=False))
def test_quotient_projection_non_expansive(X, rnd):
    # any pseudometric below the metric: closure of a scaled-down copy
    cost = [[X.dist[i][j] * Fraction(rnd.randint(0, 2), 2) for j in range(X.n)] for i in range(X.n)]
    for i in range(X.n):
        for j in range(i):
            cost[i][j] = cost[j][i]
    p = pseudometric_closure(cost)
    res = quotient_by_zero(X, p)
    assert res.projection.non_expansive and res.projection.surjective
    if res.quotient.n > 1:
        validate_space(res.quotient.labels, res.quotient.dist)


@pytest.mark.filterwarnings("ignore::finmetric.AdmissibilityWarning")
@given(metric_spaces(max_n=4), metric_spaces(max_n=3), st.integers(1, 4))
def test_union_restricts_to_components(X, Y, extra):
    r = max(X.diameter, Y.diameter) + extra
    U, owner = admissible_union(AdmissibleUnionSpec((X, Y), (r,)))
    idx0 = [i for i, o in enumerate(owner) if o == 0]
    idx1 = [i for i, o in enumerate(owner) if o == 1]
    assert U.subspace(idx0).dist == X.dist
    assert U.subspace(idx1).dist == Y.dist


@given(metric_spaces(max_n=5), st.sampled_from([Fraction(1, 3), Fraction(2), Fraction(7, 5)]))
def test_scale_commutes_with_quotient(X, r):
    p = [[X.dist[i][j] if (i + j) % 2 else 0 for j in range(X.n)] for i in range(X.n)]
    for i in range(X.n):
        p[i][i] = 0
    P = pseudometric_closure(p)
    lhs = quotient_by_zero(scale(X, r), [[v * r for v in row] for row in P.dist]).quotient
    rhs = scale(quotient_by_zero(X, P).quotient, r)
    assert lhs.dist == rhs.dist


def test_union_no_warning_for_halving_components():
    T = egyptian_triangle()
    with warnings.catch_warnings():
        warnings.simplefilter("error", AdmissibilityWarning)
        admissible_union(AdmissibleUnionSpec((T, scale(T, Fraction(1, 2))), (Fraction(5, 2),)))
