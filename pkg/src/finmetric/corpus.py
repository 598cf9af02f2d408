"""Named example objects: small spaces, groups and systems."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .groups import AffineFamily, FiniteMetricGroup, NotHomomorphism, check_hom, validate_group
from .isometry import compose, invert, successor_space
from .metric import (
    AdmissibleUnionSpec,
    FiniteMetricSpace,
    MetricError,
    admissible_union,
    pseudometric_closure,
    scale,
    to_rational,
    validate_space,
)
from .systems import InverseSystemPrefix, validate_inverse_system


def line_points(values: Sequence, labels: Sequence[str] | None = None) -> FiniteMetricSpace:
    vals = [to_rational(v) for v in values]
    labels = [str(v) for v in vals] if labels is None else list(labels)
    return validate_space(labels, [[abs(a - b) for b in vals] for a in vals])


def point() -> FiniteMetricSpace:
    return validate_space(["0"], [[0]])


def two_point(d=1) -> FiniteMetricSpace:
    return line_points([0, d])


def path(n: int) -> FiniteMetricSpace:
    """``{0, 1, ..., n-1}`` on the line."""
    return line_points(range(n))


def discrete(n: int) -> FiniteMetricSpace:
    """``{0, ..., n}`` with every distance 1."""
    return validate_space([str(k) for k in range(n + 1)], [[int(i != j) for j in range(n + 1)] for i in range(n + 1)])


def equilateral(side=1) -> FiniteMetricSpace:
    s = to_rational(side)
    return validate_space(["A", "B", "C"], [[0, s, s], [s, 0, s], [s, s, 0]])


def egyptian_triangle() -> FiniteMetricSpace:
    return validate_space(["A", "B", "C"], [[0, 3, 4], [3, 0, 5], [4, 5, 0]])


def two_triangles_r(r="5/2") -> FiniteMetricSpace:
    T = egyptian_triangle()
    space, _ = admissible_union(AdmissibleUnionSpec((T, T), (r,)))
    return space


# finite samples of the pictured compact sets; their ordinal heights are not claimed


def figure_a() -> FiniteMetricSpace:
    return point()


def figure_b(K: int = 4) -> FiniteMetricSpace:
    return line_points([0] + [Fraction(1, k) for k in range(1, K + 1)])


def figure_c(K: int = 3) -> FiniteMetricSpace:
    vals = [Fraction(0)] + [Fraction(s, k) for k in range(1, K + 1) for s in (1, -1)]
    return line_points(sorted(vals))


def figure_d(K: int = 3) -> FiniteMetricSpace:
    vals = [Fraction(0)] + [Fraction(1, k) for k in range(1, K + 1)]
    vals += [Fraction(3)] + [3 + Fraction(1, 2 * k) for k in range(1, K + 1)]
    return line_points(sorted(vals))


def height_tower(k: int) -> FiniteMetricSpace:
    """A space of iso-height ``k``: repeated successor steps from ``{0, 1}``."""
    if k < 0:
        raise MetricError("height must be nonnegative")
    if k == 0:
        return point()
    X = two_point()
    for _ in range(k - 1):
        X = successor_space(X, X.diameter + 1)
    return X


def random_space(seed: int = 0, size: int = 5, max_num: int = 12, max_den: int = 3) -> FiniteMetricSpace:
    """Shortest-path metric of random positive rational edge weights."""
    rng = random.Random(seed)
    w = [[Fraction(0)] * size for _ in range(size)]
    for i in range(size):
        for j in range(i + 1, size):
            w[i][j] = w[j][i] = Fraction(rng.randint(1, max_num), rng.randint(1, max_den))
    return validate_space([f"p{i}" for i in range(size)], pseudometric_closure(w).dist)


# ---------------------------------------------------------------------------
# groups
# ---------------------------------------------------------------------------

S3_LABELS = ("id", "(12)", "(13)", "(23)", "(123)", "(132)")
S3_PERMS = ((0, 1, 2), (1, 0, 2), (2, 1, 0), (0, 2, 1), (1, 2, 0), (2, 0, 1))
S3_SUBGROUP = (0, 1)  # {id, (12)}


def s3_table() -> tuple[tuple[int, ...], ...]:
    """Products as ``(s*t)(x) = s(t(x))``."""
    where = {p: i for i, p in enumerate(S3_PERMS)}
    return tuple(tuple(where[compose(a, b)] for b in S3_PERMS) for a in S3_PERMS)


def s3_coset_indicator():
    """0 when ``t^-1 s`` lies in ``{id, (12)}``, 1 otherwise."""
    where = {p: i for i, p in enumerate(S3_PERMS)}
    out = []
    for s in S3_PERMS:
        out.append(tuple(Fraction(int(where[compose(invert(t), s)] not in S3_SUBGROUP)) for t in S3_PERMS))
    return tuple(out)


def discrete_matrix(n: int, value=1):
    v = to_rational(value)
    return tuple(tuple(v if i != j else Fraction(0) for j in range(n)) for i in range(n))


def s3_family() -> AffineFamily:
    return AffineFamily(s3_coset_indicator(), discrete_matrix(6))


def s3_dn(n: int = 1) -> FiniteMetricGroup:
    if n < 1:
        raise MetricError("n must be a positive integer")
    return validate_group(S3_LABELS, s3_table(), s3_family().at(n))


def s3_discrete() -> FiniteMetricGroup:
    return validate_group(S3_LABELS, s3_table(), discrete_matrix(6))


def cyclic_table(m: int):
    return tuple(tuple((a + b) % m for b in range(m)) for a in range(m))


def cyclic_group(m: int, metric=None) -> FiniteMetricGroup:
    """``Z_m``, discrete metric unless ``metric`` is given."""
    return validate_group([str(k) for k in range(m)], cyclic_table(m), discrete_matrix(m) if metric is None else metric)


def circle_discrete(m: int = 6, n: int = 1) -> FiniteMetricGroup:
    """``m`` equally spaced points of the circle with ``n`` times the arc metric
    (arc length as a fraction of the full turn, so it stays rational)."""
    if m < 1 or n < 1:
        raise MetricError("m and n must be positive")
    d = [[Fraction(n * min(abs(i - j), m - abs(i - j)), m) for j in range(m)] for i in range(m)]
    return cyclic_group(m, d)


def sign_group() -> FiniteMetricGroup:
    return cyclic_group(2)


def sign_image() -> tuple[int, ...]:
    """Parity of each S3 element, as an index of ``Z_2``."""
    out = []
    for p in S3_PERMS:
        inversions = sum(1 for i in range(3) for j in range(i + 1, 3) if p[i] > p[j])
        out.append(inversions % 2)
    return tuple(out)


def halving_image(n: int) -> tuple[int, ...]:
    """``Z_{2^(n+1)} -> Z_{2^n}``: ``k -> k/2`` for even ``k``, ``k`` for odd ``k``."""
    size = 2 ** (n + 1)
    return tuple((k // 2 if k % 2 == 0 else k) % (2**n) for k in range(size))


def z2n_system(n: int = 3) -> dict:
    """Groups ``Z_2, Z_4, ..., Z_{2^n}`` and the candidate halving bonds."""
    groups = [cyclic_group(2**k) for k in range(1, n + 1)]
    bonds = []
    for k in range(1, n):
        image = halving_image(k)
        try:
            check_hom(image, groups[k], groups[k - 1])
            witness = None
        except NotHomomorphism as err:
            witness = (err.g1, err.g2)
        bonds.append({"source": 2 ** (k + 1), "target": 2**k, "image": image, "homomorphism": witness is None,
                      "witness": witness})
    return {"groups": groups, "bonds": bonds}


# ---------------------------------------------------------------------------
# systems
# ---------------------------------------------------------------------------


def discrete_segment_system(n: int = 5) -> InverseSystemPrefix:
    """``X^k = {0..k}`` discrete, bonds ``j -> j`` if ``j <= k-1`` else ``0``."""
    if n < 1:
        raise MetricError("need at least one member")
    spaces = [discrete(k) for k in range(1, n + 1)]
    bonds = [tuple(j if j <= k else 0 for j in range(k + 2)) for k in range(1, n)]
    return validate_inverse_system(spaces, bonds)


def scaled_system(X: FiniteMetricSpace, n: int = 5) -> InverseSystemPrefix:
    """``scale(X, k/(k+1))`` for ``k = 1..n`` with identity-on-points bonds.

    The factors grow so that each bond back to the previous member shrinks
    distances; shrinking factors such as ``1/k`` would make them expand.
    """
    spaces = [scale(X, Fraction(k, k + 1)) for k in range(1, n + 1)]
    bonds = [tuple(range(X.n))] * (n - 1)
    return validate_inverse_system(spaces, bonds)


def constant_inverse_system(X: FiniteMetricSpace, n: int = 3) -> InverseSystemPrefix:
    return validate_inverse_system([X] * n, [tuple(range(X.n))] * (n - 1))


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------


def corpus_spaces(max_n: int | None = None) -> dict[str, FiniteMetricSpace]:
    """The small named spaces the test suites sweep over."""
    spaces = {
        "point": point(),
        "two_point": two_point(),
        "two_point_2": two_point(2),
        "path3": path(3),
        "path4": path(4),
        "equilateral": equilateral(),
        "egyptian_triangle": egyptian_triangle(),
        "two_triangles_r": two_triangles_r(),
        "figure_b": figure_b(),
        "figure_c": figure_c(),
        "figure_d": figure_d(),
        "discrete3": discrete(3),
        "height_tower_2": height_tower(2),
        "height_tower_3": height_tower(3),
        "random_5": random_space(5, 5),
    }
    if max_n is not None:
        spaces = {k: v for k, v in spaces.items() if v.n <= max_n}
    return spaces


EXAMPLES = {
    "egyptian_triangle": egyptian_triangle,
    "two_triangles_r": two_triangles_r,
    "figure_a": figure_a,
    "figure_b": figure_b,
    "figure_c": figure_c,
    "figure_d": figure_d,
    "s3_dn": s3_dn,
    "circle_discrete": circle_discrete,
    "z2n_system": z2n_system,
    "discrete_segment_system": discrete_segment_system,
    "height_tower": height_tower,
    "random_space": random_space,
    "point": point,
    "two_point": two_point,
    "path": path,
    "equilateral": equilateral,
}


def build_example(name: str, **params):
    try:
        fn = EXAMPLES[name]
    except KeyError:
        raise MetricError(f"unknown example {name!r}; choose from {', '.join(sorted(EXAMPLES))}") from None
    try:
        return fn(**params)
    except TypeError as err:
        raise MetricError(f"bad parameters for {name}: {err}") from None

