"""Finite metric spaces with exact rational distances."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Sequence

import numpy as np

from . import kernels


class MetricError(ValueError):
    """Base class for malformed metric input."""


class ShapeError(MetricError):
    pass


class AsymmetryError(MetricError):
    def __init__(self, i, j, msg=None):
        self.i, self.j = i, j
        super().__init__(msg or f"dist[{i}][{j}] != dist[{j}][{i}]")


class DiagonalError(MetricError):
    def __init__(self, i, msg=None):
        self.i = i
        super().__init__(msg or f"dist[{i}][{i}] != 0")


class NonPositiveError(MetricError):
    def __init__(self, i, j, msg=None):
        self.i, self.j = i, j
        super().__init__(msg or f"dist[{i}][{j}] must be positive")


class TriangleError(MetricError):
    """``dist[i][k] > dist[i][j] + dist[j][k]``; ``(i, j, k)`` is the witness."""

    def __init__(self, i, j, k, msg=None):
        self.i, self.j, self.k = i, j, k
        super().__init__(msg or f"triangle inequality fails: d({i},{k}) > d({i},{j}) + d({j},{k})")


class AdmissibilityWarning(UserWarning):
    """Union parameters break the usual admissible-metric side conditions."""


def to_rational(value) -> Fraction:
    """Parse ints, Fractions and strings like ``"5/2"`` or ``"2.5"`` exactly.

    Floats are rejected: they are almost never the number the caller meant.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not distances")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError as exc:
            raise MetricError(f"not a rational: {value!r}") from exc
    if isinstance(value, float):
        raise TypeError(f"float {value!r} is not exact; pass a string such as '{value}'")
    raise TypeError(f"cannot read {value!r} as a rational")


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _as_matrix(matrix) -> tuple[tuple[Fraction, ...], ...]:
    rows = tuple(tuple(to_rational(v) for v in row) for row in matrix)
    n = len(rows)
    for r in rows:
        if len(r) != n:
            raise ShapeError("distance matrix must be square")
    return rows


def encode(*matrices):
    """Scale rational matrices by the lcm of their denominators.

    Returns ``(scale, arrays)``; arrays are int64 when every sum the kernels
    form fits, object arrays of Python ints otherwise.
    """
    den = 1
    top = 0
    size = 1
    for m in matrices:
        size = max(size, len(m))
        for row in m:
            for q in row:
                den = lcm(den, q.denominator)
                top = max(top, abs(q))
    big = int(top * den) * (size + 2) >= 2**62
    out = []
    for m in matrices:
        ints = [[int(q * den) for q in row] for row in m]
        arr = np.array(ints, dtype=object if big else np.int64)
        if arr.ndim != 2:
            arr = arr.reshape(len(m), len(m))
        out.append(arr)
    return den, out


def decode(arr, den) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(int(v), den) for v in row) for row in arr)


def _check_pseudometric(d, strict: bool):
    n = len(d)
    for i in range(n):
        if d[i][i] != 0:
            raise DiagonalError(i)
    for i in range(n):
        for j in range(n):
            if d[i][j] < 0:
                raise NonPositiveError(i, j, f"dist[{i}][{j}] is negative")
            if strict and i != j and d[i][j] == 0:
                raise NonPositiveError(i, j)
    for i in range(n):
        for j in range(i + 1, n):
            if d[i][j] != d[j][i]:
                raise AsymmetryError(i, j)
    if n < 3:
        return
    _, (a,) = encode(d)
    # bad[i, j, k]: a[i, k] > a[i, j] + a[j, k]
    bad = a[:, None, :] > (a[:, :, None] + a[None, :, :])
    if np.any(bad):
        i, j, k = (int(t) for t in np.argwhere(bad)[0])
        raise TriangleError(i, j, k)


@dataclass(frozen=True)
class FiniteMetricSpace:
    """Labelled points with an exact rational distance matrix.

    Build through :func:`validate_space`; direct construction skips the
    axiom checks.
    """

    labels: tuple[str, ...]
    dist: tuple[tuple[Fraction, ...], ...]

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self):
        return len(self.labels)

    def d(self, i, j) -> Fraction:
        return self.dist[i][j]

    @cached_property
    def encoded(self):
        return encode(self.dist)

    @cached_property
    def diameter(self) -> Fraction:
        return max((max(row) for row in self.dist), default=Fraction(0))

    def subspace(self, indices: Sequence[int]) -> "FiniteMetricSpace":
        idx = list(indices)
        return FiniteMetricSpace(
            tuple(self.labels[i] for i in idx),
            tuple(tuple(self.dist[i][j] for j in idx) for i in idx),
        )

    def relabel(self, labels: Sequence[str]) -> "FiniteMetricSpace":
        labels = tuple(labels)
        if len(labels) != self.n or len(set(labels)) != self.n:
            raise ShapeError("need one distinct label per point")
        return FiniteMetricSpace(labels, self.dist)

    def __str__(self):
        return f"FiniteMetricSpace({self.n} points, diam={format_rational(self.diameter)})"


@dataclass(frozen=True)
class PseudometricMatrix:
    """Symmetric, zero-diagonal, nonnegative, triangle-respecting matrix."""

    dist: tuple[tuple[Fraction, ...], ...]

    @property
    def n(self) -> int:
        return len(self.dist)

    def __getitem__(self, ij):
        i, j = ij
        return self.dist[i][j]


def validate_space(labels: Sequence[str], matrix) -> FiniteMetricSpace:
    labels = tuple(str(s) for s in labels)
    d = _as_matrix(matrix)
    if len(d) != len(labels):
        raise ShapeError(f"{len(labels)} labels but a {len(d)}x{len(d)} matrix")
    if len(labels) == 0:
        raise ShapeError("a metric space needs at least one point")
    if len(set(labels)) != len(labels):
        raise ShapeError("labels must be distinct")
    _check_pseudometric(d, strict=True)
    return FiniteMetricSpace(labels, d)


def validate_pseudometric(matrix) -> PseudometricMatrix:
    d = _as_matrix(matrix)
    _check_pseudometric(d, strict=False)
    return PseudometricMatrix(d)


def scale(X: FiniteMetricSpace, r) -> FiniteMetricSpace:
    r = to_rational(r)
    if r <= 0:
        raise MetricError("scale factor must be positive")
    return FiniteMetricSpace(X.labels, tuple(tuple(v * r for v in row) for row in X.dist))


def diameter(X: FiniteMetricSpace, A: Sequence[int] | None = None) -> Fraction:
    if A is None:
        return X.diameter
    A = list(A)
    if not A:
        raise MetricError("diameter of an empty set")
    return max(X.dist[a][b] for a in A for b in A)


def dist_sets(X: FiniteMetricSpace, A: Sequence[int], B: Sequence[int]) -> Fraction:
    A, B = list(A), list(B)
    if not A or not B:
        raise MetricError("distance between sets needs non-empty sets")
    return min(X.dist[a][b] for a in A for b in B)


def hausdorff_distance(ambient: FiniteMetricSpace, A: Sequence[int], B: Sequence[int]) -> Fraction:
    A, B = list(A), list(B)
    if not A or not B:
        raise MetricError("Hausdorff distance needs non-empty sets")
    one = max(dist_sets(ambient, [a], B) for a in A)
    other = max(dist_sets(ambient, [b], A) for b in B)
    return max(one, other)


# ---------------------------------------------------------------------------
# maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PointMap:
    """A map between finite spaces; flags are always recomputed."""

    source: FiniteMetricSpace = field(repr=False)
    target: FiniteMetricSpace = field(repr=False)
    image: tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(i) for i in self.image)
        object.__setattr__(self, "image", image)
        if len(image) != self.source.n:
            raise ShapeError("map must send every source point somewhere")
        if any(not 0 <= i < self.target.n for i in image):
            raise ShapeError("map image out of range")

    def __call__(self, i):
        return self.image[i]

    @cached_property
    def non_expansive(self) -> bool:
        s, t, f = self.source.dist, self.target.dist, self.image
        n = self.source.n
        return all(t[f[i]][f[j]] <= s[i][j] for i in range(n) for j in range(i + 1, n))

    @cached_property
    def surjective(self) -> bool:
        return len(set(self.image)) == self.target.n

    @cached_property
    def injective(self) -> bool:
        return len(set(self.image)) == len(self.image)

    @cached_property
    def isometric(self) -> bool:
        s, t, f = self.source.dist, self.target.dist, self.image
        n = self.source.n
        return all(t[f[i]][f[j]] == s[i][j] for i in range(n) for j in range(i + 1, n))

    def expansion_witness(self):
        """First pair ``(i, j)`` whose distance grows, or ``None``."""
        s, t, f = self.source.dist, self.target.dist, self.image
        for i in range(self.source.n):
            for j in range(i + 1, self.source.n):
                if t[f[i]][f[j]] > s[i][j]:
                    return (i, j)
        return None

    def then(self, other: "PointMap") -> "PointMap":
        """``other ∘ self``."""
        return PointMap(self.source, other.target, tuple(other.image[i] for i in self.image))


def identity_map(X: FiniteMetricSpace) -> PointMap:
    return PointMap(X, X, tuple(range(X.n)))


# ---------------------------------------------------------------------------
# closures and quotients
# ---------------------------------------------------------------------------


def pseudometric_closure(cost) -> PseudometricMatrix:
    """Greatest pseudometric below ``cost``: cheapest chain between points."""
    c = _as_matrix(cost)
    n = len(c)
    for i in range(n):
        if c[i][i] != 0:
            raise DiagonalError(i)
        for j in range(n):
            if c[i][j] < 0:
                raise NonPositiveError(i, j, f"cost[{i}][{j}] is negative")
            if c[i][j] != c[j][i]:
                raise AsymmetryError(i, j)
    den, (a,) = encode(c)
    return PseudometricMatrix(decode(kernels.minplus_closure(a), den))


@dataclass(frozen=True)
class DerivativeResult:
    quotient: FiniteMetricSpace
    projection: PointMap
    classes: tuple[tuple[int, ...], ...]


def quotient_by_zero(X: FiniteMetricSpace, p) -> DerivativeResult:
    """Merge points at pseudodistance zero; classes keep ``p`` distances."""
    d = p.dist if isinstance(p, PseudometricMatrix) else _as_matrix(p)
    if len(d) != X.n:
        raise ShapeError("pseudometric size does not match the space")
    class_of = [-1] * X.n
    classes = []
    for i in range(X.n):
        if class_of[i] >= 0:
            continue
        members = tuple(j for j in range(X.n) if class_of[j] < 0 and d[i][j] == 0)
        for j in members:
            class_of[j] = len(classes)
        classes.append(members)
    return _assemble_quotient(X, classes, class_of, d)


def _assemble_quotient(X, classes, class_of, d) -> DerivativeResult:
    labels = tuple(min(X.labels[i] for i in members) for members in classes)
    reps = [members[0] for members in classes]
    dist = tuple(tuple(d[a][b] for b in reps) for a in reps)
    Q = FiniteMetricSpace(labels, dist)
    return DerivativeResult(Q, PointMap(X, Q, tuple(class_of)), tuple(classes))


# ---------------------------------------------------------------------------
# admissible unions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AdmissibleUnionSpec:
    """Components ``X_1..X_N``; ``params[k]`` is the distance from component
    ``k`` to every later component (and to the tail point, if present)."""

    components: tuple[FiniteMetricSpace, ...]
    params: tuple[Fraction, ...]
    include_tail_point: bool = False

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "params", tuple(to_rational(r) for r in self.params))
        need = len(self.components) - (0 if self.include_tail_point else 1)
        if not self.components:
            raise ShapeError("a union needs at least one component")
        if len(self.params) != need:
            raise ShapeError(f"expected {need} parameters, got {len(self.params)}")
        if any(r <= 0 for r in self.params):
            raise MetricError("union parameters must be positive")


TAIL_LABEL = "inf"


def _union_labels(spec):
    labels = []
    for k, comp in enumerate(spec.components):
        labels.extend(f"{k + 1}:{s}" for s in comp.labels)
    if spec.include_tail_point:
        labels.append(TAIL_LABEL)
    return labels


def _parameter_condition_failures(spec):
    comps, r = spec.components, spec.params
    out = []
    for n in range(1, len(r)):
        if 2 * r[n - 1] < r[n]:
            out.append(f"2*r_{n} >= r_{n + 1} fails")
    for n in range(len(r)):
        if n < len(comps) and 2 * r[n] < comps[n].diameter:
            out.append(f"r_{n + 1} >= diam(X_{n + 1})/2 fails")
    for n in range(1, len(comps)):
        if comps[n].diameter > comps[n - 1].diameter:
            out.append("component diameters are not decreasing")
            break
    return out


def admissible_union(spec: AdmissibleUnionSpec):
    """Assemble the union matrix and check it as a metric.

    Returns ``(space, component_of)`` where ``component_of[i]`` is the
    component index of point ``i`` (``len(components)`` for the tail point).
    """
    comps, r = spec.components, spec.params
    owner = []
    local = []
    for k, comp in enumerate(comps):
        owner.extend([k] * comp.n)
        local.extend(range(comp.n))
    if spec.include_tail_point:
        owner.append(len(comps))
        local.append(0)
    size = len(owner)
    rows = []
    for a in range(size):
        row = []
        for b in range(size):
            ka, kb = owner[a], owner[b]
            if ka == kb:
                row.append(comps[ka].dist[local[a]][local[b]] if ka < len(comps) else Fraction(0))
            else:
                row.append(r[min(ka, kb)])
        rows.append(tuple(row))
    problems = _parameter_condition_failures(spec)
    try:
        _check_pseudometric(rows, strict=True)
    except TriangleError as err:
        hint = "; ".join(problems) or "parameters too small for the component diameters"
        raise TriangleError(err.i, err.j, err.k, f"{err} ({hint})") from None
    if problems:
        warnings.warn("; ".join(problems), AdmissibilityWarning, stacklevel=2)
    space = FiniteMetricSpace(tuple(_union_labels(spec)), tuple(rows))
    return space, tuple(owner)
