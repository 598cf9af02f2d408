"""Finite groups carrying left-invariant metrics.

Everything here works on index tables: ``mul[a][b]`` is the index of the
product of elements ``a`` and ``b``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .metric import (
    FiniteMetricSpace,
    MetricError,
    PointMap,
    PseudometricMatrix,
    ShapeError,
    _as_matrix,
    _check_pseudometric,
    encode,
    pseudometric_closure,
    to_rational,
    validate_pseudometric,
    validate_space,
)


class GroupError(ValueError):
    pass


class AssociativityError(GroupError):
    def __init__(self, a, b, c):
        self.a, self.b, self.c = a, b, c
        super().__init__(f"({a}*{b})*{c} != {a}*({b}*{c})")


class IdentityError(GroupError):
    pass


class InverseError(GroupError):
    def __init__(self, g):
        self.g = g
        super().__init__(f"element {g} has no inverse")


class LeftInvarianceError(GroupError):
    def __init__(self, h, g1, g2):
        self.h, self.g1, self.g2 = h, g1, g2
        super().__init__(f"d({h}*{g1}, {h}*{g2}) != d({g1}, {g2})")


class NotHomomorphism(GroupError):
    def __init__(self, g1, g2):
        self.g1, self.g2 = g1, g2
        super().__init__(f"image({g1}*{g2}) != image({g1})*image({g2})")


@dataclass(frozen=True)
class FiniteMetricGroup:
    mul: tuple[tuple[int, ...], ...]
    inv: tuple[int, ...]
    identity: int
    metric: FiniteMetricSpace

    @property
    def n(self) -> int:
        return len(self.mul)

    @property
    def labels(self) -> tuple[str, ...]:
        return self.metric.labels

    @cached_property
    def table(self) -> np.ndarray:
        return np.array(self.mul, dtype=np.int64).reshape(self.n, self.n)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def with_metric(self, metric) -> "FiniteMetricGroup":
        return validate_group(self.labels, self.mul, metric)


def _table(mul) -> np.ndarray:
    T = np.array([[int(v) for v in row] for row in mul], dtype=np.int64)
    n = len(mul)
    if n == 0 or T.shape != (n, n):
        raise ShapeError("multiplication table must be square and non-empty")
    if T.min() < 0 or T.max() >= n:
        raise ShapeError("multiplication table entry out of range")
    return T


def _group_structure(T: np.ndarray):
    n = T.shape[0]
    idx = np.arange(n)
    lhs = T[T]  # lhs[a, b, c] = (ab)c
    rhs = T[idx[:, None, None], T[None, :, :]]
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        raise AssociativityError(*(int(v) for v in bad[0]))
    ids = [e for e in range(n) if np.array_equal(T[e], idx) and np.array_equal(T[:, e], idx)]
    if not ids:
        raise IdentityError("no two-sided identity in the table")
    e = ids[0]
    inv = []
    for g in range(n):
        hits = np.flatnonzero((T[g] == e) & (T[:, g] == e))
        if not len(hits):
            raise InverseError(g)
        inv.append(int(hits[0]))
    return e, tuple(inv)


def _left_invariance_witness(T, D):
    # moved[h, a, b] = D[h*a, h*b]
    moved = D[T[:, :, None], T[:, None, :]]
    bad = np.argwhere(moved != D[None, :, :])
    return None if not len(bad) else tuple(int(v) for v in bad[0])


def validate_group(elements: Sequence[str], mul, metric) -> FiniteMetricGroup:
    """Check group axioms and left-invariance of ``metric`` (a matrix or a space)."""
    T = _table(mul)
    labels = tuple(str(s) for s in elements)
    if len(labels) != T.shape[0]:
        raise ShapeError("one label per group element")
    e, inv = _group_structure(T)
    X = metric if isinstance(metric, FiniteMetricSpace) else validate_space(labels, metric)
    if X.labels != labels:
        X = X.relabel(labels)
    if X.n != len(labels):
        raise ShapeError("metric size does not match the group")
    _, (D,) = encode(X.dist)
    w = _left_invariance_witness(T, D)
    if w is not None:
        raise LeftInvarianceError(*w)
    return FiniteMetricGroup(tuple(tuple(int(v) for v in row) for row in T), inv, e, X)


def is_left_invariant(T, p) -> bool:
    d = p.dist if isinstance(p, (PseudometricMatrix, FiniteMetricSpace)) else _as_matrix(p)
    _, (D,) = encode(d)
    return _left_invariance_witness(np.asarray(T), D) is None


def is_bi_invariant(G: FiniteMetricGroup) -> bool:
    _, (D,) = encode(G.metric.dist)
    T = G.table
    # right translates: D[a*h, b*h]
    moved = D[T.T[:, :, None], T.T[:, None, :]]
    return bool(np.all(moved == D[None, :, :]))


def _hat(T, d):
    den, (D,) = encode(d)
    H = D[T[:, None, :], T[None, :, :]].max(axis=2)
    return tuple(tuple(Fraction(int(v), den) for v in row) for row in H)


@dataclass(frozen=True)
class HatMetricResult:
    hat: FiniteMetricSpace
    group: FiniteMetricGroup


def hat_metric(G: FiniteMetricGroup) -> HatMetricResult:
    """Largest right-translate distance: the least bi-invariant metric above ``d``."""
    d = _hat(G.table, G.metric.dist)
    X = FiniteMetricSpace(G.labels, d)
    H = validate_group(G.labels, G.mul, X)
    if not is_bi_invariant(H):  # pragma: no cover - max over right translates is right-invariant
        raise GroupError("hat metric failed bi-invariance")
    return HatMetricResult(X, H)


# ---------------------------------------------------------------------------
# homomorphisms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupHom:
    source: FiniteMetricGroup = field(repr=False)
    target: FiniteMetricGroup = field(repr=False)
    image: tuple[int, ...]

    @cached_property
    def as_map(self) -> PointMap:
        return PointMap(self.source.metric, self.target.metric, self.image)

    @property
    def non_expansive(self) -> bool:
        return self.as_map.non_expansive

    @property
    def surjective(self) -> bool:
        return self.as_map.surjective


def check_hom(image: Sequence[int], G: FiniteMetricGroup, H: FiniteMetricGroup) -> GroupHom:
    image = tuple(int(v) for v in image)
    if len(image) != G.n or any(not 0 <= v < H.n for v in image):
        raise ShapeError("homomorphism must map every element into the target")
    f = np.array(image)
    lhs = f[G.table]
    rhs = H.table[f[:, None], f[None, :]]
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        raise NotHomomorphism(*(int(v) for v in bad[0]))
    return GroupHom(G, H, image)


def hat_lemma_check(hom: GroupHom) -> bool:
    """A non-expansive surjective hom stays non-expansive between hat metrics."""
    if not (hom.non_expansive and hom.surjective):
        raise GroupError("hat check needs a non-expansive surjective homomorphism")
    G_hat = hat_metric(hom.source).hat
    H_hat = hat_metric(hom.target).hat
    return PointMap(G_hat, H_hat, hom.image).non_expansive


# ---------------------------------------------------------------------------
# floors, normal closures, quotients
# ---------------------------------------------------------------------------


def left_invariant_floor(G: FiniteMetricGroup, constraint) -> PseudometricMatrix:
    """Greatest left-invariant pseudometric below ``constraint``.

    Any such ``q`` has ``q(e, x) <= constraint(g, g*x)`` for every ``g``, so
    the length function is bounded by the translate minimum; chaining those
    values (min-plus closure) gives the answer.
    """
    c = validate_cost(constraint, G.n)
    den, (C,) = encode(c)
    T = G.table
    g = np.arange(G.n)
    f0 = C[g[:, None], T].min(axis=0)  # f0[x] = min_g C[g, g*x]
    inv = np.array(G.inv)
    W = f0[T[inv]]  # W[a, b] = f0(a^-1 * b)
    W = np.minimum(W, W.T)
    cost = tuple(tuple(Fraction(int(v), den) for v in row) for row in W)
    out = pseudometric_closure(cost)
    if not is_left_invariant(T, out):  # pragma: no cover - closure of an invariant matrix is invariant
        raise GroupError("floor lost left-invariance")
    return out


def validate_cost(cost, n: int):
    c = cost.dist if isinstance(cost, (PseudometricMatrix, FiniteMetricSpace)) else _as_matrix(cost)
    if len(c) != n:
        raise ShapeError("cost size does not match the group")
    for i in range(n):
        if c[i][i] != 0:
            raise MetricError(f"cost[{i}][{i}] must be 0")
        for j in range(n):
            if c[i][j] < 0 or c[i][j] != c[j][i]:
                raise MetricError("cost must be symmetric and nonnegative")
    return c


def normal_closure(S: Sequence[int], G: FiniteMetricGroup) -> tuple[int, ...]:
    """Least normal subgroup containing ``S``, by saturation."""
    T, inv = G.table, G.inv
    N = {G.identity} | {int(s) for s in S}
    while True:
        grown = set(N)
        grown |= {inv[a] for a in N}
        grown |= {int(T[a, b]) for a in N for b in N}
        grown |= {int(T[T[g, a], inv[g]]) for g in range(G.n) for a in N}
        if grown == N:
            return tuple(sorted(N))
        N = grown


@dataclass(frozen=True)
class QuotientGroupResult:
    normal_subgroup: tuple[int, ...]
    quotient: FiniteMetricGroup
    projection: GroupHom
    cosets: tuple[tuple[int, ...], ...]


def group_quotient_metric(G: FiniteMetricGroup, p) -> QuotientGroupResult:
    """Quotient by the normal closure of ``p``'s zero set, coset-minimum metric.

    Cosets are ordered and named by their lowest-index member, so the
    identity coset keeps the identity's label.
    """
    P = validate_pseudometric(p.dist if isinstance(p, (PseudometricMatrix, FiniteMetricSpace)) else p)
    if P.n != G.n:
        raise ShapeError("pseudometric size does not match the group")
    T = G.table
    if not is_left_invariant(T, P):
        raise GroupError("quotient pseudometric must be left-invariant")
    zero = [h for h in range(G.n) if P[h, G.identity] == 0]
    N = normal_closure(zero, G)
    coset_of = [-1] * G.n
    cosets = []
    for g in range(G.n):
        if coset_of[g] < 0:
            members = tuple(sorted({int(T[g, m]) for m in N}))
            for m in members:
                coset_of[m] = len(cosets)
            cosets.append(members)
    k = len(cosets)
    dist = [[min(P[a, b] for a in cosets[i] for b in cosets[j]) for j in range(k)] for i in range(k)]
    reps = [c[0] for c in cosets]
    mul = [[coset_of[int(T[a, b])] for b in reps] for a in reps]
    labels = [G.labels[r] for r in reps]
    Q = validate_group(labels, mul, dist)
    proj = check_hom(coset_of, G, Q)
    return QuotientGroupResult(N, Q, proj, tuple(cosets))


# ---------------------------------------------------------------------------
# inductive limits with a fixed carrier
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AffineFamily:
    """Metrics ``base + slope / n`` for ``n = 1, 2, ...``."""

    base: tuple[tuple[Fraction, ...], ...]
    slope: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "base", _as_matrix(self.base))
        object.__setattr__(self, "slope", _as_matrix(self.slope))
        if len(self.base) != len(self.slope):
            raise ShapeError("base and slope differ in size")

    def at(self, n: int):
        return tuple(tuple(b + s / n for b, s in zip(rb, rs)) for rb, rs in zip(self.base, self.slope))

    @property
    def limit(self):
        return self.base

    @property
    def infimum(self):
        """Entrywise inf over ``n >= 1``: the limit for nonnegative slopes, ``n = 1`` otherwise."""
        return tuple(tuple(b if s >= 0 else b + s for b, s in zip(rb, rs)) for rb, rs in zip(self.base, self.slope))


@dataclass(frozen=True)
class GroupLimitResult:
    """``status`` is ``"exact"`` or ``"inconclusive"``."""

    status: str
    result: QuotientGroupResult | None
    trace: dict
    arrows: tuple[GroupHom, ...] = ()


def _entrywise_min(a, b):
    return tuple(tuple(min(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def group_inductive_limit(elements: Sequence[str], mul, metrics, check_n: int = 5) -> GroupLimitResult:
    """Inductive limit of ``(G, d_n)`` with identity bonds.

    ``metrics`` is an :class:`AffineFamily` (closed form) or an explicit list
    of matrices; a list only counts when its last two entries agree, and is
    then treated as constant from there on.
    """
    trace: dict = {}
    if isinstance(metrics, AffineFamily):
        prefix = [metrics.at(n) for n in range(1, check_n + 1)]
        limit, infimum = metrics.limit, metrics.infimum
    else:
        prefix = [_as_matrix(m) for m in metrics]
        if not prefix:
            raise MetricError("empty metric sequence")
        if len(prefix) > 1 and prefix[-1] != prefix[-2]:
            trace["reason"] = "sequence does not stabilise within the given prefix"
            return GroupLimitResult("inconclusive", None, trace)
        limit = prefix[-1]
        infimum = prefix[0]
        for m in prefix[1:]:
            infimum = _entrywise_min(infimum, m)
    groups = [validate_group(elements, mul, m) for m in prefix]
    G1 = groups[0]
    T = G1.table
    hat_limit = _hat(T, limit)
    trace["hat_limit"] = hat_limit
    trace["constraint"] = infimum
    floor = left_invariant_floor(G1, _entrywise_min(infimum, hat_limit))
    trace["floor"] = floor.dist
    zero = tuple(h for h in range(G1.n) if floor[h, G1.identity] == 0)
    trace["zero_set"] = zero
    # the carrier (G, hat_limit) may be only pseudometric; measure arrows from d_1
    res = group_quotient_metric(G1, floor)
    trace["normal_closure"] = res.normal_subgroup
    trace["quotient_order"] = res.quotient.n
    arrows = tuple(check_hom(res.projection.image, Gn, res.quotient) for Gn in groups)
    if not all(a.non_expansive and a.surjective for a in arrows):  # pragma: no cover - floor <= every d_n
        raise GroupError("limit arrows are not non-expansive surjections")
    return GroupLimitResult("exact", res, trace, arrows)
