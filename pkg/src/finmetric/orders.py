"""The orders ≼, ≼_s, ≼_i on finite metric spaces, with witnesses."""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .gh import CauchyCertificate, gh_convergence_certificate
from .isometry import are_isometric
from .metric import (
    AdmissibilityWarning,
    AdmissibleUnionSpec,
    FiniteMetricSpace,
    MetricError,
    PointMap,
    admissible_union,
    encode,
    identity_map,
    to_rational,
)

RELATIONS = ("preceq", "preceq_s", "preceq_i")


@dataclass(frozen=True)
class OrderVerdict:
    """Whether ``X rel Y`` holds.

    For ``preceq`` the witness is a non-expansive surjection ``Y -> X``; for
    ``preceq_s`` it is a surjection from the subspace ``Y|subset`` onto
    ``X``; for ``preceq_i`` it is an isometric injection ``X -> Y``.
    """

    relation: str
    holds: bool
    witness: PointMap | None = None
    subset: tuple[int, ...] | None = None


def _ecc_order(D):
    return np.argsort(-D.max(axis=1), kind="stable")


def nonexpansive_surjections(source: FiniteMetricSpace, target: FiniteMetricSpace, limit: int = 0) -> list[PointMap]:
    """Non-expansive surjections ``source -> target`` (all of them when ``limit == 0``)."""
    _, (ds, dt) = encode(source.dist, target.dist)
    rows = kernels.surjections(ds, dt, _ecc_order(ds), limit)
    return [PointMap(source, target, tuple(int(v) for v in row)) for row in rows]


def isometric_embeddings(X: FiniteMetricSpace, Y: FiniteMetricSpace, limit: int = 0) -> list[PointMap]:
    if X.n > Y.n:
        return []
    _, (dx, dy) = encode(X.dist, Y.dist)
    # a point's distance values must all occur among its image's values
    vals_y = [set(row) for row in Y.dist]
    cand = np.array([[set(X.dist[i]) <= vals_y[c] for c in range(Y.n)] for i in range(X.n)], dtype=bool)
    rows = kernels.embeddings(dx, dy, _ecc_order(dx), cand, limit)
    return [PointMap(X, Y, tuple(int(v) for v in row)) for row in rows]


def preceq(X: FiniteMetricSpace, Y: FiniteMetricSpace) -> OrderVerdict:
    """``X ≼ Y``: some non-expansive map of ``Y`` onto ``X``."""
    if X.n > Y.n:
        return OrderVerdict("preceq", False)
    found = nonexpansive_surjections(Y, X, limit=1)
    if not found:
        return OrderVerdict("preceq", False)
    return OrderVerdict("preceq", True, found[0])


def preceq_s(X: FiniteMetricSpace, Y: FiniteMetricSpace) -> OrderVerdict:
    """``X ≼_s Y``: ``X ≼ K`` for a subset ``K`` of ``Y`` (every subset is closed)."""
    failed = set()
    for size in range(Y.n, X.n - 1, -1):
        for K in itertools.combinations(range(Y.n), size):
            sub = Y.subspace(K)
            key = sub.dist
            if key in failed:
                continue
            v = preceq(X, sub)
            if v.holds:
                return OrderVerdict("preceq_s", True, v.witness, tuple(K))
            failed.add(key)
    return OrderVerdict("preceq_s", False)


def preceq_i(X: FiniteMetricSpace, Y: FiniteMetricSpace) -> OrderVerdict:
    """``X ≼_i Y``: ``X`` is isometric to a subset of ``Y``."""
    found = isometric_embeddings(X, Y, limit=1)
    if not found:
        return OrderVerdict("preceq_i", False)
    f = found[0]
    return OrderVerdict("preceq_i", True, f, tuple(sorted(f.image)))


def decide(relation: str, X: FiniteMetricSpace, Y: FiniteMetricSpace) -> OrderVerdict:
    try:
        fn = {"preceq": preceq, "preceq_s": preceq_s, "preceq_i": preceq_i}[relation]
    except KeyError:
        raise MetricError(f"unknown relation {relation!r}") from None
    return fn(X, Y)


def verify_verdict(v: OrderVerdict, X: FiniteMetricSpace, Y: FiniteMetricSpace) -> bool:
    """Re-check a positive verdict's witness from scratch."""
    if not v.holds:
        return v.witness is None
    w = v.witness
    if w is None:
        return False
    # rebuild so no cached flag is reused
    if v.relation == "preceq":
        m = PointMap(Y, X, w.image)
        return m.non_expansive and m.surjective
    if v.relation == "preceq_s":
        if v.subset is None or len(set(v.subset)) != len(v.subset):
            return False
        m = PointMap(Y.subspace(v.subset), X, w.image)
        return m.non_expansive and m.surjective
    if v.relation == "preceq_i":
        m = PointMap(X, Y, w.image)
        return m.isometric and m.injective
    return False


# ---------------------------------------------------------------------------
# uniform compactness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EpsilonRow:
    epsilon: Fraction
    N: int
    sizes: tuple[int, ...]
    dense_sets: tuple[tuple[int, ...], ...]
    strictly_increasing: bool


@dataclass(frozen=True)
class UniformCompactnessReport:
    bounded_diam: Fraction
    per_epsilon: tuple[EpsilonRow, ...]


def is_dense(X: FiniteMetricSpace, A: Sequence[int], eps) -> bool:
    eps = to_rational(eps)
    return all(any(X.dist[x][a] < eps for a in A) for x in range(X.n))


def minimal_dense_subset(X: FiniteMetricSpace, eps, exhaustive_limit: int = 12) -> tuple[int, ...]:
    """A smallest ``eps``-dense subset (strict ``d < eps``).

    Greedy cover first; for ``n <= exhaustive_limit`` smaller sizes are then
    ruled out (or found) by exhaustive search.
    """
    eps = to_rational(eps)
    covers = [frozenset(y for y in range(X.n) if X.dist[x][y] < eps) for x in range(X.n)]
    left = set(range(X.n))
    greedy = []
    while left:
        best = max(range(X.n), key=lambda a: (len(covers[a] & left), -a))
        greedy.append(best)
        left -= covers[best]
    greedy = tuple(sorted(greedy))
    if X.n > exhaustive_limit:
        return greedy
    everything = frozenset(range(X.n))
    for size in range(1, len(greedy)):
        for A in itertools.combinations(range(X.n), size):
            if frozenset().union(*(covers[a] for a in A)) == everything:
                return A
    return greedy


def uniform_compactness(family: Sequence[FiniteMetricSpace], epsilons) -> UniformCompactnessReport:
    family = list(family)
    if not family or not epsilons:
        raise MetricError("need a non-empty family and at least one epsilon")
    rows = []
    for eps in epsilons:
        eps = to_rational(eps)
        sets = tuple(minimal_dense_subset(X, eps) for X in family)
        sizes = tuple(len(s) for s in sets)
        growing = len(sizes) > 1 and all(a < b for a, b in zip(sizes, sizes[1:]))
        rows.append(EpsilonRow(eps, max(sizes), sizes, sets, growing))
    return UniformCompactnessReport(max(X.diameter for X in family), tuple(rows))


# ---------------------------------------------------------------------------
# common superspace
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Superspace:
    space: FiniteMetricSpace
    embeddings: tuple[PointMap, ...]
    r: Fraction | None
    verdicts: tuple[tuple[OrderVerdict, OrderVerdict, OrderVerdict], ...] = field(default=())


def _collapse(Y: FiniteMetricSpace, X: FiniteMetricSpace, emb: PointMap) -> PointMap:
    """Inverse of the embedding on its block, everything else to X's point 0."""
    back = {y: x for x, y in enumerate(emb.image)}
    return PointMap(Y, X, tuple(back.get(y, 0) for y in range(Y.n)))


def common_superspace(family: Sequence[FiniteMetricSpace]) -> Superspace:
    """One space containing an isometric copy of every member.

    Members are joined with cross distance ``r = max diameter`` (or 1 if
    every member is a point), which is large enough for the union to be a
    metric and for the collapse maps to be non-expansive.
    """
    family = list(family)
    if not family:
        raise MetricError("empty family")
    if len(family) == 1:
        X = family[0]
        emb = (identity_map(X),)
        r = None
        Y = X
    else:
        r = max(X.diameter for X in family)
        if r == 0:
            r = Fraction(1)
        with warnings.catch_warnings():
            # equal parameters need not follow the decreasing-diameter layout; the matrix is checked anyway
            warnings.simplefilter("ignore", AdmissibilityWarning)
            Y, _ = admissible_union(AdmissibleUnionSpec(tuple(family), (r,) * (len(family) - 1)))
        embs = []
        start = 0
        for X in family:
            embs.append(PointMap(X, Y, tuple(range(start, start + X.n))))
            start += X.n
        emb = tuple(embs)
    verdicts = []
    for X, e in zip(family, emb):
        back = _collapse(Y, X, e)
        verdicts.append((
            OrderVerdict("preceq", True, back),
            OrderVerdict("preceq_s", True, back, tuple(range(Y.n))),
            OrderVerdict("preceq_i", True, e, tuple(sorted(e.image))),
        ))
    result = Superspace(Y, emb, r, tuple(verdicts))
    for X, trio in zip(family, result.verdicts):
        if not all(verify_verdict(v, X, Y) for v in trio):  # pragma: no cover - construction guarantees this
            raise MetricError("superspace witness failed re-verification")
    return result


# ---------------------------------------------------------------------------
# monotone sequences
# ---------------------------------------------------------------------------


class NotMonotoneError(MetricError):
    def __init__(self, index, msg):
        self.index = index
        super().__init__(msg)


@dataclass(frozen=True)
class MonotoneLimit:
    """``status`` is ``"exact"``, ``"certified"`` or ``"inconclusive"``."""

    status: str
    object: FiniteMetricSpace | None
    certificate: CauchyCertificate | None
    chain: tuple[OrderVerdict, ...]
    bound_witnesses: tuple[OrderVerdict, ...] = ()
    distance_to_bound: Fraction | None = None


def monotone_limit(seq, direction: str = "decreasing", bound: FiniteMetricSpace | None = None,
                   tol="1/10", N_max: int | None = None, window: int = 3) -> MonotoneLimit:
    """Limit of a ≼-monotone sequence, exact when it visibly stabilises.

    Decreasing means ``X_{n+1} ≼ X_n``; increasing means ``X_n ≼ X_{n+1}``
    and needs ``bound`` with ``X_n ≼ bound`` for every member.
    """
    if direction not in ("decreasing", "increasing"):
        raise MetricError("direction must be 'decreasing' or 'increasing'")
    spaces = [seq(n) for n in range(1, N_max + 1)] if callable(seq) else list(seq)[:N_max]
    if not spaces:
        raise MetricError("empty sequence")
    chain = []
    for n in range(len(spaces) - 1):
        a, b = spaces[n], spaces[n + 1]
        v = preceq(b, a) if direction == "decreasing" else preceq(a, b)
        if not v.holds:
            raise NotMonotoneError(n + 1, f"no ≼ witness between members {n + 1} and {n + 2}")
        chain.append(v)
    bound_w = []
    if direction == "increasing":
        if bound is None:
            raise MetricError("an increasing sequence needs an upper bound")
        for n, X in enumerate(spaces, start=1):
            v = preceq(X, bound)
            if not v.holds:
                raise NotMonotoneError(n, f"member {n} is not below the bound")
            bound_w.append(v)
    # below a one-point member every later member is a point too
    settled = direction == "decreasing" and spaces[-1].n == 1
    if len(spaces) == 1 or settled or are_isometric(spaces[-1], spaces[-2]):
        cert = gh_convergence_certificate(spaces[-2:], 0, window=2) if len(spaces) > 1 else None
        return MonotoneLimit("exact", spaces[-1], cert, tuple(chain), tuple(bound_w))
    cert = gh_convergence_certificate(spaces, tol, window=window)
    if not cert.certified:
        return MonotoneLimit("inconclusive", None, cert, tuple(chain), tuple(bound_w))
    return MonotoneLimit("certified", spaces[-1], cert, tuple(chain), tuple(bound_w))
