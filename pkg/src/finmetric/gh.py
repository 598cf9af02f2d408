"""Gromov-Hausdorff distances between finite metric spaces.

The exact value is half the smallest distortion of a correspondence; the
search is a branch and bound in :mod:`finmetric.kernels`.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, Union

import numpy as np

from . import kernels
from .metric import AdmissibleUnionSpec, FiniteMetricSpace, admissible_union, encode, to_rational

DEFAULT_SIZE_LIMIT = 6


def default_size_limit() -> int:
    return int(os.environ.get("FINMETRIC_GH_SIZE_LIMIT", DEFAULT_SIZE_LIMIT))


class SizeLimitExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Correspondence:
    pairs: tuple[tuple[int, int], ...]

    def is_valid(self, X: FiniteMetricSpace, Y: FiniteMetricSpace) -> bool:
        return {i for i, _ in self.pairs} == set(range(X.n)) and {j for _, j in self.pairs} == set(range(Y.n))

    def distortion(self, X: FiniteMetricSpace, Y: FiniteMetricSpace) -> Fraction:
        return max(abs(X.dist[a][c] - Y.dist[b][e]) for a, b in self.pairs for c, e in self.pairs)


@dataclass(frozen=True)
class GhEstimate:
    lower: Fraction
    upper: Fraction
    exact: bool
    witness: Correspondence | None = None

    @property
    def value(self) -> Fraction:
        if not self.exact:
            raise ValueError("estimate is not exact")
        return self.lower


def _pairs(f, g):
    pairs = {(int(x), int(y)) for x, y in enumerate(f)}
    pairs |= {(int(x), int(y)) for y, x in enumerate(g) if x >= 0}
    return Correspondence(tuple(sorted(pairs)))


def _set_hausdorff(a, b):
    a = np.unique(a)
    b = np.unique(b)
    diff = np.abs(a[:, None] - b[None, :])
    return max(diff.min(axis=1).max(), diff.min(axis=0).max())


def _lower_int(dx, dy):
    """Lower bound on the minimal distortion (encoded units)."""
    diam = abs(dx.max() - dy.max())
    glob = _set_hausdorff(dx.ravel(), dy.ravel())
    rows = np.array([[_set_hausdorff(dx[i], dy[j]) for j in range(dy.shape[0])] for i in range(dx.shape[0])])
    local = max(rows.min(axis=1).max(), rows.min(axis=0).max())
    return max(int(diam), int(glob), int(local))


def _greedy(dx, dy):
    """Greedy correspondences from every seed pair; best distortion wins."""
    nx, ny = dx.shape[0], dy.shape[0]
    best = None
    seeds = [(x, y) for x in range(nx) for y in range(ny)]
    if len(seeds) > 64:
        ecc_x = dx.max(axis=1)
        ecc_y = dy.max(axis=1)
        seeds = sorted(seeds, key=lambda s: abs(int(ecc_x[s[0]]) - int(ecc_y[s[1]])))[:64]
    for x0, y0 in seeds:
        px, py = [x0], [y0]
        cur = 0
        f = np.full(nx, -1, dtype=np.int64)
        g = np.full(ny, -1, dtype=np.int64)
        f[x0] = y0
        for x in np.argsort(dx[x0], kind="stable"):
            if f[x] >= 0:
                continue
            cost = np.abs(dx[x, px][None, :] - dy[:, py]).max(axis=1)
            y = int(np.argmin(cost))
            cur = max(cur, int(cost[y]))
            f[x] = y
            px.append(int(x))
            py.append(y)
        covered = set(int(v) for v in f)
        for y in range(ny):
            if y in covered:
                continue
            cost = np.abs(dx[:, px] - dy[y, py][None, :]).max(axis=1)
            x = int(np.argmin(cost))
            cur = max(cur, int(cost[x]))
            g[y] = x
            px.append(x)
            py.append(y)
        if best is None or cur < best[0]:
            best = (cur, f.copy(), g.copy())
    return best


def gh_bounds(X: FiniteMetricSpace, Y: FiniteMetricSpace) -> GhEstimate:
    """Certified bracket: distance-set lower bounds and a greedy upper bound."""
    den, (dx, dy) = encode(X.dist, Y.dist)
    lo = _lower_int(dx, dy)
    hi, f, g = _greedy(dx, dy)
    lower, upper = Fraction(lo, 2 * den), Fraction(hi, 2 * den)
    return GhEstimate(lower, upper, lower == upper, _pairs(f, g))


def gh_exact(X: FiniteMetricSpace, Y: FiniteMetricSpace, size_limit: int | None = None) -> GhEstimate:
    limit = default_size_limit() if size_limit is None else size_limit
    if X.n > limit or Y.n > limit:
        raise SizeLimitExceeded(f"spaces of size {X.n} and {Y.n} exceed the exact limit {limit}; use gh_bounds")
    den, (dx, dy) = encode(X.dist, Y.dist)
    lo = _lower_int(dx, dy)
    hi, gf, gg = _greedy(dx, dy)
    if hi == lo:
        best, f, g = hi, gf, gg
    else:
        xorder = np.argsort(-dx.max(axis=1), kind="stable")
        best, f, g = kernels.min_distortion(dx, dy, xorder, target=lo, start=hi)
        if best >= hi:  # nothing strictly better than the greedy answer
            best, f, g = hi, gf, gg
    value = Fraction(best, 2 * den)
    return GhEstimate(value, value, True, _pairs(f, g))


def gh_estimate(X: FiniteMetricSpace, Y: FiniteMetricSpace, size_limit: int | None = None) -> GhEstimate:
    """Exact when both spaces fit the size limit, bounds otherwise."""
    limit = default_size_limit() if size_limit is None else size_limit
    if X.n <= limit and Y.n <= limit:
        return gh_exact(X, Y, limit)
    return gh_bounds(X, Y)


# ---------------------------------------------------------------------------
# convergence certificates
# ---------------------------------------------------------------------------

Provider = Union[Sequence[FiniteMetricSpace], Callable[[int], FiniteMetricSpace]]


def _materialise(seq: Provider, N: int | None) -> list[FiniteMetricSpace]:
    if callable(seq):
        if N is None:
            raise ValueError("a callable provider needs N")
        return [seq(n) for n in range(1, N + 1)]
    items = list(seq)
    return items if N is None else items[:N]


@dataclass(frozen=True)
class CauchyCertificate:
    """Pairwise upper bounds past ``tail_index`` (1-based), all ``<= tolerance``.

    ``certified`` is False when no tail works within the provided prefix;
    ``violation`` then holds the offending ``(m, n, bound)``.
    """

    certified: bool
    tolerance: Fraction
    tail_index: int | None
    pair_bounds: tuple[tuple[int, int, Fraction], ...] = ()
    violation: tuple[int, int, Fraction] | None = None
    window: int = 0
    length: int = 0


def gh_convergence_certificate(seq: Provider, tol, window: int = 3, N: int | None = None,
                               size_limit: int | None = None) -> CauchyCertificate:
    """Smallest tail ``t`` such that every pair ``t <= m < n <= N`` with
    ``n - m < window`` has a GH upper bound ``<= tol``.

    Needs at least ``window`` members past the tail; never extrapolates.
    """
    tol = to_rational(tol)
    spaces = _materialise(seq, N)
    N = len(spaces)
    window = max(2, int(window))
    cache = {}

    def bound(m, n):
        if (m, n) not in cache:
            cache[(m, n)] = gh_estimate(spaces[m - 1], spaces[n - 1], size_limit).upper
        return cache[(m, n)]

    violation = None
    for t in range(1, N - window + 2):
        pairs = []
        ok = True
        for m in range(t, N + 1):
            for n in range(m + 1, min(m + window, N + 1)):
                b = bound(m, n)
                if b > tol:
                    violation = (m, n, b)
                    ok = False
                    break
                pairs.append((m, n, b))
            if not ok:
                break
        if ok:
            return CauchyCertificate(True, tol, t, tuple(pairs), None, window, N)
    return CauchyCertificate(False, tol, None, (), violation, window, N)


@dataclass(frozen=True)
class DisjointSumRow:
    index: int
    gh_x: Fraction
    gh_y: Fraction
    union_lower: Fraction
    union_upper: Fraction


@dataclass(frozen=True)
class DisjointSumReport:
    certified: bool
    tail_index: int | None
    tolerance: Fraction
    r: Fraction
    inequality_holds: bool
    rows: tuple[DisjointSumRow, ...] = field(default=())


def verify_disjoint_sum_convergence(Xseq: Provider, Yseq: Provider, X: FiniteMetricSpace, Y: FiniteMetricSpace,
                                    r, tol, N: int | None = None, size_limit: int | None = None) -> DisjointSumReport:
    """Check that unions ``X_n ⊔ Y_n`` (cross distance ``r``) approach
    ``X ⊔ Y`` and never exceed ``d(X_n, X) + d(Y_n, Y)``."""
    r, tol = to_rational(r), to_rational(tol)
    xs = _materialise(Xseq, N)
    ys = _materialise(Yseq, N)
    if len(xs) != len(ys):
        raise ValueError("sequences differ in length")
    limit, _ = admissible_union(AdmissibleUnionSpec((X, Y), (r,)))
    rows = []
    holds = True
    for n, (xn, yn) in enumerate(zip(xs, ys), start=1):
        un, _ = admissible_union(AdmissibleUnionSpec((xn, yn), (r,)))
        ex = gh_estimate(xn, X, size_limit)
        ey = gh_estimate(yn, Y, size_limit)
        eu = gh_estimate(un, limit, size_limit)
        if eu.lower > ex.upper + ey.upper:
            holds = False
        rows.append(DisjointSumRow(n, ex.upper, ey.upper, eu.lower, eu.upper))
    tail = None
    for t in range(len(rows), 0, -1):
        if rows[t - 1].union_upper <= tol:
            tail = t
        else:
            break
    certified = tail is not None and holds
    return DisjointSumReport(certified, tail, tol, r, holds, tuple(rows))
