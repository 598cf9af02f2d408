"""Isometry groups, iso-derivatives and their generalisations."""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .metric import (
    AdmissibleUnionSpec,
    DerivativeResult,
    FiniteMetricSpace,
    MetricError,
    PointMap,
    _as_matrix,
    _assemble_quotient,
    admissible_union,
    encode,
    pseudometric_closure,
    quotient_by_zero,
    to_rational,
)

Permutation = tuple


@dataclass(frozen=True)
class IsometryGroup:
    n: int
    elements: tuple[Permutation, ...]

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, perm):
        return tuple(perm) in set(self.elements)

    @property
    def identity(self) -> Permutation:
        return tuple(range(self.n))

    @property
    def is_trivial(self) -> bool:
        return len(self.elements) == 1

    def verify(self, X: FiniteMetricSpace | None = None) -> bool:
        """Identity present, closed under composition and inverse, and (if
        ``X`` is given) every element preserves distances exactly."""
        elems = set(self.elements)
        if self.identity not in elems:
            return False
        for p in self.elements:
            if invert(p) not in elems:
                return False
            for q in self.elements:
                if compose(p, q) not in elems:
                    return False
        if X is not None:
            return all(preserves(X, p) for p in self.elements)
        return True


def compose(p, q) -> Permutation:
    """``p ∘ q``."""
    return tuple(p[i] for i in q)


def invert(p) -> Permutation:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


def preserves(X: FiniteMetricSpace, p) -> bool:
    d = X.dist
    return all(d[p[i]][p[j]] == d[i][j] for i in range(X.n) for j in range(i + 1, X.n))


def generate(generators: Sequence[Sequence[int]], n: int) -> tuple[Permutation, ...]:
    """Subgroup of ``S_n`` generated by ``generators``, sorted."""
    ident = tuple(range(n))
    gens = [tuple(g) for g in generators]
    seen = {ident}
    frontier = [ident]
    while frontier:
        fresh = []
        for p in frontier:
            for g in gens:
                q = compose(g, p)
                if q not in seen:
                    seen.add(q)
                    fresh.append(q)
        frontier = fresh
    return tuple(sorted(seen))


def _profiles(X: FiniteMetricSpace):
    return [tuple(sorted(row)) for row in X.dist]


def isometry_group(X: FiniteMetricSpace) -> IsometryGroup:
    """All distance-preserving permutations, in lexicographic order."""
    prof = _profiles(X)
    freq = Counter(prof)
    order = sorted(range(X.n), key=lambda i: (freq[prof[i]], i))
    cand = np.array([[prof[i] == prof[c] for c in range(X.n)] for i in range(X.n)], dtype=bool)
    _, (a,) = X.encoded
    found = kernels.embeddings(a, a, order, cand)
    elements = sorted(tuple(int(v) for v in row) for row in found)
    return IsometryGroup(X.n, tuple(elements))


def find_isometry(X: FiniteMetricSpace, Y: FiniteMetricSpace) -> PointMap | None:
    """An isometry ``X -> Y`` or ``None``."""
    if X.n != Y.n:
        return None
    px, py = _profiles(X), _profiles(Y)
    if sorted(px) != sorted(py):
        return None
    cand = np.array([[px[i] == py[c] for c in range(Y.n)] for i in range(X.n)], dtype=bool)
    freq = Counter(px)
    order = sorted(range(X.n), key=lambda i: (freq[px[i]], i))
    _, (a, b) = encode(X.dist, Y.dist)
    found = kernels.embeddings(a, b, order, cand, limit=1)
    if len(found) == 0:
        return None
    return PointMap(X, Y, tuple(int(v) for v in found[0]))


def are_isometric(X: FiniteMetricSpace, Y: FiniteMetricSpace) -> bool:
    return find_isometry(X, Y) is not None


@dataclass(frozen=True)
class OrbitPartition:
    class_of: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...]


def orbits_of(elements: Sequence[Permutation], n: int) -> OrbitPartition:
    class_of = [-1] * n
    classes = []
    for i in range(n):
        if class_of[i] >= 0:
            continue
        orbit = sorted({p[i] for p in elements} | {i})
        for j in orbit:
            class_of[j] = len(classes)
        classes.append(tuple(orbit))
    return OrbitPartition(tuple(class_of), tuple(classes))


def iso_orbits(group: IsometryGroup) -> OrbitPartition:
    return orbits_of(group.elements, group.n)


def _orbit_min_matrix(X, part: OrbitPartition):
    k = len(part.classes)
    between = [[min(X.dist[a][b] for a in part.classes[s] for b in part.classes[t]) for t in range(k)]
               for s in range(k)]
    c = part.class_of
    return [[between[c[i]][c[j]] for j in range(X.n)] for i in range(X.n)]


def iso_derivative(X: FiniteMetricSpace) -> DerivativeResult:
    """Quotient by isometry orbits with the orbit-minimum distance."""
    part = iso_orbits(isometry_group(X))
    m = _orbit_min_matrix(X, part)
    return _assemble_quotient(X, list(part.classes), list(part.class_of), m)


# ---------------------------------------------------------------------------
# generalised derivatives
# ---------------------------------------------------------------------------

VARIANTS = ("iso", "iso_inv", "iso_stab", "iso_fixed", "subgroup", "homeo", "lip", "custom")


@dataclass(frozen=True)
class AlphaSpec:
    """Which family of maps the comparison function ranges over.

    ``indices`` is the fixed set for ``iso_stab`` (fixed pointwise) and
    ``iso_fixed`` (fixed setwise); ``perms`` generates ``subgroup``;
    ``M`` bounds both Lipschitz constants for ``lip``; ``cost`` is the
    explicit matrix for ``custom``.
    """

    variant: str = "iso"
    indices: tuple[int, ...] | None = None
    perms: tuple[Permutation, ...] | None = None
    M: Fraction | None = None
    cost: tuple | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise MetricError(f"unknown alpha variant {self.variant!r}")
        if self.indices is not None:
            object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        if self.perms is not None:
            object.__setattr__(self, "perms", tuple(tuple(int(i) for i in p) for p in self.perms))
        if self.M is not None:
            object.__setattr__(self, "M", to_rational(self.M))
        if self.variant in ("iso_stab", "iso_fixed") and not self.indices:
            raise MetricError(f"{self.variant} needs a non-empty index set")
        if self.variant == "subgroup" and self.perms is None:
            raise MetricError("subgroup needs explicit permutations")
        if self.variant == "lip":
            if self.M is None or self.M < 1:
                raise MetricError("lip needs M >= 1")
        if self.variant == "custom" and self.cost is None:
            raise MetricError("custom needs a cost matrix")


def alpha_family(X: FiniteMetricSpace, spec: AlphaSpec) -> tuple[Permutation, ...]:
    """The maps the comparison ranges over, for the group-like variants."""
    group = isometry_group(X)
    v = spec.variant
    if v == "iso":
        return group.elements
    if v == "iso_inv":
        gens = [p for p in group.elements if compose(p, p) == group.identity]
        return generate(gens, X.n)
    if v == "iso_stab":
        _check_indices(X, spec.indices)
        return tuple(p for p in group.elements if all(p[i] == i for i in spec.indices))
    if v == "iso_fixed":
        _check_indices(X, spec.indices)
        A = set(spec.indices)
        return tuple(p for p in group.elements if {p[i] for i in A} == A)
    if v == "subgroup":
        for p in spec.perms:
            if sorted(p) != list(range(X.n)) or not preserves(X, p):
                raise MetricError(f"{p} is not an isometry of the space")
        return generate(spec.perms, X.n)
    if v == "lip":
        return lipschitz_bijections(X, spec.M)
    if v == "homeo":
        if X.n > 8:
            raise MetricError("homeo enumeration is limited to 8 points")
        return tuple(itertools.permutations(range(X.n)))
    raise MetricError(f"{v} has no map family")


def _check_indices(X, idx):
    if any(not 0 <= i < X.n for i in idx):
        raise MetricError("index set out of range")


def lipschitz_bijections(X: FiniteMetricSpace, M) -> tuple[Permutation, ...]:
    """Bijections ``u`` with ``Lip(u) <= M`` and ``Lip(u^-1) <= M``."""
    M = to_rational(M)
    if X.n > 8:
        raise MetricError("Lipschitz enumeration is limited to 8 points")
    d = X.dist
    pairs = [(i, j) for i in range(X.n) for j in range(i + 1, X.n)]
    keep = []
    for p in itertools.permutations(range(X.n)):
        # Lip(u^-1) <= M  <=>  d(i, j) <= M d(u i, u j)
        if all(d[p[i]][p[j]] <= M * d[i][j] and d[i][j] <= M * d[p[i]][p[j]] for i, j in pairs):
            keep.append(p)
    return tuple(keep)


def alpha_matrix(X: FiniteMetricSpace, spec: AlphaSpec):
    """``alpha(x, y) = min over maps u, v in the family of d(u x, v y)``."""
    if spec.variant == "custom":
        c = _as_matrix(spec.cost)
        if len(c) != X.n:
            raise MetricError("cost matrix size does not match the space")
        for i in range(X.n):
            if c[i][i] != 0:
                raise MetricError("custom cost needs a zero diagonal")
            for j in range(X.n):
                if c[i][j] != c[j][i]:
                    raise MetricError("custom cost must be symmetric")
                if i != j and c[i][j] <= 0:
                    raise MetricError("custom cost must separate points")
                if c[i][j] > X.dist[i][j]:
                    raise MetricError("custom cost must not exceed the metric")
        return [list(row) for row in c]
    if spec.variant == "homeo":
        # u = id, v = transposition (x y) gives d(x, x) = 0 for every pair
        return [[Fraction(0)] * X.n for _ in range(X.n)]
    family = alpha_family(X, spec)
    reach = [sorted({u[x] for u in family}) for x in range(X.n)]
    d = X.dist
    return [[min(d[a][b] for a in reach[x] for b in reach[y]) for y in range(X.n)] for x in range(X.n)]


def alpha_derivative(X: FiniteMetricSpace, spec: AlphaSpec) -> DerivativeResult:
    return quotient_by_zero(X, pseudometric_closure(alpha_matrix(X, spec)))


# ---------------------------------------------------------------------------
# iso-height
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IhtResult:
    height: int
    tower: tuple[FiniteMetricSpace, ...]
    projections: tuple[PointMap, ...]

    @property
    def terminal(self) -> FiniteMetricSpace:
        return self.tower[-1]


def is_iso_rigid(X: FiniteMetricSpace) -> bool:
    return isometry_group(X).is_trivial


def iso_height(X: FiniteMetricSpace) -> IhtResult:
    tower = [X]
    projections = []
    while not is_iso_rigid(tower[-1]):
        step = iso_derivative(tower[-1])
        tower.append(step.quotient)
        projections.append(step.projection)
        if len(tower) > X.n:  # pragma: no cover - each step drops a point
            raise RuntimeError("iso-derivative tower failed to shrink")
    return IhtResult(len(tower) - 1, tuple(tower), tuple(projections))


def successor_space(X: FiniteMetricSpace, r) -> FiniteMetricSpace:
    """``X`` joined to its rigid terminal derivative at distance ``r``.

    Raises the iso-height by one; needs height >= 1 and ``r > diam X``.
    """
    r = to_rational(r)
    iht = iso_height(X)
    if iht.height == 0:
        raise MetricError("successor construction needs iso-height >= 1")
    if r <= X.diameter:
        raise MetricError(f"parameter {r} must exceed diam X = {X.diameter}")
    space, _ = admissible_union(AdmissibleUnionSpec((X, iht.terminal), (r,)))
    return space


def limit_tower_space(components: Sequence[FiniteMetricSpace], params, tail: bool = True) -> FiniteMetricSpace:
    """Union with strictly decreasing parameters, optionally plus a tail point.

    Requires ``r_n > r_{n+1} > diam X_n`` wherever ``r_{n+1}`` exists and
    ``r_n > diam X_n`` for the last parameter.
    """
    params = tuple(to_rational(r) for r in params)
    comps = tuple(components)
    for n in range(len(params) - 1):
        if not params[n] > params[n + 1]:
            raise MetricError("parameters must strictly decrease")
        if n < len(comps) and not params[n + 1] > comps[n].diameter:
            raise MetricError(f"r_{n + 2} must exceed diam X_{n + 1}")
    last = len(params) - 1
    if last >= 0 and last < len(comps) and not params[last] > comps[last].diameter:
        raise MetricError(f"r_{last + 1} must exceed diam X_{last + 1}")
    space, _ = admissible_union(AdmissibleUnionSpec(comps, params, tail))
    return space
