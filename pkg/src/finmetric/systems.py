"""Finite prefixes of direct and inverse systems of non-expansive surjections."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .gh import CauchyCertificate, gh_convergence_certificate
from .isometry import iso_height
from .metric import FiniteMetricSpace, MetricError, PointMap, identity_map, to_rational
from .orders import (
    Superspace,
    UniformCompactnessReport,
    common_superspace,
    minimal_dense_subset,
    nonexpansive_surjections,
    uniform_compactness,
    verify_verdict,
)


class SystemError(MetricError):
    pass


class NonSurjectiveBond(SystemError):
    def __init__(self, n):
        self.n = n
        super().__init__(f"bond {n} is not surjective")


class ExpansiveBond(SystemError):
    def __init__(self, n, pair):
        self.n, self.pair = n, pair
        super().__init__(f"bond {n} expands the pair {pair}")


class CoherenceError(SystemError):
    pass


class LimitRefused(SystemError):
    pass


def _as_bond(b, source, target) -> PointMap:
    if isinstance(b, PointMap):
        if b.source.n != source.n or b.target.n != target.n:
            raise SystemError("bond does not match its spaces")
        return PointMap(source, target, b.image)
    return PointMap(source, target, tuple(b))


def _check_bond(n, f: PointMap):
    if not f.surjective:
        raise NonSurjectiveBond(n)
    w = f.expansion_witness()
    if w is not None:
        raise ExpansiveBond(n, w)


@dataclass(frozen=True)
class DirectSystemPrefix:
    """``bonds[k]`` maps ``spaces[k]`` onto ``spaces[k + 1]`` (0-based)."""

    spaces: tuple[FiniteMetricSpace, ...]
    bonds: tuple[PointMap, ...]
    composites: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def length(self) -> int:
        return len(self.spaces)

    def composite(self, m: int, n: int) -> PointMap:
        """The map ``X_m -> X_n`` for ``1 <= m <= n``."""
        return self.composites[(m, n)]


@dataclass(frozen=True)
class InverseSystemPrefix:
    """``bonds[k]`` maps ``spaces[k + 1]`` onto ``spaces[k]`` (0-based)."""

    spaces: tuple[FiniteMetricSpace, ...]
    bonds: tuple[PointMap, ...]
    composites: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def length(self) -> int:
        return len(self.spaces)

    def composite(self, n: int, m: int) -> PointMap:
        """The map ``X^n -> X^m`` for ``1 <= m <= n``."""
        return self.composites[(n, m)]


def _materialise_direct(spaces, bonds):
    comp = {}
    N = len(spaces)
    for m in range(1, N + 1):
        comp[(m, m)] = identity_map(spaces[m - 1])
        for n in range(m + 1, N + 1):
            comp[(m, n)] = comp[(m, n - 1)].then(bonds[n - 2])
    return comp


def validate_direct_system(spaces: Sequence[FiniteMetricSpace], bonds, given_composites=None) -> DirectSystemPrefix:
    """Check every bond, build all composites, and compare them with any
    composites the caller supplied as ``{(m, n): image}``."""
    spaces = tuple(spaces)
    if not spaces:
        raise SystemError("empty system")
    if len(bonds) != len(spaces) - 1:
        raise SystemError(f"{len(spaces)} spaces need {len(spaces) - 1} bonds, got {len(bonds)}")
    maps = tuple(_as_bond(b, spaces[k], spaces[k + 1]) for k, b in enumerate(bonds))
    for k, f in enumerate(maps, start=1):
        _check_bond(k, f)
    comp = _materialise_direct(spaces, maps)
    for key, image in (given_composites or {}).items():
        if key not in comp or comp[key].image != tuple(image):
            raise CoherenceError(f"supplied composite {key} disagrees with the bonds")
    return DirectSystemPrefix(spaces, maps, comp)


def validate_inverse_system(spaces: Sequence[FiniteMetricSpace], bonds, given_composites=None) -> InverseSystemPrefix:
    spaces = tuple(spaces)
    if not spaces:
        raise SystemError("empty system")
    if len(bonds) != len(spaces) - 1:
        raise SystemError(f"{len(spaces)} spaces need {len(spaces) - 1} bonds, got {len(bonds)}")
    maps = tuple(_as_bond(b, spaces[k + 1], spaces[k]) for k, b in enumerate(bonds))
    for k, f in enumerate(maps, start=1):
        _check_bond(k, f)
    comp = {}
    N = len(spaces)
    for n in range(1, N + 1):
        comp[(n, n)] = identity_map(spaces[n - 1])
        for m in range(n - 1, 0, -1):
            comp[(n, m)] = comp[(n, m + 1)].then(maps[m - 1])
    for key, image in (given_composites or {}).items():
        if key not in comp or comp[key].image != tuple(image):
            raise CoherenceError(f"supplied composite {key} disagrees with the bonds")
    return InverseSystemPrefix(spaces, maps, comp)


def derivative_tower_system(X: FiniteMetricSpace, pad: int = 1) -> DirectSystemPrefix:
    """Iso-derivative tower of ``X`` with its projections, plus ``pad``
    identity steps on the rigid terminal space."""
    iht = iso_height(X)
    spaces = list(iht.tower) + [iht.terminal] * pad
    bonds = list(iht.projections) + [identity_map(iht.terminal)] * pad
    return validate_direct_system(spaces, bonds)


# ---------------------------------------------------------------------------
# limits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LimitApproximation:
    """``status`` is ``"exact"``, ``"certified"`` or ``"inconclusive"``.

    For direct systems ``arrows[n-1]`` maps ``X_n`` to the object; for
    inverse systems it maps the object to ``X^n``.
    """

    status: str
    object: FiniteMetricSpace | None
    arrows: tuple[PointMap, ...]
    certificate: CauchyCertificate | None
    stable_from: int | None = None


def _bijective_isometry(f: PointMap) -> bool:
    return f.isometric and f.surjective and f.source.n == f.target.n


def _stable_from(prefix) -> int | None:
    """First index from which every bond in the prefix is a bijective isometry."""
    N = prefix.length
    if N == 1:
        return 1
    if not _bijective_isometry(prefix.bonds[-1]):
        return None
    s = N - 1
    while s > 1 and _bijective_isometry(prefix.bonds[s - 2]):
        s -= 1
    return s


def _resolve(prefix_or_provider, N_max):
    if callable(prefix_or_provider):
        if N_max is None:
            raise SystemError("a provider needs N_max")
        return prefix_or_provider(N_max)
    return prefix_or_provider


def _exact_certificate(spaces, s):
    pairs = tuple((m, n, to_rational(0)) for m in range(s, len(spaces)) for n in range(m + 1, len(spaces) + 1))
    return CauchyCertificate(True, to_rational(0), s, pairs, None, len(spaces) - s + 1, len(spaces))


def direct_limit_approx(prefix, tol="1/10", N_max: int | None = None, window: int = 3) -> LimitApproximation:
    """Exact limit when the prefix ends in bijective isometries (or in a
    single point, which every later surjective bond must keep); otherwise
    the last member with a Cauchy certificate, or inconclusive.

    Reading a prefix that ends in isometric bonds as constant from there on
    is the one modelling assumption made here.
    """
    P = _resolve(prefix, N_max)
    if not isinstance(P, DirectSystemPrefix):
        raise SystemError("expected a DirectSystemPrefix")
    N = P.length
    arrows = tuple(P.composite(n, N) for n in range(1, N + 1))
    s = _stable_from(P)
    if s is None and P.spaces[-1].n == 1:
        s = N
    if s is not None:
        for a in arrows:
            if not (a.surjective and a.non_expansive):  # pragma: no cover - composites of valid bonds
                raise SystemError("limit arrow failed re-verification")
        return LimitApproximation("exact", P.spaces[-1], arrows, _exact_certificate(P.spaces, s), s)
    cert = gh_convergence_certificate(P.spaces, tol, window=window)
    if cert.certified:
        return LimitApproximation("certified", P.spaces[-1], arrows, cert)
    return LimitApproximation("inconclusive", None, (), cert)


# ---------------------------------------------------------------------------
# inverse systems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GrowthWitness:
    """Claimed lower bound ``lower_bound(n)`` on the size of any
    ``epsilon``-dense subset of member ``n``, unbounded in ``n``."""

    epsilon: object
    lower_bound: Callable[[int], int]


@dataclass(frozen=True)
class ExistsVerdict:
    exists: bool
    criterion: str
    superspace: Superspace | None = None
    compactness: UniformCompactnessReport | None = None
    growth: tuple[tuple[int, int, int], ...] = ()


def inverse_limit_exists(prefix: InverseSystemPrefix, epsilons=("1/2",), growth_witness: GrowthWitness | None = None) -> ExistsVerdict:
    """Existence of the inverse limit, decided through uniform compactness.

    Without a growth witness a finite prefix is always bounded, so the answer
    is yes with a common superspace as evidence. A growth witness is checked
    member by member (its bound must hold and strictly increase along the
    prefix) and then yields no.
    """
    spaces = prefix.spaces
    report = uniform_compactness(spaces, epsilons)
    if growth_witness is not None:
        eps = to_rational(growth_witness.epsilon)
        rows = []
        for n, X in enumerate(spaces, start=1):
            size = len(minimal_dense_subset(X, eps))
            claim = int(growth_witness.lower_bound(n))
            if size < claim:
                raise SystemError(f"growth witness fails at member {n}: dense set of size {size} < {claim}")
            rows.append((n, claim, size))
        claims = [c for _, c, _ in rows]
        if len(claims) < 2 or any(a >= b for a, b in zip(claims, claims[1:])):
            raise SystemError("growth witness must strictly increase along the prefix")
        return ExistsVerdict(False, "not uniformly compact: epsilon-nets grow without bound", None, report, tuple(rows))
    sup = common_superspace(spaces)
    for X, trio in zip(spaces, sup.verdicts):
        if not all(verify_verdict(v, X, sup.space) for v in trio):  # pragma: no cover
            raise SystemError("superspace witness failed re-verification")
    return ExistsVerdict(True, "bounded: common superspace", sup, report)


def inverse_limit_approx(prefix, tol="1/10", N_max: int | None = None, verdict: ExistsVerdict | None = None,
                         window: int = 3) -> LimitApproximation:
    P = _resolve(prefix, N_max)
    if not isinstance(P, InverseSystemPrefix):
        raise SystemError("expected an InverseSystemPrefix")
    if verdict is None:
        verdict = inverse_limit_exists(P)
    if not verdict.exists:
        raise LimitRefused("the system has no inverse limit: " + verdict.criterion)
    N = P.length
    arrows = tuple(P.composite(N, n) for n in range(1, N + 1))
    s = _stable_from(P)
    if s is not None:
        return LimitApproximation("exact", P.spaces[-1], arrows, _exact_certificate(P.spaces, s), s)
    cert = gh_convergence_certificate(P.spaces, tol, window=window)
    if cert.certified:
        return LimitApproximation("certified", P.spaces[-1], arrows, cert)
    return LimitApproximation("inconclusive", None, (), cert)


# ---------------------------------------------------------------------------
# universal property spot checks
# ---------------------------------------------------------------------------


def _all_maps(source: FiniteMetricSpace, target: FiniteMetricSpace, non_expansive: bool = True):
    for image in itertools.product(range(target.n), repeat=source.n):
        f = PointMap(source, target, image)
        if not non_expansive or f.non_expansive:
            yield f


def direct_cones(prefix: DirectSystemPrefix, Z: FiniteMetricSpace) -> list[tuple[PointMap, ...]]:
    """Every compatible family ``h_n : X_n -> Z`` of non-expansive maps.

    Compatibility makes the family a function of its last member, and every
    composite with a non-expansive bond stays non-expansive.
    """
    N = prefix.length
    return [tuple(prefix.composite(n, N).then(h) for n in range(1, N + 1)) for h in _all_maps(prefix.spaces[-1], Z)]


def inverse_cones(prefix: InverseSystemPrefix, Z: FiniteMetricSpace) -> list[tuple[PointMap, ...]]:
    N = prefix.length
    return [tuple(h.then(prefix.composite(N, n)) for n in range(1, N + 1)) for h in _all_maps(Z, prefix.spaces[-1])]


def mediating_maps(limit: LimitApproximation, cone: Sequence[PointMap], kind: str = "direct") -> list[PointMap]:
    """All non-expansive ``v`` factoring the cone through the limit, by exhaustive search."""
    if limit.status != "exact":
        raise SystemError("mediating maps need an exact limit")
    L = limit.object
    found = []
    if kind == "direct":
        Z = cone[0].target
        for v in _all_maps(L, Z):
            if all(a.then(v).image == h.image for a, h in zip(limit.arrows, cone)):
                found.append(v)
    elif kind == "inverse":
        Z = cone[0].source
        for v in _all_maps(Z, L):
            if all(v.then(a).image == h.image for a, h in zip(limit.arrows, cone)):
                found.append(v)
    else:
        raise SystemError(f"unknown system kind {kind!r}")
    return found


def alternative_bonds(prefix: DirectSystemPrefix, pick: int = -1) -> DirectSystemPrefix:
    """Same spaces, each bond replaced by another valid choice when one exists.

    ``pick`` indexes the list of all non-expansive surjections for a step.
    """
    bonds = []
    for k, f in enumerate(prefix.bonds):
        options = nonexpansive_surjections(prefix.spaces[k], prefix.spaces[k + 1])
        bonds.append(options[pick] if options else f)
    return validate_direct_system(prefix.spaces, bonds)
