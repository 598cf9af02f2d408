"""Brute-force reference implementations, deliberately naive.

Nothing here calls into finmetric's search code; they only share the
Fraction representation.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction


def rand_metric(rng: random.Random, n: int, max_num: int = 9, max_den: int = 3):
    """Random rational metric: shortest paths over random positive weights."""
    w = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            w[i][j] = w[j][i] = Fraction(rng.randint(1, max_num), rng.randint(1, max_den))
    return floyd(w)


def rand_symmetric_metric(rng: random.Random, n: int):
    """Random metric with many repeated values so isometries actually occur."""
    w = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            w[i][j] = w[j][i] = Fraction(rng.choice([1, 2, 2, 3]))
    return floyd(w)


def floyd(w):
    n = len(w)
    d = [list(row) for row in w]
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return [tuple(r) for r in d]


def chain_closure(c):
    """Cheapest chain between every pair, by listing every simple path."""
    n = len(c)
    out = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            best = c[i][j]
            others = [k for k in range(n) if k not in (i, j)]
            for length in range(1, len(others) + 1):
                for mid in itertools.permutations(others, length):
                    path = (i,) + mid + (j,)
                    best = min(best, sum(c[a][b] for a, b in zip(path, path[1:])))
            out[i][j] = best
    return out


def is_pseudometric(d) -> bool:
    n = len(d)
    for i in range(n):
        if d[i][i] != 0:
            return False
        for j in range(n):
            if d[i][j] < 0 or d[i][j] != d[j][i]:
                return False
            for k in range(n):
                if d[i][k] > d[i][j] + d[j][k]:
                    return False
    return True


def brute_isometries(d):
    n = len(d)
    return sorted(
        p for p in itertools.permutations(range(n))
        if all(d[p[i]][p[j]] == d[i][j] for i in range(n) for j in range(n))
    )


def brute_orbit_min(d):
    """Iso-derivative straight from the definition: orbits and min cross distance."""
    n = len(d)
    perms = brute_isometries(d)
    orbit_of = {}
    orbits = []
    for i in range(n):
        if i in orbit_of:
            continue
        orb = sorted({p[i] for p in perms})
        for j in orb:
            orbit_of[j] = len(orbits)
        orbits.append(orb)
    q = [[min(d[a][b] for a in A for b in B) for B in orbits] for A in orbits]
    return orbits, q


def brute_iht(d):
    h = 0
    while len(brute_isometries(d)) > 1:
        _, d = brute_orbit_min(d)
        h += 1
    return h


def brute_gh(dx, dy):
    """Half the least distortion over every correspondence (subset of X x Y)."""
    nx, ny = len(dx), len(dy)
    cells = [(i, j) for i in range(nx) for j in range(ny)]
    best = None
    for mask in range(1, 1 << len(cells)):
        R = [cells[k] for k in range(len(cells)) if mask >> k & 1]
        if {i for i, _ in R} != set(range(nx)) or {j for _, j in R} != set(range(ny)):
            continue
        dis = max(abs(dx[a][c] - dy[b][e]) for a, b in R for c, e in R)
        if best is None or dis < best:
            best = dis
    return best / 2


def brute_gh_maps(dx, dy):
    """Same value via pairs of maps f: X -> Y, g: Y -> X (works up to ~5x5)."""
    nx, ny = len(dx), len(dy)
    best = None
    for f in itertools.product(range(ny), repeat=nx):
        R = {(i, f[i]) for i in range(nx)}
        dis_f = max(abs(dx[a][c] - dy[f[a]][f[c]]) for a in range(nx) for c in range(nx))
        if best is not None and dis_f >= best:
            continue
        for g in itertools.product(range(nx), repeat=ny):
            S = R | {(g[j], j) for j in range(ny)}
            dis = max(abs(dx[a][c] - dy[b][e]) for a, b in S for c, e in S)
            if best is None or dis < best:
                best = dis
    return best / 2


def brute_surjections(ds, dt):
    """Every non-expansive surjection S -> T."""
    ns, nt = len(ds), len(dt)
    out = []
    for f in itertools.product(range(nt), repeat=ns):
        if len(set(f)) != nt:
            continue
        if all(dt[f[i]][f[j]] <= ds[i][j] for i in range(ns) for j in range(ns)):
            out.append(f)
    return out


def brute_embeddings(da, db):
    na, nb = len(da), len(db)
    return [
        f for f in itertools.permutations(range(nb), na)
        if all(db[f[i]][f[j]] == da[i][j] for i in range(na) for j in range(na))
    ]


def brute_hat(mul, d):
    n = len(mul)
    return [[max(d[mul[a][h]][mul[b][h]] for h in range(n)) for b in range(n)] for a in range(n)]


def brute_min_dense(d, eps):
    n = len(d)
    for size in range(1, n + 1):
        for A in itertools.combinations(range(n), size):
            if all(any(d[x][a] < eps for a in A) for x in range(n)):
                return size
    return n
