"""Integer search kernels.

Every kernel works on integer distance matrices: exact rationals are scaled
to a common denominator before they get here (see ``metric.encode``), so all
comparisons are exact.  Each kernel has a numba version (``*_nb``) and a
numpy/Python version (``*_np``); the public functions dispatch on
``_accel.USE_NUMBA`` and fall back to the numpy path for object arrays
(integers too large for int64).
"""
import numpy as np

from . import _accel
from ._accel import optional_njit

# ---------------------------------------------------------------------------
# min-plus closure
# ---------------------------------------------------------------------------


@optional_njit(cache=True)
def _minplus_closure_nb(cost):
    d = cost.copy()
    n = d.shape[0]
    for k in range(n):
        for i in range(n):
            dik = d[i, k]
            for j in range(n):
                s = dik + d[k, j]
                if s < d[i, j]:
                    d[i, j] = s
    return d


def _minplus_closure_np(cost):
    d = cost.copy()
    for k in range(d.shape[0]):
        d = np.minimum(d, d[:, k:k + 1] + d[k:k + 1, :])
    return d


# ---------------------------------------------------------------------------
# distance-preserving injections  A -> B
# ---------------------------------------------------------------------------


@optional_njit(cache=True)
def _embeddings_nb(da, db, order, cand, limit):
    na = da.shape[0]
    nb = db.shape[0]
    image = -np.ones(na, dtype=np.int64)
    used = np.zeros(nb, dtype=np.bool_)
    nxt = np.zeros(na + 1, dtype=np.int64)
    cap = 16
    out = np.empty((cap, na), dtype=np.int64)
    count = 0
    if na == 0:
        return out[:0]
    depth = 0
    while depth >= 0:
        if depth == na:
            if count == cap:
                cap *= 2
                grown = np.empty((cap, na), dtype=np.int64)
                grown[:count] = out[:count]
                out = grown
            out[count] = image
            count += 1
            if limit > 0 and count >= limit:
                break
            depth -= 1
            continue
        i = order[depth]
        if image[i] >= 0:
            used[image[i]] = False
            image[i] = -1
        c = nxt[depth]
        found = False
        while c < nb:
            if not used[c] and cand[i, c]:
                ok = True
                for t in range(depth):
                    j = order[t]
                    if da[i, j] != db[c, image[j]]:
                        ok = False
                        break
                if ok:
                    found = True
                    break
            c += 1
        if found:
            image[i] = c
            used[c] = True
            nxt[depth] = c + 1
            depth += 1
            nxt[depth] = 0
        else:
            nxt[depth] = 0
            depth -= 1
    return out[:count]


def _embeddings_np(da, db, order, cand, limit):
    na, nb = da.shape[0], db.shape[0]
    image = np.full(na, -1, dtype=np.int64)
    used = np.zeros(nb, dtype=bool)
    found = []

    def extend(depth):
        if depth == na:
            found.append(image.copy())
            return limit > 0 and len(found) >= limit
        i = order[depth]
        done = order[:depth]
        row = da[i, done]
        for c in np.flatnonzero(cand[i] & ~used):
            if depth and not np.array_equal(db[c, image[done]], row):
                continue
            image[i] = c
            used[c] = True
            stop = extend(depth + 1)
            used[c] = False
            image[i] = -1
            if stop:
                return True
        return False

    if na:
        extend(0)
    if not found:
        return np.empty((0, na), dtype=np.int64)
    return np.array(found, dtype=np.int64)


# ---------------------------------------------------------------------------
# non-expansive surjections  S -> T
# ---------------------------------------------------------------------------


@optional_njit(cache=True)
def _surjections_nb(ds, dt, order, limit):
    ns = ds.shape[0]
    nt = dt.shape[0]
    image = -np.ones(ns, dtype=np.int64)
    hits = np.zeros(nt, dtype=np.int64)
    nxt = np.zeros(ns + 1, dtype=np.int64)
    cap = 16
    out = np.empty((cap, ns), dtype=np.int64)
    count = 0
    if ns < nt or ns == 0:
        return out[:0]
    uncovered = nt
    depth = 0
    while depth >= 0:
        if depth == ns:
            if uncovered == 0:
                if count == cap:
                    cap *= 2
                    grown = np.empty((cap, ns), dtype=np.int64)
                    grown[:count] = out[:count]
                    out = grown
                out[count] = image
                count += 1
                if limit > 0 and count >= limit:
                    break
            depth -= 1
            continue
        a = order[depth]
        if image[a] >= 0:
            hits[image[a]] -= 1
            if hits[image[a]] == 0:
                uncovered += 1
            image[a] = -1
        remaining = ns - depth
        c = nxt[depth]
        found = False
        while c < nt:
            # capacity: the points left after this one must cover the rest
            left = uncovered
            if hits[c] == 0:
                left -= 1
            if left <= remaining - 1:
                ok = True
                for t in range(depth):
                    b = order[t]
                    if dt[c, image[b]] > ds[a, b]:
                        ok = False
                        break
                if ok:
                    found = True
                    break
            c += 1
        if found:
            image[a] = c
            if hits[c] == 0:
                uncovered -= 1
            hits[c] += 1
            nxt[depth] = c + 1
            depth += 1
            nxt[depth] = 0
        else:
            nxt[depth] = 0
            depth -= 1
    return out[:count]


def _surjections_np(ds, dt, order, limit):
    ns, nt = ds.shape[0], dt.shape[0]
    image = np.full(ns, -1, dtype=np.int64)
    hits = np.zeros(nt, dtype=np.int64)
    found = []
    if ns < nt or ns == 0:
        return np.empty((0, ns), dtype=np.int64)

    def extend(depth, uncovered):
        if depth == ns:
            if uncovered == 0:
                found.append(image.copy())
            return limit > 0 and len(found) >= limit
        a = order[depth]
        done = order[:depth]
        bound = ds[a, done]
        remaining = ns - depth - 1
        for c in range(nt):
            left = uncovered - (1 if hits[c] == 0 else 0)
            if left > remaining:
                continue
            if depth and np.any(dt[c, image[done]] > bound):
                continue
            image[a] = c
            hits[c] += 1
            stop = extend(depth + 1, left)
            hits[c] -= 1
            image[a] = -1
            if stop:
                return True
        return False

    extend(0, nt)
    if not found:
        return np.empty((0, ns), dtype=np.int64)
    return np.array(found, dtype=np.int64)


# ---------------------------------------------------------------------------
# minimum-distortion correspondence (branch and bound)
# ---------------------------------------------------------------------------


@optional_njit(cache=True)
def _min_distortion_nb(dx, dy, xorder, target, start):
    nx = dx.shape[0]
    ny = dy.shape[0]
    total = nx + ny
    px = np.zeros(total, dtype=np.int64)
    py = np.zeros(total, dtype=np.int64)
    npairs = np.zeros(total + 1, dtype=np.int64)
    cur = np.zeros(total + 1, dtype=dx.dtype)
    hits = np.zeros(ny, dtype=np.int64)
    choice = -np.ones(total, dtype=np.int64)
    nxt = np.zeros(total + 1, dtype=np.int64)
    best = start
    best_f = -np.ones(nx, dtype=np.int64)
    best_g = -np.ones(ny, dtype=np.int64)
    f = -np.ones(nx, dtype=np.int64)
    g = -np.ones(ny, dtype=np.int64)
    depth = 0
    while depth >= 0:
        if best <= target:
            break
        if depth == total:
            if cur[depth] < best:
                best = cur[depth]
                best_f[:] = f
                best_g[:] = g
            depth -= 1
            continue
        # undo this depth's previous choice
        if choice[depth] >= 0:
            if depth < nx:
                hits[choice[depth]] -= 1
                f[xorder[depth]] = -1
            else:
                g[depth - nx] = -1
            choice[depth] = -1
        k = npairs[depth]
        if depth < nx:
            x = xorder[depth]
            c = nxt[depth]
            found = False
            while c < ny:
                m = cur[depth]
                for t in range(k):
                    v = dx[x, px[t]] - dy[c, py[t]]
                    if v < 0:
                        v = -v
                    if v > m:
                        m = v
                        if m >= best:
                            break
                if m < best:
                    found = True
                    break
                c += 1
            if found:
                choice[depth] = c
                f[x] = c
                hits[c] += 1
                px[k] = x
                py[k] = c
                npairs[depth + 1] = k + 1
                cur[depth + 1] = m
                nxt[depth] = c + 1
                depth += 1
                nxt[depth] = 0
            else:
                nxt[depth] = 0
                depth -= 1
        else:
            y = depth - nx
            if hits[y] > 0:
                # already covered; single pass-through child
                if nxt[depth] == 0:
                    nxt[depth] = 1
                    npairs[depth + 1] = k
                    cur[depth + 1] = cur[depth]
                    depth += 1
                    nxt[depth] = 0
                else:
                    nxt[depth] = 0
                    depth -= 1
                continue
            c = nxt[depth]
            found = False
            while c < nx:
                m = cur[depth]
                for t in range(k):
                    v = dx[c, px[t]] - dy[y, py[t]]
                    if v < 0:
                        v = -v
                    if v > m:
                        m = v
                        if m >= best:
                            break
                if m < best:
                    found = True
                    break
                c += 1
            if found:
                choice[depth] = c
                g[y] = c
                px[k] = c
                py[k] = y
                npairs[depth + 1] = k + 1
                cur[depth + 1] = m
                nxt[depth] = c + 1
                depth += 1
                nxt[depth] = 0
            else:
                nxt[depth] = 0
                depth -= 1
    return best, best_f, best_g


def _min_distortion_np(dx, dy, xorder, target, start):
    nx, ny = dx.shape[0], dy.shape[0]
    px, py = [], []
    f = np.full(nx, -1, dtype=np.int64)
    g = np.full(ny, -1, dtype=np.int64)
    hits = np.zeros(ny, dtype=np.int64)
    state = {"best": start, "f": f.copy(), "g": g.copy()}

    def distortion_with(i, j, m):
        if not px:
            return m
        return max(m, np.max(np.abs(dx[i, px] - dy[j, py])))

    def y_phase(y, m):
        if state["best"] <= target:
            return
        if y == ny:
            if m < state["best"]:
                state.update(best=m, f=f.copy(), g=g.copy())
            return
        if hits[y] > 0:
            y_phase(y + 1, m)
            return
        for c in range(nx):
            m2 = distortion_with(c, y, m)
            if m2 >= state["best"]:
                continue
            g[y] = c
            px.append(c)
            py.append(y)
            y_phase(y + 1, m2)
            px.pop()
            py.pop()
            g[y] = -1

    def x_phase(depth, m):
        if state["best"] <= target:
            return
        if depth == nx:
            y_phase(0, m)
            return
        x = xorder[depth]
        for c in range(ny):
            m2 = distortion_with(x, c, m)
            if m2 >= state["best"]:
                continue
            f[x] = c
            hits[c] += 1
            px.append(x)
            py.append(c)
            x_phase(depth + 1, m2)
            px.pop()
            py.pop()
            hits[c] -= 1
            f[x] = -1

    x_phase(0, dx.dtype.type(0) if dx.dtype != object else 0)
    return state["best"], state["f"], state["g"]


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------


def _numba_ok(*arrays):
    return _accel.USE_NUMBA and all(a.dtype != object for a in arrays)


def minplus_closure(cost):
    """Min-plus transitive closure (Floyd-Warshall) of a square cost matrix."""
    if _numba_ok(cost):
        return _minplus_closure_nb(cost)
    return _minplus_closure_np(cost)


def embeddings(da, db, order=None, cand=None, limit=0):
    """Distance-preserving injections from A into B, one row per map.

    ``order`` fixes the assignment order of A's points and ``cand[i, c]``
    says whether point ``i`` of A may go to point ``c`` of B.  ``limit=0``
    means enumerate everything.
    """
    na, nb = da.shape[0], db.shape[0]
    if order is None:
        order = np.arange(na, dtype=np.int64)
    if cand is None:
        cand = np.ones((na, nb), dtype=np.bool_)
    order = np.asarray(order, dtype=np.int64)
    cand = np.asarray(cand, dtype=np.bool_)
    if na > nb:
        return np.empty((0, na), dtype=np.int64)
    if _numba_ok(da, db):
        return _embeddings_nb(da, db, order, cand, limit)
    return _embeddings_np(da, db, order, cand, limit)


def surjections(ds, dt, order=None, limit=0):
    """Non-expansive surjections from S onto T, one row per map."""
    if order is None:
        order = np.arange(ds.shape[0], dtype=np.int64)
    order = np.asarray(order, dtype=np.int64)
    if _numba_ok(ds, dt):
        return _surjections_nb(ds, dt, order, limit)
    return _surjections_np(ds, dt, order, limit)


def min_distortion(dx, dy, xorder=None, target=0, start=None):
    """Smallest distortion of a correspondence between X and Y.

    Returns ``(value, f, g)`` where the optimal correspondence is the graph
    of ``f: X -> Y`` together with the pairs ``(g[y], y)`` for ``g[y] >= 0``.
    The search stops early once ``value <= target``.  ``start`` must be
    strictly larger than any distortion the caller wants considered.
    """
    if xorder is None:
        xorder = np.arange(dx.shape[0], dtype=np.int64)
    xorder = np.asarray(xorder, dtype=np.int64)
    if start is None:
        hi = max(int(dx.max()) if dx.size else 0, int(dy.max()) if dy.size else 0)
        start = hi + 1
    if _numba_ok(dx, dy):
        best, f, g = _min_distortion_nb(dx, dy, xorder, np.int64(target), np.int64(start))
        return int(best), f, g
    best, f, g = _min_distortion_np(dx, dy, xorder, target, start)
    return int(best), f, g
