"""Numeric inner loops.

Every kernel exists twice: a numba version (``*_jit``) written as explicit
loops, and a vectorised numpy version (``*_np``). The module-level names
without suffix dispatch to one of them according to ``energybounds._jit.USE_JIT``.
Both paths implement the same algorithm and are checked against each other in
the test suite.
"""

from itertools import combinations

import numpy as np

from ._jit import USE_JIT, njit

#: Sweep limit for cyclic Jacobi; exceeding it is reported as non-convergence.
JACOBI_MAX_SWEEPS = 100

#: Margin below -1 required before a 3x3 block counts as a Rayleigh witness.
RAYLEIGH_MARGIN = 1e-9

NO_WITNESS = 0
PATH_WITNESS = 1
RAYLEIGH_WITNESS = 2


def jacobi_off_tol(n, frob):
    """Off-diagonal Frobenius threshold used to stop the Jacobi sweeps."""
    return 4.0 * max(n, 1) * np.finfo(float).eps * frob


# ---------------------------------------------------------------------------
# cyclic Jacobi
# ---------------------------------------------------------------------------


@njit
def _jacobi_jit(a, off_tol, max_sweeps):
    n = a.shape[0]
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off += 2.0 * a[p, q] * a[p, q]
        if np.sqrt(off) <= off_tol:
            out = np.empty(n)
            for i in range(n):
                out[i] = a[i, i]
            return out, sweep, True
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(diff) > 1e150 * abs(apq):
                    # tiny angle; t = 1 / (2 theta) without forming theta
                    t = apq / diff
                else:
                    theta = diff / (2.0 * apq)
                    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
    out = np.empty(n)
    for i in range(n):
        out[i] = a[i, i]
    return out, max_sweeps, False


def _jacobi_np(a, off_tol, max_sweeps):
    n = a.shape[0]
    iu = np.triu_indices(n, 1)
    for sweep in range(max_sweeps + 1):
        if np.sqrt(2.0 * np.sum(a[iu] ** 2)) <= off_tol:
            return np.diag(a).copy(), sweep, True
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(diff) > 1e150 * abs(apq):
                    t = apq / diff
                else:
                    theta = diff / (2.0 * apq)
                    t = np.copysign(1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0)), theta)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                cp = a[:, p].copy()
                cq = a[:, q]
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                rp = a[p, :].copy()
                rq = a[q, :]
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
    return np.diag(a).copy(), max_sweeps, False


def jacobi_eigenvalues(a, off_tol, max_sweeps=JACOBI_MAX_SWEEPS, jit=None):
    """Eigenvalues of the symmetric float array ``a`` (unsorted).

    Returns ``(values, sweeps, converged)``. ``a`` is not modified.
    """
    work = np.array(a, dtype=np.float64, copy=True)
    use = USE_JIT if jit is None else jit
    fn = _jacobi_jit if use else _jacobi_np
    return fn(work, float(off_tol), int(max_sweeps))


# ---------------------------------------------------------------------------
# normalised walk-degree iteration
# ---------------------------------------------------------------------------


@njit
def _gamma_jit(adj, k_max, stop_tol):
    n = adj.shape[0]
    v = np.ones(n)
    w = np.empty(n)
    out = np.empty(k_max + 1)
    count = 0
    for k in range(k_max + 1):
        num = 0.0
        den = 0.0
        top = 0.0
        for i in range(n):
            acc = 0.0
            for j in range(n):
                acc += adj[i, j] * v[j]
            w[i] = acc
            num += acc * acc
            den += v[i] * v[i]
            if acc > top:
                top = acc
        out[k] = np.sqrt(num / den)
        count = k + 1
        if stop_tol > 0.0 and k > 0 and abs(out[k] - out[k - 1]) < stop_tol:
            break
        for i in range(n):
            v[i] = w[i] / top
    return out[:count]


def _gamma_np(adj, k_max, stop_tol):
    v = np.ones(adj.shape[0])
    out = []
    for k in range(k_max + 1):
        w = adj @ v
        out.append(np.sqrt(np.dot(w, w) / np.dot(v, v)))
        if stop_tol > 0.0 and k > 0 and abs(out[k] - out[k - 1]) < stop_tol:
            break
        v = w / w.max()
    return np.array(out)


def gamma_iterate(adj, k_max, stop_tol=0.0, jit=None):
    """gamma^(0..k_max) of a connected adjacency matrix via max-normalised walks.

    With ``stop_tol > 0`` the iteration stops at the first k with
    ``|gamma^(k) - gamma^(k-1)| < stop_tol`` and the shorter array is returned.
    """
    adj = np.ascontiguousarray(adj, dtype=np.float64)
    use = USE_JIT if jit is None else jit
    fn = _gamma_jit if use else _gamma_np
    return fn(adj, int(k_max), float(stop_tol))


# ---------------------------------------------------------------------------
# 3x3 principal-submatrix scan
# ---------------------------------------------------------------------------


@njit
def _min_eig_zero_diag(a, b, c):
    # eigenvalues of [[0,a,c],[a,0,b],[c,b,0]] solve x^3 - p x - q = 0
    p = a * a + b * b + c * c
    if p == 0.0:
        return 0.0
    q = 2.0 * a * b * c
    r = np.sqrt(p / 3.0)
    arg = q / (2.0 * r * r * r)
    if arg > 1.0:
        arg = 1.0
    elif arg < -1.0:
        arg = -1.0
    phi = np.arccos(arg) / 3.0
    return 2.0 * r * np.cos(phi - 4.0 * np.pi / 3.0)


@njit
def _null_vector3(a, b, c, lam):
    # kernel of [[0,a,c],[a,0,b],[c,b,0]] - lam*I via the largest row cross product
    r0 = np.array([-lam, a, c])
    r1 = np.array([a, -lam, b])
    r2 = np.array([c, b, -lam])
    best = np.zeros(3)
    best_norm = -1.0
    for u, w in ((r0, r1), (r0, r2), (r1, r2)):
        x = np.array([u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0]])
        nrm = np.sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])
        if nrm > best_norm:
            best_norm = nrm
            best = x
    if best_norm > 0.0:
        best = best / best_norm
    return best


@njit
def _triple_scan_jit(m, max_triples, margin):
    n = m.shape[0]
    vec = np.zeros(3)
    seen = 0
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if max_triples >= 0 and seen >= max_triples:
                    break
                seen += 1
                if m[i, i] != 0.0 or m[j, j] != 0.0 or m[k, k] != 0.0:
                    continue
                for mid in range(3):
                    if mid == 0:
                        x, y, z = j, i, k
                    elif mid == 1:
                        x, y, z = i, j, k
                    else:
                        x, y, z = i, k, j
                    a = m[x, y]
                    b = m[y, z]
                    if a != 0.0 and b != 0.0 and m[x, z] == 0.0 and a * a + b * b > 1.0:
                        return PATH_WITNESS, x, y, z, np.sqrt(a * a + b * b), vec
    seen = 0
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if max_triples >= 0 and seen >= max_triples:
                    break
                seen += 1
                if m[i, i] != 0.0 or m[j, j] != 0.0 or m[k, k] != 0.0:
                    continue
                a = m[i, j]
                b = m[j, k]
                c = m[i, k]
                lam = _min_eig_zero_diag(a, b, c)
                if lam < -1.0 - margin:
                    return RAYLEIGH_WITNESS, i, j, k, lam, _null_vector3(a, b, c, lam)
    return NO_WITNESS, -1, -1, -1, 0.0, vec


def _min_eig_zero_diag_np(a, b, c):
    p = a * a + b * b + c * c
    q = 2.0 * a * b * c
    r = np.sqrt(p / 3.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        arg = np.where(p > 0.0, q / (2.0 * r**3), 1.0)
    phi = np.arccos(np.clip(arg, -1.0, 1.0)) / 3.0
    return np.where(p > 0.0, 2.0 * r * np.cos(phi - 4.0 * np.pi / 3.0), 0.0)


def _triple_scan_np(m, max_triples, margin):
    n = m.shape[0]
    count = n * (n - 1) * (n - 2) // 6
    if max_triples >= 0:
        count = min(count, max_triples)
    if count == 0:
        return NO_WITNESS, -1, -1, -1, 0.0, np.zeros(3)
    t = np.fromiter(
        (v for tri in combinations(range(n), 3) for v in tri), dtype=np.intp, count=3 * count
    ).reshape(-1, 3)
    i, j, k = t[:, 0], t[:, 1], t[:, 2]
    diag = np.diag(m)
    ok = (diag[i] == 0.0) & (diag[j] == 0.0) & (diag[k] == 0.0)
    # candidate middle vertex: i, then j, then k
    hits = []
    orders = ((j, i, k), (i, j, k), (i, k, j))
    for x, y, z in orders:
        a = m[x, y]
        b = m[y, z]
        hits.append(ok & (a != 0.0) & (b != 0.0) & (m[x, z] == 0.0) & (a * a + b * b > 1.0))
    hits = np.stack(hits, axis=1)
    rows = np.flatnonzero(hits.any(axis=1))
    if rows.size:
        r = rows[0]
        mid = int(np.argmax(hits[r]))
        x, y, z = (int(v[r]) for v in orders[mid])
        a, b = m[x, y], m[y, z]
        return PATH_WITNESS, x, y, z, float(np.sqrt(a * a + b * b)), np.zeros(3)
    a, b, c = m[i, j], m[j, k], m[i, k]
    lam = _min_eig_zero_diag_np(a, b, c)
    rows = np.flatnonzero(ok & (lam < -1.0 - margin))
    if rows.size:
        r = rows[0]
        vec = getattr(_null_vector3, "py_func", _null_vector3)(a[r], b[r], c[r], lam[r])
        return RAYLEIGH_WITNESS, int(i[r]), int(j[r]), int(k[r]), float(lam[r]), vec
    return NO_WITNESS, -1, -1, -1, 0.0, np.zeros(3)


def triple_scan(m, max_triples=-1, margin=RAYLEIGH_MARGIN, jit=None):
    """Scan 3x3 zero-diagonal principal blocks for a strictness pattern.

    First pass: an induced path block ``[[0,a,0],[a,0,b],[0,b,0]]`` with
    ``a^2 + b^2 > 1``. Second pass: any block whose smallest eigenvalue is below
    ``-1 - margin``. Triples are visited in lexicographic order; the first hit
    wins. Returns ``(kind, x, y, z, value, vector)`` where for a path hit ``y``
    is the middle index and ``value = sqrt(a^2 + b^2)``; for a Rayleigh hit
    ``value`` is the smallest block eigenvalue and ``vector`` its unit
    eigenvector.
    """
    m = np.ascontiguousarray(m, dtype=np.float64)
    use = USE_JIT if jit is None else jit
    fn = _triple_scan_jit if use else _triple_scan_np
    kind, x, y, z, value, vec = fn(m, int(max_triples), float(margin))
    return int(kind), int(x), int(y), int(z), float(value), np.asarray(vec, dtype=float)
