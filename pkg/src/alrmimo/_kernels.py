"""Compiled inner loops. Every kernel returns the flops it performed."""
import numpy as np
from numba import njit

OK = 0
OVERFLOW = 1
ITERATION_CAP = 2
DEGENERATE = 3

# |r| and |u| guards keeping int64 products exact
_R_LIMIT = 2.0 ** 31
_U_LIMIT = 2 ** 31
# complex U is held in float64, exact below 2**53
_CU_LIMIT = 2.0 ** 50


# ---------------------------------------------------------------------------
# real lattices
# ---------------------------------------------------------------------------

@njit(cache=True)
def gso_real(B, mu, bb, gs):
    """Modified Gram-Schmidt on the columns of ``B``.

    Fills ``mu`` (unit lower-triangular), ``bb`` (squared GS norms) and
    ``gs`` (GS vectors as columns).
    """
    rows, m = B.shape
    flops = 0
    for i in range(m):
        for r in range(rows):
            gs[r, i] = B[r, i]
        for j in range(i):
            s = 0.0
            for r in range(rows):
                s += gs[r, i] * gs[r, j]
            c = s / bb[j]
            mu[i, j] = c
            for r in range(rows):
                gs[r, i] -= c * gs[r, j]
            flops += 2 * rows + 2 * rows
        s = 0.0
        for r in range(rows):
            s += gs[r, i] * gs[r, i]
        bb[i] = s
        mu[i, i] = 1.0
        for j in range(i + 1, m):
            mu[i, j] = 0.0
        flops += 2 * rows - 1
    return flops


@njit(cache=True)
def red_real(B, U, mu, k, l):
    """Size reduction of column ``k`` against column ``l`` (l < k).

    Returns (status, flops).
    """
    x = mu[k, l]
    if abs(x) <= 0.5:
        return OK, 0
    r = np.rint(x)
    if abs(r) >= _R_LIMIT:
        return OVERFLOW, 0
    rows = B.shape[0]
    for i in range(rows):
        B[i, k] -= r * B[i, l]
    ri = np.int64(r)
    for i in range(U.shape[0]):
        ul = U[i, l]
        if abs(ul) >= _U_LIMIT or abs(U[i, k]) >= _U_LIMIT:
            return OVERFLOW, 0
        U[i, k] -= ri * ul
    for j in range(l):
        mu[k, j] -= r * mu[l, j]
    mu[k, l] -= r
    return OK, 2 * rows + 2 * l + 1


@njit(cache=True)
def lll_real(B, U, mu, bb, k, delta, max_iter, reorth_every):
    """LLL main loop starting at (0-based) index ``k``.

    The GSO in ``mu``/``bb`` must match ``B`` on entry. Returns
    (status, iterations, swaps, flops).
    """
    rows, m = B.shape
    gs = np.empty((rows, m))
    iters = 0
    swaps = 0
    flops = 0
    since = 0
    while k < m:
        if iters >= max_iter:
            return ITERATION_CAP, iters, swaps, flops
        iters += 1
        st, f = red_real(B, U, mu, k, k - 1)
        flops += f
        if st != OK:
            return st, iters, swaps, flops
        mk = mu[k, k - 1]
        lhs = bb[k] + mk * mk * bb[k - 1]
        flops += 4
        if lhs < delta * bb[k - 1]:
            # swap columns k-1, k and update the GSO
            if lhs <= 0.0:
                return DEGENERATE, iters, swaps, flops
            mu[k, k - 1] = mk * bb[k - 1] / lhs
            bb[k] = bb[k - 1] * bb[k] / lhs
            bb[k - 1] = lhs
            flops += 4
            for r in range(rows):
                tmp = B[r, k]
                B[r, k] = B[r, k - 1]
                B[r, k - 1] = tmp
            for r in range(U.shape[0]):
                tmpi = U[r, k]
                U[r, k] = U[r, k - 1]
                U[r, k - 1] = tmpi
            for j in range(k - 1):
                tmp = mu[k, j]
                mu[k, j] = mu[k - 1, j]
                mu[k - 1, j] = tmp
            nk = mu[k, k - 1]
            for i in range(k + 1, m):
                t = mu[i, k]
                mu[i, k] = mu[i, k - 1] - mk * t
                mu[i, k - 1] = t + nk * mu[i, k]
                flops += 4
            swaps += 1
            since += 1
            if since >= reorth_every:
                flops += gso_real(B, mu, bb, gs)
                since = 0
            k = max(k - 1, 1)
        else:
            for l in range(k - 2, -1, -1):
                st, f = red_real(B, U, mu, k, l)
                flops += f
                if st != OK:
                    return st, iters, swaps, flops
            k += 1
    return OK, iters, swaps, flops


@njit(cache=True)
def extend_gso_real(B, mu, bb, col, top_rows, tail_sq):
    """GSO coefficients of column ``col`` from the GSO of the columns before it.

    Only the first ``top_rows`` coordinates of the new column are used for
    the projections; ``tail_sq`` is the squared norm of its remaining
    coordinates, which are orthogonal to every earlier column. This keeps
    the tiny last Gram-Schmidt norm of an augmented basis free of
    cancellation.
    """
    flops = 0
    g = np.empty(col)
    for j in range(col):
        s = 0.0
        for r in range(top_rows):
            s += B[r, col] * B[r, j]
        g[j] = s
        flops += 2 * top_rows - 1
    proj = 0.0
    for j in range(col):
        s = g[j]
        for i in range(j):
            s -= mu[j, i] * mu[col, i] * bb[i]
        mu[col, j] = s / bb[j]
        proj += mu[col, j] * mu[col, j] * bb[j]
        flops += 3 * j + 1 + 3
    nsq = 0.0
    for r in range(top_rows):
        nsq += B[r, col] * B[r, col]
    flops += 2 * top_rows - 1
    resid = nsq - proj
    if resid < 1e-11 * nsq:
        resid = 0.0
    bb[col] = resid + tail_sq
    flops += 2
    mu[col, col] = 1.0
    return flops


# ---------------------------------------------------------------------------
# complex lattices (complex mult = 6 flops, complex add = 2)
# ---------------------------------------------------------------------------

@njit(cache=True)
def gso_complex(B, mu, bb, gs):
    rows, m = B.shape
    flops = 0
    for i in range(m):
        for r in range(rows):
            gs[r, i] = B[r, i]
        for j in range(i):
            s = 0.0 + 0.0j
            for r in range(rows):
                s += gs[r, i] * np.conj(gs[r, j])
            c = s / bb[j]
            mu[i, j] = c
            for r in range(rows):
                gs[r, i] -= c * gs[r, j]
            # inner product 8*rows - 2, division by a real 2, axpy 8*rows
            flops += 16 * rows
        s = 0.0
        for r in range(rows):
            v = gs[r, i]
            s += v.real * v.real + v.imag * v.imag
        bb[i] = s
        mu[i, i] = 1.0
        for j in range(i + 1, m):
            mu[i, j] = 0.0
        flops += 4 * rows - 1
    return flops


@njit(cache=True)
def red_complex(B, U, mu, k, l):
    x = mu[k, l]
    if abs(x.real) <= 0.5 and abs(x.imag) <= 0.5:
        return OK, 0
    r = np.rint(x.real) + 1j * np.rint(x.imag)
    if abs(r.real) >= _R_LIMIT or abs(r.imag) >= _R_LIMIT:
        return OVERFLOW, 0
    rows = B.shape[0]
    for i in range(rows):
        B[i, k] -= r * B[i, l]
    for i in range(U.shape[0]):
        v = U[i, k] - r * U[i, l]
        if abs(v.real) >= _CU_LIMIT or abs(v.imag) >= _CU_LIMIT:
            return OVERFLOW, 0
        U[i, k] = v
    for j in range(l):
        mu[k, j] -= r * mu[l, j]
    mu[k, l] -= r
    return OK, 8 * rows + 8 * l + 2


@njit(cache=True)
def lll_complex(B, U, mu, bb, k, delta, max_iter, reorth_every):
    rows, m = B.shape
    gs = np.empty((rows, m), dtype=np.complex128)
    iters = 0
    swaps = 0
    flops = 0
    since = 0
    while k < m:
        if iters >= max_iter:
            return ITERATION_CAP, iters, swaps, flops
        iters += 1
        st, f = red_complex(B, U, mu, k, k - 1)
        flops += f
        if st != OK:
            return st, iters, swaps, flops
        mk = mu[k, k - 1]
        a2 = mk.real * mk.real + mk.imag * mk.imag
        lhs = bb[k] + a2 * bb[k - 1]
        flops += 6
        if lhs < delta * bb[k - 1]:
            if lhs <= 0.0:
                return DEGENERATE, iters, swaps, flops
            mu[k, k - 1] = np.conj(mk) * (bb[k - 1] / lhs)
            bb[k] = bb[k - 1] * bb[k] / lhs
            bb[k - 1] = lhs
            flops += 5
            for r in range(rows):
                tmp = B[r, k]
                B[r, k] = B[r, k - 1]
                B[r, k - 1] = tmp
            for r in range(U.shape[0]):
                tmp = U[r, k]
                U[r, k] = U[r, k - 1]
                U[r, k - 1] = tmp
            for j in range(k - 1):
                tmp = mu[k, j]
                mu[k, j] = mu[k - 1, j]
                mu[k - 1, j] = tmp
            nk = mu[k, k - 1]
            for i in range(k + 1, m):
                t = mu[i, k]
                mu[i, k] = mu[i, k - 1] - mk * t
                mu[i, k - 1] = t + nk * mu[i, k]
                flops += 16
            swaps += 1
            since += 1
            if since >= reorth_every:
                flops += gso_complex(B, mu, bb, gs)
                since = 0
            k = max(k - 1, 1)
        else:
            for l in range(k - 2, -1, -1):
                st, f = red_complex(B, U, mu, k, l)
                flops += f
                if st != OK:
                    return st, iters, swaps, flops
            k += 1
    return OK, iters, swaps, flops


@njit(cache=True)
def extend_gso_complex(B, mu, bb, col, top_rows, tail_sq):
    flops = 0
    g = np.empty(col, dtype=np.complex128)
    for j in range(col):
        s = 0.0 + 0.0j
        for r in range(top_rows):
            s += B[r, col] * np.conj(B[r, j])
        g[j] = s
        flops += 8 * top_rows - 2
    proj = 0.0
    for j in range(col):
        s = g[j]
        for i in range(j):
            s -= mu[col, i] * np.conj(mu[j, i]) * bb[i]
        mu[col, j] = s / bb[j]
        v = mu[col, j]
        proj += (v.real * v.real + v.imag * v.imag) * bb[j]
        flops += 10 * j + 2 + 5
    nsq = 0.0
    for r in range(top_rows):
        v = B[r, col]
        nsq += v.real * v.real + v.imag * v.imag
    flops += 4 * top_rows - 1
    resid = nsq - proj
    if resid < 1e-11 * nsq:
        resid = 0.0
    bb[col] = resid + tail_sq
    flops += 2
    mu[col, col] = 1.0
    return flops


# ---------------------------------------------------------------------------
# detection
# ---------------------------------------------------------------------------

@njit(cache=True)
def back_substitute_round(R, z):
    """Nearest-plane (SIC) recursion on an upper-triangular system."""
    m = R.shape[1]
    x = np.zeros(m)
    flops = 0
    for i in range(m - 1, -1, -1):
        s = z[i]
        for j in range(i + 1, m):
            s -= R[i, j] * x[j]
        x[i] = np.rint(s / R[i, i])
        flops += 2 * (m - 1 - i) + 1
    return x, flops


@njit(cache=True)
def sphere_decode_box(R, z, levels):
    """Schnorr-Euchner depth-first search for the point of
    ``{0..levels-1}^m`` minimizing ``||z - R x||``.

    The search radius starts at the clamped nearest-plane point, so a
    candidate always exists. Returns (x, squared distance, flops, nodes).
    """
    m = R.shape[1]
    flops = 0
    # initial radius from the box-constrained nearest-plane point
    x0 = np.zeros(m)
    d0 = 0.0
    for i in range(m - 1, -1, -1):
        s = z[i]
        for j in range(i + 1, m):
            s -= R[i, j] * x0[j]
        c = s / R[i, i]
        v = np.rint(c)
        if v < 0:
            v = 0.0
        elif v > levels - 1:
            v = levels - 1.0
        x0[i] = v
        e = R[i, i] * (c - v)
        d0 += e * e
        flops += 2 * (m - 1 - i) + 1 + 4
    radius2 = d0 * (1.0 + 1e-12) + 1e-300
    best = x0.copy()
    best_d = d0

    x = np.zeros(m)
    dist = np.zeros(m + 1)
    center = np.zeros(m)
    order = np.zeros((m, levels), dtype=np.int64)
    pos = np.zeros(m, dtype=np.int64)
    keys = np.zeros(levels)
    nodes = 0

    level = m - 1
    # set up the top level
    center[level] = z[level] / R[level, level]
    flops += 1
    for v in range(levels):
        keys[v] = abs(center[level] - v)
        order[level, v] = v
    flops += levels
    for a in range(1, levels):
        b = a
        while b > 0 and keys[order[level, b]] < keys[order[level, b - 1]]:
            tmp = order[level, b]
            order[level, b] = order[level, b - 1]
            order[level, b - 1] = tmp
            b -= 1
    pos[level] = 0
    while True:
        if pos[level] >= levels:
            level += 1
            if level >= m:
                break
            continue
        v = order[level, pos[level]]
        pos[level] += 1
        e = R[level, level] * (center[level] - v)
        d = dist[level + 1] + e * e
        flops += 4
        nodes += 1
        if d >= radius2:
            # candidates are sorted by distance: nothing else fits here
            level += 1
            if level >= m:
                break
            continue
        x[level] = v
        if level == 0:
            radius2 = d
            best_d = d
            for i in range(m):
                best[i] = x[i]
            continue
        dist[level] = d
        level -= 1
        s = z[level]
        for j in range(level + 1, m):
            s -= R[level, j] * x[j]
        center[level] = s / R[level, level]
        flops += 2 * (m - 1 - level) + 1
        for u in range(levels):
            keys[u] = abs(center[level] - u)
            order[level, u] = u
        flops += levels
        for a in range(1, levels):
            b = a
            while b > 0 and keys[order[level, b]] < keys[order[level, b - 1]]:
                tmp = order[level, b]
                order[level, b] = order[level, b - 1]
                order[level, b - 1] = tmp
                b -= 1
        pos[level] = 0
    return best, best_d, flops, nodes


# ---------------------------------------------------------------------------
# brute-force enumeration (oracle)
# ---------------------------------------------------------------------------

@njit(cache=True)
def enumerate_box(H, target, lo, hi, radius2, max_out):
    """All integer ``c`` with ``lo <= c <= hi`` and ``||H c - target||^2 <= radius2``.

    Plain odometer over the box; the candidate vector is updated
    incrementally. Returns (coefficients, squared norms, count, truncated).
    """
    rows, m = H.shape
    out = np.zeros((max_out, m), dtype=np.int64)
    norms = np.zeros(max_out)
    c = lo.copy()
    v = np.empty(rows)
    for r in range(rows):
        s = -target[r]
        for j in range(m):
            s += H[r, j] * c[j]
        v[r] = s
    count = 0
    truncated = False
    while True:
        s = 0.0
        for r in range(rows):
            s += v[r] * v[r]
        if s <= radius2:
            if count < max_out:
                for j in range(m):
                    out[count, j] = c[j]
                norms[count] = s
                count += 1
            else:
                truncated = True
        # advance the odometer
        j = 0
        while j < m:
            if c[j] < hi[j]:
                c[j] += 1
                for r in range(rows):
                    v[r] += H[r, j]
                break
            span = c[j] - lo[j]
            c[j] = lo[j]
            for r in range(rows):
                v[r] -= span * H[r, j]
            j += 1
        if j == m:
            break
        if j > 0:
            # refresh after a carry so rounding drift cannot build up
            for r in range(rows):
                s = -target[r]
                for jj in range(m):
                    s += H[r, jj] * c[jj]
                v[r] = s
    return out[:count], norms[:count], count, truncated
