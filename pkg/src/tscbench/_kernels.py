"""Numba-compiled dynamic programming kernels for the elastic distances.

All kernels take contiguous float64 arrays of equal length and scalar
parameters; validation and parameter mapping live in ``distances``.  The
pointwise cost is the squared difference throughout.  Band widths are in
steps (already converted from fractions by the caller); a width of 0 admits
only the diagonal.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, fastmath=False)
def squared_euclidean(a, b):
    total = 0.0
    for i in range(a.shape[0]):
        d = a[i] - b[i]
        total += d * d
    return total


@njit(cache=True, fastmath=False)
def dtw(a, b, width):
    """Banded DTW under squared pointwise costs; ``width`` is the band in steps."""
    m = a.shape[0]
    n = b.shape[0]
    dp = np.full((m + 1, n + 1), np.inf)
    dp[0, 0] = 0.0
    for i in range(1, m + 1):
        lo = i - width
        if lo < 1:
            lo = 1
        hi = i + width
        if hi > n:
            hi = n
        for j in range(lo, hi + 1):
            d = a[i - 1] - b[j - 1]
            best = dp[i - 1, j - 1]
            if dp[i - 1, j] < best:
                best = dp[i - 1, j]
            if dp[i, j - 1] < best:
                best = dp[i, j - 1]
            dp[i, j] = d * d + best
    return dp[m, n]


@njit(cache=True, fastmath=False)
def wdtw(a, b, weights):
    """Full-window DTW with cell cost weights[|i-j|] * (a_i - b_j)^2."""
    m = a.shape[0]
    n = b.shape[0]
    dp = np.full((m + 1, n + 1), np.inf)
    dp[0, 0] = 0.0
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            d = a[i - 1] - b[j - 1]
            best = dp[i - 1, j - 1]
            if dp[i - 1, j] < best:
                best = dp[i - 1, j]
            if dp[i, j - 1] < best:
                best = dp[i, j - 1]
            dp[i, j] = weights[abs(i - j)] * d * d + best
    return dp[m, n]


@njit(cache=True, fastmath=False)
def lcss_length(a, b, epsilon, width):
    """Longest common subsequence count: matches need |a_i-b_j| <= epsilon and |i-j| <= width."""
    m = a.shape[0]
    n = b.shape[0]
    table = np.zeros((m + 1, n + 1), dtype=np.int64)
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            if abs(i - j) <= width and abs(a[i - 1] - b[j - 1]) <= epsilon:
                table[i, j] = table[i - 1, j - 1] + 1
            else:
                left = table[i, j - 1]
                up = table[i - 1, j]
                table[i, j] = left if left > up else up
    return table[m, n]


@njit(cache=True, fastmath=False)
def erp(a, b, gap, width):
    """Banded edit distance with real penalty, squared costs, gap value ``gap``."""
    m = a.shape[0]
    n = b.shape[0]
    dp = np.full((m + 1, n + 1), np.inf)
    dp[0, 0] = 0.0
    for i in range(1, m + 1):
        if i > width:
            break
        d = a[i - 1] - gap
        dp[i, 0] = dp[i - 1, 0] + d * d
    for j in range(1, n + 1):
        if j > width:
            break
        d = b[j - 1] - gap
        dp[0, j] = dp[0, j - 1] + d * d
    for i in range(1, m + 1):
        lo = i - width
        if lo < 1:
            lo = 1
        hi = i + width
        if hi > n:
            hi = n
        for j in range(lo, hi + 1):
            d_sub = a[i - 1] - b[j - 1]
            d_del = a[i - 1] - gap
            d_ins = b[j - 1] - gap
            c_sub = dp[i - 1, j - 1] + d_sub * d_sub
            c_del = dp[i - 1, j] + d_del * d_del
            c_ins = dp[i, j - 1] + d_ins * d_ins
            best = c_sub
            if c_del < best:
                best = c_del
            if c_ins < best:
                best = c_ins
            dp[i, j] = best
    return dp[m, n]


@njit(cache=True, fastmath=False)
def twe(a, b, nu, lam):
    """Time warp edit distance.

    The recursion doubles the stiffness term away from the matrix edges and
    charges lambda plus stiffness for inserts and deletes past the first
    element; the first row and column accumulate squared steps with the very
    first cell charged the squared value itself.
    """
    m = a.shape[0]
    dp = np.zeros((m + 1, m + 1))
    dp[1, 0] = a[0] * a[0]
    dp[0, 1] = b[0] * b[0]
    for i in range(2, m + 1):
        d = a[i - 2] - a[i - 1]
        dp[i, 0] = dp[i - 1, 0] + d * d
    for j in range(2, m + 1):
        d = b[j - 2] - b[j - 1]
        dp[0, j] = dp[0, j - 1] + d * d
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            if i > 1 and j > 1:
                d1 = a[i - 1] - b[j - 1]
                d2 = a[i - 2] - b[j - 2]
                match = dp[i - 1, j - 1] + nu * abs(i - j) * 2.0 + d1 * d1 + d2 * d2
            else:
                d1 = a[i - 1] - b[j - 1]
                match = dp[i - 1, j - 1] + nu * abs(i - j) + d1 * d1
            if i > 1:
                d = a[i - 1] - a[i - 2]
                delete_a = dp[i - 1, j] + d * d + lam + nu
            else:
                delete_a = dp[i - 1, j] + a[i - 1] * a[i - 1] + lam
            if j > 1:
                d = b[j - 1] - b[j - 2]
                delete_b = dp[i, j - 1] + d * d + lam + nu
            else:
                delete_b = dp[i, j - 1] + b[j - 1] * b[j - 1] + lam
            best = match
            if delete_a < best:
                best = delete_a
            if delete_b < best:
                best = delete_b
            dp[i, j] = best
    return dp[m, m]


@njit(cache=True, fastmath=False)
def _msm_cost(x, y, z, c):
    # split/merge charges c alone when x lies between its neighbours
    if (y <= x and x <= z) or (y >= x and x >= z):
        return c
    dy = abs(x - y)
    dz = abs(x - z)
    return c + (dy if dy < dz else dz)


@njit(cache=True, fastmath=False)
def msm(a, b, c):
    """Move-split-merge distance with constant operation cost ``c``."""
    m = a.shape[0]
    dp = np.zeros((m, m))
    dp[0, 0] = abs(a[0] - b[0])
    for i in range(1, m):
        dp[i, 0] = dp[i - 1, 0] + _msm_cost(a[i], a[i - 1], b[0], c)
    for j in range(1, m):
        dp[0, j] = dp[0, j - 1] + _msm_cost(b[j], a[0], b[j - 1], c)
    for i in range(1, m):
        for j in range(1, m):
            move = dp[i - 1, j - 1] + abs(a[i] - b[j])
            split = dp[i - 1, j] + _msm_cost(a[i], a[i - 1], b[j], c)
            merge = dp[i, j - 1] + _msm_cost(b[j], a[i], b[j - 1], c)
            best = move
            if split < best:
                best = split
            if merge < best:
                best = merge
            dp[i, j] = best
    return dp[m - 1, m - 1]


@njit(cache=True, fastmath=False)
def dtw_self(X, width):
    n = X.shape[0]
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d = dtw(X[i], X[j], width)
            out[i, j] = d
            out[j, i] = d
    return out


@njit(cache=True, fastmath=False)
def dtw_cross(Q, X, width):
    out = np.empty((Q.shape[0], X.shape[0]))
    for i in range(Q.shape[0]):
        for j in range(X.shape[0]):
            out[i, j] = dtw(Q[i], X[j], width)
    return out


@njit(cache=True, fastmath=False)
def wdtw_self(X, weights):
    n = X.shape[0]
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d = wdtw(X[i], X[j], weights)
            out[i, j] = d
            out[j, i] = d
    return out


@njit(cache=True, fastmath=False)
def wdtw_cross(Q, X, weights):
    out = np.empty((Q.shape[0], X.shape[0]))
    for i in range(Q.shape[0]):
        for j in range(X.shape[0]):
            out[i, j] = wdtw(Q[i], X[j], weights)
    return out


@njit(cache=True, fastmath=False)
def lcss_self(X, epsilon, width):
    n = X.shape[0]
    m = X.shape[1]
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d = 1.0 - lcss_length(X[i], X[j], epsilon, width) / m
            out[i, j] = d
            out[j, i] = d
    return out


@njit(cache=True, fastmath=False)
def lcss_cross(Q, X, epsilon, width):
    m = X.shape[1]
    out = np.empty((Q.shape[0], X.shape[0]))
    for i in range(Q.shape[0]):
        for j in range(X.shape[0]):
            out[i, j] = 1.0 - lcss_length(Q[i], X[j], epsilon, width) / m
    return out


@njit(cache=True, fastmath=False)
def erp_self(X, gap, width):
    n = X.shape[0]
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d = erp(X[i], X[j], gap, width)
            out[i, j] = d
            out[j, i] = d
    return out


@njit(cache=True, fastmath=False)
def erp_cross(Q, X, gap, width):
    out = np.empty((Q.shape[0], X.shape[0]))
    for i in range(Q.shape[0]):
        for j in range(X.shape[0]):
            out[i, j] = erp(Q[i], X[j], gap, width)
    return out


@njit(cache=True, fastmath=False)
def twe_self(X, nu, lam):
    n = X.shape[0]
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d = twe(X[i], X[j], nu, lam)
            out[i, j] = d
            out[j, i] = d
    return out


@njit(cache=True, fastmath=False)
def twe_cross(Q, X, nu, lam):
    out = np.empty((Q.shape[0], X.shape[0]))
    for i in range(Q.shape[0]):
        for j in range(X.shape[0]):
            out[i, j] = twe(Q[i], X[j], nu, lam)
    return out


@njit(cache=True, fastmath=False)
def msm_self(X, c):
    n = X.shape[0]
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d = msm(X[i], X[j], c)
            out[i, j] = d
            out[j, i] = d
    return out


@njit(cache=True, fastmath=False)
def msm_cross(Q, X, c):
    out = np.empty((Q.shape[0], X.shape[0]))
    for i in range(Q.shape[0]):
        for j in range(X.shape[0]):
            out[i, j] = msm(Q[i], X[j], c)
    return out


@njit(cache=True, fastmath=False)
def min_zdist_sq(shapelet, series):
    """Smallest squared distance from a z-normalised shapelet to any window.

    Each window of ``series`` is z-normalised in place (population standard
    deviation; constant windows map to zeros) before comparison, and the
    squared distance is divided by the shapelet length.
    """
    l = shapelet.shape[0]
    m = series.shape[0]
    best = np.inf
    for start in range(m - l + 1):
        mean = 0.0
        for k in range(l):
            mean += series[start + k]
        mean /= l
        var = 0.0
        for k in range(l):
            d = series[start + k] - mean
            var += d * d
        var /= l
        sd = np.sqrt(var)
        total = 0.0
        if sd <= 0.0:
            for k in range(l):
                d = shapelet[k]
                total += d * d
        else:
            for k in range(l):
                d = shapelet[k] - (series[start + k] - mean) / sd
                total += d * d
        if total < best:
            best = total
    return best / l


@njit(cache=True, fastmath=False)
def split_gain_scan(values, labels, class_count):
    """Best information-gain cut of one attribute, in bits.

    Returns (gain, threshold, found); found is False when every value is
    equal.  Equal gains keep the earliest (lowest) threshold.
    """
    n = values.shape[0]
    if n < 2:
        return 0.0, 0.0, False
    order = np.argsort(values)
    total = np.zeros(class_count)
    for i in range(n):
        total[labels[i]] += 1.0
    parent = 0.0
    for c in range(class_count):
        if total[c] > 0:
            p = total[c] / n
            parent -= p * np.log2(p)
    left = np.zeros(class_count)
    best_gain = -np.inf
    best_threshold = 0.0
    found = False
    for i in range(n - 1):
        left[labels[order[i]]] += 1.0
        vi = values[order[i]]
        vj = values[order[i + 1]]
        if vi < vj:
            nl = i + 1.0
            nr = n - nl
            hl = 0.0
            hr = 0.0
            for c in range(class_count):
                if left[c] > 0:
                    p = left[c] / nl
                    hl -= p * np.log2(p)
                rc = total[c] - left[c]
                if rc > 0:
                    p = rc / nr
                    hr -= p * np.log2(p)
            gain = parent - (nl * hl + nr * hr) / n
            if gain > best_gain:
                best_gain = gain
                best_threshold = 0.5 * (vi + vj)
                found = True
    if not found:
        return 0.0, 0.0, False
    return best_gain, best_threshold, True


@njit(cache=True, fastmath=False)
def split_sse_scan(values, targets):
    """Cut of one attribute minimizing summed child squared error.

    Returns (sse, threshold, found); equal errors keep the earliest cut.
    """
    n = values.shape[0]
    if n < 2:
        return 0.0, 0.0, False
    order = np.argsort(values)
    total_s = 0.0
    total_ss = 0.0
    for i in range(n):
        total_s += targets[i]
        total_ss += targets[i] * targets[i]
    left_s = 0.0
    left_ss = 0.0
    best_sse = np.inf
    best_threshold = 0.0
    found = False
    for i in range(n - 1):
        t = targets[order[i]]
        left_s += t
        left_ss += t * t
        vi = values[order[i]]
        vj = values[order[i + 1]]
        if vi < vj:
            nl = i + 1.0
            nr = n - nl
            sse = (left_ss - left_s * left_s / nl) + (
                (total_ss - left_ss) - (total_s - left_s) * (total_s - left_s) / nr
            )
            if sse < best_sse:
                best_sse = sse
                best_threshold = 0.5 * (vi + vj)
                found = True
    if not found:
        return 0.0, 0.0, False
    return best_sse, best_threshold, True


@njit(cache=True, fastmath=False)
def min_zdist_sq_row(shapelet, X, out):
    """min_zdist_sq of one (already normalized) shapelet against every row."""
    for r in range(X.shape[0]):
        out[r] = min_zdist_sq(shapelet, X[r])
