"""Compiled inner loops for field evaluation, RK4 and trajectory thinning."""

from __future__ import annotations

import numpy as np
from numba import njit

STATUS_LIMIT = 0
STATUS_STEADY = 1
STATUS_NONFINITE = 2
STATUS_NEGATIVE = 3


@njit(cache=True)
def eval_field(E, C, x, out):
    m, s = E.shape
    for i in range(s):
        out[i] = 0.0
    for k in range(m):
        v = 1.0
        for j in range(s):
            for _ in range(E[k, j]):
                v *= x[j]
        for i in range(s):
            out[i] += v * C[k, i]


@njit(cache=True)
def _finite(v):
    for i in range(v.shape[0]):
        if not np.isfinite(v[i]):
            return False
    return True


@njit(cache=True)
def rk4_run(E, C, x0, h, n_steps, steady_tol, neg_band, points, tangents):
    """Fill ``points``/``tangents`` row by row; return (rows written, status)."""
    s = x0.shape[0]
    k1 = np.empty(s)
    k2 = np.empty(s)
    k3 = np.empty(s)
    k4 = np.empty(s)
    tmp = np.empty(s)
    x = x0.copy()
    eval_field(E, C, x, k1)
    points[0] = x
    tangents[0] = k1
    if not _finite(k1):
        return 1, STATUS_NONFINITE
    if np.sqrt(np.sum(k1 * k1)) < steady_tol * (1.0 + np.sqrt(np.sum(x * x))):
        return 1, STATUS_STEADY
    half = 0.5 * h
    for step in range(1, n_steps + 1):
        for i in range(s):
            tmp[i] = x[i] + half * k1[i]
        eval_field(E, C, tmp, k2)
        for i in range(s):
            tmp[i] = x[i] + half * k2[i]
        eval_field(E, C, tmp, k3)
        for i in range(s):
            tmp[i] = x[i] + h * k3[i]
        eval_field(E, C, tmp, k4)
        for i in range(s):
            x[i] = x[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        if not (_finite(k2) and _finite(k3) and _finite(k4) and _finite(x)):
            points[step] = x
            return step + 1, STATUS_NONFINITE
        eval_field(E, C, x, k1)
        points[step] = x
        tangents[step] = k1
        if not _finite(k1):
            return step + 1, STATUS_NONFINITE
        for i in range(s):
            if x[i] < neg_band:
                return step + 1, STATUS_NEGATIVE
        if np.sqrt(np.sum(k1 * k1)) < steady_tol * (1.0 + np.sqrt(np.sum(x * x))):
            return step + 1, STATUS_STEADY
    return n_steps + 1, STATUS_LIMIT


@njit(cache=True)
def thin_indices(points, delta):
    n = points.shape[0]
    keep = np.empty(n, dtype=np.int64)
    if n == 0:
        return keep[:0]
    keep[0] = 0
    count = 1
    last = 0
    d2 = delta * delta
    for k in range(1, n):
        acc = 0.0
        for i in range(points.shape[1]):
            diff = points[k, i] - points[last, i]
            acc += diff * diff
        if acc >= d2:
            keep[count] = k
            count += 1
            last = k
    if last != n - 1:
        # drop kept points crowding the final one so every gap stays >= delta
        while count > 1:
            acc = 0.0
            for i in range(points.shape[1]):
                diff = points[n - 1, i] - points[keep[count - 1], i]
                acc += diff * diff
            if acc >= d2:
                break
            count -= 1
        keep[count] = n - 1
        count += 1
    return keep[:count]
