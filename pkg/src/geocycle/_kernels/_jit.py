"""Loop kernels compiled with numba.

Same signatures and results as :mod:`._numpy`. Importing this module
requires numba; the package falls back to the numpy versions otherwise.
"""
import math

import numpy as np
from numba import njit


@njit(cache=True)
def _sh_scaled_coeffs(t):
    a = np.zeros((t + 1, t + 1))
    b = np.zeros((t + 1, t + 1))
    for m in range(t + 1):
        if m == 0:
            a[0, 0] = 1.0
        elif m == 1:
            a[1, 1] = math.sqrt(3.0)
        else:
            a[m, m] = a[m - 1, m - 1] * math.sqrt((2 * m + 1) / (2.0 * m))
        for l in range(m + 1, t + 1):
            a[l, m] = math.sqrt((2 * l - 1) * (2 * l + 1) / ((l - m) * (l + m) * 1.0))
            if l >= m + 2:
                b[l, m] = math.sqrt(
                    (2 * l + 1) * (l + m - 1) * (l - m - 1)
                    / ((l - m) * (l + m) * (2 * l - 3.0))
                )
    return a, b


@njit(cache=True)
def _harmonics_point(x, y, z, t, a, b, out, row):
    c = 1.0
    s = 0.0
    for m in range(t + 1):
        if m > 0:
            c, s = x * c - y * s, x * s + y * c
        q_prev = 0.0
        q = a[m, m]
        for l in range(m, t + 1):
            if l == m + 1:
                q_prev, q = q, a[l, m] * z * q
            elif l >= m + 2:
                q_prev, q = q, a[l, m] * z * q - b[l, m] * q_prev
            base = l * l + l
            out[row, base + m] = q * c
            if m > 0:
                out[row, base - m] = q * s


@njit(cache=True)
def harmonics(X, t):
    N = X.shape[0]
    out = np.empty((N, (t + 1) ** 2))
    a, b = _sh_scaled_coeffs(t)
    for i in range(N):
        _harmonics_point(X[i, 0], X[i, 1], X[i, 2], t, a, b, out, i)
    return out


@njit(cache=True)
def arc_nodes(P, gx):
    n, D = P.shape
    q = gx.shape[0]
    nodes = np.empty((n * q, D))
    ell = np.empty(n)
    for j in range(n):
        k = j + 1 if j + 1 < n else 0
        ip = 0.0
        for c in range(D):
            ip += P[j, c] * P[k, c]
        ip = min(1.0, max(-1.0, ip))
        lj = math.acos(ip)
        ell[j] = lj
        sl = math.sin(lj)
        for i in range(q):
            if lj < 1e-12:
                ca, cb = 1.0, 0.0
            else:
                ca = math.sin((1.0 - gx[i]) * lj) / sl
                cb = math.sin(gx[i] * lj) / sl
            for c in range(D):
                nodes[j * q + i, c] = ca * P[j, c] + cb * P[k, c]
    return nodes, ell


@njit(cache=True)
def cycle_moments(P, t, gx, gw):
    n = P.shape[0]
    q = gx.shape[0]
    K = (t + 1) ** 2
    a, b = _sh_scaled_coeffs(t)
    nodes, ell = arc_nodes(P, gx)
    row = np.empty((1, K))
    acc = np.zeros(K)
    total = 0.0
    for j in range(n):
        total += ell[j]
        if ell[j] == 0.0:
            continue
        for i in range(q):
            p = j * q + i
            _harmonics_point(nodes[p, 0], nodes[p, 1], nodes[p, 2], t, a, b, row, 0)
            w = ell[j] * gw[i]
            for k in range(K):
                acc[k] += w * row[0, k]
    for k in range(K):
        acc[k] /= total
    return acc, total


@njit(cache=True)
def objective(P, t, gx, gw):
    mom, _ = cycle_moments(P, t, gx, gw)
    s = 0.0
    for k in range(1, mom.shape[0]):
        s += mom[k] * mom[k]
    return s


@njit(cache=True)
def legendre_terms(P, t, gx, gw):
    nodes, ell = arc_nodes(P, gx)
    n = P.shape[0]
    q = gx.shape[0]
    N = n * q
    D = P.shape[1]
    w = np.empty(N)
    total = 0.0
    for j in range(n):
        total += ell[j]
        for i in range(q):
            w[j * q + i] = ell[j] * gw[i]
    terms = np.zeros(t + 1)
    for r in range(N):
        for s in range(N):
            g = 0.0
            for c in range(D):
                g += nodes[r, c] * nodes[s, c]
            g = min(1.0, max(-1.0, g))
            ww = w[r] * w[s]
            p_prev = 1.0
            p = g
            terms[0] += ww
            for l in range(1, t + 1):
                if l > 1:
                    p_prev, p = p, ((2 * l - 1) * g * p - (l - 1) * p_prev) / l
                terms[l] += ww * p
    for l in range(t + 1):
        terms[l] *= (2 * l + 1) / (total * total)
    return terms


@njit(cache=True)
def _normalize_row(P, j):
    s = 0.0
    for c in range(P.shape[1]):
        s += P[j, c] * P[j, c]
    s = math.sqrt(s)
    for c in range(P.shape[1]):
        P[j, c] /= s


@njit(cache=True)
def fd_gradient(P, t, h, gx, gw):
    P = P.copy()
    n, D = P.shape
    g = np.zeros((n, D))
    orig = np.empty(D)
    for j in range(n):
        for c in range(D):
            orig[c] = P[j, c]
        for c in range(D):
            P[j, :] = orig
            P[j, c] += h
            _normalize_row(P, j)
            fp = objective(P, t, gx, gw)
            P[j, :] = orig
            P[j, c] -= h
            _normalize_row(P, j)
            fm = objective(P, t, gx, gw)
            g[j, c] = (fp - fm) / (2.0 * h)
        P[j, :] = orig
    return g
