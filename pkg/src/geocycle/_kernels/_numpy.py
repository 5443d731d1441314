"""Vectorized numpy versions of the hot kernels.

Every function here has a loop-based twin in :mod:`._jit` with the same
signature; the two are cross-checked in the test-suite.
"""
import numpy as np


def _sh_scaled_coeffs(t):
    # a_lm, b_lm of the fully normalized upward recurrence; a[m, m] holds Q_m^m
    a = np.zeros((t + 1, t + 1))
    b = np.zeros((t + 1, t + 1))
    for m in range(t + 1):
        if m == 0:
            a[0, 0] = 1.0
        elif m == 1:
            a[1, 1] = np.sqrt(3.0)
        else:
            a[m, m] = a[m - 1, m - 1] * np.sqrt((2 * m + 1) / (2.0 * m))
        for l in range(m + 1, t + 1):
            a[l, m] = np.sqrt((2 * l - 1) * (2 * l + 1) / ((l - m) * (l + m)))
            if l >= m + 2:
                b[l, m] = np.sqrt(
                    (2 * l + 1) * (l + m - 1) * (l - m - 1)
                    / ((l - m) * (l + m) * (2 * l - 3.0))
                )
    return a, b


def harmonics(X, t):
    """Real spherical harmonics Y_{l,m}, l <= t, at the rows of ``X``.

    Column ``l*l + l + m`` holds Y_{l,m}. Normalized so that the mean of
    Y_{l,m}^2 over the sphere is 1 (Y_{0,0} = 1).
    """
    X = np.asarray(X, dtype=np.float64)
    x, y, z = X[:, 0], X[:, 1], X[:, 2]
    N = X.shape[0]
    out = np.empty((N, (t + 1) ** 2))
    a, b = _sh_scaled_coeffs(t)
    c = np.ones(N)
    s = np.zeros(N)
    for m in range(t + 1):
        if m > 0:
            c, s = x * c - y * s, x * s + y * c
        q_prev = np.zeros(N)
        q = np.full(N, a[m, m])
        for l in range(m, t + 1):
            if l == m + 1:
                q_prev, q = q, a[l, m] * z * q
            elif l >= m + 2:
                q_prev, q = q, a[l, m] * z * q - b[l, m] * q_prev
            base = l * l + l
            out[:, base + m] = q * c
            if m > 0:
                out[:, base - m] = q * s
    return out


def arc_nodes(P, gx):
    """Slerp nodes on every arc of the closed cycle ``P``.

    Returns ``(nodes, lengths)`` with nodes of shape ``(n * len(gx), D)``,
    arc by arc.
    """
    P = np.asarray(P, dtype=np.float64)
    Q = np.roll(P, -1, axis=0)
    ip = np.clip(np.einsum("ij,ij->i", P, Q), -1.0, 1.0)
    ell = np.arccos(ip)
    sl = np.sin(ell)
    degenerate = ell < 1e-12
    sl_safe = np.where(degenerate, 1.0, sl)
    ca = np.sin(np.outer(ell, 1.0 - gx)) / sl_safe[:, None]
    cb = np.sin(np.outer(ell, gx)) / sl_safe[:, None]
    ca[degenerate] = 1.0
    cb[degenerate] = 0.0
    nodes = ca[:, :, None] * P[:, None, :] + cb[:, :, None] * Q[:, None, :]
    return nodes.reshape(-1, P.shape[1]), ell


def cycle_moments(P, t, gx, gw):
    """Normalized harmonic moments (1/ell) * int_gamma Y_{l,m} and ell."""
    nodes, ell = arc_nodes(P, gx)
    total = ell.sum()
    w = (ell[:, None] * gw[None, :]).ravel()
    Y = harmonics(nodes, t)
    return (w @ Y) / total, total


def objective(P, t, gx, gw):
    mom, _ = cycle_moments(P, t, gx, gw)
    return float(np.sum(mom[1:] ** 2))


def legendre_terms(P, t, gx, gw):
    """Per-degree terms (2l+1)/ell^2 * double integral of P_l(<g(r), g(s)>)."""
    nodes, ell = arc_nodes(P, gx)
    total = ell.sum()
    w = (ell[:, None] * gw[None, :]).ravel()
    G = np.clip(nodes @ nodes.T, -1.0, 1.0)
    terms = np.empty(t + 1)
    p_prev = np.ones_like(G)
    p = G.copy()
    terms[0] = w.sum() ** 2 / total**2
    for l in range(1, t + 1):
        if l > 1:
            p_prev, p = p, ((2 * l - 1) * G * p - (l - 1) * p_prev) / l
        terms[l] = (2 * l + 1) * (w @ p @ w) / total**2
    return terms


def fd_gradient(P, t, h, gx, gw):
    """Central differences of ``objective`` in ambient coordinates.

    Each perturbed point is renormalized before evaluation; the caller
    projects onto tangent planes.
    """
    P = np.array(P, dtype=np.float64)
    n, D = P.shape
    g = np.zeros_like(P)
    for j in range(n):
        orig = P[j].copy()
        for c in range(D):
            P[j] = orig
            P[j, c] += h
            P[j] /= np.linalg.norm(P[j])
            fp = objective(P, t, gx, gw)
            P[j] = orig
            P[j, c] -= h
            P[j] /= np.linalg.norm(P[j])
            fm = objective(P, t, gx, gw)
            g[j, c] = (fp - fm) / (2.0 * h)
        P[j] = orig
    return g
