"""Parameter equations of the beautified families and their roots.

The geodesic families reduce to scalar equations h_t(alpha) = 0 with
a_t = arcsin(alpha); the cube family reduces to the pair u = v = 0 on the
box [1/4, 2/5] x [1/2, 9/10]. Every root is re-checked with
:func:`geocycle.design.verify_design`.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .design import verify_design
from .families import geo_cube, geo_tetra, geo_octa, smooth_s2
from .sphere import integrate_smooth

CUBE_BOX = ((0.25, 0.4), (0.5, 0.9))
CUBE_START = (0.33, 0.70)
MAX_ITER = 200


class RootNotFound(RuntimeError):
    pass


@dataclass
class RootResult:
    value: object
    residual: float
    bracket: tuple
    iterations: int
    design_residual: float = float("nan")
    verified: bool = False
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        d = asdict(self)
        d["value"] = list(self.value) if isinstance(self.value, tuple) else self.value
        d["bracket"] = [list(b) if isinstance(b, tuple) else b for b in self.bracket]
        return d


def h2(alpha):
    a2 = np.asarray(alpha, dtype=float) ** 2
    alpha = np.sqrt(a2)
    out = (2 * a2 - 1) * np.arccos(a2 - 1) - 3 * alpha * np.sqrt(2 - a2) * (a2 - 1)
    return float(out) if out.ndim == 0 else out


def h3(alpha):
    a2 = np.asarray(alpha, dtype=float) ** 2
    alpha = np.sqrt(a2)
    out = (3 * a2 - 2) * np.arccos(1.5 * a2 - 1) - 3 * alpha * np.sqrt(12 - 9 * a2) * (a2 - 1)
    return float(out) if out.ndim == 0 else out


H = {2: h2, 3: h3}


def sign_changes(f, lo, hi, n=10_000):
    x = np.linspace(lo, hi, n)
    s = np.sign(f(x))
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def bisect_newton(f, lo, hi, xtol=1e-10, ftol=1e-15, h=1e-7):
    """Bisection down to ``xtol`` then safeguarded Newton (central-difference slope).

    Returns ``(root, (lo, hi), iterations)``; the bracket always contains
    the returned root.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo, (lo, hi), 0
    if fhi == 0:
        return hi, (lo, hi), 0
    if np.sign(flo) == np.sign(fhi):
        raise RootNotFound(f"no sign change on [{lo}, {hi}]")
    it = 0
    while hi - lo > xtol and it < MAX_ITER:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        it += 1
        if fm == 0:
            return mid, (lo, hi), it
        if np.sign(fm) == np.sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    fx = f(x)
    while abs(fx) > ftol and it < MAX_ITER:
        slope = (f(x + h) - f(x - h)) / (2 * h)
        it += 1
        x_new = x - fx / slope if slope != 0 else x
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
        f_new = f(x_new)
        if np.sign(f_new) == np.sign(flo):
            lo = x_new
        else:
            hi = x_new
        if x_new == x:
            break
        x, fx = x_new, f_new
    return x, (lo, hi), it


def solve_geo(t: int, design_tol: float = 1e-9) -> RootResult:
    """a_t = arcsin(alpha_t) with h_t(alpha_t) = 0 on (0, 1)."""
    if t not in H:
        raise ValueError("t must be 2 or 3")
    h = H[t]
    alpha, (lo, hi), it = bisect_newton(h, 1e-9, 1.0)
    a = math.asin(alpha)
    cycle = (geo_tetra if t == 2 else geo_octa)(a)
    rep = verify_design(cycle, t, design_tol)
    return RootResult(a, abs(h(alpha)), (math.asin(lo), math.asin(hi)), it,
                      rep.max_abs_residual, rep.is_design, {"alpha": alpha, "t": t})


def cube_u(alpha, beta):
    a, b = alpha, beta
    return ((a - b) * (1 - b * b) ** 1.5 * np.sqrt(2 - (a + b) ** 2)
            - b**3 + b**5 - a * a * b * (b * b - 3))


def cube_v(alpha, beta):
    a, b = alpha, beta
    s = a + b
    lhs = (2 * (1 - b * b) * (1 - 2 * (a * a - a * b + b * b)) * np.arccos(s * s - 1)
           + (1 - 3 * a * a - b * b) * (2 - s * s) * np.arccos(1 - 2 * b * b))
    rhs = 6 * (1 - a * a - b * b) * ((1 - b * b) * s * np.sqrt(2 - s * s)
                                     - b * np.sqrt(1 - b * b) * (2 - s * s))
    return rhs - lhs


def poincare_miranda(samples: int = 1000, box=CUBE_BOX):
    """Sign conditions of u and v on the four box edges, sampled densely.

    u < 0 on the left edge, u > 0 on the right, v < 0 on the bottom and
    v > 0 on the top guarantee a common zero inside the box.
    """
    (a0, a1), (b0, b1) = box
    al = np.linspace(a0, a1, samples)
    be = np.linspace(b0, b1, samples)
    checks = {
        "u_left_negative": bool(np.all(cube_u(a0, be) < 0)),
        "u_right_positive": bool(np.all(cube_u(a1, be) > 0)),
        "v_bottom_negative": bool(np.all(cube_v(al, b0) < 0)),
        "v_top_positive": bool(np.all(cube_v(al, b1) > 0)),
    }
    return checks


def _in_box(p, box):
    return box[0][0] <= p[0] <= box[0][1] and box[1][0] <= p[1] <= box[1][1]


def _damped_newton(F, x0, box, h=1e-7, ftol=1e-15, max_iter=100):
    x = np.array(x0, dtype=float)
    fx = F(x)
    it = 0
    for it in range(1, max_iter + 1):
        if np.max(np.abs(fx)) <= ftol:
            break
        J = np.empty((2, 2))
        for k in range(2):
            e = np.zeros(2)
            e[k] = h
            J[:, k] = (F(x + e) - F(x - e)) / (2 * h)
        step = np.linalg.solve(J, -fx)
        lam = 1.0
        while lam > 1e-8:
            cand = x + lam * step
            if _in_box(cand, box):
                fc = F(cand)
                if np.linalg.norm(fc) < np.linalg.norm(fx) or lam * np.linalg.norm(step) < 1e-15:
                    break
            lam *= 0.5
        else:
            return x, fx, it, False
        if np.array_equal(cand, x):
            break
        x, fx = cand, fc
    return x, fx, it, _in_box(x, box)


def solve_cube(start=CUBE_START, box=CUBE_BOX, design_tol: float = 1e-9) -> RootResult:
    """(alpha_0, beta_0) with u = v = 0, after certifying the edge sign conditions."""
    checks = poincare_miranda(box=box)
    if not all(checks.values()):
        raise RootNotFound(f"sign conditions fail on the box: {checks}")

    def F(p):
        return np.array([cube_u(p[0], p[1]), cube_v(p[0], p[1])])

    x, fx, it, ok = _damped_newton(F, start, box)
    if not ok or np.max(np.abs(fx)) > 1e-13:
        center = (0.5 * (box[0][0] + box[0][1]), 0.5 * (box[1][0] + box[1][1]))
        x, fx, it2, ok = _damped_newton(F, center, box)
        it += it2
        if not ok or np.max(np.abs(fx)) > 1e-13:
            raise RootNotFound(f"Newton failed to converge inside the box (last residual {fx})")
    alpha, beta = float(x[0]), float(x[1])
    rep = verify_design(geo_cube(alpha, beta), 3, design_tol)
    return RootResult((alpha, beta), float(np.max(np.abs(fx))), box, it,
                      rep.max_abs_residual, rep.is_design, {"poincare_miranda": checks})


def smooth_x2_minus_z2(t: int, a: float, quad=None) -> float:
    """(1/len) int (x^2 - z^2) along the smooth curve with parameter a."""
    curve = smooth_s2(t, a)
    v = integrate_smooth(curve, lambda X: np.column_stack([np.ones(len(X)), X[:, 0] ** 2 - X[:, 2] ** 2]), quad)
    return float(v[1] / v[0])


def solve_smooth(t: int, bracket=(0.5, 1.0), xtol: float = 1e-13, design_tol: float = 1e-8,
                 quad=None) -> RootResult:
    """Parameter a in (1/2, 1) of the smooth family where x^2 and z^2 balance, by bisection."""
    if t not in (2, 3):
        raise ValueError("t must be 2 or 3")
    lo, hi = bracket
    f = lambda a: smooth_x2_minus_z2(t, a, quad)  # noqa: E731
    flo, fhi = f(lo), f(hi)
    if np.sign(flo) == np.sign(fhi):
        raise RootNotFound(f"no sign change on [{lo}, {hi}]")
    it = 0
    while hi - lo > xtol and it < MAX_ITER:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        it += 1
        if fm == 0:
            lo = hi = mid
            break
        if np.sign(fm) == np.sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    a = 0.5 * (lo + hi)
    rep = verify_design(smooth_s2(t, a), t, design_tol, quad)
    return RootResult(a, abs(f(a)), (lo, hi), it, rep.max_abs_residual, rep.is_design, {"t": t})


TARGETS = {
    "geo2": lambda: solve_geo(2),
    "geo3": lambda: solve_geo(3),
    "cube": solve_cube,
    "smooth2": lambda: solve_smooth(2),
    "smooth3": lambda: solve_smooth(3),
}
