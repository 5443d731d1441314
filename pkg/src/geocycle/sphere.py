"""Points, geodesic arcs, geodesic cycles and smooth curves on S^d.

Arrays of points are ``(n, d + 1)`` float arrays of unit rows. The sphere
measure is normalized to total mass 1 throughout the package.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ._kernels import numpy_impl as _np_kernels
from .quadrature import QuadratureSpec, composite_nodes, integrate_interval, refine

UNIT_TOL = 1e-12


class GeometryError(ValueError):
    """Invalid geometric input (antipodal arc, wrong dimension, ...)."""


def _as_unit_rows(points, normalize=True):
    P = np.array(points, dtype=np.float64, ndmin=2)
    if P.ndim != 2:
        raise GeometryError("points must form a 2-D array")
    if P.shape[1] < 3:
        raise GeometryError(f"ambient dimension must be >= 3 (S^d with d >= 2), got {P.shape[1]}")
    norms = np.linalg.norm(P, axis=1)
    if np.any(norms == 0) or not np.all(np.isfinite(norms)):
        raise GeometryError("zero or non-finite point")
    if normalize:
        P = P / norms[:, None]
    elif np.any(np.abs(norms - 1.0) > UNIT_TOL):
        raise GeometryError("points are not on the unit sphere")
    return P


class SpherePoint:
    """A point of S^d stored by its ambient coordinates."""

    __slots__ = ("_coords",)

    def __init__(self, coords, normalize=False):
        P = _as_unit_rows(np.asarray(coords, dtype=float).reshape(1, -1), normalize=normalize)
        P = P[0].copy()
        P.flags.writeable = False
        self._coords = P

    @property
    def coords(self):
        return self._coords

    @property
    def dim(self):
        """Sphere dimension d."""
        return self._coords.shape[0] - 1

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self._coords, dtype=dtype)

    def __repr__(self):
        return f"SpherePoint({self._coords.tolist()})"

    def __eq__(self, other):
        if not isinstance(other, SpherePoint):
            return NotImplemented
        return np.array_equal(self._coords, other._coords)

    def __hash__(self):
        return hash(self._coords.tobytes())


def _coords(p):
    return p.coords if isinstance(p, SpherePoint) else np.asarray(p, dtype=float)


def distance(x, y):
    """Geodesic distance arccos<x, y> (inner product clamped to [-1, 1])."""
    a, b = _coords(x), _coords(y)
    if a.shape != b.shape:
        raise GeometryError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return math.acos(min(1.0, max(-1.0, float(a @ b))))


def _check_not_antipodal(a, b):
    if np.linalg.norm(a + b) <= 1e-10:
        raise GeometryError("antipodal arc endpoints: the geodesic is not unique")


@dataclass(frozen=True)
class GeodesicArc:
    """Shortest great-circle arc from ``start`` to ``end`` (constant speed)."""

    start: np.ndarray
    end: np.ndarray
    length: float = field(init=False)

    def __post_init__(self):
        a = _as_unit_rows(_coords(self.start))[0]
        b = _as_unit_rows(_coords(self.end))[0]
        if a.shape != b.shape:
            raise GeometryError("arc endpoints have different dimensions")
        _check_not_antipodal(a, b)
        a.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "start", a)
        object.__setattr__(self, "end", b)
        object.__setattr__(self, "length", distance(a, b))

    def __call__(self, s):
        return arc_eval(self, s)


def arc_eval(arc: GeodesicArc, s):
    """Slerp along ``arc``; scalar s gives one point, array s gives rows."""
    s_arr = np.asarray(s, dtype=float)
    if np.any((s_arr < 0) | (s_arr > 1)):
        raise ValueError("arc parameter must lie in [0, 1]")
    ell = arc.length
    if ell < 1e-12:
        out = np.broadcast_to(arc.start, s_arr.shape + arc.start.shape).copy()
        return out
    sl = math.sin(ell)
    ca = np.sin((1.0 - s_arr) * ell) / sl
    cb = np.sin(s_arr * ell) / sl
    return ca[..., None] * arc.start + cb[..., None] * arc.end


class GeodesicCycle:
    """Closed chain of geodesic arcs through ``control_points`` (x_{n+1} = x_1).

    Repeated control points are allowed and give zero-length arcs.
    """

    def __init__(self, control_points, normalize=True):
        P = _as_unit_rows([_coords(p) for p in control_points] if not isinstance(control_points, np.ndarray)
                          else control_points, normalize=normalize)
        if P.shape[0] < 2:
            raise GeometryError("a geodesic cycle needs at least 2 control points")
        Q = np.roll(P, -1, axis=0)
        bad = np.linalg.norm(P + Q, axis=1) <= 1e-10
        if np.any(bad):
            j = int(np.argmax(bad))
            raise GeometryError(f"control points {j} and {(j + 1) % len(P)} are antipodal")
        P.flags.writeable = False
        self._points = P
        ip = np.clip(np.einsum("ij,ij->i", P, Q), -1.0, 1.0)
        lengths = np.arccos(ip)
        lengths.flags.writeable = False
        self._lengths = lengths
        if not lengths.sum() > 0:
            raise GeometryError("cycle has zero length")

    @property
    def points(self):
        """Control points as a read-only ``(n, d + 1)`` array."""
        return self._points

    @property
    def control_points(self):
        return [SpherePoint(p) for p in self._points]

    @property
    def n(self):
        return self._points.shape[0]

    @property
    def ambient_dim(self):
        return self._points.shape[1]

    @property
    def dim(self):
        return self._points.shape[1] - 1

    @property
    def arc_lengths(self):
        return self._lengths

    @property
    def length(self):
        return float(self._lengths.sum())

    @property
    def arcs(self):
        P = self._points
        return [GeodesicArc(P[j], P[(j + 1) % self.n]) for j in range(self.n)]

    def __len__(self):
        return self.n

    def __repr__(self):
        return f"GeodesicCycle(n={self.n}, dim={self.dim}, length={self.length:.6g})"

    def reversed(self):
        return GeodesicCycle(self._points[::-1].copy())

    def rotated(self, R):
        return GeodesicCycle(self._points @ np.asarray(R, dtype=float).T)

    def position(self, s):
        """Point at global parameter s in [0, 1]; arc j occupies [j/n, (j+1)/n]."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        j, local = self._locate(s)
        P = self._points
        Q = np.roll(P, -1, axis=0)
        ell = self._lengths[j]
        sl = np.sin(ell)
        zero = ell < 1e-12
        sl = np.where(zero, 1.0, sl)
        ca = np.where(zero, 1.0, np.sin((1 - local) * ell) / sl)
        cb = np.where(zero, 0.0, np.sin(local * ell) / sl)
        return ca[:, None] * P[j] + cb[:, None] * Q[j]

    def speed(self, s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        j, _ = self._locate(s)
        return self.n * self._lengths[j]

    def _locate(self, s):
        if np.any((s < 0) | (s > 1)):
            raise ValueError("curve parameter must lie in [0, 1]")
        u = s * self.n
        j = np.minimum(np.floor(u).astype(int), self.n - 1)
        return j, u - j

    def to_dict(self):
        return {"dim": self.ambient_dim, "control_points": self._points.tolist(), "closed": True}

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, doc):
        if "control_points" not in doc:
            raise GeometryError("missing 'control_points'")
        P = np.asarray(doc["control_points"], dtype=float)
        if "dim" in doc and P.ndim == 2 and int(doc["dim"]) != P.shape[1]:
            raise GeometryError(f"'dim' is {doc['dim']} but points have {P.shape[1]} coordinates")
        if doc.get("closed", True) is not True:
            raise GeometryError("only closed cycles are supported")
        # points already on the sphere are kept bit for bit
        unit = P.ndim == 2 and bool(np.all(np.abs(np.linalg.norm(P, axis=1) - 1.0) <= UNIT_TOL))
        return cls(P, normalize=not unit)

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class ParametricCurve:
    """Smooth closed curve on the sphere given by vectorized maps of s in [0, 1].

    ``position``, ``velocity`` and ``acceleration`` take an array of
    parameters of shape (N,) and return (N, d + 1).
    """

    position: Callable
    velocity: Callable
    acceleration: Optional[Callable] = None
    closed: bool = True
    name: str = ""

    def __post_init__(self):
        self.validate()

    @property
    def ambient_dim(self):
        return self.position(np.zeros(1)).shape[1]

    @property
    def dim(self):
        return self.ambient_dim - 1

    def speed(self, s):
        return np.linalg.norm(self.velocity(np.atleast_1d(s)), axis=1)

    def validate(self, samples=17, h=1e-5):
        s = np.linspace(0.0, 1.0, samples)
        X = self.position(s)
        if X.ndim != 2 or X.shape[1] < 3:
            raise GeometryError("position must return (N, d+1) with d >= 2")
        if np.max(np.abs(np.linalg.norm(X, axis=1) - 1.0)) > 1e-10:
            raise GeometryError("curve leaves the unit sphere")
        if self.closed and np.max(np.abs(X[0] - X[-1])) > 1e-10:
            raise GeometryError("closed curve has position(0) != position(1)")
        si = np.clip(s, h, 1 - h)
        fd = (self.position(si + h) - self.position(si - h)) / (2 * h)
        if np.max(np.abs(fd - self.velocity(si))) > 1e-6 * max(1.0, np.max(np.abs(fd))):
            raise GeometryError("velocity disagrees with finite differences of position")


def cycle_length(cycle: GeodesicCycle):
    return cycle.length


def _cycle_estimate(cycle, f, q, m):
    gx, gw = composite_nodes(q, m)
    nodes, ell = _np_kernels.arc_nodes(cycle.points, gx)
    w = (ell[:, None] * gw[None, :]).ravel()
    vals = np.asarray(f(nodes), dtype=float)
    return np.tensordot(w, vals, axes=(0, 0))


def integrate_cycle(cycle: GeodesicCycle, f, quad: QuadratureSpec = None):
    """Path integral of ``f`` along the cycle (not normalized by length).

    ``f`` maps an ``(N, d + 1)`` array of points to ``(N,)`` or ``(N, k)``;
    the result is a float or a length-k array. Each arc gets m Gauss-Legendre
    panels and m doubles until two estimates agree.
    """
    quad = quad or QuadratureSpec()
    out = refine(lambda m: _cycle_estimate(cycle, f, quad.nodes_per_segment, m), quad, start=1)
    return float(out) if out.ndim == 0 else out


def integrate_smooth(curve: ParametricCurve, f, quad: QuadratureSpec = None):
    """Path integral int_0^1 f(gamma(s)) |gamma'(s)| ds with dyadic refinement."""
    quad = quad or QuadratureSpec()

    def g(s):
        vals = np.asarray(f(curve.position(s)), dtype=float)
        sp = curve.speed(s)
        return vals * (sp if vals.ndim == 1 else sp[:, None])

    out = integrate_interval(g, quad)
    return float(out) if out.ndim == 0 else out


def integrate(curve, f, quad=None):
    if isinstance(curve, GeodesicCycle):
        return integrate_cycle(curve, f, quad)
    return integrate_smooth(curve, f, quad)


def curve_length(curve, quad=None):
    if isinstance(curve, GeodesicCycle):
        return curve.length
    return integrate_smooth(curve, lambda X: np.ones(len(X)), quad)


def _merge_repeats(P):
    keep = [p for j, p in enumerate(P) if np.linalg.norm(p - P[j - 1]) > 1e-14]
    return np.array(keep)


def turning_angles(cycle: GeodesicCycle):
    """Signed exterior angle at each control point (left turns positive).

    Consecutive repeated control points are merged first.
    """
    if cycle.ambient_dim != 3:
        raise GeometryError("turning angles need a curve on S^2")
    P = _merge_repeats(cycle.points)
    if len(P) < 2:
        raise GeometryError("degenerate cycle: fewer than two distinct control points")
    prev = np.roll(P, 1, axis=0)
    nxt = np.roll(P, -1, axis=0)
    t_out = nxt - np.einsum("ij,ij->i", nxt, P)[:, None] * P
    t_in = -(prev - np.einsum("ij,ij->i", prev, P)[:, None] * P)
    n_in = np.linalg.norm(t_in, axis=1)
    n_out = np.linalg.norm(t_out, axis=1)
    if np.any(n_in < 1e-14) or np.any(n_out < 1e-14):
        raise GeometryError("degenerate arc next to a control point")
    t_in /= n_in[:, None]
    t_out /= n_out[:, None]
    sin_part = np.einsum("ij,ij->i", P, np.cross(t_in, t_out))
    cos_part = np.einsum("ij,ij->i", t_in, t_out)
    return np.arctan2(sin_part, cos_part)


def total_geodesic_curvature(curve, quad=None):
    """Integral of the geodesic curvature, in radians (not normalized)."""
    if curve.ambient_dim != 3:
        raise GeometryError("geodesic curvature needs a curve on S^2")
    if isinstance(curve, GeodesicCycle):
        return float(np.sum(turning_angles(curve)))
    if curve.acceleration is None:
        raise GeometryError("smooth curve has no acceleration map")

    def kg(s):
        X = curve.position(s)
        V = curve.velocity(s)
        A = curve.acceleration(s)
        return np.einsum("ij,ij->i", A, np.cross(X, V)) / np.einsum("ij,ij->i", V, V)

    return float(integrate_interval(kg, quad))


def enclosed_area(curve, quad=None):
    """Normalized area to the left of a simple closed curve on S^2 (Gauss-Bonnet)."""
    return 0.5 - total_geodesic_curvature(curve, quad) / (4.0 * math.pi)


def sample_curve(curve, count):
    """Rows ``(s, x0, ..., xd, speed)`` at ``count`` uniform parameters in [0, 1]."""
    if count < 2:
        raise ValueError("count must be >= 2")
    s = np.linspace(0.0, 1.0, int(count))
    X = curve.position(s)
    sp = curve.speed(s)
    return np.column_stack([s, X, sp])


def samples_to_csv(rows):
    D = rows.shape[1] - 2
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["s"] + [f"x{i}" for i in range(D)] + ["speed"])
    for r in rows:
        w.writerow([repr(float(v)) for v in r])
    return buf.getvalue()
