"""Curves with Marcinkiewicz-Zygmund behaviour built from an equal-area partition of S^2.

Pipeline: a zonal equal-area partition (two polar caps plus latitude rings
cut into equal longitude sectors), the patch adjacency graph with every
edge doubled, an Euler cycle on that multigraph, one short arc inside each
patch, and connecting arcs that follow the tour. :func:`mz_test` then
compares curve and sphere L^p norms of random polynomials.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from . import _kernels
from .polynomials import _sup_polish, random_harmonic, sh_all, sphere_grid, sphere_lp_norm
from .quadrature import gauss_legendre
from .sphere import GeodesicCycle, GeometryError, SpherePoint

TWO_PI = 2.0 * math.pi
ANGLE_TOL = 1e-9
DEFAULT_CN = 4.0
CHUNK = 16384


class PartitionError(ValueError):
    pass


class GraphError(RuntimeError):
    pass


def _sph(theta, phi):
    st = math.sin(theta)
    return np.array([st * math.cos(phi), st * math.sin(phi), math.cos(theta)])


@dataclass(frozen=True)
class Patch:
    id: int
    theta: Tuple[float, float]
    phi: Tuple[float, float]
    kind: str  # "north", "south" or "ring"
    ring: int
    area: float
    center: SpherePoint
    inner_cap_radius: float
    diameter: float

    @property
    def east(self):
        """Unit tangent at the centre along which the in-patch pair is laid out."""
        if self.kind == "north":
            return np.array([1.0, 0.0, 0.0])
        if self.kind == "south":
            return np.array([0.0, 1.0, 0.0])
        ph = 0.5 * (self.phi[0] + self.phi[1])
        return np.array([-math.sin(ph), math.cos(ph), 0.0])

    def contains(self, X, tol=ANGLE_TOL):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        th = np.arccos(np.clip(X[:, 2], -1.0, 1.0))
        ok = (th >= self.theta[0] - tol) & (th <= self.theta[1] + tol)
        if self.kind == "ring" and self.phi[1] - self.phi[0] < TWO_PI - tol:
            ph = np.mod(np.arctan2(X[:, 1], X[:, 0]) - self.phi[0], TWO_PI)
            width = self.phi[1] - self.phi[0]
            ok &= (ph <= width + tol) | (ph >= TWO_PI - tol)
        return ok


@dataclass
class Partition:
    patches: List[Patch]
    rings: List[Tuple[float, float, int]]  # (theta_top, theta_bottom, count) per ring

    @property
    def n(self):
        return len(self.patches)

    @property
    def size(self):
        return max(p.diameter for p in self.patches)

    @property
    def diam_constant(self):
        """Empirical C with size = C * n^(-1/2)."""
        return self.size * math.sqrt(self.n)

    @property
    def areas(self):
        return np.array([p.area for p in self.patches])

    def locate(self, X):
        """Patch id of each row of X (first match)."""
        X = np.atleast_2d(X)
        out = np.full(len(X), -1)
        for p in self.patches:
            hit = (out < 0) & p.contains(X, tol=0.0)
            out[hit] = p.id
        return out


def _collar_counts(n):
    theta_c = math.acos(1.0 - 2.0 / n)
    ideal_angle = math.sqrt(4.0 * math.pi / n)
    n_collars = max(1, int(round((math.pi - 2.0 * theta_c) / ideal_angle)))
    width = (math.pi - 2.0 * theta_c) / n_collars
    counts = []
    carry = 0.0
    for i in range(n_collars):
        a = theta_c + i * width
        b = a + width
        ideal = n * (math.cos(a) - math.cos(b)) / 2.0
        m = int(round(ideal + carry))
        carry += ideal - m
        counts.append(m)
    # rounding with carry already sums to n - 2; guard against float drift
    counts[-1] += (n - 2) - sum(counts)
    return theta_c, [m for m in counts if m > 0]


def _ring_rect_radius(t0, t1, width):
    tm = 0.5 * (t0 + t1)
    r = min(tm - t0, t1 - tm)
    if width < TWO_PI - ANGLE_TOL:
        # distance from the centre to the great circles through the side meridians
        r = min(r, math.asin(min(1.0, math.sin(tm) * math.sin(0.5 * width))))
    return r


def _ring_rect_diameter(t0, t1, p0, p1, per_edge=33):
    th = np.linspace(t0, t1, per_edge)
    ph = np.linspace(p0, p1, per_edge)
    edges = [
        np.column_stack([np.full(per_edge, t0), ph]),
        np.column_stack([np.full(per_edge, t1), ph]),
        np.column_stack([th, np.full(per_edge, p0)]),
        np.column_stack([th, np.full(per_edge, p1)]),
    ]
    A = np.vstack(edges)
    X = np.column_stack([np.sin(A[:, 0]) * np.cos(A[:, 1]), np.sin(A[:, 0]) * np.sin(A[:, 1]), np.cos(A[:, 0])])
    G = np.clip(X @ X.T, -1.0, 1.0)
    return float(np.arccos(G.min()))


def equal_area_partition(n: int) -> Partition:
    """Zonal partition of S^2 into n patches of area exactly 1/n (normalized measure)."""
    n = int(n)
    if n < 2:
        raise PartitionError("need n >= 2 patches")
    patches = []
    if n == 2:
        theta_c, counts = math.pi / 2.0, []
    else:
        theta_c, counts = _collar_counts(n)
    patches.append(Patch(0, (0.0, theta_c), (0.0, TWO_PI), "north", -1, (1.0 - math.cos(theta_c)) / 2.0,
                         SpherePoint([0.0, 0.0, 1.0]), theta_c, 2.0 * theta_c))
    rings = []
    k = 1  # patches above the current boundary
    t_top = theta_c
    for i, m in enumerate(counts):
        k_next = k + m
        t_bot = math.acos(max(-1.0, min(1.0, 1.0 - 2.0 * k_next / n)))
        width = TWO_PI / m
        radius = _ring_rect_radius(t_top, t_bot, width)
        diam = _ring_rect_diameter(t_top, t_bot, 0.0, width)
        area = (math.cos(t_top) - math.cos(t_bot)) / 2.0 / m
        tm = 0.5 * (t_top + t_bot)
        for j in range(m):
            p0, p1 = j * width, (j + 1) * width
            patches.append(Patch(len(patches), (t_top, t_bot), (p0, p1), "ring", i, area,
                                 SpherePoint(_sph(tm, 0.5 * (p0 + p1))), radius, diam))
        rings.append((t_top, t_bot, m))
        t_top, k = t_bot, k_next
    patches.append(Patch(len(patches), (math.pi - theta_c, math.pi), (0.0, TWO_PI), "south", -1,
                         (1.0 - math.cos(theta_c)) / 2.0, SpherePoint([0.0, 0.0, -1.0]), theta_c, 2.0 * theta_c))
    if len(patches) != n:
        raise PartitionError(f"construction produced {len(patches)} patches instead of {n}")
    return Partition(patches, rings)


@dataclass
class PatchGraph:
    n: int
    multi_edges: List[Tuple[int, int]]
    neighbors: List[List[int]]

    @property
    def vertices(self):
        return list(range(self.n))

    @property
    def kissing(self):
        """Number of other patches whose closure meets patch j."""
        return [len(nb) for nb in self.neighbors]

    @property
    def degrees(self):
        deg = [0] * self.n
        for a, b in self.multi_edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def is_connected(self):
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for w in self.neighbors[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.n


def _arcs_touch(a0, a1, b0, b1, tol=ANGLE_TOL):
    """Closed longitude intervals [a0, a1], [b0, b1] (mod 2 pi) intersect."""
    if a1 - a0 >= TWO_PI - tol or b1 - b0 >= TWO_PI - tol:
        return True
    for shift in (-TWO_PI, 0.0, TWO_PI):
        if a0 + shift <= b1 + tol and b0 <= a1 + shift + tol:
            return True
    return False


def build_graph(partition: Partition) -> PatchGraph:
    n = partition.n
    adj = [set() for _ in range(n)]

    def link(a, b):
        if a != b:
            adj[a].add(b)
            adj[b].add(a)

    ring_ids = []
    start = 1
    for _, _, m in partition.rings:
        ring_ids.append(list(range(start, start + m)))
        start += m
    south = n - 1
    if not ring_ids:
        link(0, south)
    else:
        for j in ring_ids[0]:
            link(0, j)
        for j in ring_ids[-1]:
            link(south, j)
    for ids in ring_ids:
        m = len(ids)
        if m >= 2:
            for k in range(m):
                link(ids[k], ids[(k + 1) % m])
    P = partition.patches
    for upper, lower in zip(ring_ids, ring_ids[1:]):
        for a in upper:
            for b in lower:
                if _arcs_touch(*P[a].phi, *P[b].phi):
                    link(a, b)
    neighbors = [sorted(s) for s in adj]
    edges = []
    for a in range(n):
        for b in neighbors[a]:
            if a < b:
                edges.extend([(a, b), (a, b)])
    g = PatchGraph(n, edges, neighbors)
    if not g.is_connected():
        raise GraphError("patch graph is disconnected")
    return g


def euler_cycle(graph: PatchGraph, start: int = 0):
    """Euler cycle of the doubled multigraph by Hierholzer's algorithm.

    Returns the closed vertex walk [v0, v1, ..., vE] with v0 = vE = start.
    Ties go to the smallest neighbour id (then smallest edge id).
    """
    if any(d % 2 for d in graph.degrees):
        raise GraphError("odd vertex degree")
    if not graph.is_connected():
        raise GraphError("graph is disconnected")
    inc = [[] for _ in range(graph.n)]
    for eid, (a, b) in enumerate(graph.multi_edges):
        inc[a].append((b, eid))
        inc[b].append((a, eid))
    for lst in inc:
        lst.sort()
    used = [False] * len(graph.multi_edges)
    ptr = [0] * graph.n
    stack = [start]
    walk = []
    while stack:
        v = stack[-1]
        lst = inc[v]
        while ptr[v] < len(lst) and used[lst[ptr[v]][1]]:
            ptr[v] += 1
        if ptr[v] == len(lst):
            walk.append(stack.pop())
        else:
            w, eid = lst[ptr[v]]
            used[eid] = True
            stack.append(w)
    walk.reverse()
    if len(walk) != len(graph.multi_edges) + 1:
        raise GraphError("Euler walk does not use every edge")
    return walk


def tour_edges(walk):
    return list(zip(walk[:-1], walk[1:]))


def _pair_direction(partition: Partition, p: Patch):
    # The east frame commutes with the antipodal map, so a patch whose
    # antipode is also a patch would get the negated pair; in two-sector
    # rings those patches touch and a connecting arc could be antipodal.
    # The later patch of such a couple uses the meridian direction instead.
    if p.kind == "ring" and p.phi[1] - p.phi[0] >= math.pi - ANGLE_TOL:
        other = int(partition.locate(-p.center.coords)[0])
        if 0 <= other < p.id and partition.patches[other].kind == "ring":
            th = 0.5 * (p.theta[0] + p.theta[1])
            ph = 0.5 * (p.phi[0] + p.phi[1])
            return np.array([-math.cos(th) * math.cos(ph), -math.cos(th) * math.sin(ph), math.sin(th)])
    return p.east


def select_pairs(partition: Partition):
    """Two points per patch at one global spacing, symmetric about the centre along ``east``.

    Returns an array of shape (n, 2, 3): row j holds (x_{2j-1}, x_{2j}).
    """
    radii = np.array([p.inner_cap_radius for p in partition.patches])
    if np.any(radii <= 0):
        raise PartitionError("degenerate inner cap")
    spacing = float(radii.min())
    h = 0.5 * spacing
    out = np.empty((partition.n, 2, 3))
    for p in partition.patches:
        c = p.center.coords
        e = _pair_direction(partition, p)
        out[p.id, 0] = math.cos(h) * c - math.sin(h) * e
        out[p.id, 1] = math.cos(h) * c + math.sin(h) * e
    return out


def assemble_points(walk, pairs):
    """Control points: the first visit of patch j adds x_{2j-1}, x_{2j}; later visits add x_{2j-1} only."""
    seen = set()
    pts = []
    for v in walk[:-1]:
        pts.append(pairs[v, 0])
        if v not in seen:
            seen.add(v)
            pts.append(pairs[v, 1])
    if walk[-1] != walk[0]:
        raise GraphError("tour is not closed")
    if len(seen) != len(pairs):
        raise GraphError("tour misses a patch")
    return np.array(pts)


def assemble_cycle(partition: Partition, walk, pairs) -> GeodesicCycle:
    pts = assemble_points(walk, pairs)
    expected = partition.n + len(walk) - 1
    assert len(pts) == expected, (len(pts), expected)
    return GeodesicCycle(pts, normalize=False)


@dataclass
class MzCurve:
    t: int
    partition: Partition
    graph: PatchGraph
    walk: list
    pairs: np.ndarray
    cycle: GeodesicCycle


def patch_count(t: int, cn: float = DEFAULT_CN) -> int:
    return max(2, int(math.ceil(cn * t * t - 1e-9)))


def build_mz_cycle(t: int, cn: float = DEFAULT_CN) -> MzCurve:
    if t < 1:
        raise ValueError("t must be >= 1")
    if cn <= 0:
        raise ValueError("cn must be positive")
    part = equal_area_partition(patch_count(t, cn))
    g = build_graph(part)
    walk = euler_cycle(g)
    pairs = select_pairs(part)
    return MzCurve(int(t), part, g, walk, pairs, assemble_cycle(part, walk, pairs))


# ---- empirical Marcinkiewicz-Zygmund test ----

@dataclass
class MzReport:
    t: int
    p: float
    num_samples: int
    ratio_min: float
    ratio_max: float
    curve_length: float
    length_over_t: float
    seed: int = 0
    num_arcs: int = 0
    ratios: List[float] = field(default_factory=list, repr=False)

    def to_dict(self):
        return {
            "t": self.t,
            "p": "inf" if math.isinf(self.p) else self.p,
            "num_samples": self.num_samples,
            "ratio_min": self.ratio_min,
            "ratio_max": self.ratio_max,
            "curve_length": self.curve_length,
            "length_over_t": self.length_over_t,
            "seed": self.seed,
            "num_arcs": self.num_arcs,
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, doc):
        return cls(int(doc["t"]), float(doc["p"]), int(doc["num_samples"]), float(doc["ratio_min"]),
                   float(doc["ratio_max"]), float(doc["curve_length"]), float(doc["length_over_t"]),
                   int(doc.get("seed", 0)), int(doc.get("num_arcs", 0)))


def parse_p(p):
    if isinstance(p, str):
        p = p.strip().lower()
        if p in ("inf", "infinity", "oo"):
            return math.inf
    p = float(p)
    if not p >= 1:
        raise ValueError("p must be >= 1 or inf")
    return p


def _arc_frames(P):
    """Per arc: start point, unit tangent at start, length."""
    Q = np.roll(P, -1, axis=0)
    c = np.clip(np.einsum("ij,ij->i", P, Q), -1.0, 1.0)
    ell = np.arccos(c)
    U = Q - c[:, None] * P
    nu = np.linalg.norm(U, axis=1)
    U = np.where(nu[:, None] > 0, U / np.where(nu > 0, nu, 1.0)[:, None], 0.0)
    return P, U, ell


def _curve_nodes(cycle: GeodesicCycle, t: int, p: float):
    """Nodes (angle form) and weights along the cycle; weights sum to the length.

    Finite p: composite Gauss-Legendre with panels of length <= 0.25 / t.
    p = inf: uniform samples with spacing <= 0.01 / t (weights unused).
    """
    P, U, ell = _arc_frames(cycle.points)
    arc_idx, ang, w = [], [], []
    if math.isinf(p):
        step = 0.01 / t
        for j, L in enumerate(ell):
            k = max(2, int(math.ceil(L / step)) + 1)
            a = np.linspace(0.0, L, k)
            arc_idx.append(np.full(k, j))
            ang.append(a)
            w.append(np.zeros(k))
    else:
        gx, gw = gauss_legendre(8)
        for j, L in enumerate(ell):
            if L == 0:
                continue
            m = max(1, int(math.ceil(L * t / 0.25)))
            edges = np.linspace(0.0, L, m + 1)
            a = (edges[:-1, None] + np.outer(np.diff(edges), gx)).ravel()
            arc_idx.append(np.full(a.size, j))
            ang.append(a)
            w.append((np.diff(edges)[:, None] * gw[None, :]).ravel())
    return P, U, np.concatenate(arc_idx), np.concatenate(ang), np.concatenate(w)


def _points_at(P, U, idx, ang):
    return np.cos(ang)[:, None] * P[idx] + np.sin(ang)[:, None] * U[idx]


def _draw_coeffs(t, num_samples, seed):
    ss = np.random.SeedSequence(seed)
    cols = []
    for child in ss.spawn(num_samples):
        c = random_harmonic(t, child).coeffs
        while np.linalg.norm(c) < 1e-14:
            child = child.spawn(1)[0]
            c = random_harmonic(t, child).coeffs
        cols.append(c)
    return np.column_stack(cols)


def curve_lp_norms(cycle: GeodesicCycle, t: int, p, C, polish: bool = True):
    """((1/len) int_gamma |f_k|^p)^(1/p) for f_k = sum_i C[i, k] Y_i; sup over the curve for p = inf.

    Returns the norms and, for p = inf, the maximizing points (else None).
    """
    p = parse_p(p)
    if cycle.ambient_dim != 3:
        raise GeometryError("MZ tests run on S^2")
    C = np.atleast_2d(np.asarray(C, dtype=float))
    if C.shape[0] != (t + 1) ** 2:
        C = C.T
    S = C.shape[1]
    P, U, idx, ang, w = _curve_nodes(cycle, t, p)
    if math.isinf(p):
        best = np.full(S, -1.0)
        arg = np.zeros(S, dtype=int)
        for lo in range(0, len(idx), CHUNK):
            X = _points_at(P, U, idx[lo:lo + CHUNK], ang[lo:lo + CHUNK])
            V = np.abs(_kernels.harmonics(np.ascontiguousarray(X), t) @ C)
            k = V.argmax(axis=0)
            v = V[k, np.arange(S)]
            better = v > best
            best[better] = v[better]
            arg[better] = lo + k[better]
        where = _points_at(P, U, idx[arg], ang[arg])
        if polish:
            ell = np.arccos(np.clip(np.einsum("ij,ij->i", P, np.roll(P, -1, axis=0)), -1.0, 1.0))
            step = 0.01 / t
            for s in range(S):
                j, a0 = idx[arg[s]], ang[arg[s]]
                lo_a, hi_a = max(0.0, a0 - step), min(ell[j], a0 + step)
                if hi_a <= lo_a:
                    continue

                def neg(a, j=j, s=s):
                    x = _points_at(P, U, np.array([j]), np.array([a]))
                    return -abs(float((sh_all(x, t) @ C[:, s])[0]))

                res = minimize_scalar(neg, bounds=(lo_a, hi_a), method="bounded", options={"xatol": 1e-12})
                if -res.fun > best[s]:
                    best[s] = -res.fun
                    where[s] = _points_at(P, U, np.array([j]), np.array([res.x]))[0]
        return best, where
    acc = np.zeros(S)
    for lo in range(0, len(idx), CHUNK):
        X = _points_at(P, U, idx[lo:lo + CHUNK], ang[lo:lo + CHUNK])
        V = np.abs(_kernels.harmonics(np.ascontiguousarray(X), t) @ C)
        acc += w[lo:lo + CHUNK] @ (V ** p)
    return (acc / w.sum()) ** (1.0 / p), None


def sphere_norms(t: int, p, C, extra_points=None):
    """Sphere L^p norms of the columns of C.

    For p = inf the grid-and-polish estimate is raised to at least |f| at
    ``extra_points`` (one point per column), which are points of S^2 too.
    """
    p = parse_p(p)
    C = np.asarray(C, dtype=float)

    def f(X):
        return sh_all(X, t) @ C

    if p == 2.0:
        # orthonormal basis: exact
        return np.linalg.norm(C, axis=0)
    if not math.isinf(p):
        return np.atleast_1d(sphere_lp_norm(f, p, degree=t))
    X, _ = sphere_grid(4 * t + 4)
    V = np.abs(f(X))
    out = np.array([
        _sup_polish(lambda Z, k=k: sh_all(Z, t) @ C[:, k], X, V[:, k]) for k in range(C.shape[1])
    ])
    if extra_points is not None:
        vals = np.abs(np.einsum("ij,ji->i", sh_all(extra_points, t), C))
        out = np.maximum(out, vals)
    return out


def mz_test(cycle: GeodesicCycle, t: int, p, num_samples: int = 200, seed: int = 0) -> MzReport:
    """Curve-to-sphere L^p norm ratios for ``num_samples`` random polynomials of degree <= t."""
    p = parse_p(p)
    if t < 1:
        raise ValueError("t must be >= 1")
    if num_samples < 1:
        raise ValueError("num_samples must be >= 1")
    C = _draw_coeffs(int(t), int(num_samples), seed)
    curve, where = curve_lp_norms(cycle, int(t), p, C)
    sphere = sphere_norms(int(t), p, C, where)
    ratios = curve / sphere
    L = cycle.length
    return MzReport(int(t), p, int(num_samples), float(ratios.min()), float(ratios.max()), L, L / t,
                    seed if isinstance(seed, int) else 0, cycle.n, ratios.tolist())
