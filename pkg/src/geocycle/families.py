"""Constructors for the smooth design curves, the beautified geodesic families,
and Hamiltonian cycles on the Platonic solids.
"""
from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field

import numpy as np

from .sphere import GeodesicCycle, ParametricCurve

TWO_PI = 2.0 * math.pi
GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0
TETRA_ANGLE = math.atan(math.sqrt(2.0))


class FamilyError(ValueError):
    pass


def smooth_s2(t: int, a: float) -> ParametricCurve:
    """The smooth curve family on S^2 with parameter a in [0, 1].

    Position (a cos 2pi s + (1-a) cos 2pi(2t-1)s, a sin 2pi s - (1-a) sin
    2pi(2t-1)s, 2 sqrt(a(1-a)) sin 2pi t s); t = 1 is a great circle.
    """
    if t not in (1, 2, 3):
        raise FamilyError("t must be 1, 2 or 3")
    if not 0.0 <= a <= 1.0:
        raise FamilyError("a must lie in [0, 1]")
    w = TWO_PI
    k = 2 * t - 1
    b = 1.0 - a
    r = 2.0 * math.sqrt(a * b)

    def pos(s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        return np.column_stack([
            a * np.cos(w * s) + b * np.cos(k * w * s),
            a * np.sin(w * s) - b * np.sin(k * w * s),
            r * np.sin(t * w * s),
        ])

    def vel(s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        return np.column_stack([
            -a * w * np.sin(w * s) - b * k * w * np.sin(k * w * s),
            a * w * np.cos(w * s) - b * k * w * np.cos(k * w * s),
            r * t * w * np.cos(t * w * s),
        ])

    def acc(s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        return np.column_stack([
            -a * w**2 * np.cos(w * s) - b * (k * w) ** 2 * np.cos(k * w * s),
            -a * w**2 * np.sin(w * s) + b * (k * w) ** 2 * np.sin(k * w * s),
            -r * (t * w) ** 2 * np.sin(t * w * s),
        ])

    return ParametricCurve(pos, vel, acc, closed=True, name=f"smooth:t={t},a={a!r}")


def smooth_vertices(t: int, a: float):
    """Points of ``smooth_s2(t, a)`` at s_j = (2j - 1) / (4t), j = 1..2t."""
    s = (2 * np.arange(1, 2 * t + 1) - 1) / (4.0 * t)
    return smooth_s2(t, a).position(s)


def odd_sphere(kind: int, m: int) -> ParametricCurve:
    """Curve on S^{2m-1} made of m scaled circle blocks c(k s) / sqrt(m).

    kind 1 repeats frequency 1 (a great circle), kind 2 uses 1..m, kind 3
    uses the odd frequencies 1, 3, ..., 2m - 1.
    """
    if m < 2:
        raise FamilyError("m must be >= 2")
    if kind == 1:
        freqs = np.ones(m)
    elif kind == 2:
        freqs = np.arange(1, m + 1, dtype=float)
    elif kind == 3:
        freqs = np.arange(1, 2 * m, 2, dtype=float)
    else:
        raise FamilyError("kind must be 1, 2 or 3")
    c = 1.0 / math.sqrt(m)

    def blocks(s, order):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        ph = TWO_PI * np.outer(s, freqs)
        scale = c * (TWO_PI * freqs) ** order
        if order == 0:
            cs, sn = np.cos(ph), np.sin(ph)
        elif order == 1:
            cs, sn = -np.sin(ph), np.cos(ph)
        else:
            cs, sn = -np.cos(ph), -np.sin(ph)
        out = np.empty((len(s), 2 * m))
        out[:, 0::2] = scale * cs
        out[:, 1::2] = scale * sn
        return out

    return ParametricCurve(lambda s: blocks(s, 0), lambda s: blocks(s, 1), lambda s: blocks(s, 2),
                           closed=True, name=f"odd:kind={kind},m={m}")


def _check_angle(a):
    if not 0.0 < a <= math.pi / 2:
        raise FamilyError("a must lie in (0, pi/2]")


def geo_tetra_points(a: float):
    _check_angle(a)
    s, c = math.sin(a), math.cos(a)
    return np.array([[s, 0.0, c], [0.0, s, -c], [-s, 0.0, c], [0.0, -s, -c]])


def geo_tetra(a: float) -> GeodesicCycle:
    """Four-point cycle deforming the tetrahedron (a = arctan sqrt 2) into a great circle (a = pi/2)."""
    return GeodesicCycle(geo_tetra_points(a))


def geo_octa_points(a: float):
    _check_angle(a)
    s, c = math.sin(a), math.cos(a)
    h = math.sqrt(3.0) / 2.0
    y = np.array([[s, 0.0, c], [0.5 * s, h * s, -c], [-0.5 * s, h * s, c]])
    return np.vstack([y, -y])


def geo_octa(a: float) -> GeodesicCycle:
    """Antipodal six-point cycle y1, y2, y3, -y1, -y2, -y3."""
    return GeodesicCycle(geo_octa_points(a))


def geo_cube_points(alpha: float, beta: float):
    # alpha == beta is admitted so that alpha = beta = 1/sqrt(3) gives the cube itself
    if not (0.0 < alpha <= beta and alpha * alpha + beta * beta < 1.0):
        raise FamilyError("need 0 < alpha <= beta and alpha^2 + beta^2 < 1")
    q = math.sqrt(1.0 - alpha * alpha - beta * beta)
    al, be = alpha, beta
    return np.array([
        [al, be, q], [be, al, -q], [-be, al, -q], [-al, be, q],
        [-al, -be, q], [-be, -al, -q], [be, -al, -q], [al, -be, q],
    ])


def geo_cube(alpha: float, beta: float) -> GeodesicCycle:
    """Eight-point cycle deforming the cube's Hamiltonian cycle."""
    return GeodesicCycle(geo_cube_points(alpha, beta))


# Vertices listed in Hamiltonian order (consecutive rows share an edge,
# last row joins the first). Tetra/octa/cube use the orientation of the
# geo_* families at their Platonic parameters.
_ICOSA = [
    (0, -1, GOLDEN), (0, 1, GOLDEN), (GOLDEN, 0, 1), (1, -GOLDEN, 0),
    (-1, -GOLDEN, 0), (-GOLDEN, 0, -1), (0, -1, -GOLDEN), (GOLDEN, 0, -1),
    (1, GOLDEN, 0), (0, 1, -GOLDEN), (-1, GOLDEN, 0), (-GOLDEN, 0, 1),
]
_IG = 1.0 / GOLDEN
_DODECA = [
    (0, -_IG, GOLDEN), (0, _IG, GOLDEN), (1, 1, 1), (GOLDEN, 0, _IG), (1, -1, 1),
    (_IG, -GOLDEN, 0), (-_IG, -GOLDEN, 0), (-1, -1, -1), (-GOLDEN, 0, -_IG), (-1, 1, -1),
    (0, _IG, -GOLDEN), (0, -_IG, -GOLDEN), (1, -1, -1), (GOLDEN, 0, -_IG), (1, 1, -1),
    (_IG, GOLDEN, 0), (-_IG, GOLDEN, 0), (-1, 1, 1), (-GOLDEN, 0, _IG), (-1, -1, 1),
]

SOLIDS = ("tetra", "octa", "cube", "icosa", "dodeca")


def platonic_points(solid: str):
    if solid == "tetra":
        return geo_tetra_points(TETRA_ANGLE)
    if solid == "octa":
        return geo_octa_points(TETRA_ANGLE)
    if solid == "cube":
        c = 1.0 / math.sqrt(3.0)
        return geo_cube_points(c, c)
    if solid == "icosa":
        P = np.array(_ICOSA, dtype=float)
    elif solid == "dodeca":
        P = np.array(_DODECA, dtype=float)
    else:
        raise FamilyError(f"unknown solid {solid!r}; choose from {SOLIDS}")
    return P / np.linalg.norm(P, axis=1)[:, None]


def platonic_cycle(solid: str) -> GeodesicCycle:
    """Spherical Hamiltonian cycle along the edges of a Platonic solid."""
    return GeodesicCycle(platonic_points(solid))


class Family(str, enum.Enum):
    SMOOTH_S2 = "smooth"
    ODD_SPHERE = "odd"
    GEO_TETRA = "geo-tetra"
    GEO_OCTA = "geo-octa"
    GEO_CUBE = "geo-cube"
    PLATONIC = "platonic"


_PARAMS = {
    Family.SMOOTH_S2: ("t", "a"),
    Family.ODD_SPHERE: ("kind", "m"),
    Family.GEO_TETRA: ("a",),
    Family.GEO_OCTA: ("a",),
    Family.GEO_CUBE: ("alpha", "beta"),
    Family.PLATONIC: ("solid",),
}
_INT_PARAMS = {"t", "kind", "m"}


@dataclass(frozen=True)
class FamilySpec:
    family: Family
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        fam = Family(self.family)
        object.__setattr__(self, "family", fam)
        want = set(_PARAMS[fam])
        got = set(self.params)
        if got != want:
            raise FamilyError(f"{fam.value} needs parameters {sorted(want)}, got {sorted(got)}")

    def build(self):
        p = self.params
        f = self.family
        if f is Family.SMOOTH_S2:
            return smooth_s2(int(p["t"]), float(p["a"]))
        if f is Family.ODD_SPHERE:
            return odd_sphere(int(p["kind"]), int(p["m"]))
        if f is Family.GEO_TETRA:
            return geo_tetra(float(p["a"]))
        if f is Family.GEO_OCTA:
            return geo_octa(float(p["a"]))
        if f is Family.GEO_CUBE:
            return geo_cube(float(p["alpha"]), float(p["beta"]))
        return platonic_cycle(str(p["solid"]))

    def to_dict(self):
        return {"family": self.family.value, "params": dict(self.params)}

    def __str__(self):
        if self.family is Family.PLATONIC:
            return f"platonic:{self.params['solid']}"
        return self.family.value + ":" + ",".join(f"{k}={self.params[k]}" for k in _PARAMS[self.family])


def _convert(name, raw):
    if name == "solid":
        return str(raw)
    if name in _INT_PARAMS:
        val = float(raw)
        if val != int(val):
            raise FamilyError(f"{name} must be an integer")
        return int(val)
    return float(raw)


def parse_family(text: str) -> FamilySpec:
    """Parse ``"geo-tetra:a=0.47367"``, ``"smooth:t=2,a=0.7778"``, ``"platonic:icosa"``...

    ``odd2:m=3`` and ``odd3:m=3`` are accepted for ``odd:kind=2,m=3``.
    """
    m = re.fullmatch(r"\s*([A-Za-z0-9_-]+)\s*(?::\s*(.*))?", text)
    if not m:
        raise FamilyError(f"cannot parse family string {text!r}")
    name, rest = m.group(1).lower(), (m.group(2) or "").strip()
    params = {}
    if name in ("odd1", "odd2", "odd3"):
        params["kind"] = int(name[-1])
        name = "odd"
    try:
        fam = Family(name)
    except ValueError:
        raise FamilyError(f"unknown family {name!r}") from None
    if fam is Family.PLATONIC and rest and "=" not in rest:
        params["solid"] = rest
    elif rest:
        for item in rest.split(","):
            if "=" not in item:
                raise FamilyError(f"expected key=value, got {item!r}")
            k, v = (s.strip() for s in item.split("=", 1))
            if k not in _PARAMS[fam]:
                raise FamilyError(f"{fam.value} has no parameter {k!r}")
            try:
                params[k] = _convert(k, v)
            except ValueError:
                raise FamilyError(f"bad value for {k}: {v!r}") from None
    return FamilySpec(fam, params)


def family_from_dict(doc) -> FamilySpec:
    fam = Family(doc["family"])
    params = {k: _convert(k, v) for k, v in dict(doc.get("params", {})).items()}
    return FamilySpec(fam, params)
