"""Spherical design curves: geodesic cycles, design checks, beautified families and MZ curves."""
from ._kernels import BACKEND
from .beautify import RootResult, solve_cube, solve_geo, solve_smooth
from .design import DesignReport, verify_design, wce_double_integral, wce_moments
from .families import FamilySpec, parse_family, platonic_cycle
from .mz import MzReport, build_mz_cycle, mz_test
from .optimize import OptimizerConfig, OptimizeTrace, minimize
from .sphere import GeodesicCycle, GeometryError, ParametricCurve, SpherePoint, enclosed_area

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "DesignReport",
    "FamilySpec",
    "GeodesicCycle",
    "GeometryError",
    "MzReport",
    "OptimizeTrace",
    "OptimizerConfig",
    "ParametricCurve",
    "RootResult",
    "SpherePoint",
    "build_mz_cycle",
    "enclosed_area",
    "minimize",
    "mz_test",
    "parse_family",
    "platonic_cycle",
    "solve_cube",
    "solve_geo",
    "solve_smooth",
    "verify_design",
    "wce_double_integral",
    "wce_moments",
]
