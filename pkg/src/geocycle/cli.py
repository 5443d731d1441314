"""Command-line entry point: ``geocycle <command> ...``.

Exit codes: 0 success / check passed, 1 check failed, 2 bad input,
3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import beautify, design, mz, optimize
from .families import FamilyError, FamilySpec, family_from_dict, parse_family
from .quadrature import QuadratureError
from .sphere import GeodesicCycle, GeometryError, enclosed_area, sample_curve, samples_to_csv

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3


class InputError(Exception):
    pass


def load_curve_doc(doc):
    if not isinstance(doc, dict):
        raise InputError("curve JSON must be an object")
    if "control_points" in doc:
        return GeodesicCycle.from_dict(doc)
    if "family" in doc:
        return family_from_dict(doc)
    raise InputError("curve JSON needs 'control_points' or 'family'")


def load_curve(arg: str):
    """A family string such as ``geo-tetra:a=0.47`` or a JSON file (cycle or family reference)."""
    if os.path.exists(arg) or arg.endswith(".json"):
        try:
            with open(arg) as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read {arg}: {exc}") from None
        spec = load_curve_doc(doc)
    else:
        spec = parse_family(arg)
    return spec.build() if isinstance(spec, FamilySpec) else spec


def _emit(obj, out=None):
    text = json.dumps(obj, indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_verify(args):
    rep = design.verify_design(load_curve(args.curve), args.t, args.tol)
    _emit(rep.to_dict(), args.out)
    return EXIT_OK if rep.is_design else EXIT_FALSE


def cmd_wce(args):
    curve = load_curve(args.curve)
    doc = {"t": args.t}
    if args.method in ("moments", "both"):
        doc["wce_moments"] = design.wce_moments(curve, args.t)
    if args.method in ("double", "both"):
        if not isinstance(curve, GeodesicCycle):
            raise InputError("the double-integral form needs a geodesic cycle")
        doc["wce_double_integral"] = design.wce_double_integral(curve, args.t)
    _emit(doc, args.out)
    return EXIT_OK


def cmd_optimize(args):
    init = load_curve(args.init)
    if not isinstance(init, GeodesicCycle):
        raise InputError("optimize needs a geodesic cycle (geo-*, platonic or a cycle file)")
    cfg = optimize.OptimizerConfig(max_iters=args.max_iters, seed=args.seed, perturbation=args.perturbation)
    trace = optimize.minimize(init, args.t, cfg)
    doc = trace.cycle.to_dict()
    if args.out:
        _emit(doc, args.out)
    if args.trace:
        with open(args.trace, "w") as fh:
            fh.write(trace.to_csv())
    summary = {
        "t": args.t,
        "objective": trace.final_objective,
        "iterations": trace.iterations,
        "converged": trace.converged,
        "reason": trace.reason,
    }
    if not args.out:
        summary["cycle"] = doc
    _emit(summary)
    return EXIT_OK if trace.converged else EXIT_FALSE


def cmd_beautify(args):
    res = beautify.TARGETS[args.target]()
    _emit(res.to_dict(), args.out)
    return EXIT_OK if res.verified else EXIT_FALSE


def cmd_mz_build(args):
    built = mz.build_mz_cycle(args.t, args.cn)
    part = built.partition
    info = {
        "t": args.t,
        "n_patches": part.n,
        "num_arcs": built.cycle.n,
        "tour_edges": len(built.walk) - 1,
        "length": built.cycle.length,
        "diam_constant": part.diam_constant,
        "max_kissing": max(built.graph.kissing),
    }
    if args.out:
        _emit(built.cycle.to_dict(), args.out)
        _emit(info)
    else:
        info["cycle"] = built.cycle.to_dict()
        _emit(info)
    return EXIT_OK


def cmd_mz_test(args):
    cycle = load_curve(args.cycle)
    if not isinstance(cycle, GeodesicCycle):
        raise InputError("mz test needs a geodesic cycle")
    rep = mz.mz_test(cycle, args.t, args.p, args.samples, args.seed)
    _emit(rep.to_dict(), args.out)
    return EXIT_OK


def cmd_sample(args):
    if args.count < 2:
        raise InputError("count must be >= 2")
    text = samples_to_csv(sample_curve(load_curve(args.curve), args.count))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_area(args):
    area = enclosed_area(load_curve(args.curve))
    _emit({"area": area}, args.out)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="geocycle", description="Design curves and geodesic cycles on spheres.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify", help="check the t-design property")
    s.add_argument("curve")
    s.add_argument("--t", type=int, required=True)
    s.add_argument("--tol", type=float, default=design.DESIGN_TOL)
    s.add_argument("--out")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("wce", help="worst-case error ||L||_t")
    s.add_argument("curve")
    s.add_argument("--t", type=int, required=True)
    s.add_argument("--method", choices=("moments", "double", "both"), default="moments")
    s.add_argument("--out")
    s.set_defaults(func=cmd_wce)

    s = sub.add_parser("optimize", help="minimize ||L||_t^2 over control points")
    s.add_argument("--init", required=True)
    s.add_argument("--t", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--perturbation", type=float, default=0.0)
    s.add_argument("--max-iters", type=int, default=optimize.OptimizerConfig.max_iters)
    s.add_argument("--out", help="final cycle JSON")
    s.add_argument("--trace", help="CSV trace iter,objective")
    s.set_defaults(func=cmd_optimize)

    s = sub.add_parser("beautify", help="solve the parameter equations of a family")
    s.add_argument("--target", choices=sorted(beautify.TARGETS), required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_beautify)

    s = sub.add_parser("mz", help="Marcinkiewicz-Zygmund curve pipeline")
    mzsub = s.add_subparsers(dest="mz_command", required=True)
    b = mzsub.add_parser("build")
    b.add_argument("--t", type=int, required=True)
    b.add_argument("--cn", type=float, default=mz.DEFAULT_CN)
    b.add_argument("--out")
    b.set_defaults(func=cmd_mz_build)
    tt = mzsub.add_parser("test")
    tt.add_argument("--cycle", required=True)
    tt.add_argument("--t", type=int, required=True)
    tt.add_argument("--p", default="2")
    tt.add_argument("--samples", type=int, default=200)
    tt.add_argument("--seed", type=int, default=0)
    tt.add_argument("--out")
    tt.set_defaults(func=cmd_mz_test)

    s = sub.add_parser("sample", help="CSV samples s,x0,...,xd,speed")
    s.add_argument("curve")
    s.add_argument("--count", type=int, default=200)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("area", help="enclosed area by Gauss-Bonnet")
    s.add_argument("curve")
    s.add_argument("--out")
    s.set_defaults(func=cmd_area)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (InputError, FamilyError, GeometryError, design.DesignRequirementError, KeyError,
            ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (QuadratureError, beautify.RootNotFound, mz.GraphError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
