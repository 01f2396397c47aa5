"""Command-line entry point.

Exit codes: 0 success, 2 bad input or config, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import analysis, concurrence, etendue, io, phasematch, pipelines, projection, synthetic
from .core import (AngularMask, DegenerateRegime, EdgeTruncationError, EmptySubspace,
                   EtendueBudget, FitFailure, InvalidArgument, InvalidCurve, UndefinedVisibility,
                   make_lorentzian_spectrum, make_uniform_spectrum)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3
NUMERIC_ERRORS = (FitFailure, EdgeTruncationError, InvalidCurve, UndefinedVisibility,
                  EmptySubspace, DegenerateRegime, FloatingPointError, np.linalg.LinAlgError)


def _emit(result: dict, as_json: bool, out=None):
    out = out or sys.stdout
    if as_json:
        out.write(io.dumps_json(result))
        return
    flat = {}

    def walk(prefix, v):
        if isinstance(v, dict):
            for k, sub in v.items():
                walk(f"{prefix}.{k}" if prefix else str(k), sub)
        else:
            flat[prefix] = v

    walk("", io.to_jsonable(result))
    width = max(len(k) for k in flat) if flat else 0
    for k, v in flat.items():
        if isinstance(v, float):
            v = f"{v:.6g}"
        out.write(f"{k:<{width}}  {v}\n")


def _spectrum_from_args(args):
    if getattr(args, "uniform", False):
        return make_uniform_spectrum(args.lmax)
    return make_lorentzian_spectrum(args.fwhm, args.lmax)


def _grid(args):
    n = int(round((args.dphi_max - args.dphi_min) / args.dphi_step))
    return args.dphi_min + args.dphi_step * np.arange(n + 1)


def cmd_fit_phasematch(args):
    profile = io.read_profile_csv(args.profile)
    report = phasematch.fit_phasematch(profile, args.f, poisson_weights=args.poisson_weights)
    result = {"model": io.model_to_dict(report.model), "residual_rms": report.residual_rms,
              "iterations": report.iterations, "converged": report.converged,
              "scale": report.scale}
    try:
        result["opening_angle_deg"] = float(np.rad2deg(phasematch.opening_angle(report.model)))
    except DegenerateRegime:
        result["opening_angle_deg"] = None
    return result


def cmd_spectrum(args):
    spec = _spectrum_from_args(args)
    if args.out:
        io.write_spectrum_csv(spec, args.out)
    result = {"l_max": args.lmax, "effective_dimension": analysis.effective_dimension(spec)}
    if not args.uniform:
        result["fwhm_l"] = analysis.spectrum_fwhm(spec)
        fit = analysis.fit_lorentzian(spec)
        result["lorentzian_fit"] = {"gamma": fit.gamma, "fwhm_l": fit.fwhm_l,
                                    "residual_rms": fit.residual_rms}
    return result


def cmd_angle_scan(args):
    spec = _spectrum_from_args(args)
    mask = AngularMask.n_slits(args.slits, args.width, args.spacing)
    grid = _grid(args)
    if args.route == "fourier":
        curve = projection.fourier_relation_vs_rotation(spec, mask, grid)
    else:
        curve = projection.coincidence_vs_rotation(spec, mask, 0, 0, grid)
    if args.peak_counts:
        curve = synthetic.poissonize_curve(curve, args.peak_counts, args.seed)
    if args.out:
        io.write_curve_csv(curve, args.out)
    return {"route": args.route, "n_points": int(curve.x.size),
            "peak_half_width_deg": analysis.central_peak_half_width(curve, args.background)}


def cmd_oam_scan(args):
    spec = _spectrum_from_args(args)
    mask = concurrence.two_slit_mask(args.width, args.separation)
    l_scan = np.arange(-args.scan_max, args.scan_max + 1)
    curve = projection.oam_interference_scan(spec, mask, mask, args.idler_l, l_scan)
    if args.out:
        io.write_curve_csv(curve, args.out)
    return {"n_points": int(curve.x.size), "visibility": concurrence.visibility(curve),
            "curve": {"l_signal": curve.x.astype(int), "p": curve.p}}


def cmd_concurrence(args):
    spec = _spectrum_from_args(args)
    mask = concurrence.two_slit_mask(args.width, args.separation)
    s1, s2 = mask.split()
    l_scan = np.arange(-args.scan_max, args.scan_max + 1)
    qubit = concurrence.angular_qubit_density_matrix(spec, s1, s2)
    return {
        "single_slit_matrix": concurrence.single_slit_matrix(spec, s1, s2),
        "visibility": concurrence.concurrence_from_interference(
            spec, mask, mask, args.idler_l, l_scan, p_noise=args.white_noise),
        "concurrence_wootters": concurrence.wootters_concurrence(qubit.amplitudes),
    }


def _budget(area, half_angle_deg, wavelength):
    omega = etendue.solid_angle_from_half_angle(np.deg2rad(half_angle_deg))
    return EtendueBudget(area, omega, wavelength)


def cmd_etendue(args):
    gen = _budget(args.area, args.half_angle_deg, args.wavelength)
    result = {"area": gen.area, "solid_angle": gen.solid_angle, "wavelength": gen.wavelength,
              "E": etendue.etendue(gen), "N": etendue.mode_count(gen)}
    if args.detection_area is not None or args.detection_half_angle_deg is not None:
        det = _budget(args.detection_area or args.area,
                      args.detection_half_angle_deg or args.half_angle_deg, args.wavelength)
        check = etendue.klyshko_check(gen, det)
        result["klyshko"] = {"E_detection": etendue.etendue(det), "pass": check.passed,
                             "margin": check.margin}
    return result


def cmd_reproduce(args):
    res = pipelines.reproduce(args.figure, args.out, seed=args.seed, timing=args.timing)
    return {"out_dir": res["out_dir"], "files": sorted(res["manifest"]["outputs"]),
            "cases": res["summary"]["cases"]}


def cmd_run(args):
    try:
        config = pipelines.load_config(args.config)
    except (OSError, ValueError) as exc:
        raise pipelines.ConfigError("<file>", str(exc))
    if args.seed is not None:
        config.setdefault("noise", {})["seed"] = args.seed
    res = pipelines.run_scenario(config, args.out, timing=args.timing)
    return {"out_dir": res["out_dir"], "files": sorted(res["manifest"]["outputs"]),
            "cases": res["summary"]["cases"]}


def cmd_selftest(args):
    from . import selftest
    report = selftest.run(n_cases=args.cases, seed=args.seed)
    if not report["passed"]:
        raise FloatingPointError(f"selftest failed: {report['failures']}")
    return report


def _spectrum_opts(p, fwhm_default=20.0):
    p.add_argument("--fwhm", type=float, default=fwhm_default, help="spiral bandwidth (FWHM in l)")
    p.add_argument("--lmax", type=int, default=30)
    p.add_argument("--uniform", action="store_true", help="flat spectrum instead of Lorentzian")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oamspdc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(func=func)
        return p

    p = add("fit-phasematch", cmd_fit_phasematch, "fit the sinc^2 far-field model to a radial CSV")
    p.add_argument("profile")
    p.add_argument("--f", type=float, required=True, help="focal length (m)")
    p.add_argument("--poisson-weights", action="store_true")

    p = add("spectrum", cmd_spectrum, "spiral spectrum summary")
    _spectrum_opts(p)
    p.add_argument("--out")

    p = add("angle-scan", cmd_angle_scan, "angular correlation through an N-slit mask")
    _spectrum_opts(p)
    p.add_argument("--slits", type=int, default=4)
    p.add_argument("--width", type=float, default=7.0, help="slit width (deg)")
    p.add_argument("--spacing", type=float, default=None, help="slit spacing (deg)")
    p.add_argument("--dphi-min", type=float, default=-45.0)
    p.add_argument("--dphi-max", type=float, default=45.0)
    p.add_argument("--dphi-step", type=float, default=0.25)
    p.add_argument("--route", choices=("fourier", "projection"), default="fourier")
    p.add_argument("--background", type=float, default=0.0)
    p.add_argument("--peak-counts", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")

    for name, func, help_ in (("oam-scan", cmd_oam_scan, "two-slit OAM interference scan"),
                              ("concurrence", cmd_concurrence, "angular-qubit concurrence")):
        p = add(name, func, help_)
        _spectrum_opts(p)
        p.add_argument("--width", type=float, default=18.0)
        p.add_argument("--separation", type=float, default=45.0)
        p.add_argument("--scan-max", type=int, default=20)
        p.add_argument("--idler-l", type=int, default=0)
        if name == "oam-scan":
            p.add_argument("--out")
        else:
            p.add_argument("--white-noise", type=float, default=0.0)

    p = add("etendue", cmd_etendue, "étendue and transverse mode count")
    p.add_argument("--area", type=float, required=True, help="near-field area (m^2)")
    p.add_argument("--half-angle-deg", type=float, required=True)
    p.add_argument("--wavelength", type=float, required=True, help="(m)")
    p.add_argument("--detection-area", type=float)
    p.add_argument("--detection-half-angle-deg", type=float)

    p = add("reproduce", cmd_reproduce, "regenerate a figure's data set")
    p.add_argument("figure", choices=pipelines.PIPELINES)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--timing", action="store_true", help="record wall time in the manifest")

    p = add("run", cmd_run, "run a scenario config (JSON or YAML)")
    p.add_argument("config")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--timing", action="store_true")

    p = add("selftest", cmd_selftest, "analytic vs quadrature oracle checks")
    p.add_argument("--cases", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        result = args.func(args)
    except pipelines.ConfigError as exc:
        sys.stderr.write(f"config error at {exc}\n")
        return EXIT_CONFIG
    except NUMERIC_ERRORS as exc:
        sys.stderr.write(f"numerical failure: {type(exc).__name__}: {exc}\n")
        return EXIT_NUMERIC
    except (InvalidArgument, OSError) as exc:
        sys.stderr.write(f"invalid input: {exc}\n")
        return EXIT_CONFIG
    _emit(result, args.json)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
