"""Declarative scenario runner that regenerates the figure2 and figure3 data sets.

A scenario is a nested mapping (JSON or YAML). Keys::

    pipeline:   {name: figure2 | figure3}
    spectrum:   {model: lorentzian | uniform, fwhm_l: number or list, l_max: int}
    mask:       {slits: [[center_deg, width_deg], ...]}
                or {n_slits, width_deg, spacing_deg, start_deg}
    phasematch: {a, alpha: number or list, f, n_samples, r_max_factor}
    scan:       {dphi_min_deg, dphi_max_deg, dphi_step_deg, l_scan_max, idler_l}
    noise:      {seed, peak_counts, background, white_noise}

Angles are degrees, lengths metres. Unknown keys are rejected. ``fwhm_l`` and
``alpha`` lists are paired case by case.
"""
from __future__ import annotations

import copy
import hashlib
import json
import platform
import time
from pathlib import Path

import jsonschema
import numpy as np
import scipy

from . import __version__, analysis, concurrence, io, phasematch, projection, synthetic
from .core import (AngularMask, InvalidCurve, PhaseMatchModel, make_lorentzian_spectrum,
                   make_uniform_spectrum)

PIPELINES = ("figure2", "figure3")

# reference values from the experiment; reported, never asserted
MEASURED_REFERENCE = {
    "figure2": {0: {"fwhm_l": 10, "peak_half_width_deg": 12.0, "opening_angle_deg": 0.9},
                1: {"fwhm_l": 20, "peak_half_width_deg": 8.0, "opening_angle_deg": 1.1}},
    "figure3": {0: {"concurrence": 0.96}, 1: {"concurrence": 0.90}},
}

_number_or_list = {"oneOf": [{"type": "number"},
                             {"type": "array", "items": {"type": "number"}, "minItems": 1}]}

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["pipeline", "spectrum"],
    "properties": {
        "pipeline": {
            "type": "object", "additionalProperties": False, "required": ["name"],
            "properties": {"name": {"enum": list(PIPELINES)}},
        },
        "spectrum": {
            "type": "object", "additionalProperties": False,
            "properties": {
                "model": {"enum": ["lorentzian", "uniform"]},
                "fwhm_l": _number_or_list,
                "l_max": {"type": "integer", "minimum": 1},
            },
            "if": {"not": {"properties": {"model": {"const": "uniform"}}, "required": ["model"]}},
            "then": {"required": ["fwhm_l"]},
        },
        "mask": {
            "type": "object", "additionalProperties": False,
            "properties": {
                "slits": {"type": "array", "minItems": 1,
                          "items": {"type": "array", "items": {"type": "number"},
                                    "minItems": 2, "maxItems": 2}},
                "n_slits": {"type": "integer", "minimum": 1},
                "width_deg": {"type": "number", "exclusiveMinimum": 0},
                "spacing_deg": {"type": "number"},
                "start_deg": {"type": "number"},
            },
        },
        "phasematch": {
            "type": "object", "additionalProperties": False,
            "properties": {
                "a": {"type": "number", "exclusiveMinimum": 0},
                "alpha": _number_or_list,
                "f": {"type": "number", "exclusiveMinimum": 0},
                "n_samples": {"type": "integer", "minimum": 8},
                "r_max_factor": {"type": "number", "exclusiveMinimum": 1},
            },
        },
        "scan": {
            "type": "object", "additionalProperties": False,
            "properties": {
                "dphi_min_deg": {"type": "number"},
                "dphi_max_deg": {"type": "number"},
                "dphi_step_deg": {"type": "number", "exclusiveMinimum": 0},
                "l_scan_max": {"type": "integer", "minimum": 1},
                "idler_l": {"type": "integer"},
            },
        },
        "noise": {
            "type": "object", "additionalProperties": False,
            "properties": {
                "seed": {"type": "integer", "minimum": 0},
                "peak_counts": {"type": "integer", "minimum": 0},
                "background": {"type": "number", "minimum": 0},
                "white_noise": {"type": "number", "minimum": 0, "maximum": 1},
            },
        },
    },
}

DEFAULTS = {
    "spectrum": {"model": "lorentzian", "l_max": 30},
    "phasematch": {"a": 3000.0, "f": 0.3, "n_samples": 200, "r_max_factor": 2.5},
    "scan": {"dphi_min_deg": -45.0, "dphi_max_deg": 45.0, "dphi_step_deg": 0.25,
             "l_scan_max": 20, "idler_l": 0},
    "noise": {"seed": 20120101, "peak_counts": 0, "background": 0.0, "white_noise": 0.0},
}

FIGURE2_CONFIG = {
    "pipeline": {"name": "figure2"},
    "spectrum": {"model": "lorentzian", "fwhm_l": [10, 20], "l_max": 30},
    "mask": {"n_slits": 4, "width_deg": 7.0, "spacing_deg": 90.0, "start_deg": 0.0},
    # a = pi L / (n lambda): 5 mm BBO, n = 1.66, degenerate 710 nm
    "phasematch": {"a": 13327.6, "alpha": [0.0, -2.2], "f": 0.3},
    "noise": {"seed": 20120101, "peak_counts": 100000, "background": 0.0},
}

FIGURE3_CONFIG = {
    "pipeline": {"name": "figure3"},
    "spectrum": {"model": "lorentzian", "fwhm_l": [10, 20], "l_max": 30},
    "mask": {"slits": [[0.0, 18.0], [45.0, 18.0]]},
    "phasematch": {"alpha": [0.0, -2.2]},
    "scan": {"l_scan_max": 20, "idler_l": 0},
    "noise": {"seed": 20120101, "peak_counts": 10000, "white_noise": 0.0},
}

BUILTIN = {"figure2": FIGURE2_CONFIG, "figure3": FIGURE3_CONFIG}


class ConfigError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def _error_path(err: jsonschema.ValidationError) -> str:
    parts = [str(p) for p in err.absolute_path]
    if err.validator == "required":
        parts.append(err.message.split("'")[1])
    elif err.validator == "additionalProperties":
        extra = err.message.split("'")
        if len(extra) > 1:
            parts.append(extra[1])
    return ".".join(parts) or "<root>"


def validate_config(config: dict) -> dict:
    """Validate and fill defaults; raises :class:`ConfigError` naming the field path."""
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(config), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise ConfigError(_error_path(err), err.message)
    resolved = copy.deepcopy(config)
    for section, defaults in DEFAULTS.items():
        merged = dict(defaults)
        merged.update(resolved.get(section, {}))
        resolved[section] = merged
    resolved.setdefault("mask", {})
    return resolved


def load_config(path) -> dict:
    text = Path(path).read_text()
    if str(path).endswith((".yaml", ".yml")):
        import yaml
        return yaml.safe_load(text)
    return json.loads(text)


def build_mask(spec: dict, default: AngularMask) -> AngularMask:
    if not spec:
        return default
    if "slits" in spec:
        if set(spec) - {"slits"}:
            raise ConfigError("mask", "give either 'slits' or the n_slits form, not both")
        return AngularMask(tuple(tuple(s) for s in spec["slits"]))
    if "n_slits" not in spec or "width_deg" not in spec:
        raise ConfigError("mask.n_slits" if "n_slits" not in spec else "mask.width_deg",
                          "required for the n_slits form")
    return AngularMask.n_slits(spec["n_slits"], spec["width_deg"], spec.get("spacing_deg"),
                               spec.get("start_deg", 0.0))


def _as_list(v):
    return list(v) if isinstance(v, (list, tuple)) else [v]


def _cases(cfg):
    spec = cfg["spectrum"]
    fwhms = _as_list(spec.get("fwhm_l", [None]))
    alphas = _as_list(cfg["phasematch"].get("alpha", [None]))
    if len(alphas) == 1:
        alphas = alphas * len(fwhms)
    if len(fwhms) == 1:
        fwhms = fwhms * len(alphas)
    if len(fwhms) != len(alphas):
        raise ConfigError("phasematch.alpha", "must pair one-to-one with spectrum.fwhm_l")
    return list(zip(fwhms, alphas))


def _spectrum(cfg, fwhm):
    spec = cfg["spectrum"]
    if spec["model"] == "uniform":
        return make_uniform_spectrum(spec["l_max"])
    return make_lorentzian_spectrum(fwhm, spec["l_max"])


def _label(fwhm, index):
    return f"case{index}" if fwhm is None else f"fwhm{fwhm:g}"


def _dphi_grid(scan):
    lo, hi, step = scan["dphi_min_deg"], scan["dphi_max_deg"], scan["dphi_step_deg"]
    n = int(round((hi - lo) / step))
    return lo + step * np.arange(n + 1)


def _figure2(cfg, out: Path):
    mask = build_mask(cfg["mask"], AngularMask.n_slits(4, 7.0))
    grid = _dphi_grid(cfg["scan"])
    noise = cfg["noise"]
    pm = cfg["phasematch"]
    cases = {}
    for idx, (fwhm, alpha) in enumerate(_cases(cfg)):
        label = _label(fwhm, idx)
        spectrum = _spectrum(cfg, fwhm)
        io.write_spectrum_csv(spectrum, out / f"spectrum_{label}.csv")
        fit = analysis.fit_lorentzian(spectrum)
        fourier = analysis.predicted_angle_curve(fit, mask, grid, cfg["spectrum"]["l_max"])
        pure = projection.coincidence_vs_rotation(spectrum, mask, 0, 0, grid)
        io.write_curve_csv(fourier, out / f"angle_fourier_{label}.csv")
        io.write_curve_csv(pure, out / f"angle_projection_{label}.csv")
        result = {
            "fwhm_l": analysis.spectrum_fwhm(spectrum) if cfg["spectrum"]["model"] != "uniform" else None,
            "lorentzian_fit": {"gamma": fit.gamma, "fwhm_l": fit.fwhm_l,
                               "residual_rms": fit.residual_rms},
            "peak_half_width_deg": analysis.central_peak_half_width(fourier, 0.0),
            "peak_half_width_deg_projection": analysis.central_peak_half_width(pure, 0.0),
            "effective_dimension": analysis.effective_dimension(spectrum),
        }
        if noise["peak_counts"]:
            noisy = synthetic.add_background(fourier, noise["background"])
            noisy = synthetic.poissonize_curve(noisy, noise["peak_counts"], noise["seed"], 2 * idx)
            io.write_curve_csv(noisy, out / f"angle_counts_{label}.csv")
            bg = noise["background"] / (1.0 + noise["background"])
            try:
                result["peak_half_width_deg_counts"] = analysis.central_peak_half_width(noisy, bg)
            except InvalidCurve:
                result["peak_half_width_deg_counts"] = None
        if alpha is not None:
            model = PhaseMatchModel(pm["a"], alpha, pm["f"])
            theta = phasematch.opening_angle(model)
            r_max = pm["r_max_factor"] * theta * pm["f"]
            profile = phasematch.synthesize_profile(model, r_max, pm["n_samples"])
            if noise["peak_counts"]:
                profile = synthetic.poissonize_profile(profile, noise["peak_counts"],
                                                       noise["seed"], 2 * idx + 1)
            io.write_profile_csv(profile, out / f"profile_{label}.csv")
            report = phasematch.fit_phasematch(profile, pm["f"])
            result["phasematch"] = {
                "true": io.model_to_dict(model),
                "fit": io.model_to_dict(report.model),
                "fit_converged": report.converged,
                "opening_angle_deg": float(np.rad2deg(theta)),
                "fit_opening_angle_deg": float(np.rad2deg(phasematch.opening_angle(report.model))),
            }
        ref = MEASURED_REFERENCE["figure2"].get(idx)
        if ref is not None:
            result["measured_reference"] = dict(ref, golden=False)
        cases[label] = result
    return cases


def _figure3(cfg, out: Path):
    mask = build_mask(cfg["mask"], concurrence.two_slit_mask())
    if len(mask.slits) != 2:
        raise ConfigError("mask.slits", "figure3 needs a two-slit mask")
    slit1, slit2 = mask.split()
    scan = cfg["scan"]
    l_scan = np.arange(-scan["l_scan_max"], scan["l_scan_max"] + 1)
    noise = cfg["noise"]
    cases = {}
    for idx, (fwhm, _alpha) in enumerate(_cases(cfg)):
        label = _label(fwhm, idx)
        spectrum = _spectrum(cfg, fwhm)
        matrix = concurrence.single_slit_matrix(spectrum, slit1, slit2)
        curve = projection.oam_interference_scan(spectrum, mask, mask, scan["idler_l"], l_scan)
        io.write_curve_csv(curve, out / f"interference_{label}.csv")
        qubit = concurrence.angular_qubit_density_matrix(spectrum, slit1, slit2)
        result = {
            "single_slit_matrix": matrix,
            "visibility": concurrence.visibility(curve),
            "concurrence_wootters": concurrence.wootters_concurrence(qubit.amplitudes),
        }
        if noise["white_noise"]:
            result["visibility_white_noise"] = concurrence.visibility(
                concurrence.add_white_noise(curve, noise["white_noise"]))
        if noise["peak_counts"]:
            noisy = synthetic.poissonize_curve(curve, noise["peak_counts"], noise["seed"], idx)
            io.write_curve_csv(noisy, out / f"interference_counts_{label}.csv")
            result["visibility_counts"] = concurrence.visibility(noisy)
        ref = MEASURED_REFERENCE["figure3"].get(idx)
        if ref is not None:
            result["measured_reference"] = dict(ref, golden=False)
        cases[label] = result
    return cases


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def run_scenario(config: dict, out_dir, timing: bool = False) -> dict:
    """Run one pipeline and write its CSVs, ``summary.json`` and ``manifest.json``.

    Outputs are byte-identical for identical configs. ``timing`` adds the
    wall time to the manifest, which breaks that.
    """
    t0 = time.perf_counter()
    cfg = validate_config(config)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    name = cfg["pipeline"]["name"]
    runner = {"figure2": _figure2, "figure3": _figure3}[name]
    cases = runner(cfg, out)
    summary = {"schema_version": io.SCHEMA_VERSION, "pipeline": name, "cases": cases}
    io.dump_json(summary, out / "summary.json")
    files = sorted(p.name for p in out.iterdir() if p.name != "manifest.json")
    manifest = {
        "schema_version": io.SCHEMA_VERSION,
        "pipeline": name,
        "config": cfg,
        "seed": cfg["noise"]["seed"],
        "versions": {"oamspdc": __version__, "numpy": np.__version__,
                     "scipy": scipy.__version__, "python": platform.python_version()},
        "outputs": {f: _sha256(out / f) for f in files},
    }
    if timing:
        manifest["wall_time_s"] = time.perf_counter() - t0
    io.dump_json(manifest, out / "manifest.json")
    return {"summary": summary, "manifest": manifest, "out_dir": str(out)}


def reproduce(name: str, out_dir, seed=None, timing: bool = False) -> dict:
    if name not in BUILTIN:
        raise ConfigError("pipeline.name", f"unknown figure {name!r}; choose from {PIPELINES}")
    cfg = copy.deepcopy(BUILTIN[name])
    if seed is not None:
        cfg["noise"]["seed"] = int(seed)
    return run_scenario(cfg, out_dir, timing=timing)
