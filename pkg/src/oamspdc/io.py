"""CSV / JSON serialization for curves, profiles, spectra and models.

Floats are written with ``repr`` so every value round-trips exactly.
"""
from __future__ import annotations

import csv
import io as _io
import json
from pathlib import Path

import numpy as np

from .core import (CoincidenceCurve, EtendueBudget, InvalidArgument, OamSpectrum,
                   PhaseMatchModel, RadialProfile)

SCHEMA_VERSION = "1.0"


def _fmt(x) -> str:
    return repr(float(x))


def _write_rows(path, header, rows):
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    Path(path).write_text(buf.getvalue())


def _read_rows(path, required):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise InvalidArgument(f"{path}: empty file")
        missing = [c for c in required if c not in reader.fieldnames]
        if missing:
            raise InvalidArgument(f"{path}: missing column(s) {missing}; header is {reader.fieldnames}")
        return reader.fieldnames, list(reader)


def write_profile_csv(profile: RadialProfile, path) -> None:
    _write_rows(path, ["r_m", "intensity"],
                ([_fmt(r), _fmt(i)] for r, i in zip(profile.r, profile.intensity)))


def read_profile_csv(path) -> RadialProfile:
    _, rows = _read_rows(path, ["r_m", "intensity"])
    return RadialProfile([float(r["r_m"]) for r in rows], [float(r["intensity"]) for r in rows])


def write_curve_csv(curve: CoincidenceCurve, path) -> None:
    """Write ``x,p[,counts]`` plus a ``<name>.json`` sidecar holding the scan label."""
    path = Path(path)
    if curve.counts is None:
        rows = ([_fmt(x), _fmt(p)] for x, p in zip(curve.x, curve.p))
        header = ["x", "p"]
    else:
        rows = ([_fmt(x), _fmt(p), str(int(c))] for x, p, c in zip(curve.x, curve.p, curve.counts))
        header = ["x", "p", "counts"]
    _write_rows(path, header, rows)
    dump_json({"schema_version": SCHEMA_VERSION, "scan_label": curve.scan_label},
              sidecar_path(path))


def sidecar_path(path) -> Path:
    return Path(path).with_suffix(".json")


def read_curve_csv(path, scan_label=None) -> CoincidenceCurve:
    fields, rows = _read_rows(path, ["x", "p"])
    if scan_label is None:
        side = sidecar_path(path)
        if not side.exists():
            raise InvalidArgument(f"{path}: no scan_label given and no sidecar {side}")
        scan_label = json.loads(side.read_text())["scan_label"]
    counts = [int(r["counts"]) for r in rows] if "counts" in fields else None
    return CoincidenceCurve(scan_label, [float(r["x"]) for r in rows],
                            [float(r["p"]) for r in rows], counts)


def write_spectrum_csv(spectrum: OamSpectrum, path) -> None:
    _write_rows(path, ["l", "amplitude_re", "amplitude_im", "weight"],
                ([str(int(l)), _fmt(c.real), _fmt(c.imag), _fmt(w)]
                 for l, c, w in zip(spectrum.ls, spectrum.amplitudes, spectrum.weights)))


def read_spectrum_csv(path) -> OamSpectrum:
    _, rows = _read_rows(path, ["l", "amplitude_re", "amplitude_im"])
    ls = [int(r["l"]) for r in rows]
    if ls != list(range(ls[0], ls[-1] + 1)):
        raise InvalidArgument(f"{path}: l column must be contiguous and increasing")
    amps = np.array([complex(float(r["amplitude_re"]), float(r["amplitude_im"])) for r in rows])
    return OamSpectrum(ls[0], ls[-1], amps)


def model_to_dict(model: PhaseMatchModel) -> dict:
    return {"a": float(model.a), "alpha": float(model.alpha), "f": float(model.f)}


def model_from_dict(d: dict) -> PhaseMatchModel:
    return PhaseMatchModel(a=float(d["a"]), alpha=float(d["alpha"]), f=float(d["f"]))


def budget_to_dict(budget: EtendueBudget) -> dict:
    return {"area": budget.area, "solid_angle": budget.solid_angle,
            "wavelength": budget.wavelength}


def budget_from_dict(d: dict) -> EtendueBudget:
    return EtendueBudget(float(d["area"]), float(d["solid_angle"]), float(d["wavelength"]))


def to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


def dumps_json(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def dump_json(obj, path) -> None:
    Path(path).write_text(dumps_json(obj))
