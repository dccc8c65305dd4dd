"""On-disk formats.

Every dataset is a directory holding ``meta.json`` plus ``data.bin`` with
raw little-endian values in C (row-major) order; complex data is stored
as interleaved (re, im) float64 pairs.  Formats:

* ``gf1``  -- scalar or spectral field on a uniform grid
* ``wrt1`` -- windowed-ray-transform data: u-grid x vset (u-major) or the
  polar perpendicular configuration (``vset.mode == "perp"``)
* ``pss1`` -- polar spectral samples (debugging dump)

PGM export writes an 8-bit image with the linear min-max scaling recorded
in a JSON sidecar, so values remain recoverable.
"""

from __future__ import annotations

import json
import os

import numpy as np

from .errors import ValidationError
from .fields import Grid, PhantomSpec, ScalarField, SpectralField
from .forward import PolarWRT, VSet, WRTData
from .invert_fourier import PolarSpectralSamples
from .windows import WindowSpec

__all__ = [
    "write_gf1",
    "read_gf1",
    "write_wrt1",
    "read_wrt1",
    "write_pss1",
    "read_pss1",
    "write_pgm",
    "phantom_from_json",
    "phantom_to_json",
    "window_from_json",
    "window_to_json",
]

_DTYPES = {"f64": "<f8", "c128": "<c16"}


def _write_dir(path, meta, array):
    os.makedirs(path, exist_ok=True)
    dtype = _DTYPES[meta["dtype"]]
    with open(os.path.join(path, "meta.json"), "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    np.ascontiguousarray(array, dtype=dtype).tofile(os.path.join(path, "data.bin"))


def _read_dir(path, expected_format):
    meta_path = os.path.join(path, "meta.json")
    if not os.path.isfile(meta_path):
        raise ValidationError(f"{path}: not a dataset directory (meta.json missing)")
    with open(meta_path) as fh:
        meta = json.load(fh)
    if meta.get("format") != expected_format:
        raise ValidationError(
            f"{path}: format {meta.get('format')!r}, expected {expected_format!r}"
        )
    if meta.get("dtype") not in _DTYPES:
        raise ValidationError(f"{path}: unsupported dtype {meta.get('dtype')!r}")
    if meta.get("order", "C") != "C":
        raise ValidationError(f"{path}: only C (row-major) order is supported")
    data = np.fromfile(os.path.join(path, "data.bin"), dtype=_DTYPES[meta["dtype"]])
    return meta, data


def _grid_meta(grid):
    return {
        "shape": list(grid.shape),
        "origin": list(grid.origin),
        "spacing": list(grid.spacing),
    }


def _grid_from_meta(m):
    return Grid(tuple(m["shape"]), tuple(m["origin"]), tuple(m["spacing"]))


# ---------------------------------------------------------------------------
# gf1


def write_gf1(path, field):
    spectral = isinstance(field, SpectralField)
    meta = {
        "format": "gf1",
        "kind": "spectral" if spectral else "scalar",
        "n": field.grid.n,
        "dtype": "c128" if spectral else "f64",
        "order": "C",
        **_grid_meta(field.grid),
    }
    _write_dir(path, meta, field.values)


def read_gf1(path):
    meta, data = _read_dir(path, "gf1")
    grid = _grid_from_meta(meta)
    if data.size != grid.size:
        raise ValidationError(f"{path}: payload size does not match the grid")
    values = data.reshape(grid.shape)
    if meta["kind"] == "spectral":
        return SpectralField(grid, values)
    return ScalarField(grid, values.real)


# ---------------------------------------------------------------------------
# wrt1


def window_to_json(w):
    out = {"kind": w.kind}
    if w.sigma is not None:
        out["sigma"] = w.sigma
    if w.radius is not None:
        out["radius"] = w.radius
    return out


def window_from_json(obj):
    try:
        return WindowSpec(obj["kind"], sigma=obj.get("sigma"), radius=obj.get("radius"))
    except KeyError as exc:
        raise ValidationError(f"window spec missing field {exc}")


def phantom_to_json(spec):
    return {"kind": spec.kind, "components": [dict(c) for c in spec.components]}


def phantom_from_json(obj):
    try:
        kind = obj["kind"]
        comps = []
        for c in obj["components"]:
            c = dict(c)
            c["center"] = tuple(c["center"])
            c.setdefault("amplitude", 1.0)
            comps.append(c)
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"phantom spec missing field {exc}")
    try:
        return PhantomSpec(kind, tuple(comps))
    except KeyError as exc:
        raise ValidationError(f"phantom spec missing field {exc}")


def _vset_meta(vset):
    out = {"mode": vset.mode}
    if vset.mode == "polar":
        out["directions"] = np.asarray(vset.directions).tolist()
        out["radii"] = np.asarray(vset.radii).tolist()
    elif vset.mode == "v1-line":
        out["v1"] = np.asarray(vset.v1).tolist()
        out["vprime"] = np.asarray(vset.vprime).tolist()
    else:
        out["vectors"] = np.asarray(vset.vectors).tolist()
    return out


def _vset_from_meta(m):
    from .forward import full_grid_vset, polar_vset, v1_line_vset

    mode = m["mode"]
    if mode == "polar":
        return polar_vset(np.asarray(m["directions"]), np.asarray(m["radii"]))
    if mode == "v1-line":
        return v1_line_vset(np.asarray(m["v1"]), np.asarray(m["vprime"]))
    if mode == "full-grid":
        return VSet("full-grid", np.asarray(m["vectors"]))
    raise ValidationError(f"unknown vset mode {mode!r}")


def write_wrt1(path, data):
    """Write WRTData or PolarWRT (the latter stored as vset mode 'perp')."""
    if isinstance(data, PolarWRT):
        meta = {
            "format": "wrt1",
            "vset": {
                "mode": "perp",
                "rho": np.asarray(data.rho).tolist(),
                "theta": np.asarray(data.theta).tolist(),
            },
            "window": window_to_json(data.window),
            "dtype": "c128" if np.iscomplexobj(data.values) else "f64",
            "order": "C",
        }
        _write_dir(path, meta, data.values)
        return
    meta = {
        "format": "wrt1",
        "u_grid": _grid_meta(data.u_grid),
        "vset": _vset_meta(data.vset),
        "window": window_to_json(data.window),
        "dtype": "c128" if np.iscomplexobj(data.values) else "f64",
        "order": "C",
    }
    _write_dir(path, meta, data.values)


def read_wrt1(path):
    meta, data = _read_dir(path, "wrt1")
    w = window_from_json(meta["window"])
    if meta["vset"]["mode"] == "perp":
        rho = np.asarray(meta["vset"]["rho"], dtype=float)
        theta = np.asarray(meta["vset"]["theta"], dtype=float)
        return PolarWRT(rho, theta, w, data.reshape(rho.size, theta.size))
    grid = _grid_from_meta(meta["u_grid"])
    vset = _vset_from_meta(meta["vset"])
    return WRTData(grid, vset, w, data.reshape(grid.size, len(vset)))


# ---------------------------------------------------------------------------
# pss1


def write_pss1(path, samples):
    meta = {
        "format": "pss1",
        "angles": np.asarray(samples.angles).tolist(),
        "sigma": np.asarray(samples.sigma).tolist(),
        "radii": np.asarray(samples.radii).tolist(),
        "window": window_to_json(samples.window) if samples.window else None,
        "dtype": "c128",
        "order": "C",
    }
    _write_dir(path, meta, samples.values)


def read_pss1(path):
    meta, data = _read_dir(path, "pss1")
    angles = np.asarray(meta["angles"], dtype=float)
    sigma = np.asarray(meta["sigma"], dtype=float)
    radii = np.asarray(meta["radii"], dtype=float)
    w = window_from_json(meta["window"]) if meta.get("window") else None
    return PolarSpectralSamples(
        angles, sigma, radii, data.reshape(angles.size, sigma.size, radii.size), window=w
    )


# ---------------------------------------------------------------------------
# pgm


def write_pgm(path, field, lo=None, hi=None):
    """8-bit PGM of a 2-D field; the linear scaling goes to ``path + '.json'``."""
    vals = np.asarray(field.values, dtype=float)
    if vals.ndim != 2:
        raise ValidationError("PGM export needs a 2-D field")
    lo = float(vals.min()) if lo is None else float(lo)
    hi = float(vals.max()) if hi is None else float(hi)
    span = hi - lo if hi > lo else 1.0
    img = np.clip(np.round((vals - lo) / span * 255.0), 0, 255).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{img.shape[1]} {img.shape[0]}\n255\n".encode())
        fh.write(img.tobytes())
    with open(path + ".json", "w") as fh:
        json.dump({"min": lo, "max": hi, "levels": 256}, fh, indent=2)
        fh.write("\n")
