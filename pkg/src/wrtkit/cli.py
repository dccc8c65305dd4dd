"""Command line interface.

Subcommands: phantom, forward, invert, compare, calibrate, selftest.
Exit codes: 0 success, 1 usage or validation problem, 2 numerical failure
or violated method hypothesis.  ``--threads`` (or the WRTKIT_THREADS
environment variable) caps the BLAS/FFT thread pools when the optional
``threadpoolctl`` package is available; 0 means auto.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import io as wio
from . import windows as windows_mod
from .calibrate import calibrate_constant, default_calibration_phantoms
from .errors import HypothesisError, NumericalError, ValidationError, WrtError
from .fields import (
    ScalarField,
    continuous_ft,
    continuous_ift,
    make_grid,
    rel_l2_error,
    sample_phantom,
)
from .forward import (
    PolarWRT,
    analytic_wrt_gaussian,
    polar_vset,
    uniform_circle,
    v1_line_vset,
    windowed_ray_transform,
    wrt_polar_perp,
)
from .invert_bp import BPParams, reconstruct_t1, t1_frequency_check
from .invert_fourier import extract_polar_spectrum, reconstruct_t2
from .invert_mellin import (
    MellinParams,
    RegParams,
    circular_decompose,
    mellin_transform,
    reconstruct_mellin,
)
from .invert_slice import SliceDataset, SliceParams, reconstruct_slice, slice_extract
from .quad import QuadratureParams
from .windows import WindowSpec, window_constants, window_ft, window_ft_cutoff

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the contract reserves 2 for
    # numerical failures, so remap usage problems to 1
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ValidationError(message)


def parse_window(text):
    """'gaussian:1.0' | 'hermite1:0.8' | 'bump:2.0' | 'analytic-signal'."""
    kind, _, param = text.partition(":")
    if kind == "analytic-signal":
        return WindowSpec(kind)
    if not param:
        raise ValidationError(f"window {kind!r} needs a parameter, e.g. {kind}:1.0")
    try:
        value = float(param)
    except ValueError:
        raise ValidationError(f"bad window parameter {param!r}")
    if kind == "bump":
        return WindowSpec(kind, radius=value)
    return WindowSpec(kind, sigma=value)


def _resolve_threads(args):
    n = args.threads
    if n is None:
        env = os.environ.get("WRTKIT_THREADS", "").strip()
        if env:
            try:
                n = int(env)
            except ValueError:
                raise ValidationError(f"WRTKIT_THREADS={env!r} is not an integer")
    if n in (None, 0):
        return None
    if n < 0:
        raise ValidationError("thread count must be >= 0")
    try:
        import threadpoolctl

        threadpoolctl.threadpool_limits(limits=n)
    except ImportError:
        pass
    return n


def _parse_center(text, n=2):
    parts = [p for p in text.split(",") if p]
    if len(parts) == 1:
        parts = parts * n
    if len(parts) != n:
        raise ValidationError(f"center needs {n} comma-separated values")
    return tuple(float(p) for p in parts)


def _load_phantom(path):
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read phantom spec: {exc}")
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed phantom JSON ({path}): {exc}")
    return wio.phantom_from_json(obj)


def _out_grid(args, n=2):
    return make_grid(n, args.shape, args.extent, _parse_center(args.center, n))


def _report(args, payload, text_lines):
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


# ---------------------------------------------------------------------------
# subcommands


def cmd_phantom(args):
    spec = _load_phantom(args.spec)
    grid = _out_grid(args, spec.n)
    field = sample_phantom(spec, grid)
    wio.write_gf1(args.out, field)
    _report(
        args,
        {"out": args.out, "shape": list(grid.shape), "spacing": list(grid.spacing)},
        [f"wrote {args.out}: shape {grid.shape}, spacing {grid.spacing}"],
    )
    return EXIT_OK


def _forward_source(args):
    if args.phantom:
        return _load_phantom(args.phantom)
    if args.infile:
        field = wio.read_gf1(args.infile)
        if not isinstance(field, ScalarField):
            raise ValidationError("forward input must be a scalar gf1 field")
        return field
    raise ValidationError("forward needs --phantom or --in")


def cmd_forward(args):
    src = _forward_source(args)
    w = parse_window(args.window)
    quad = QuadratureParams(panels=args.quad_panels)
    if args.vmode == "perp":
        rho = np.geomspace(args.rho_min, args.rho_max, args.nrho)
        theta = 2.0 * np.pi * np.arange(args.ntheta) / args.ntheta
        data = wrt_polar_perp(src, w, rho, theta, quad)
        wio.write_wrt1(args.out, data)
        _report(args, {"out": args.out, "shape": list(data.values.shape)},
                [f"wrote {args.out}: perp data {data.values.shape}"])
        return EXIT_OK
    grid = _out_grid(args, 2)
    if args.vmode == "polar":
        dirs, _ = uniform_circle(args.ndirs, jitter=args.jitter, seed=args.seed)
        vset = polar_vset(dirs, np.geomspace(args.rmin, args.rmax, args.nr))
    elif args.vmode == "v1-line":
        k = np.arange(-args.nv1 // 2, args.nv1 // 2)
        v1 = (k + 0.5) * (2.0 * args.v1max / args.nv1)
        vset = v1_line_vset(v1, [args.vprime])
    else:
        raise ValidationError(f"unknown vmode {args.vmode!r}")
    data = windowed_ray_transform(src, w, grid, vset, quad)
    wio.write_wrt1(args.out, data)
    lines = [f"wrote {args.out}: {data.values.shape[0]}x{data.values.shape[1]} values"]
    payload = {"out": args.out, "shape": list(data.values.shape)}
    if args.oracle:
        if not (
            getattr(src, "kind", None) in ("gaussian", "gaussian-mixture")
            and w.kind == "gaussian"
        ):
            raise ValidationError("--oracle needs a gaussian phantom and gaussian window")
        U = grid.points()
        dev = 0.0
        for j in range(len(vset)):
            V = np.broadcast_to(vset.vectors[j], U.shape)
            dev = max(dev, float(np.max(np.abs(
                data.values[:, j] - analytic_wrt_gaussian(src, w, U, V)))))
        scale = float(np.max(np.abs(data.values))) or 1.0
        payload["oracle_max_deviation"] = dev / scale
        lines.append(f"oracle max relative deviation: {dev / scale:.3e}")
    _report(args, payload, lines)
    return EXIT_OK


def cmd_invert(args):
    data = wio.read_wrt1(args.infile)
    w = parse_window(args.window) if args.window else data.window
    grid = _out_grid(args, 2)
    if args.method == "t1":
        if isinstance(data, PolarWRT):
            raise ValidationError("t1 consumes polar-vset data, not perp data")
        params = BPParams(
            r_min=args.rmin, r_max=args.rmax,
            n_theta=max(4, 0 if data.vset.directions is None else data.vset.directions.shape[0]),
            constant_mode=args.constant_mode, alpha=args.alpha,
        )
        rec = reconstruct_t1(data, w, grid, params)
        extra = [f"constant mode: {args.constant_mode}"]
    elif args.method == "t2":
        if isinstance(data, PolarWRT):
            raise ValidationError("t2 consumes polar-vset data, not perp data")
        nyq = np.pi / max(data.u_grid.spacing)
        sigma = np.linspace(0.0, min(args.sigma_max, 0.95 * nyq), args.nsigma)
        samples = extract_polar_spectrum(data, sigma)
        if args.dump_pss:
            wio.write_pss1(args.dump_pss, samples)
        rec = reconstruct_t2(samples, w, grid, constant_mode=args.constant_mode,
                             alpha=args.alpha)
        extra = [f"constant mode: {args.constant_mode}"]
    elif args.method == "slice":
        if isinstance(data, PolarWRT) or data.vset.mode != "v1-line":
            raise ValidationError("slice consumes v1-line data")
        u1 = data.u_grid.axis_coords(0)
        u2 = data.u_grid.axis_coords(1)
        vals = data.values.reshape(u1.size, u2.size, data.vset.v1.size)
        ds = SliceDataset(u1, u2, data.vset.v1, float(data.vset.vprime[0]), vals,
                          w, apodization=args.apodize)
        spec = slice_extract(ds, SliceParams(a=args.slice_a))
        rec = reconstruct_slice(spec, grid)
        extra = [f"apodization: {args.apodize}, V = {ds.V:g}"]
    elif args.method == "mellin":
        if not isinstance(data, PolarWRT):
            raise ValidationError("mellin consumes perp (polar) data")
        params = MellinParams(t=args.mellin_t, T=args.mellin_T,
                              reg=RegParams(lam=args.reg_lambda))
        rec = reconstruct_mellin(data, w, args.lmax, grid, params)
        extra = [f"L = {args.lmax}, t = {args.mellin_t}, T = {args.mellin_T}"]
    else:
        raise ValidationError(f"unknown method {args.method!r}")
    wio.write_gf1(args.out, rec)
    _report(args, {"out": args.out, "method": args.method},
            [f"wrote {args.out} ({args.method})"] + extra)
    return EXIT_OK


def cmd_compare(args):
    a = wio.read_gf1(args.a)
    b = wio.read_gf1(args.b)
    if a.grid != b.grid:
        raise ValidationError("fields live on different grids")
    err = rel_l2_error(a, b)
    maxabs = float(np.max(np.abs(a.values - b.values)))
    if args.pgm:
        wio.write_pgm(args.pgm, ScalarField(a.grid, np.abs(a.values - b.values)))
    _report(args, {"rel_l2": err, "max_abs": maxabs},
            [f"rel-L2: {err:.6e}", f"max-abs: {maxabs:.6e}"])
    return EXIT_OK


def cmd_calibrate(args):
    w = parse_window(args.window)
    if args.phantoms:
        phantoms = [_load_phantom(p) for p in args.phantoms]
    else:
        phantoms = default_calibration_phantoms()
    report = calibrate_constant(args.method, w, phantoms, fast=args.fast)
    _report(args, report.to_json(), [
        f"method: {report.method}",
        f"fitted alpha: {report.alpha:.8e}  (CV {report.cv:.2%})",
        f"stated constant: {report.paper_constant:.8e}",
        f"ratio fitted/stated: {report.ratio:.6f}",
    ])
    return EXIT_OK


def _selftest_checks():
    from .fields import gaussian_phantom

    checks = []

    def check(name):
        def deco(fn):
            checks.append((name, fn))
            return fn
        return deco

    @check("grid coordinate roundtrip")
    def _grid():
        g = make_grid(2, 32, 10.0, (0.5, -0.25))
        idx = np.array([3.0, 17.0])
        assert np.allclose(g.coord_to_index(g.index_to_coord(idx)), idx, atol=1e-12)

    @check("fourier roundtrip and parseval")
    def _ft():
        g = make_grid(2, 64, 20.0)
        f = sample_phantom(gaussian_phantom((0.3, -0.2), 1.0), g)
        F = continuous_ft(f)
        back = continuous_ift(F, out_grid=g)
        assert rel_l2_error(back, f) < 1e-9
        lhs = np.sum(np.abs(f.values) ** 2) * g.cell_volume
        rhs = np.sum(np.abs(F.values) ** 2) * F.grid.cell_volume / (2 * np.pi) ** 2
        assert abs(lhs - rhs) < 1e-8 * lhs

    @check("forward transform matches the analytic gaussian result")
    def _fwd():
        spec = gaussian_phantom((0.5, 0.0), 1.0)
        w = WindowSpec("gaussian", sigma=1.0)
        U = np.array([[0.0, 0.0], [1.0, -0.5]])
        V = np.array([[1.0, 0.5], [0.3, -2.0]])
        from .forward import _eval_source_along_rays, _time_nodes
        t, wt = _time_nodes(w, QuadratureParams(panels=8))
        h = windows_mod.window_eval(w, t)
        got = _eval_source_along_rays(spec, U, V, t) @ (h * wt)
        want = analytic_wrt_gaussian(spec, w, U, V)
        assert np.max(np.abs(got - want)) < 1e-10

    @check("window transform constants match direct quadrature")
    def _wc():
        for w in (WindowSpec("gaussian", sigma=1.0), WindowSpec("hermite1", sigma=1.0)):
            c = window_constants(w)
            eta = np.linspace(0.0, window_ft_cutoff(w), 4001)
            val = np.trapezoid(np.abs(window_ft(w, eta)) ** 2, eta)
            assert abs(val - c.c_hat_half) < 1e-6 * c.c_hat_half

    @check("backprojection filter is scale and rotation invariant")
    def _freq():
        w = WindowSpec("gaussian", sigma=1.0)
        xi = np.array([[1.0, 0.0], [0.0, 2.5], [1.2, -0.7]])
        dev, c, _ = t1_frequency_check(w, xi, n_theta=128)
        assert dev < 1e-3
        assert abs(c - 2.0 * np.pi**2) < 1e-3 * 2.0 * np.pi**2

    @check("mellin shift property")
    def _shift():
        r = np.geomspace(1e-6, 100.0, 1024)
        f = np.exp(-4.0 * np.log(r) ** 2)
        y = np.linspace(-5, 5, 21)
        a = mellin_transform(r, r * f, 1.5, y)
        b = mellin_transform(r, f, 2.5, y)
        assert np.max(np.abs(a.values - b.values)) < 1e-8 * np.max(np.abs(b.values))

    @check("angular harmonics of cos(theta)")
    def _harm():
        theta = 2.0 * np.pi * np.arange(32) / 32
        rho = np.geomspace(0.5, 2.0, 8)
        vals = np.broadcast_to(np.cos(theta), (8, 32)).copy()
        g = PolarWRT(rho, theta, WindowSpec("bump", radius=1.0), vals)
        series = circular_decompose(g, 2)
        assert np.allclose(series.coefficient(1), 0.5, atol=1e-12)
        assert np.allclose(series.coefficient(0), 0.0, atol=1e-12)

    @check("spectral inversion recovers a gaussian")
    def _t2():
        spec = gaussian_phantom((0.0, 0.0), 1.2)
        w = WindowSpec("gaussian", sigma=1.0)
        grid = make_grid(2, 48, 30.0)
        dirs, _ = uniform_circle(48)
        data = windowed_ray_transform(
            spec, w, grid, polar_vset(dirs, np.geomspace(0.05, 3.0, 10)),
            QuadratureParams(panels=8))
        samples = extract_polar_spectrum(data, np.linspace(0.0, 4.0, 33))
        out = make_grid(2, 32, 12.0)
        rec = reconstruct_t2(samples, w, out)
        assert rel_l2_error(rec, sample_phantom(spec, out)) < 0.05

    return checks


def cmd_selftest(args):
    if args.inject_fault:
        windows_mod._FAULT_SCALE = 1.5
        windows_mod._window_constants_cached.cache_clear()
    failures = 0
    rows = []
    try:
        for name, fn in _selftest_checks():
            t0 = time.time()
            try:
                fn()
                status = "pass"
            except Exception as exc:  # report, keep going
                status = f"FAIL ({type(exc).__name__}: {exc})"
                failures += 1
            rows.append((name, status, time.time() - t0))
    finally:
        if args.inject_fault:
            windows_mod._FAULT_SCALE = 1.0
            windows_mod._window_constants_cached.cache_clear()
    width = max(len(r[0]) for r in rows)
    for name, status, dt in rows:
        print(f"{name:<{width}}  {status}  [{dt:.2f}s]")
    if failures:
        print(f"{failures} check(s) failed")
        return EXIT_NUMERIC
    print("all checks passed")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser():
    p = _Parser(prog="wrtkit", description="windowed ray transform toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def shared(sp, grid=True):
        sp.add_argument("--out", default="out")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--threads", type=int, default=None)
        sp.add_argument("--json", action="store_true")
        if grid:
            sp.add_argument("--shape", type=int, default=64)
            sp.add_argument("--extent", type=float, default=20.0)
            sp.add_argument("--center", default="0")

    sp = sub.add_parser("phantom", help="sample a phantom spec onto a grid")
    sp.add_argument("--spec", required=True)
    shared(sp)
    sp.set_defaults(fn=cmd_phantom)

    sp = sub.add_parser("forward", help="simulate the windowed ray transform")
    sp.add_argument("--phantom")
    sp.add_argument("--in", dest="infile")
    sp.add_argument("--window", required=True)
    sp.add_argument("--vmode", default="polar", choices=["polar", "v1-line", "perp"])
    sp.add_argument("--ndirs", type=int, default=32)
    sp.add_argument("--rmin", type=float, default=0.05)
    sp.add_argument("--rmax", type=float, default=4.0)
    sp.add_argument("--nr", type=int, default=16)
    sp.add_argument("--jitter", type=float, default=0.0)
    sp.add_argument("--v1max", type=float, default=8.0)
    sp.add_argument("--nv1", type=int, default=32)
    sp.add_argument("--vprime", type=float, default=0.0)
    sp.add_argument("--rho-min", type=float, default=1e-6)
    sp.add_argument("--rho-max", type=float, default=8.0)
    sp.add_argument("--nrho", type=int, default=256)
    sp.add_argument("--ntheta", type=int, default=64)
    sp.add_argument("--quad-panels", type=int, default=16)
    sp.add_argument("--oracle", action="store_true")
    shared(sp)
    sp.set_defaults(fn=cmd_forward)

    sp = sub.add_parser("invert", help="reconstruct a field from transform data")
    sp.add_argument("--method", required=True, choices=["t1", "t2", "slice", "mellin"])
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--window")
    sp.add_argument("--constant-mode", default="theory",
                    choices=["paper", "theory", "calibrated", "raw"])
    sp.add_argument("--alpha", type=float, default=None)
    sp.add_argument("--rmin", type=float, default=0.02)
    sp.add_argument("--rmax", type=float, default=8.0)
    sp.add_argument("--sigma-max", type=float, default=6.0)
    sp.add_argument("--nsigma", type=int, default=64)
    sp.add_argument("--dump-pss", default=None)
    sp.add_argument("--apodize", default="hann")
    sp.add_argument("--slice-a", type=float, default=0.0)
    sp.add_argument("--lmax", type=int, default=16)
    sp.add_argument("--mellin-t", type=float, default=2.0)
    sp.add_argument("--mellin-T", type=float, default=40.0)
    sp.add_argument("--reg-lambda", type=float, default=None)
    shared(sp)
    sp.set_defaults(fn=cmd_invert)

    sp = sub.add_parser("compare", help="compare two gf1 fields")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--pgm", default=None)
    shared(sp, grid=False)
    sp.set_defaults(fn=cmd_compare)

    sp = sub.add_parser("calibrate", help="fit the inversion constant empirically")
    sp.add_argument("--method", required=True, choices=["t1", "t2"])
    sp.add_argument("--window", required=True)
    sp.add_argument("--phantoms", nargs="*", default=None)
    sp.add_argument("--fast", action="store_true")
    shared(sp, grid=False)
    sp.set_defaults(fn=cmd_calibrate)

    sp = sub.add_parser("selftest", help="run the reduced property suite")
    sp.add_argument("--inject-fault", action="store_true",
                    help="corrupt an internal constant to exercise failure paths")
    shared(sp, grid=False)
    sp.set_defaults(fn=cmd_selftest)

    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _resolve_threads(args)
        np.random.seed(args.seed if args.seed is not None else 0)
        return args.fn(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (HypothesisError, NumericalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except WrtError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
