"""Forward windowed ray transform  P_h f(u, v) = integral f(u + t v) h(t) dt.

Data is computed on a grid of base points u crossed with a parametrized
set of direction/scale vectors v (a VSet), or on the n=2 perpendicular
polar configuration g(rho, theta) = P_h f(rho e(theta), rho e(theta)^perp).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .errors import NumericalError, ValidationError
from .fields import Grid, PhantomSpec, ScalarField, continuous_ft, phantom_spectrum
from .quad import QuadratureParams, gauss_legendre_panels
from .windows import (
    WindowSpec,
    window_eval,
    window_ft,
    window_support_radius,
)

__all__ = [
    "VSet",
    "WRTData",
    "PolarWRT",
    "full_grid_vset",
    "polar_vset",
    "v1_line_vset",
    "windowed_ray_transform",
    "analytic_wrt_gaussian",
    "analytic_wrt_data",
    "wrt_polar_perp",
    "fourier_identity_residual",
]


@dataclass(frozen=True)
class VSet:
    """Parametrized set of v vectors.

    mode 'full-grid':  vectors from an n-dim grid (zero-norm entries rejected)
    mode 'polar':      directions x radii, direction-major ordering
    mode 'v1-line':    v = (v1_k, v'), v' fixed
    """

    mode: str
    vectors: np.ndarray          # (Nv, n)
    directions: np.ndarray | None = None
    radii: np.ndarray | None = None
    v1: np.ndarray | None = None
    vprime: np.ndarray | None = None

    def __post_init__(self):
        vec = np.atleast_2d(np.asarray(self.vectors, dtype=float))
        object.__setattr__(self, "vectors", vec)
        norms = np.linalg.norm(vec, axis=1)
        if np.any(norms == 0.0):
            raise ValidationError("VSet contains v = 0, which is not allowed")

    def __len__(self):
        return self.vectors.shape[0]


def full_grid_vset(grid):
    return VSet("full-grid", grid.points())


def polar_vset(directions, radii):
    """Direction-major polar vset: v[k * Nr + j] = radii[j] * directions[k]."""
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    radii = np.asarray(radii, dtype=float)
    if np.any(radii <= 0):
        raise ValidationError("polar radii must be strictly positive")
    vec = (directions[:, None, :] * radii[None, :, None]).reshape(-1, directions.shape[1])
    return VSet("polar", vec, directions=directions, radii=radii)


def uniform_circle(n_theta, jitter=0.0, seed=0):
    """Uniform unit directions on S^1, optionally jittered (seeded)."""
    offs = np.zeros(n_theta)
    if jitter:
        rng = np.random.default_rng(seed)
        offs = rng.uniform(-jitter, jitter, size=n_theta)
    ang = 2.0 * np.pi * (np.arange(n_theta) + offs) / n_theta
    return np.stack([np.cos(ang), np.sin(ang)], axis=1), ang


def v1_line_vset(v1, vprime):
    v1 = np.asarray(v1, dtype=float)
    vprime = np.atleast_1d(np.asarray(vprime, dtype=float))
    vec = np.concatenate(
        [v1[:, None], np.broadcast_to(vprime, (v1.size, vprime.size))], axis=1
    )
    return VSet("v1-line", vec, v1=v1, vprime=vprime)


@dataclass(frozen=True)
class WRTData:
    u_grid: Grid
    vset: VSet
    window: WindowSpec
    values: np.ndarray  # (u_grid.size, len(vset)); complex iff window complex

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.shape != (self.u_grid.size, len(self.vset)):
            raise ValidationError("WRT values have the wrong shape")
        if not np.all(np.isfinite(vals)):
            raise NumericalError("WRT values contain non-finite entries")
        object.__setattr__(self, "values", vals)

    def slice_values(self, j):
        """Values for v index j, reshaped onto the u grid."""
        return self.values[:, j].reshape(self.u_grid.shape)


@dataclass(frozen=True)
class PolarWRT:
    """g(rho, theta) = P_h f(rho e(theta), rho e(theta)^perp), n = 2 only.

    theta uniform on [0, 2 pi) with power-of-two count (FFT friendly),
    rho log-uniform (Mellin friendly).
    """

    rho: np.ndarray
    theta: np.ndarray
    window: WindowSpec
    values: np.ndarray  # (Nrho, Ntheta)

    def __post_init__(self):
        rho = np.asarray(self.rho, dtype=float)
        theta = np.asarray(self.theta, dtype=float)
        if np.any(rho <= 0):
            raise ValidationError("polar radii must be positive")
        nt = theta.size
        if nt & (nt - 1):
            raise ValidationError("theta count must be a power of two")
        steps = np.diff(np.log(rho))
        if not np.allclose(steps, steps[0], rtol=1e-8):
            raise ValidationError("rho grid must be log-uniform")
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "theta", theta)


def _time_nodes(w, quad, v_norm=None, extra_reach=None, feature=None):
    """Quadrature nodes/weights covering the window support.

    For the analytic-signal kernel the reach is scaled by 1/|v| (the
    kernel decays only like 1/t, accuracy is documented as limited).
    ``feature`` is the narrowest spatial length scale of the source; a
    long v squeezes it into a t-interval of width feature / |v|, and the
    panel count is refined (up to ``quad.max_panels``) to resolve it.
    """
    if w.kind == "analytic-signal":
        reach = 20.0 + (extra_reach or 0.0) / max(v_norm, 1e-6)
        return gauss_legendre_panels(-reach, reach, max(quad.panels, 64), quad.nodes)
    T = window_support_radius(w, tol=1e-14)
    panels = quad.panels
    if quad.max_panels is not None and feature and v_norm:
        delta = feature / v_norm
        needed = int(np.ceil(4.0 * T / (quad.nodes * delta)))
        panels = min(quad.max_panels, max(panels, needed))
    return gauss_legendre_panels(-T, T, panels, quad.nodes)


def _eval_source_along_rays(f, u, v, t):
    """f(u_m + t_q v_m) for a phantom or a sampled field, (M, Q) output."""
    if isinstance(f, PhantomSpec):
        return f.evaluate_along_rays(u, v, t)
    if isinstance(f, ScalarField):
        pts = u[:, None, :] + t[None, :, None] * v[:, None, :]
        idx = f.grid.coord_to_index(pts.reshape(-1, f.grid.n))
        vals = ndimage.map_coordinates(
            f.values, idx.T, order=3, mode="constant", cval=0.0, prefilter=True
        )
        return vals.reshape(u.shape[0], t.size)
    raise ValidationError("source must be a PhantomSpec or ScalarField")


def windowed_ray_transform(f, w, u_grid, vset, quad=QuadratureParams()):
    """P_h f on u_grid x vset by composite Gauss-Legendre quadrature in t."""
    if isinstance(f, PhantomSpec) and f.n != u_grid.n:
        raise ValidationError("phantom/grid dimension mismatch")
    if vset.vectors.shape[1] != u_grid.n:
        raise ValidationError("vset/grid dimension mismatch")
    U = u_grid.points()
    nu, nv = U.shape[0], len(vset)
    complex_win = not w.is_real
    out = np.zeros((nu, nv), dtype=complex if complex_win else float)
    extra = None
    if isinstance(f, PhantomSpec):
        extra = f.support_radius(1e-10)
        feature = f.feature_scale()
    elif isinstance(f, ScalarField):
        extra = 0.5 * float(np.linalg.norm(np.asarray(f.grid.shape) * np.asarray(f.grid.spacing)))
        feature = float(min(f.grid.spacing))
    for j in range(nv):
        v = vset.vectors[j]
        t, wt = _time_nodes(w, quad, v_norm=float(np.linalg.norm(v)),
                            extra_reach=extra, feature=feature)
        h = window_eval(w, t)
        fv = _eval_source_along_rays(f, U, np.broadcast_to(v, U.shape), t)
        out[:, j] = fv @ (h * wt)
    if not np.all(np.isfinite(out)):
        raise NumericalError("windowed ray transform produced non-finite values")
    return WRTData(u_grid, vset, w, out)


def analytic_wrt_gaussian(f, w, u, v):
    """Closed-form P_h f for gaussian phantom(s) and a gaussian window.

    Derived by completing the square in t:
      integral amp exp(-(A + 2 B t + |v|^2 t^2) / (2 s^2)) exp(-t^2 / 2 sw^2) dt
      = amp sqrt(pi / alpha) exp(-A / 2 s^2 + B^2 / (4 alpha s^4)),
      alpha = |v|^2 / (2 s^2) + 1 / (2 sw^2),  A = |u - c|^2,  B = (u - c).v

    v = 0 is legal here (value f(u) integral h).
    """
    if w.kind != "gaussian":
        raise ValidationError("analytic oracle needs a gaussian window")
    if f.kind not in ("gaussian", "gaussian-mixture"):
        raise ValidationError("analytic oracle needs gaussian phantom(s)")
    u = np.atleast_2d(np.asarray(u, dtype=float))
    v = np.atleast_2d(np.asarray(v, dtype=float))
    sw = w.sigma
    out = np.zeros(np.broadcast_shapes(u.shape[:-1], v.shape[:-1]))
    v2 = np.sum(v * v, axis=-1)
    for c in f.components:
        s, amp = c["sigma"], c["amplitude"]
        du = u - np.asarray(c["center"])
        A = np.sum(du * du, axis=-1)
        B = np.sum(du * v, axis=-1)
        alpha = v2 / (2.0 * s**2) + 1.0 / (2.0 * sw**2)
        out = out + amp * np.sqrt(np.pi / alpha) * np.exp(-0.5 * A / s**2 + B**2 / (4.0 * alpha * s**4))
    return out if out.size > 1 else float(out.reshape(-1)[0])


def analytic_wrt_data(f, w, u_grid, vset):
    """WRTData filled from the closed-form gaussian/gaussian result.

    Useful wherever exact transform data is needed without quadrature cost
    (calibration, geometry studies); same restrictions as
    :func:`analytic_wrt_gaussian`.
    """
    U = u_grid.points()
    vals = np.empty((U.shape[0], len(vset)))
    for j in range(len(vset)):
        V = np.broadcast_to(vset.vectors[j], U.shape)
        vals[:, j] = analytic_wrt_gaussian(f, w, U, V)
    return WRTData(u_grid, vset, w, vals)


def wrt_polar_perp(f, w, rho, theta, quad=QuadratureParams()):
    """g(rho, theta) = P_h f(u, u^perp) with u = rho (cos t, sin t)."""
    rho = np.asarray(rho, dtype=float)
    theta = np.asarray(theta, dtype=float)
    if np.any(rho <= 0):
        raise ValidationError("rho must be strictly positive")
    if isinstance(f, PhantomSpec) and f.n != 2:
        raise ValidationError("perpendicular polar transform is n=2 only")
    ct, st = np.cos(theta), np.sin(theta)
    # paired (rho, theta) points: u = rho e(theta), v = rho e(theta)^perp
    U = np.stack(
        [np.multiply.outer(rho, ct).ravel(), np.multiply.outer(rho, st).ravel()], axis=1
    )
    V = np.stack(
        [np.multiply.outer(rho, -st).ravel(), np.multiply.outer(rho, ct).ravel()], axis=1
    )
    complex_win = not w.is_real
    vals = np.zeros(U.shape[0], dtype=complex if complex_win else float)
    # |v| = rho varies across samples; chunk rows with similar reach
    chunk = 8192
    feature = f.feature_scale() if isinstance(f, PhantomSpec) else None
    for lo in range(0, U.shape[0], chunk):
        hi = min(lo + chunk, U.shape[0])
        norms = np.linalg.norm(V[lo:hi], axis=1)
        # shortest vector controls the analytic-signal reach, longest the
        # panel refinement for real windows
        vn = float(np.min(norms)) if w.kind == "analytic-signal" else float(np.max(norms))
        extra = f.support_radius(1e-10) if isinstance(f, PhantomSpec) else None
        t, wt = _time_nodes(w, quad, v_norm=vn, extra_reach=extra, feature=feature)
        h = window_eval(w, t)
        fv = _eval_source_along_rays(f, U[lo:hi], V[lo:hi], t)
        vals[lo:hi] = fv @ (h * wt)
    return PolarWRT(rho, theta, w, vals.reshape(rho.size, theta.size))


def fourier_identity_residual(data, f_spec, w=None, band=None):
    """Residual of FT_u(P_h f)(xi, v) = fhat(xi) hhat(-xi.v).

    Returns max over sampled (xi, v) of |lhs - rhs| / max |fhat|.
    ``band``: optional cap on |xi| (defaults to the full frequency grid).
    """
    w = w or data.window
    if data.vset.mode not in ("full-grid", "polar"):
        raise ValidationError("identity check needs a full-grid or polar vset")
    fgrid = data.u_grid.frequency_grid()
    Xi = fgrid.points()
    fhat = phantom_spectrum(f_spec, Xi)
    scale = np.max(np.abs(fhat))
    mask = np.ones(Xi.shape[0], dtype=bool)
    if band is not None:
        mask = np.linalg.norm(Xi, axis=1) <= band
    worst = 0.0
    for j in range(len(data.vset)):
        v = data.vset.vectors[j]
        lhs = continuous_ft(
            ScalarField(data.u_grid, data.slice_values(j)), warn_boundary=False
        ).values.ravel()
        rhs = fhat * window_ft(w, -(Xi @ v))
        worst = max(worst, float(np.max(np.abs(lhs - rhs)[mask]) / scale))
    return worst
