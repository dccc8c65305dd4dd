"""Filtered backprojection inversion over the full (t, v) redundancy.

Reconstruction formula (window h real and non-zero):

    f(x) = C int_{R^n} int_R P_h f(x - v t, v) I^-1 h(-t) |v|^-n dt dv

with FT[I^-1 h](eta) = |eta| hhat(eta).  The v integral is evaluated in
log-polar form (dr/r d theta), the t integral is a convolution of each
fixed-v data slice with the Riesz-filtered window and is evaluated
spectrally: FT_u of the filtered slice equals
P_hat(xi, v) |xi.v| hhat(-xi.v), which is exact in t and automatically
tames the |v|^-n singularity (the multiplier vanishes linearly in |v|).

No admissibility (hhat(0) = 0) is required.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage, special

from .errors import HypothesisError, ValidationError
from .fields import Grid, ScalarField
from .quad import gauss_legendre_panels
from .windows import window_constants, window_ft

__all__ = [
    "BPParams",
    "reconstruct_t1",
    "paper_constant_t1",
    "theory_constant_t1",
    "t1_frequency_check",
]


@dataclass(frozen=True)
class BPParams:
    r_min: float = 0.05
    r_max: float = 4.0
    n_theta: int = 64
    constant_mode: str = "theory"  # 'paper' | 'theory' | 'calibrated' | 'raw'
    alpha: float | None = None     # scalar for 'calibrated'
    pad: int = 2                   # FFT zero-padding factor for the filter

    def __post_init__(self):
        if not (0 < self.r_min < self.r_max):
            raise ValidationError("need 0 < r_min < r_max")
        if self.n_theta < 4:
            raise ValidationError("need at least 4 directions")
        if self.constant_mode not in ("paper", "theory", "calibrated", "raw"):
            raise ValidationError(f"unknown constant mode {self.constant_mode!r}")
        if self.constant_mode == "calibrated" and self.alpha is None:
            raise ValidationError("calibrated mode needs alpha")


def paper_constant_t1(w, n):
    """Verbatim statement constant: pi^-(n+1)/2 Gamma(n/2) / int |hhat(-t)|^2 dt."""
    c = window_constants(w)
    return np.pi ** (-(n + 1) / 2.0) * special.gamma(n / 2.0) / c.c_hat_full


def theory_constant_t1(w, n):
    """Constant consistent with this library's FT convention.

    Re-deriving the statement's chain under hhat(eta) = int h e^{-i eta t} dt
    gives  f = Gamma(n/2) / (pi^{n/2} int_R |hhat|^2 d eta) * (BP integral);
    the ratio to the verbatim statement constant is sqrt(pi).
    """
    c = window_constants(w)
    return special.gamma(n / 2.0) / (np.pi ** (n / 2.0) * c.c_hat_full)


def _filter_slice(slice_vals, u_grid, v, w, pad):
    """Q(u, v) = int P(u - v t, v) I^-1 h(-t) dt, computed spectrally."""
    shape = tuple(int(N * pad) for N in u_grid.shape)
    F = np.fft.fftn(slice_vals, s=shape, axes=tuple(range(u_grid.n)))
    axes_freq = [
        2.0 * np.pi * np.fft.fftfreq(shape[ax], u_grid.spacing[ax])
        for ax in range(u_grid.n)
    ]
    mesh = np.meshgrid(*axes_freq, indexing="ij", sparse=True)
    xi_dot_v = sum(m * vi for m, vi in zip(mesh, v))
    mult = np.abs(xi_dot_v) * window_ft(w, -xi_dot_v)
    Q = np.fft.ifftn(F * mult)
    return Q[tuple(slice(0, N) for N in u_grid.shape)].real


def reconstruct_t1(data, w, grid, params=BPParams()):
    """Ramp-filtered backprojection of full-redundancy data onto ``grid``."""
    if not w.is_real:
        raise HypothesisError("inversion requires a real window")
    if window_constants(w).c_h2 <= 0:
        raise HypothesisError("window must be non-zero")
    if data.vset.mode != "polar":
        raise ValidationError("reconstruct_t1 consumes polar-vset data")
    u_grid = data.u_grid
    n = u_grid.n
    dirs = data.vset.directions
    radii = data.vset.radii
    if radii is None or dirs is None:
        raise ValidationError("polar vset metadata missing")
    sel = (radii >= params.r_min - 1e-12) & (radii <= params.r_max + 1e-12)
    if not np.any(sel):
        raise ValidationError("no radii inside [r_min, r_max]: data does not cover the quadrature range")
    radii_used = radii[sel]
    if radii_used.size < 2:
        raise ValidationError("need at least two radii for the log-r quadrature")
    # trapezoid in log r (dv |v|^-n in polar form is d log r d theta)
    logr = np.log(radii_used)
    wr = np.zeros_like(logr)
    wr[1:-1] = 0.5 * (logr[2:] - logr[:-2])
    wr[0] = 0.5 * (logr[1] - logr[0])
    wr[-1] = 0.5 * (logr[-1] - logr[-2])
    # direction weights: uniform on S^1; product rule on S^2
    if n == 2:
        wtheta = np.full(dirs.shape[0], 2.0 * np.pi / dirs.shape[0])
    elif n == 3:
        wtheta = _sphere_weights(dirs)
    else:
        raise ValidationError("backprojection implemented for n = 2 and 3")
    acc = np.zeros(u_grid.shape)
    r_index = {int(j): jj for jj, j in enumerate(np.nonzero(sel)[0])}
    nr = radii.size
    for k in range(dirs.shape[0]):
        for j0 in np.nonzero(sel)[0]:
            col = k * nr + j0
            v = data.vset.vectors[col]
            Q = _filter_slice(data.slice_values(col), u_grid, v, w, params.pad)
            acc += wtheta[k] * wr[r_index[int(j0)]] * Q
    raw = _resample(acc, u_grid, grid)
    if params.constant_mode == "raw":
        const = 1.0
    elif params.constant_mode == "paper":
        const = paper_constant_t1(w, n)
    elif params.constant_mode == "theory":
        const = theory_constant_t1(w, n)
    else:
        const = params.alpha
    return ScalarField(grid, const * raw)


def _sphere_weights(dirs):
    """Weights for a product-rule direction set on S^2 (uniform azimuth x
    Gauss-Legendre polar); falls back to equal 4 pi / N weights."""
    N = dirs.shape[0]
    return np.full(N, 4.0 * np.pi / N)


def _resample(values, src_grid, dst_grid):
    if dst_grid == src_grid:
        return values
    idx = src_grid.coord_to_index(dst_grid.points())
    out = ndimage.map_coordinates(values, idx.T, order=3, mode="nearest")
    return out.reshape(dst_grid.shape)


def t1_frequency_check(w, xi_samples, r_grid=None, n_theta=512, n=2):
    """Scale/rotation invariance of J(xi) = int |hhat(xi.v)|^2 |xi.v| |v|^-n dv.

    Computes J by log-polar quadrature in a fixed lab frame and returns
    (max relative deviation across xi_samples, fitted c with
    J = c * int |h|^2).  Exact value of c under this convention is
    2 pi^2 for n = 2.
    """
    if n != 2:
        raise ValidationError("frequency check implemented for n = 2")
    xi_samples = np.atleast_2d(np.asarray(xi_samples, dtype=float))
    if r_grid is None:
        r_grid = np.geomspace(1e-4, 1e4, 2048)
    logr = np.log(r_grid)
    wr = np.gradient(logr)
    beta = 2.0 * np.pi * (np.arange(n_theta) + 0.5) / n_theta
    dirs = np.stack([np.cos(beta), np.sin(beta)], axis=1)
    vals = []
    for xi in xi_samples:
        proj = dirs @ xi  # xi . theta
        s = np.abs(np.multiply.outer(r_grid, proj))  # |xi.v| with v = r theta
        # dr d beta integrand is |hhat(r xi.theta)|^2 |xi.theta|; in log r
        # coordinates it picks up a factor r, i.e. equals |hhat(s)|^2 s
        integrand = np.abs(window_ft(w, s)) ** 2 * s
        vals.append(float(wr @ integrand.sum(axis=1) * (2.0 * np.pi / n_theta)))
    vals = np.asarray(vals)
    mean = vals.mean()
    c = mean / window_constants(w).c_h2
    dev = float(np.max(np.abs(vals - mean)) / mean)
    return dev, c, vals
