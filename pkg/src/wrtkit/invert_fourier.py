"""Polar frequency-domain inversion along v parallel to xi.

Uses the factorization P_hat(sigma theta, r theta) = fhat(sigma theta)
hhat(-r sigma): dividing the r-integral of data times hhat(r sigma) by
the matching window integral recovers fhat on polar rays, and a direct
polar sum synthesizes f.

The per-sigma normalization uses the *same* trapezoid rule on |hhat(r
sigma)|^2 as the data integral, so the finite r coverage cancels instead
of acting as a high-pass; as the r grid grows this reduces to the
analytic constant |sigma|^-1 int_0^inf |hhat|^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import HypothesisError, NumericalError, ValidationError
from .fields import ScalarField, continuous_ft
from .windows import window_constants, window_ft

__all__ = [
    "PolarSpectralSamples",
    "extract_polar_spectrum",
    "reconstruct_t2",
    "paper_constant_t2",
]


@dataclass(frozen=True)
class PolarSpectralSamples:
    """P_hat(sigma theta_j, r_m theta_j) on directions x sigma x radii."""

    angles: np.ndarray        # (Ntheta,)
    sigma: np.ndarray         # (Nsigma,), >= 0
    radii: np.ndarray         # (Nr,), > 0
    values: np.ndarray        # (Ntheta, Nsigma, Nr) complex
    window: object = None

    def __post_init__(self):
        if np.any(np.asarray(self.radii) <= 0):
            raise ValidationError("window radii must be positive")
        if np.any(np.asarray(self.sigma) < 0):
            raise ValidationError("sigma grid must be non-negative")


def extract_polar_spectrum(data, sigma, pad=2):
    """FT each fixed-v slice over u, then read the ray xi = sigma theta_j.

    ``data`` must carry a polar vset; returns PolarSpectralSamples over the
    data's own direction/radius sets.  The slice spectrum is zero-padded by
    ``pad`` and sampled along the ray with cubic splines; sigma beyond the
    u-grid Nyquist band is rejected.
    """
    if data.vset.mode != "polar":
        raise ValidationError("polar-vset data required")
    sigma = np.asarray(sigma, dtype=float)
    fgrid = data.u_grid.frequency_grid()
    nyq = min(
        abs(fgrid.axis_coords(ax)[0]) for ax in range(fgrid.n)
    )
    if np.any(sigma > nyq + 1e-12):
        raise ValidationError(f"sigma grid exceeds the Nyquist band ({nyq:.3g})")
    dirs = data.vset.directions
    radii = data.vset.radii
    angles = np.arctan2(dirs[:, 1], dirs[:, 0]) if dirs.shape[1] == 2 else None
    nt, nr = dirs.shape[0], radii.size
    out = np.empty((nt, sigma.size, nr), dtype=complex)
    for k in range(nt):
        ray = np.multiply.outer(sigma, dirs[k])  # (Nsigma, n)
        for m in range(nr):
            col = k * nr + m
            spec = continuous_ft(
                ScalarField(data.u_grid, data.slice_values(col)),
                pad=pad, warn_boundary=False,
            )
            idx = spec.grid.coord_to_index(ray).T
            out[k, :, m] = ndimage.map_coordinates(
                spec.values.real, idx, order=3, mode="nearest"
            ) + 1j * ndimage.map_coordinates(
                spec.values.imag, idx, order=3, mode="nearest"
            )
    return PolarSpectralSamples(angles, sigma, radii, out, window=data.window)


def paper_constant_t2(w, n):
    """Verbatim statement constant 2^-n-1 pi^-n / int |h|^2 dt."""
    c = window_constants(w)
    return 2.0 ** (-(n + 1)) * np.pi ** (-n) / c.c_h2


def _r_weights(radii):
    wr = np.zeros_like(radii)
    if radii.size < 2:
        raise ValidationError("need at least two radii for the r integral")
    wr[1:-1] = 0.5 * (radii[2:] - radii[:-2])
    wr[0] = 0.5 * (radii[1] - radii[0]) + radii[0]  # extend the panel to r = 0
    wr[-1] = 0.5 * (radii[-1] - radii[-2])
    return wr


def reconstruct_t2(samples, w, grid, constant_mode="theory", alpha=None, decay_tol=1e-14):
    """Synthesize f on ``grid`` from polar spectral samples (n = 2).

    inner(sigma, theta) = sum_r w_r P_hat(sigma theta, r theta) hhat(r sigma)
    fhat(sigma theta)   = inner / N(sigma),  N = sum_r w_r |hhat(r sigma)|^2
    f(x) = (2 pi)^-2 sum_theta sum_sigma fhat e^{i sigma theta.x} sigma dsigma dtheta

    constant_mode 'paper' instead applies the statement constant to the
    unnormalized inner integral (kernel sigma^n); 'calibrated' scales the
    normalized synthesis by alpha; 'raw' omits the (2 pi)^-n factor.
    """
    if not w.is_real:
        raise HypothesisError("inversion requires a real window")
    if window_constants(w).c_h2 <= 0:
        raise HypothesisError("window must be non-zero")
    if grid.n != 2:
        raise ValidationError("synthesis implemented for n = 2")
    if constant_mode not in ("paper", "theory", "calibrated", "raw"):
        raise ValidationError(f"unknown constant mode {constant_mode!r}")
    if constant_mode == "calibrated" and alpha is None:
        raise ValidationError("calibrated mode needs alpha")
    vals = samples.values
    if vals.size == 0:
        raise ValidationError("empty sample set")
    sigma = samples.sigma
    radii = samples.radii
    wr = _r_weights(radii)
    hh = window_ft(w, np.multiply.outer(sigma, radii))  # hhat(r sigma), (Nsigma, Nr)
    hmax = np.max(np.abs(hh)) or 1.0
    hh = np.where(np.abs(hh) < decay_tol * hmax, 0.0, hh)
    inner = np.einsum("ksr,sr,r->ks", vals, hh, wr)      # (Ntheta, Nsigma)
    if constant_mode == "paper":
        coef = inner * sigma[None, :] ** grid.n
        const = paper_constant_t2(w, grid.n)
    else:
        norm = np.einsum("sr,r->s", np.abs(hh) ** 2, wr)  # N(sigma)
        weight = np.zeros_like(sigma)
        ok = norm > 0
        weight[ok] = sigma[ok] ** (grid.n - 1) / norm[ok]
        coef = inner * weight[None, :]
        if constant_mode == "raw":
            const = 1.0
        elif constant_mode == "theory":
            const = (2.0 * np.pi) ** (-grid.n)
        else:
            const = alpha
    # trapezoid in sigma, uniform in theta
    ws = np.zeros_like(sigma)
    if sigma.size < 2:
        raise ValidationError("need at least two sigma samples")
    ws[1:-1] = 0.5 * (sigma[2:] - sigma[:-2])
    ws[0] = 0.5 * (sigma[1] - sigma[0])
    ws[-1] = 0.5 * (sigma[-1] - sigma[-2])
    dtheta = 2.0 * np.pi / samples.angles.size
    X = grid.points()
    acc = np.zeros(X.shape[0], dtype=complex)
    for k, ang in enumerate(samples.angles):
        theta = np.array([np.cos(ang), np.sin(ang)])
        phase = X @ theta
        E = np.exp(1j * np.multiply.outer(sigma, phase))  # (Nsigma, Nx)
        acc += (coef[k] * ws) @ E
    acc *= const * dtheta
    if not np.all(np.isfinite(acc)):
        raise NumericalError("synthesis produced non-finite values")
    return ScalarField(grid, acc.real.reshape(grid.shape))
