"""Circular-harmonic / Mellin inversion of the perpendicular-ray data.

For n = 2 the data g(rho, theta) = P_h f(u, u^perp) with u = rho e(theta)
couples to the image only through a multiplicative (Mellin) convolution of
each angular harmonic:

    M g_l(s) = M f_l(s) * M H_l(s)

with the kernel (two ray points land on each circle of radius rho / r,
one per sign of the ray parameter, each carrying its own phase)

    H_l(r) = [h(sqrt(1/r^2 - 1)) e^{+i l arccos r}
              + h(-sqrt(1/r^2 - 1)) e^{-i l arccos r}]
             / (r sqrt(1 - r^2))   for r < 1, else 0.

For an even window this is 2 h(sqrt(1/r^2 - 1)) cos(l arccos r)
/ (r sqrt(1 - r^2)) -- real, so real data stays real harmonic by
harmonic.

Each radial coefficient is recovered by a vertical-line inverse Mellin
integral at abscissa t > 1:

    f_l(r) = (1 / 2 pi i) int_{t - iT}^{t + iT} r^{-s} Mg_l(s) / MH_l(s) ds

realized with Tikhonov-regularized division (the kernel spectrum
oscillates and decays along the line).  Odd windows are rejected: their
even part vanishes, so H_l = 0 identically and nothing can be divided
out.  The full reconstruction additionally insists on a compactly
supported window, matching the identity's hypotheses exactly.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import HypothesisError, NumericalError, ValidationError
from .fields import ScalarField
from .quad import gauss_legendre_panels
from .windows import window_eval, window_support_radius

__all__ = [
    "HarmonicSeries",
    "MellinLine",
    "KernelH",
    "RegParams",
    "MellinParams",
    "circular_decompose",
    "kernel_H",
    "mellin_transform",
    "mellin_kernel_line",
    "mellin_convolution_residual",
    "recover_fl",
    "reconstruct_mellin",
]


@dataclass(frozen=True)
class HarmonicSeries:
    """Angular Fourier coefficients c_l(rho) for l in [-L, L]."""

    l_values: np.ndarray      # (2L+1,) ints, -L..L
    rho: np.ndarray           # positive, log-uniform
    coefficients: np.ndarray  # (2L+1, Nrho) complex

    def coefficient(self, l):
        idx = int(l) + (self.l_values.size - 1) // 2
        if not (0 <= idx < self.l_values.size):
            raise ValidationError(f"harmonic l={l} outside the stored range")
        return self.coefficients[idx]


@dataclass(frozen=True)
class MellinLine:
    """Samples M(t + i y_k) on a vertical line."""

    t: float
    y: np.ndarray        # uniform, symmetric
    values: np.ndarray   # complex

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float)
        d = np.diff(y)
        if y.size > 1 and not np.allclose(d, d[0], rtol=1e-10):
            raise ValidationError("Mellin line needs a uniform y grid")
        if y.size > 1 and abs(y[0] + y[-1]) > 1e-9 * (abs(d[0]) + 1):
            raise ValidationError("Mellin line y grid must be symmetric")


@dataclass(frozen=True)
class KernelH:
    l: int
    r: np.ndarray
    values: np.ndarray
    window: object


@dataclass(frozen=True)
class RegParams:
    """Tikhonov division Q = Mg conj(MH) / (|MH|^2 + lam).

    lam defaults to (1e-6 max|MH|)^2; eps_div_rel flags ill-posedness when
    |MH| stays below eps_div_rel * max|MH| on more than half the band.
    """

    lam: float | None = None
    eps_div_rel: float = 1e-6


@dataclass(frozen=True)
class MellinParams:
    t: float = 2.0
    T: float = 40.0
    dy: float = 0.05
    reg: RegParams = field(default_factory=RegParams)

    def __post_init__(self):
        if self.t <= 1.0:
            raise ValidationError("contour abscissa must satisfy t > 1")
        if self.T <= 0 or self.dy <= 0:
            raise ValidationError("need T > 0 and dy > 0")

    def y_grid(self):
        n = int(round(self.T / self.dy))
        return np.linspace(-n, n, 2 * n + 1) * self.dy


def circular_decompose(g, L):
    """g_l(rho) = (1/2 pi) int_0^{2 pi} g(rho, theta) e^{-i l theta} d theta.

    Computed as FFT over theta divided by the sample count; returns
    l in [-L, L].  Warns when the edge harmonic is not negligible
    (truncation/aliasing risk).
    """
    nt = g.theta.size
    if nt < 2 * L + 2:
        raise ValidationError(f"need at least {2 * L + 2} angles for L={L}")
    coef_all = np.fft.fft(g.values, axis=1) / nt  # (Nrho, Ntheta), index = l mod nt
    ls = np.arange(-L, L + 1)
    coefs = np.stack([coef_all[:, l % nt] for l in ls], axis=0)
    mags = np.max(np.abs(coefs), axis=1)
    top = mags.max()
    if top > 0 and max(mags[0], mags[-1]) > 0.01 * top:
        warnings.warn(
            f"harmonic |l|={L} carries {max(mags[0], mags[-1]) / top:.1%} of the "
            "peak coefficient; series truncation will be visible"
        )
    return HarmonicSeries(ls, g.rho, coefs)


def _check_not_odd(w):
    if not w.is_real:
        raise HypothesisError("harmonic kernel needs a real window")
    if w.parity == "odd":
        raise HypothesisError(
            "window hypothesis violated: h is odd (even part vanishes), "
            "the harmonic kernel H_l is identically zero"
        )


def kernel_H(w, l, r_grid):
    """Pointwise H_l(r) on r_grid (values 0 for r >= 1)."""
    _check_not_odd(w)
    r = np.asarray(r_grid, dtype=float)
    if np.any(r <= 0):
        raise ValidationError("kernel radii must be positive")
    vals = np.zeros(r.shape, dtype=complex)
    inside = r < 1.0
    ri = r[inside]
    g = np.sqrt(1.0 / ri**2 - 1.0)
    phase = np.exp(1j * l * np.arccos(ri))
    both = (
        np.asarray(window_eval(w, g)) * phase
        + np.asarray(window_eval(w, -g)) / phase
    )
    vals[inside] = both / (ri * np.sqrt(1.0 - ri**2))
    return KernelH(int(l), r, vals, w)


def mellin_transform(r_grid, samples, t, y_grid):
    """Mf(t + i y) = int_0^inf f(r) r^{t + i y - 1} dr on a log-uniform grid.

    In u = ln r the integral is int f(e^u) e^{t u} e^{i y u} du, evaluated
    by trapezoid; the weighted integrand must have decayed at both grid
    ends (compact support inside the grid counts).
    """
    r = np.asarray(r_grid, dtype=float)
    f = np.asarray(samples)
    y = np.asarray(y_grid, dtype=float)
    if np.any(r <= 0):
        raise ValidationError("Mellin transform needs positive radii")
    u = np.log(r)
    steps = np.diff(u)
    if not np.allclose(steps, steps[0], rtol=1e-8):
        raise ValidationError("Mellin transform needs a log-uniform r grid")
    wu = np.gradient(u)
    g = f * np.exp(t * u)
    gmax = np.max(np.abs(g))
    if gmax > 0 and max(abs(g[0]), abs(g[-1])) > 1e-8 * gmax:
        raise ValidationError(
            "samples have not decayed at the r-grid ends; widen the grid "
            f"(end/max = {max(abs(g[0]), abs(g[-1])) / gmax:.2e})"
        )
    vals = np.exp(1j * np.multiply.outer(y, u)) @ (wu * g)
    return MellinLine(float(t), y, vals)


def mellin_kernel_line(w, l, t, y_grid, panels=48, nodes=16):
    """MH_l(t + i y) by quadrature after the substitution r = cos(psi).

    MH_l(s) = int_0^{pi/2} [h(tan psi) e^{+i l psi} + h(-tan psi) e^{-i l psi}]
              cos^{s-2}(psi) d psi;
    the substitution removes the 1/sqrt(1 - r^2) endpoint singularity, and
    for compactly supported h the integrand vanishes beyond
    psi = arctan(support radius).
    """
    _check_not_odd(w)
    y = np.asarray(y_grid, dtype=float)
    R = window_support_radius(w, tol=1e-15)
    psi_max = min(np.arctan(R), np.pi / 2 - 1e-12) if R is not None else np.pi / 2 - 1e-12
    psi, wp = gauss_legendre_panels(0.0, psi_max, panels, nodes)
    tanp = np.tan(psi)
    ephase = np.exp(1j * l * psi)
    amp = (
        np.asarray(window_eval(w, tanp)) * ephase
        + np.asarray(window_eval(w, -tanp)) / ephase
    ) * wp
    lncos = np.log(np.cos(psi))
    s_minus_2 = (t - 2.0) + 1j * y
    vals = np.exp(np.multiply.outer(s_minus_2, lncos)) @ amp
    return MellinLine(float(t), y, vals)


def mellin_convolution_residual(g_line, f_line, H_line):
    """max_y |Mg_l(s) - Mf_l(s) MH_l(s)| / max|Mg_l|.

    All three lines must share the abscissa and the y grid.
    """
    if not np.allclose(g_line.y, H_line.y) or not np.allclose(g_line.y, f_line.y):
        raise ValidationError("lines must share the y grid")
    if abs(f_line.t - g_line.t) > 1e-12 or abs(H_line.t - g_line.t) > 1e-12:
        raise ValidationError("lines must share the abscissa")
    ref = np.max(np.abs(g_line.values))
    if ref == 0:
        return 0.0
    return float(np.max(np.abs(g_line.values - f_line.values * H_line.values)) / ref)


def recover_fl(Mg, MH, t, r_grid, reg=RegParams()):
    """f_l(r) on r_grid from lines Mg_l and MH_l sampled at abscissa t.

    f_l(r) = (1/2 pi) int_{-T}^{T} r^{-t-iy} Q(t + iy) dy with the
    regularized quotient Q = Mg conj(MH) / (|MH|^2 + lam); the finite band
    realizes the exact formula's T -> infinity limit.
    """
    if t <= 1.0:
        raise ValidationError("contour abscissa must satisfy t > 1")
    if abs(Mg.t - t) > 1e-12 or abs(MH.t - t) > 1e-12:
        raise ValidationError("input lines must be sampled at abscissa t")
    if not np.allclose(Mg.y, MH.y):
        raise ValidationError("lines must share the y grid")
    absH = np.abs(MH.values)
    hmax = absH.max()
    if hmax == 0 or np.mean(absH < reg.eps_div_rel * hmax) > 0.5:
        raise NumericalError(
            "kernel spectrum too small; inversion ill-posed on this band"
        )
    lam = reg.lam if reg.lam is not None else (1e-6 * hmax) ** 2
    Q = Mg.values * np.conj(MH.values) / (absH**2 + lam)
    y = Mg.y
    wy = np.gradient(y)
    r = np.asarray(r_grid, dtype=float)
    lnr = np.log(r)
    phase = np.exp(-1j * np.multiply.outer(lnr, y))
    return r ** (-t) * (phase @ (wy * Q)) / (2.0 * np.pi)


def reconstruct_mellin(g, w, L, grid, params=MellinParams()):
    """Truncated harmonic series reconstruction on a Cartesian grid.

    Needs a compactly supported, not-odd window (the smooth bump); other
    real windows should use the backprojection or spectral routes instead.
    """
    if w.parity == "odd":
        _check_not_odd(w)
    if not (w.is_real and w.is_compactly_supported):
        raise HypothesisError(
            "harmonic-series inversion requires a compactly supported, "
            "not-odd window; use the backprojection or spectral inversions "
            "for non-compact windows"
        )
    if grid.n != 2:
        raise ValidationError("harmonic-series inversion is n = 2 only")
    series = circular_decompose(g, L)
    y = params.y_grid()
    t = params.t
    # recovery radii: log grid spanning the output's radial range
    X = grid.points()
    rad = np.hypot(X[:, 0], X[:, 1])
    r_hi = max(rad.max(), g.rho.max())
    r_lo = max(1e-3 * r_hi, g.rho.min())
    r_grid = np.geomspace(r_lo, r_hi, 256)
    MH_cache = {}
    f_ls = {}
    for l in range(0, L + 1):
        Mg = mellin_transform(series.rho, series.coefficient(l), t, y)
        if l not in MH_cache:
            MH_cache[l] = mellin_kernel_line(w, l, t, y)
        f_ls[l] = recover_fl(Mg, MH_cache[l], t, r_grid, params.reg)
    phi = np.arctan2(X[:, 1], X[:, 0])
    lr = np.log(np.maximum(rad, r_lo))
    lgrid = np.log(r_grid)
    acc = np.zeros(X.shape[0])
    for l in range(0, L + 1):
        fl = f_ls[l]
        flr = np.interp(lr, lgrid, fl.real) + 1j * np.interp(lr, lgrid, fl.imag)
        term = (flr * np.exp(1j * l * phi)).real
        acc += term if l == 0 else 2.0 * term
    if not np.all(np.isfinite(acc)):
        raise NumericalError("harmonic synthesis produced non-finite values")
    return ScalarField(grid, acc.reshape(grid.shape))
