"""Uniform grids, scalar/spectral fields and the fixed Fourier convention.

Every module in the library uses the same continuous Fourier transform
convention:

    F(xi) = integral f(x) exp(-i xi.x) dx
    f(x)  = (2 pi)^-n integral F(xi) exp(+i xi.x) dxi

The continuous transform is approximated by a phase-corrected DFT: scale
by the product of grid spacings and attach exp(-i xi.origin) so that the
samples really approximate the integral above, not the bare DFT.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy import special, stats

from .errors import ValidationError, ZeroReferenceError

__all__ = [
    "Grid",
    "ScalarField",
    "SpectralField",
    "PhantomSpec",
    "gaussian_phantom",
    "gaussian_mixture_phantom",
    "smoothed_disk_phantom",
    "make_grid",
    "sample_phantom",
    "phantom_spectrum",
    "continuous_ft",
    "continuous_ift",
    "rel_l2_error",
]


@dataclass(frozen=True)
class Grid:
    """Uniform n-dimensional sampling lattice.

    ``origin`` is the physical coordinate of the first sample, coordinates
    along axis i are ``origin[i] + k * spacing[i]`` for k in range(shape[i]).
    """

    shape: tuple
    origin: tuple
    spacing: tuple

    def __post_init__(self):
        if len(self.shape) != len(self.origin) or len(self.shape) != len(self.spacing):
            raise ValidationError("grid shape/origin/spacing lengths differ")
        if any(s < 2 for s in self.shape):
            raise ValidationError("grid needs at least 2 samples per axis")
        if any(d <= 0 for d in self.spacing):
            raise ValidationError("grid spacing must be strictly positive")
        object.__setattr__(self, "shape", tuple(int(s) for s in self.shape))
        object.__setattr__(self, "origin", tuple(float(o) for o in self.origin))
        object.__setattr__(self, "spacing", tuple(float(d) for d in self.spacing))

    @property
    def n(self):
        return len(self.shape)

    @property
    def size(self):
        return int(np.prod(self.shape))

    @property
    def cell_volume(self):
        return float(np.prod(self.spacing))

    def axis_coords(self, axis):
        return self.origin[axis] + self.spacing[axis] * np.arange(self.shape[axis])

    def points(self):
        """All grid coordinates as an (size, n) array in C order."""
        axes = [self.axis_coords(i) for i in range(self.n)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def index_to_coord(self, index):
        index = np.asarray(index, dtype=float)
        return np.asarray(self.origin) + index * np.asarray(self.spacing)

    def coord_to_index(self, coord):
        coord = np.asarray(coord, dtype=float)
        return (coord - np.asarray(self.origin)) / np.asarray(self.spacing)

    def translated(self, shift):
        return Grid(self.shape, tuple(np.asarray(self.origin) + np.asarray(shift)), self.spacing)

    def frequency_grid(self):
        """Grid of DFT angular frequencies in fftshift (monotonic) order."""
        dxi = tuple(2.0 * np.pi / (N * d) for N, d in zip(self.shape, self.spacing))
        origin = tuple(-(N // 2) * dk for N, dk in zip(self.shape, dxi))
        return Grid(self.shape, origin, dxi)


@dataclass(frozen=True)
class ScalarField:
    grid: Grid
    values: np.ndarray  # shape == grid.shape, real

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float).reshape(self.grid.shape)
        if not np.all(np.isfinite(values)):
            raise ValidationError("scalar field contains non-finite values")
        object.__setattr__(self, "values", values)

    def norm2(self):
        return float(np.sqrt(np.sum(self.values**2) * self.grid.cell_volume))


@dataclass(frozen=True)
class SpectralField:
    """Complex frequency-domain samples; grid coordinates are angular
    frequencies (radians per unit length), fftshift order. ``convention``
    is fixed to the e^{-i xi.x} forward kernel."""

    grid: Grid
    values: np.ndarray
    convention: str = "e-minus"

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex).reshape(self.grid.shape)
        object.__setattr__(self, "values", values)


# ---------------------------------------------------------------------------
# phantoms


@dataclass(frozen=True)
class PhantomSpec:
    """Closed-form test object: gaussian, gaussian-mixture or smoothed-disk.

    ``components`` is a tuple of dicts.  Gaussian components carry
    (center, sigma, amplitude); the smoothed disk carries
    (center, radius, smoothing, amplitude) and is the indicator of a disk
    convolved with an isotropic Gaussian (C^inf, evaluated through the
    noncentral-chi-square CDF).
    """

    kind: str
    components: tuple

    def __post_init__(self):
        if self.kind not in ("gaussian", "gaussian-mixture", "smoothed-disk"):
            raise ValidationError(f"unknown phantom kind {self.kind!r}")
        for c in self.components:
            if self.kind == "smoothed-disk":
                if c["radius"] <= 0 or c["smoothing"] <= 0:
                    raise ValidationError("disk radius and smoothing must be positive")
            elif c["sigma"] <= 0:
                raise ValidationError("gaussian sigma must be positive")

    @property
    def n(self):
        return len(self.components[0]["center"])

    # -- direct evaluation ---------------------------------------------------

    def evaluate(self, points):
        """Pointwise values at an (..., n) array of coordinates."""
        points = np.asarray(points, dtype=float)
        out = np.zeros(points.shape[:-1])
        for c in self.components:
            r2 = np.sum((points - np.asarray(c["center"])) ** 2, axis=-1)
            out += _component_profile(self.kind, c, r2)
        return out

    def evaluate_along_rays(self, u, v, t):
        """Values f(u_m + t_q v_m) as an (M, Q) array without forming the
        full point cloud; u, v are (M, n) paired arrays."""
        u = np.atleast_2d(np.asarray(u, dtype=float))
        v = np.atleast_2d(np.asarray(v, dtype=float))
        t = np.asarray(t, dtype=float)
        out = np.zeros((u.shape[0], t.size))
        c2 = np.sum(v * v, axis=1)[:, None]
        for c in self.components:
            du = u - np.asarray(c["center"])
            a = np.sum(du * du, axis=1)[:, None]
            b = np.sum(du * v, axis=1)[:, None]
            r2 = a + 2.0 * b * t[None, :] + c2 * t[None, :] ** 2
            out += _component_profile(self.kind, c, r2)
        return out

    def feature_scale(self):
        """Narrowest length scale present (smallest sigma / smoothing)."""
        if self.kind == "smoothed-disk":
            return min(c["smoothing"] for c in self.components)
        return min(c["sigma"] for c in self.components)

    def support_radius(self, tol=1e-8):
        """Radius (from the coordinate origin) beyond which |f| < tol."""
        r = 0.0
        for c in self.components:
            cc = float(np.linalg.norm(c["center"]))
            if self.kind == "smoothed-disk":
                w = c["radius"] + c["smoothing"] * np.sqrt(2.0 * np.log(max(c["amplitude"], tol) / tol))
            else:
                w = c["sigma"] * np.sqrt(2.0 * np.log(max(abs(c["amplitude"]), tol) / tol + 1.0))
            r = max(r, cc + w)
        return r

    def spectrum(self, xi):
        """Closed-form continuous Fourier transform at (..., n) frequencies."""
        xi = np.asarray(xi, dtype=float)
        out = np.zeros(xi.shape[:-1], dtype=complex)
        k2 = np.sum(xi * xi, axis=-1)
        k = np.sqrt(k2)
        n = self.n
        for c in self.components:
            phase = np.exp(-1j * np.sum(xi * np.asarray(c["center"]), axis=-1))
            if self.kind == "smoothed-disk":
                if n != 2:
                    raise ValidationError("smoothed-disk spectrum implemented for n=2")
                R, s, amp = c["radius"], c["smoothing"], c["amplitude"]
                disk = np.where(k > 0, 2.0 * np.pi * R * special.j1(R * np.where(k > 0, k, 1.0)) / np.where(k > 0, k, 1.0), np.pi * R**2)
                out += amp * disk * np.exp(-0.5 * s**2 * k2) * phase
            else:
                sig, amp = c["sigma"], c["amplitude"]
                out += amp * (2.0 * np.pi) ** (n / 2.0) * sig**n * np.exp(-0.5 * sig**2 * k2) * phase
        return out


def _component_profile(kind, c, r2):
    if kind == "smoothed-disk":
        R, s, amp = c["radius"], c["smoothing"], c["amplitude"]
        # P(|x + s*g| <= R) at distance r: noncentral chi^2 with 2 dof
        return amp * stats.ncx2.cdf((R / s) ** 2, df=2, nc=r2 / s**2)
    sig, amp = c["sigma"], c["amplitude"]
    return amp * np.exp(-0.5 * r2 / sig**2)


def gaussian_phantom(center, sigma, amplitude=1.0):
    return PhantomSpec("gaussian", ({"center": tuple(center), "sigma": float(sigma), "amplitude": float(amplitude)},))


def gaussian_mixture_phantom(components):
    comps = tuple(
        {"center": tuple(c), "sigma": float(s), "amplitude": float(a)} for c, s, a in components
    )
    return PhantomSpec("gaussian-mixture", comps)


def smoothed_disk_phantom(center, radius, smoothing, amplitude=1.0):
    return PhantomSpec(
        "smoothed-disk",
        ({"center": tuple(center), "radius": float(radius), "smoothing": float(smoothing), "amplitude": float(amplitude)},),
    )


# ---------------------------------------------------------------------------
# operations


def make_grid(n, shape, extent, center=0.0):
    """Uniform grid with per-axis physical extent, centered at ``center``.

    spacing = extent / shape, origin = center - extent / 2.
    """
    shape = np.broadcast_to(np.asarray(shape, dtype=int), (n,))
    extent = np.broadcast_to(np.asarray(extent, dtype=float), (n,))
    center = np.broadcast_to(np.asarray(center, dtype=float), (n,))
    if np.any(extent <= 0):
        raise ValidationError("grid extent must be positive")
    if np.any(shape < 2):
        raise ValidationError("grid needs at least 2 samples per axis")
    spacing = extent / shape
    origin = center - extent / 2.0
    return Grid(tuple(shape), tuple(origin), tuple(spacing))


def sample_phantom(spec, grid):
    if spec.n != grid.n:
        raise ValidationError(f"phantom dimension {spec.n} != grid dimension {grid.n}")
    vals = spec.evaluate(grid.points()).reshape(grid.shape)
    return ScalarField(grid, vals)


def phantom_spectrum(spec, grid_or_points):
    """Closed-form spectrum sampled on a frequency grid or point array."""
    if isinstance(grid_or_points, Grid):
        pts = grid_or_points.points()
        return spec.spectrum(pts).reshape(grid_or_points.shape)
    return spec.spectrum(np.asarray(grid_or_points))


def _axis_phases_forward(grid):
    """Per-axis phase vectors exp(-i xi_k origin) on the fftshifted grid."""
    fg = grid.frequency_grid()
    return [np.exp(-1j * fg.axis_coords(ax) * grid.origin[ax]) for ax in range(grid.n)]


def continuous_ft(field, pad=1, warn_boundary=True):
    """Continuous-FT approximation of a real or complex field.

    pad > 1 zero-extends each axis by that factor (finer frequency grid).
    Returns a SpectralField on the fftshifted frequency grid.
    """
    grid, values = field.grid, np.asarray(field.values)
    if warn_boundary:
        vmax = np.max(np.abs(values)) or 1.0
        edge = _boundary_max(values)
        if edge > 1e-6 * vmax:
            warnings.warn(
                f"field does not decay at the grid boundary (edge max {edge:.2e}); "
                "the continuous-FT approximation degrades",
                stacklevel=2,
            )
    if pad > 1:
        new_shape = tuple(int(round(N * pad)) for N in grid.shape)
        padded = np.zeros(new_shape, dtype=values.dtype)
        padded[tuple(slice(0, N) for N in grid.shape)] = values
        # keep the origin: extra samples extend the tail side only
        grid = Grid(new_shape, grid.origin, grid.spacing)
        values = padded
    F = np.fft.fftshift(np.fft.fftn(values))
    F = F * grid.cell_volume
    for ax, ph in enumerate(_axis_phases_forward(grid)):
        F = F * ph.reshape([-1 if a == ax else 1 for a in range(grid.n)])
    return SpectralField(grid.frequency_grid(), F)


def continuous_ift(spec, out_grid=None, real_output=True):
    """Inverse of :func:`continuous_ft`.

    ``out_grid`` must match the DFT-compatible spatial grid (same shape,
    spacing 2 pi / (N * dxi)); its origin is free. Defaults to the grid
    centered at zero.
    """
    fgrid = spec.grid
    n = fgrid.n
    shape = fgrid.shape
    dx = tuple(2.0 * np.pi / (N * dk) for N, dk in zip(shape, fgrid.spacing))
    if out_grid is None:
        origin = tuple(-(N // 2) * d for N, d in zip(shape, dx))
        out_grid = Grid(shape, origin, dx)
    else:
        if out_grid.shape != shape:
            raise ValidationError("output grid shape does not match the spectrum")
        if not np.allclose(out_grid.spacing, dx, rtol=1e-12):
            raise ValidationError("output grid spacing incompatible with the spectral grid")
    G = np.asarray(spec.values, dtype=complex)
    # strip exp(-i xi.x0) then inverse DFT, cf. the forward construction
    for ax in range(n):
        xi = fgrid.axis_coords(ax)
        ph = np.exp(1j * xi * out_grid.origin[ax])
        G = G * ph.reshape([-1 if a == ax else 1 for a in range(n)])
    vals = np.fft.ifftn(np.fft.ifftshift(G)) / np.prod(dx)
    # undo the fftshift ordering mismatch of the spatial index phase:
    # after ifftshift the k-index runs in DFT order, matching ifftn.
    if real_output:
        imax = np.max(np.abs(vals.imag))
        rmax = np.max(np.abs(vals.real)) or 1.0
        if imax > 1e-8 * rmax:
            warnings.warn(
                f"inverse transform has complex magnitude {imax:.2e} "
                f"(relative {imax / rmax:.2e}); taking the real part",
                stacklevel=2,
            )
        return ScalarField(out_grid, vals.real)
    return SpectralField(out_grid, vals)


def _boundary_max(values):
    m = 0.0
    for ax in range(values.ndim):
        sl0 = [slice(None)] * values.ndim
        sl1 = [slice(None)] * values.ndim
        sl0[ax] = 0
        sl1[ax] = -1
        m = max(m, np.max(np.abs(values[tuple(sl0)])), np.max(np.abs(values[tuple(sl1)])))
    return m


def rel_l2_error(a, b):
    """||a - b||_2 / ||b||_2 over shared grid samples."""
    if a.grid != b.grid:
        raise ValidationError("fields live on different grids")
    bnorm = np.linalg.norm(b.values)
    if bnorm == 0.0:
        raise ZeroReferenceError("reference field is identically zero")
    return float(np.linalg.norm(a.values - b.values) / bnorm)
