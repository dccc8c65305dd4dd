"""Window functions h, their Fourier transforms and derived quantities.

The catalog is fixed to four kinds:

* ``gaussian(sigma)``     -- even, non-admissible (hhat(0) != 0)
* ``hermite1(sigma)``     -- t exp(-t^2 / 2 sigma^2): odd, admissible
* ``bump(radius)``        -- exp(-1 / (1 - (t/R)^2)) on |t| < R: even,
                             compactly supported, not odd
* ``analytic-signal``     -- 1 / (2 pi i (t - i)): complex, forward-only

All Fourier transforms use hhat(eta) = integral h(t) exp(-i eta t) dt.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .errors import HypothesisError, ValidationError
from .quad import gauss_legendre_panels

__all__ = [
    "WindowSpec",
    "WindowConstants",
    "gaussian_window",
    "hermite1_window",
    "bump_window",
    "analytic_signal_window",
    "window_eval",
    "window_ft",
    "riesz_filter",
    "window_constants",
    "window_support_radius",
    "window_ft_cutoff",
]

KINDS = ("gaussian", "hermite1", "bump", "analytic-signal")

# Selftest fault injection hook: scales the window L2 constant when set.
# Never touch outside of `wrtkit selftest --inject-fault`.
_FAULT_SCALE = 1.0


@dataclass(frozen=True)
class WindowSpec:
    kind: str
    sigma: float | None = None
    radius: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown window kind {self.kind!r}")
        if self.kind in ("gaussian", "hermite1"):
            if self.sigma is None or self.sigma <= 0:
                raise ValidationError(f"{self.kind} window needs sigma > 0")
        if self.kind == "bump":
            if self.radius is None or self.radius <= 0:
                raise ValidationError("bump window needs radius > 0")

    @property
    def is_real(self):
        return self.kind != "analytic-signal"

    @property
    def is_compactly_supported(self):
        return self.kind == "bump"

    @property
    def parity(self):
        """'even', 'odd' or 'none'."""
        if self.kind in ("gaussian", "bump"):
            return "even"
        if self.kind == "hermite1":
            return "odd"
        return "none"


def gaussian_window(sigma=1.0):
    return WindowSpec("gaussian", sigma=float(sigma))


def hermite1_window(sigma=1.0):
    return WindowSpec("hermite1", sigma=float(sigma))


def bump_window(radius=1.0):
    return WindowSpec("bump", radius=float(radius))


def analytic_signal_window():
    return WindowSpec("analytic-signal")


def window_eval(w, t):
    """Pointwise h(t); complex only for the analytic-signal kernel."""
    t = np.asarray(t, dtype=float)
    if w.kind == "gaussian":
        return np.exp(-0.5 * (t / w.sigma) ** 2)
    if w.kind == "hermite1":
        return t * np.exp(-0.5 * (t / w.sigma) ** 2)
    if w.kind == "bump":
        x2 = (t / w.radius) ** 2
        with np.errstate(divide="ignore", over="ignore"):
            out = np.where(x2 < 1.0, np.exp(-1.0 / np.maximum(1.0 - x2, 1e-300)), 0.0)
        return out
    # analytic-signal: 1 / (2 pi i (t - i))
    return 1.0 / (2.0j * np.pi * (t - 1.0j))


@functools.lru_cache(maxsize=32)
def _bump_ft_nodes(radius):
    # the integrand is C^inf with all derivatives vanishing at |t| = R,
    # so a dense composite rule on [0, R] is spectrally accurate
    t, wt = gauss_legendre_panels(0.0, radius, 32, 16)
    h = np.asarray(window_eval(WindowSpec("bump", radius=radius), t))
    return t, wt * h


def window_ft(w, eta):
    """hhat(eta) = integral h(t) exp(-i eta t) dt.

    Closed form for gaussian and hermite1, quadrature for bump.
    """
    eta = np.asarray(eta, dtype=float)
    if w.kind == "gaussian":
        s = w.sigma
        return (s * np.sqrt(2.0 * np.pi) * np.exp(-0.5 * (s * eta) ** 2)).astype(complex)
    if w.kind == "hermite1":
        s = w.sigma
        return -1j * np.sqrt(2.0 * np.pi) * s**3 * eta * np.exp(-0.5 * (s * eta) ** 2)
    if w.kind == "bump":
        t, wh = _bump_ft_nodes(w.radius)
        # even window: hhat(eta) = 2 integral_0^R h(t) cos(eta t) dt
        vals = 2.0 * np.cos(np.multiply.outer(eta, t)) @ wh
        return vals.astype(complex)
    raise ValidationError("analytic-signal window has no transform in this catalog")


@functools.lru_cache(maxsize=128)
def window_support_radius(w, tol=1e-14):
    """T with |h(t)| < tol for |t| > T (None for analytic-signal)."""
    if w.kind == "gaussian":
        return w.sigma * np.sqrt(2.0 * np.log(1.0 / tol))
    if w.kind == "hermite1":
        t0 = w.sigma * np.sqrt(2.0 * np.log(1.0 / tol))
        f = lambda t: abs(t) * np.exp(-0.5 * (t / w.sigma) ** 2) - tol
        return float(optimize.brentq(f, t0 / 2, 4 * t0))
    if w.kind == "bump":
        return w.radius
    return None


@functools.lru_cache(maxsize=128)
def window_ft_cutoff(w, tol=1e-14):
    """eta beyond which |hhat(eta)| < tol (relative to its maximum)."""
    if w.kind == "gaussian":
        return np.sqrt(2.0 * np.log(1.0 / tol)) / w.sigma
    if w.kind == "hermite1":
        e0 = np.sqrt(2.0 * np.log(1.0 / tol)) / w.sigma
        return 1.5 * e0
    if w.kind == "bump":
        # scan: bump transforms decay faster than any power
        eta = np.linspace(0.0, 2000.0 / w.radius, 20001)
        mag = np.abs(window_ft(w, eta))
        good = np.nonzero(mag > tol * mag.max())[0]
        return float(eta[good[-1]] + (eta[1] - eta[0]))
    raise ValidationError("no transform cutoff for the analytic-signal window")


def riesz_filter(w, t_grid):
    """Samples of I^-1 h on t_grid, where FT[I^-1 h](eta) = |eta| hhat(eta).

    Computed by dense spectral quadrature on the half-line (the integrand
    is smooth there); real windows only.
    """
    if not w.is_real:
        raise HypothesisError("Riesz filter is defined for real windows only")
    t_grid = np.asarray(t_grid, dtype=float)
    eta_max = window_ft_cutoff(w, tol=1e-14)
    eta, we = gauss_legendre_panels(0.0, eta_max, 64, 16)
    hhat = window_ft(w, eta)
    # I^-1 h(t) = (1/2pi) int |eta| hhat e^{i eta t} d eta
    #           = (1/pi) Re int_0^inf eta hhat(eta) e^{i eta t} d eta  (real h)
    phase = np.exp(1j * np.multiply.outer(t_grid, eta))
    vals = (phase @ (eta * hhat * we)).real / np.pi
    return vals


@dataclass(frozen=True)
class WindowConstants:
    c_h2: float        # integral |h|^2 dt
    c_hat_half: float  # integral_0^inf |hhat|^2 d eta
    c_hat_full: float  # integral_R |hhat(-t)|^2 dt
    hat_at_zero: complex


@functools.lru_cache(maxsize=32)
def _window_constants_cached(w):
    if w.kind == "gaussian":
        s = w.sigma
        c_h2 = s * np.sqrt(np.pi)
        c_hat_half = np.pi**1.5 * s
        hat0 = s * np.sqrt(2.0 * np.pi)
    elif w.kind == "hermite1":
        s = w.sigma
        c_h2 = 0.5 * s**3 * np.sqrt(np.pi)
        c_hat_half = 0.5 * np.pi**1.5 * s**3
        hat0 = 0.0
    elif w.kind == "bump":
        R = w.radius
        c_h2, _ = integrate.quad(lambda t: window_eval(w, t) ** 2, -R, R, epsabs=0, epsrel=1e-12)
        eta_max = window_ft_cutoff(w, tol=1e-15)
        c_hat_half, _ = integrate.quad(
            lambda e: np.abs(window_ft(w, e)) ** 2, 0.0, eta_max, epsabs=0, epsrel=1e-10, limit=400
        )
        hat0 = complex(window_ft(w, 0.0))
    else:
        raise HypothesisError("window constants require a real window")
    if c_h2 <= 0:
        raise ValidationError("zero window: inversion constants undefined")
    return WindowConstants(
        c_h2=float(c_h2),
        c_hat_half=float(c_hat_half),
        c_hat_full=2.0 * float(c_hat_half),
        hat_at_zero=complex(hat0),
    )


def window_constants(w):
    c = _window_constants_cached(w)
    if _FAULT_SCALE != 1.0:
        return WindowConstants(
            c_h2=c.c_h2 * _FAULT_SCALE,
            c_hat_half=c.c_hat_half * _FAULT_SCALE,
            c_hat_full=c.c_hat_full * _FAULT_SCALE,
            hat_at_zero=c.hat_at_zero,
        )
    return c
