import numpy as np
import pytest

from wrtkit import (
    HypothesisError,
    ValidationError,
    analytic_signal_window,
    analytic_wrt_data,
    extract_polar_spectrum,
    gaussian_phantom,
    gaussian_window,
    make_grid,
    phantom_spectrum,
    polar_vset,
    reconstruct_t2,
    rel_l2_error,
    sample_phantom,
    uniform_circle,
    window_ft,
)
from wrtkit.invert_fourier import PolarSpectralSamples, paper_constant_t2
from wrtkit.windows import window_constants


def _small_dataset(nd=16, nr=6):
    spec = gaussian_phantom((0.3, -0.2), 0.8)
    w = gaussian_window(1.0)
    grid = make_grid(2, 96, 40.0)
    dirs, _ = uniform_circle(nd)
    radii = np.geomspace(0.1, 2.0, nr)
    data = analytic_wrt_data(spec, w, grid, polar_vset(dirs, radii))
    return spec, w, data


def test_extraction_matches_factorized_spectrum():
    # P_hat(sigma theta, r theta) = fhat(sigma theta) hhat(-r sigma)
    spec, w, data = _small_dataset()
    sigma = np.linspace(0.0, 4.0, 33)
    samples = extract_polar_spectrum(data, sigma)
    dirs = data.vset.directions
    scale = 0.0
    dev = 0.0
    for k in range(dirs.shape[0]):
        xi = np.multiply.outer(sigma, dirs[k])
        fhat = phantom_spectrum(spec, xi)
        for m, r in enumerate(data.vset.radii):
            want = fhat * window_ft(w, -sigma * r)
            dev = max(dev, float(np.max(np.abs(samples.values[k, :, m] - want))))
            scale = max(scale, float(np.max(np.abs(want))))
    assert dev / scale < 1e-4


def test_extraction_rejects_out_of_band_sigma():
    _, _, data = _small_dataset(nd=4, nr=2)
    nyq = np.pi / max(data.u_grid.spacing)
    with pytest.raises(ValidationError):
        extract_polar_spectrum(data, np.array([0.0, 2.0 * nyq]))


def test_inner_integral_inverse_sigma_scaling():
    # int_0^inf |hhat(r sigma)|^2 dr = |sigma|^-1 int_0^inf |hhat|^2
    w = gaussian_window(1.0)
    r = np.linspace(0.0, 40.0, 40001)
    want = window_constants(w).c_hat_half
    for sigma in (0.5, 1.0, 2.0, 3.5):
        val = np.trapezoid(np.abs(window_ft(w, r * sigma)) ** 2, r)
        assert abs(val * sigma / want - 1.0) < 1e-3


def test_reconstruct_gaussian():
    spec, w, data = _small_dataset(nd=64, nr=12)
    sigma = np.linspace(0.0, 5.0, 64)
    samples = extract_polar_spectrum(data, sigma)
    out = make_grid(2, 48, 24.0)
    rec = reconstruct_t2(samples, w, out, constant_mode="theory")
    assert rel_l2_error(rec, sample_phantom(spec, out)) < 0.05


def test_complex_window_rejected():
    _, w, data = _small_dataset(nd=4, nr=2)
    samples = extract_polar_spectrum(data, np.linspace(0.0, 2.0, 9))
    with pytest.raises(HypothesisError):
        reconstruct_t2(samples, analytic_signal_window(), make_grid(2, 16, 8.0))


def test_sample_container_validation():
    with pytest.raises(ValidationError):
        PolarSpectralSamples(
            np.array([0.0]), np.array([0.0, 1.0]), np.array([-0.5]),
            np.zeros((1, 2, 1), dtype=complex),
        )
    with pytest.raises(ValidationError):
        PolarSpectralSamples(
            np.array([0.0]), np.array([-1.0, 1.0]), np.array([0.5]),
            np.zeros((1, 2, 1), dtype=complex),
        )


def test_paper_constant_value():
    w = gaussian_window(1.0)
    want = 2.0 ** (-3) * np.pi ** (-2) / window_constants(w).c_h2
    assert paper_constant_t2(w, 2) == pytest.approx(want, rel=1e-12)


def test_constant_mode_validation():
    _, w, data = _small_dataset(nd=4, nr=2)
    samples = extract_polar_spectrum(data, np.linspace(0.0, 2.0, 9))
    grid = make_grid(2, 16, 8.0)
    with pytest.raises(ValidationError):
        reconstruct_t2(samples, w, grid, constant_mode="bogus")
    with pytest.raises(ValidationError):
        reconstruct_t2(samples, w, grid, constant_mode="calibrated")
