import numpy as np
import pytest

from wrtkit import (
    BPParams,
    HypothesisError,
    ValidationError,
    analytic_signal_window,
    analytic_wrt_data,
    gaussian_phantom,
    gaussian_window,
    make_grid,
    paper_constant_t1,
    polar_vset,
    reconstruct_t1,
    rel_l2_error,
    sample_phantom,
    t1_frequency_check,
    theory_constant_t1,
    uniform_circle,
    v1_line_vset,
    windowed_ray_transform,
)
from wrtkit.quad import QuadratureParams


def test_constant_ratio_is_sqrt_pi():
    w = gaussian_window(1.0)
    assert theory_constant_t1(w, 2) / paper_constant_t1(w, 2) == pytest.approx(
        np.sqrt(np.pi), rel=1e-12
    )


def test_frequency_check_invariance():
    # the aggregated filter response must not depend on |xi| or direction
    w = gaussian_window(1.0)
    xi = np.array([[0.5, 0.0], [0.0, 3.0], [1.7, -2.2], [4.0, 4.0]])
    dev, c, vals = t1_frequency_check(w, xi, n_theta=256)
    assert dev < 1e-3
    assert c == pytest.approx(2.0 * np.pi**2, rel=1e-3)
    assert vals.shape == (4,)


def test_reconstruct_gaussian_theory_constant():
    spec = gaussian_phantom((0.4, -0.2), 0.7)
    w = gaussian_window(1.0)
    data_grid = make_grid(2, 96, 60.0)
    dirs, _ = uniform_circle(24)
    radii = np.geomspace(0.03, 18.0, 30)
    data = analytic_wrt_data(spec, w, data_grid, polar_vset(dirs, radii))
    out = make_grid(2, 48, 30.0)
    rec = reconstruct_t1(
        data, w, out,
        BPParams(r_min=radii[0], r_max=radii[-1], n_theta=24, constant_mode="theory"),
    )
    assert rel_l2_error(rec, sample_phantom(spec, out)) < 0.08


def test_radius_subrange_is_respected():
    spec = gaussian_phantom((0.0, 0.0), 0.8)
    w = gaussian_window(1.0)
    grid = make_grid(2, 32, 16.0)
    radii = np.geomspace(0.1, 4.0, 8)
    data = analytic_wrt_data(spec, w, grid, polar_vset(uniform_circle(8)[0], radii))
    with pytest.raises(ValidationError):
        reconstruct_t1(data, w, grid, BPParams(r_min=10.0, r_max=20.0, n_theta=8))


def test_complex_window_rejected():
    spec = gaussian_phantom((0.0, 0.0), 0.8)
    w = gaussian_window(1.0)
    grid = make_grid(2, 16, 8.0)
    data = analytic_wrt_data(spec, w, grid, polar_vset(uniform_circle(4)[0], [0.5, 1.0]))
    with pytest.raises(HypothesisError):
        reconstruct_t1(data, analytic_signal_window(), grid, BPParams(n_theta=4))


def test_wrong_vset_mode_rejected():
    spec = gaussian_phantom((0.0, 0.0), 0.8)
    w = gaussian_window(1.0)
    grid = make_grid(2, 16, 8.0)
    data = windowed_ray_transform(
        spec, w, grid, v1_line_vset(np.array([-0.5, 0.5]), [0.0]),
        QuadratureParams(panels=4),
    )
    with pytest.raises(ValidationError):
        reconstruct_t1(data, w, grid, BPParams(n_theta=4))


def test_bpparams_validation():
    with pytest.raises(ValidationError):
        BPParams(r_min=2.0, r_max=1.0)
    with pytest.raises(ValidationError):
        BPParams(constant_mode="calibrated")
    with pytest.raises(ValidationError):
        BPParams(constant_mode="bogus")
