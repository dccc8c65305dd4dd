"""Filtered backprojection with a NON-admissible window.

The gaussian window has hhat(0) != 0, so the classical admissibility
condition fails -- yet the ramp-filtered backprojection over the (t, v)
redundancy still inverts the transform.  The normalization constant is
fitted empirically (see wrtkit.calibrate) and reported next to the
stated closed form.
"""

import numpy as np

from wrtkit import (
    analytic_wrt_data,
    gaussian_phantom,
    gaussian_window,
    make_grid,
    polar_vset,
    reconstruct_t1,
    rel_l2_error,
    sample_phantom,
    uniform_circle,
)
from wrtkit.calibrate import calibrate_constant, default_calibration_phantoms
from wrtkit.invert_bp import BPParams


def main():
    w = gaussian_window(1.0)
    print("calibrating the backprojection constant over 3 phantoms ...")
    rep = calibrate_constant("t1", w, default_calibration_phantoms(), fast=True)
    print(f"  fitted alpha = {rep.alpha:.6f}  (CV {rep.cv:.2%})")
    print(f"  stated constant = {rep.paper_constant:.6f}, ratio = {rep.ratio:.4f}")

    spec = gaussian_phantom((0.4, -0.2), 0.7)
    grid = make_grid(2, 128, 80.0)
    dirs, _ = uniform_circle(32)
    radii = np.geomspace(0.02, 20.0, 40)
    data = analytic_wrt_data(spec, w, grid, polar_vset(dirs, radii))
    out = make_grid(2, 64, 40.0)
    for mode, alpha in (("theory", None), ("calibrated", rep.alpha)):
        rec = reconstruct_t1(
            data, w, out,
            BPParams(r_min=radii[0], r_max=radii[-1], n_theta=32,
                     constant_mode=mode, alpha=alpha),
        )
        err = rel_l2_error(rec, sample_phantom(spec, out))
        print(f"reconstruction rel-L2 error ({mode:>10s} constant): {err:.4f}")


if __name__ == "__main__":
    main()
