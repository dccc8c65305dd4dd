"""Composite Gauss-Legendre quadrature helpers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["QuadratureParams", "gauss_legendre_panels"]


@dataclass(frozen=True)
class QuadratureParams:
    """Composite Gauss-Legendre rule: ``panels`` equal panels with
    ``nodes`` points each.

    ``max_panels`` caps automatic panel refinement when the integrand
    carries features much narrower than a panel (long v vectors sweep a
    compact source through the window support in a tiny t-interval);
    set it to None (or to ``panels``) to disable refinement.
    """

    panels: int = 32
    nodes: int = 16
    max_panels: int | None = 256

    def __post_init__(self):
        if self.panels < 1 or self.nodes < 2:
            raise ValueError("need at least 1 panel and 2 nodes")
        if self.max_panels is not None and self.max_panels < self.panels:
            object.__setattr__(self, "max_panels", self.panels)

    def doubled(self):
        return QuadratureParams(
            panels=2 * self.panels,
            nodes=self.nodes,
            max_panels=None if self.max_panels is None else 2 * self.max_panels,
        )


def gauss_legendre_panels(a, b, panels, nodes):
    """Nodes and weights of a composite Gauss-Legendre rule on [a, b]."""
    x, w = np.polynomial.legendre.leggauss(nodes)
    edges = np.linspace(a, b, panels + 1)
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    t = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wt = (half[:, None] * w[None, :]).ravel()
    return t, wt
