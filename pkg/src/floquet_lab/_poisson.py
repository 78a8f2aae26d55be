"""Cancellation-free evaluation of the smoothing kernel shared by the
spectral and verification modules.

The kernel is the Poisson kernel with radius r = exp(-eps),

    (1/2pi) * (1 - r^2) / (1 - 2 r cos(t) + r^2).

The textbook denominator loses all significant digits once both t and eps
are small (it is an O(eps^2 + t^2) quantity assembled from O(1) terms), so
it is evaluated as (1-r)^2 + 4 r sin^2(t/2) with 1-r = -expm1(-eps).
"""

from __future__ import annotations

import numpy as np


def poisson_kernel(t, eps):
    """Evaluate the smoothing kernel at angle offset t for width eps > 0.

    Broadcasts over both arguments. Exact total mass over (-pi, pi] is 1
    for every eps.
    """
    t = np.asarray(t, dtype=float)
    eps = np.asarray(eps, dtype=float)
    r = np.exp(-eps)
    one_minus_r = -np.expm1(-eps)
    num = -np.expm1(-2.0 * eps)
    den = one_minus_r**2 + 4.0 * r * np.sin(t / 2.0) ** 2
    return num / (2.0 * np.pi * den)


def unit_circle_distance_sq(t, eps):
    """|1 - e^{-eps} e^{it}|^2, computed without cancellation.

    This is the squared denominator entering the boundary-value operators.
    """
    t = np.asarray(t, dtype=float)
    eps = np.asarray(eps, dtype=float)
    r = np.exp(-eps)
    one_minus_r = -np.expm1(-eps)
    return one_minus_r**2 + 4.0 * r * np.sin(t / 2.0) ** 2
