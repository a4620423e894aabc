"""Synthetic CT-like test phantom.

Piecewise-constant sums of ellipse intensities on a soft-tissue
background, loosely in the Shepp-Logan style: a body outline, organ-scale
blobs and a couple of small high-contrast features. Deterministic for a
given size.
"""

import numpy as np

# (cx, cy, a, b, angle_rad, delta) in unit coordinates
_ELLIPSES = (
    (0.00, 0.00, 0.85, 0.75, 0.0, 120.0),    # body
    (0.00, 0.05, 0.65, 0.55, 0.0, 35.0),     # inner tissue
    (-0.25, 0.00, 0.18, 0.28, 0.3, 40.0),    # left organ
    (0.25, 0.00, 0.18, 0.28, -0.3, -35.0),   # right organ (darker)
    (0.00, -0.30, 0.12, 0.08, 0.0, 55.0),    # anterior feature
    (0.05, 0.35, 0.20, 0.12, 0.0, -25.0),    # posterior cavity
    (-0.05, 0.12, 0.04, 0.04, 0.0, 65.0),    # small lesion
)

_BACKGROUND = 30.0


def ct_phantom(size: int = 128) -> np.ndarray:
    """A size-by-size uint8 phantom image."""
    if size < 8:
        raise ValueError(f"phantom size must be >= 8, got {size}")
    yy, xx = np.mgrid[0:size, 0:size]
    x = (xx - size / 2.0) / (size / 2.0)
    y = (yy - size / 2.0) / (size / 2.0)
    img = np.full((size, size), _BACKGROUND)
    for cx, cy, a, b, ang, delta in _ELLIPSES:
        ca, sa = np.cos(ang), np.sin(ang)
        u = (x - cx) * ca + (y - cy) * sa
        v = -(x - cx) * sa + (y - cy) * ca
        img[(u / a) ** 2 + (v / b) ** 2 <= 1.0] += delta
    return np.clip(np.rint(img), 0, 255).astype(np.uint8)
