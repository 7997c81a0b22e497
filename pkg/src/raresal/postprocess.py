"""Final saliency conditioning: Gaussian smoothing, squaring, normalization.

Eye-tracking ground truth is blurry, so predictions correlate better after
low-pass filtering; squaring afterwards boosts peak-to-background contrast.
The smoothing sigma is expressed as a fraction of image width so one value
transfers across resolutions.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .maps import normalize_01
from .validation import as_map


@dataclass(frozen=True)
class PostprocessConfig:
    sigma_fraction: float = 0.035
    square: bool = True

    def validate(self):
        if self.sigma_fraction < 0:
            raise ValueError("sigma_fraction must be >= 0")
        return self


def gaussian_smooth(m, sigma):
    """Separable Gaussian blur, kernel radius ceil(3*sigma), replicated edges."""
    m = as_map(m)
    if sigma < 0:
        raise ValueError("sigma must be >= 0")
    if sigma == 0:
        return m.copy()
    radius = math.ceil(3 * sigma)
    return ndimage.gaussian_filter(m, sigma, mode="nearest", radius=radius)


def finalize(m, cfg=PostprocessConfig(), image_width=None):
    """Smooth, optionally square, and renormalize a saliency map.

    ``image_width`` anchors the sigma fraction; it defaults to the map's
    own width.
    """
    cfg.validate()
    m = as_map(m)
    if image_width is None:
        image_width = m.shape[1]
    out = gaussian_smooth(m, cfg.sigma_fraction * image_width)
    if cfg.square:
        out = out * out
    return normalize_01(out)
