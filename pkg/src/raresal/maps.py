"""Dense 2-D map primitives: resizing, normalization, statistics.

Maps are plain float64 numpy arrays in row-major order. Every operation
is pure and returns a new array.
"""

import numpy as np

from .validation import as_map


def resize_bilinear(m, target_h, target_w):
    """Resize a 2-D map with corner-aligned bilinear interpolation.

    The four image corners map onto the target corners; with a target of
    size 1 along an axis the first source sample is used. Output values
    are clipped to the source range, and resizing to the identical size
    returns a bitwise-equal copy.
    """
    m = as_map(m)
    target_h, target_w = int(target_h), int(target_w)
    if target_h < 1 or target_w < 1:
        raise ValueError("target dimensions must be >= 1")
    h, w = m.shape
    if (target_h, target_w) == (h, w):
        return m.copy()

    def _coords(src, dst):
        if dst == 1 or src == 1:
            return np.zeros(dst, dtype=np.intp), np.zeros(dst)
        pos = np.arange(dst) * ((src - 1) / (dst - 1))
        lo = np.minimum(np.floor(pos).astype(np.intp), src - 1)
        return lo, pos - lo

    r0, fr = _coords(h, target_h)
    c0, fc = _coords(w, target_w)
    r1 = np.minimum(r0 + 1, h - 1)
    c1 = np.minimum(c0 + 1, w - 1)

    # lerp as u + a*(v - u) so constant regions reproduce exactly
    top = m[r0][:, c0]
    top = top + fc[None, :] * (m[r0][:, c1] - top)
    bot = m[r1][:, c0]
    bot = bot + fc[None, :] * (m[r1][:, c1] - bot)
    out = top + fr[:, None] * (bot - top)
    return np.clip(out, m.min(), m.max())


def normalize_01(m):
    """Rescale a map to [0, 1]; a constant map becomes all zeros."""
    m = as_map(m)
    mn = m.min()
    mx = m.max()
    if mx == mn:
        return np.zeros_like(m)
    return (m - mn) / (mx - mn)


def map_stats(m):
    """Return (min, max, mean) of a map."""
    m = as_map(m)
    return float(m.min()), float(m.max()), float(m.mean())
