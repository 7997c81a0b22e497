"""Independent brute-force reference implementations used by the tests.

These deliberately avoid the library's vectorized code paths: plain
Python loops over pixels, direct 2-D convolution, explicit ROC sweeps.
They share only primitive definitions with the implementation (the bin
assignment formula and the log function), so value-level agreement is a
real check of the algorithmic path.
"""

import math

import numpy as np


def bin_index(value, mn, mx, n_bins):
    """Shared bin rule: floor((v - mn)/(mx - mn) * n_bins), clipped."""
    if mx == mn:
        return 0
    idx = math.floor((value - mn) / (mx - mn) * n_bins)
    return min(max(idx, 0), n_bins - 1)


def rarity_oracle(f, n_bins=11):
    """Per-pixel rarity: count same-bin pixels, apply -log(count/total).

    np.log is used as the scalar log primitive so results are bit-level
    comparable with the vectorized implementation.
    """
    f = np.asarray(f, dtype=np.float64)
    h, w = f.shape
    mn = min(f[r, c] for r in range(h) for c in range(w))
    mx = max(f[r, c] for r in range(h) for c in range(w))
    total = h * w
    counts = {}
    indices = {}
    for r in range(h):
        for c in range(w):
            idx = bin_index(f[r, c], mn, mx, n_bins)
            indices[(r, c)] = idx
            counts[idx] = counts.get(idx, 0) + 1
    out = np.empty((h, w), dtype=np.float64)
    for r in range(h):
        for c in range(w):
            out[r, c] = -np.log(np.float64(counts[indices[(r, c)]]) / total)
    return out


def auc_judd_oracle(pred, fixations):
    """All-thresholds ROC sweep with trapezoidal integration."""
    pred = np.asarray(pred, dtype=np.float64)
    fix_pixels = sorted(set((int(r), int(c)) for r, c in fixations))
    pos = [pred[r, c] for r, c in fix_pixels]
    neg = [
        pred[r, c]
        for r in range(pred.shape[0])
        for c in range(pred.shape[1])
        if (r, c) not in set(fix_pixels)
    ]
    thresholds = sorted(set(pos), reverse=True)
    points = [(0.0, 0.0)]
    for t in thresholds:
        tpr = sum(1 for v in pos if v >= t) / len(pos)
        fpr = sum(1 for v in neg if v >= t) / len(neg) if neg else 0.0
        points.append((fpr, tpr))
    points.append((1.0, 1.0))
    area = 0.0
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        area += (x1 - x0) * (y0 + y1) / 2.0
    return area


def gaussian_kernel_1d(sigma):
    radius = math.ceil(3 * sigma)
    xs = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-0.5 * (xs / sigma) ** 2)
    return k / k.sum()


def gaussian_blur_oracle(m, sigma):
    """Direct 2-D convolution with the outer-product kernel, replicated edges."""
    m = np.asarray(m, dtype=np.float64)
    if sigma == 0:
        return m.copy()
    k1 = gaussian_kernel_1d(sigma)
    kernel = np.outer(k1, k1)
    radius = (len(k1) - 1) // 2
    padded = np.pad(m, radius, mode="edge")
    h, w = m.shape
    out = np.zeros_like(m)
    for dr in range(-radius, radius + 1):
        for dc in range(-radius, radius + 1):
            weight = kernel[dr + radius, dc + radius]
            out += weight * padded[radius + dr : radius + dr + h,
                                   radius + dc : radius + dc + w]
    return out
