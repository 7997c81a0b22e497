"""Histogram-based rarity (self-information) of feature maps.

Each feature map is quantized onto equal-width bins spanning its own
[min, max]; a pixel's rarity is -log of its bin's occurrence probability,
written back per pixel (backprojection). Rare values light up, common
ones vanish. A constant map has a single occupied bin and zero rarity
everywhere.

Bin assignment contract (shared by the vectorized path and the test
oracles): idx = floor((v - min) / (max - min) * n_bins), clipped to
[0, n_bins - 1]; a constant map puts every pixel in bin 0.
"""

from dataclasses import dataclass

import numpy as np

from .maps import normalize_01
from .validation import as_map, as_tensor


@dataclass(frozen=True)
class RarityHistogram:
    """Per-bin occurrence probabilities and rarity values of one map."""

    n_bins: int
    bin_edges: np.ndarray
    p: np.ndarray
    rarity: np.ndarray


def _bin_indices(data, n_bins):
    """Bin index per element, per channel, for (N, C) data."""
    mn = data.min(axis=0)
    mx = data.max(axis=0)
    span = mx - mn
    span = np.where(span == 0.0, 1.0, span)
    idx = np.floor((data - mn) / span * n_bins).astype(np.int64)
    return np.clip(idx, 0, n_bins - 1), mn, mx


def _rarity_values(counts, total, log_base=None):
    """-log(count/total) per bin, 0 for empty bins."""
    p = counts.astype(np.float64) / total
    out = np.zeros_like(p)
    occupied = counts > 0
    if log_base is None:
        out[occupied] = -np.log(p[occupied])
    elif log_base == 2:
        out[occupied] = -np.log2(p[occupied])
    else:
        out[occupied] = -np.log(p[occupied]) / np.log(float(log_base))
    return out


def tensor_rarity(data, n_bins=11, log_base=None):
    """Rarity of every channel of an H x W x C tensor, vectorized.

    Equivalent to applying feature_map_rarity channel by channel, but one
    histogram pass for the whole tensor; this dominates pipeline runtime.
    """
    data = as_tensor(data)
    if n_bins < 2:
        raise ValueError("n_bins must be >= 2")
    h, w, c = data.shape
    flat = data.reshape(h * w, c)
    idx, _, _ = _bin_indices(flat, n_bins)
    offsets = idx + np.arange(c, dtype=np.int64) * n_bins
    counts = np.bincount(offsets.ravel(), minlength=c * n_bins)
    rarity = _rarity_values(counts, h * w, log_base=log_base)
    return rarity[offsets].reshape(h, w, c)


def feature_map_rarity(f, n_bins=11, log_base=None):
    """Backprojected rarity map of a single-channel feature map."""
    f = as_map(f)
    return tensor_rarity(f[:, :, None], n_bins=n_bins, log_base=log_base)[:, :, 0]


def rarity_histogram(f, n_bins=11, log_base=None):
    """The histogram behind feature_map_rarity, for inspection/reporting."""
    f = as_map(f)
    flat = f.reshape(-1, 1)
    idx, mn, mx = _bin_indices(flat, n_bins)
    counts = np.bincount(idx[:, 0], minlength=n_bins)
    edges = np.linspace(mn[0], mx[0], n_bins + 1)
    p = counts.astype(np.float64) / flat.shape[0]
    return RarityHistogram(n_bins, edges, p, _rarity_values(counts, flat.shape[0], log_base))


def apply_rarity_threshold(r, threshold):
    """Keep only the most-rare pixels of a rarity map.

    The map is min-max normalized and pixels whose normalized rarity falls
    below ``threshold`` are zeroed; survivors keep their original values.
    threshold = 0 returns the map unchanged.
    """
    r = as_map(r)
    if not 0.0 <= threshold < 1.0:
        raise ValueError(f"threshold must be in [0, 1), got {threshold}")
    if threshold == 0.0:
        return r.copy()
    mask = normalize_01(r) >= threshold
    return np.where(mask, r, 0.0)


def tensor_rarity_threshold(rarity, threshold):
    """apply_rarity_threshold over every channel of an H x W x C rarity tensor."""
    rarity = as_tensor(rarity)
    if not 0.0 <= threshold < 1.0:
        raise ValueError(f"threshold must be in [0, 1), got {threshold}")
    if threshold == 0.0:
        return rarity.copy()
    h, w, c = rarity.shape
    flat = rarity.reshape(h * w, c)
    mn = flat.min(axis=0)
    mx = flat.max(axis=0)
    span = mx - mn
    span = np.where(span == 0.0, 1.0, span)
    normed = (flat - mn) / span
    kept = np.where(normed >= threshold, flat, 0.0)
    return kept.reshape(h, w, c)
