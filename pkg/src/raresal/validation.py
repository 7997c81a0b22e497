"""Input validation helpers shared across the package.

All maps travel through the pipeline as 2-D float64 arrays ("maps"),
feature tensors as H x W x C float64 arrays. These helpers coerce and
check shapes/finiteness once at API boundaries so the numeric code can
stay assumption-free.
"""

import numpy as np


def as_map(m, name="map"):
    """Coerce to a finite 2-D float64 array with height, width >= 1."""
    arr = np.asarray(m, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must have height and width >= 1")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def as_tensor(t, name="tensor"):
    """Coerce to a finite H x W x C float64 array with C >= 1."""
    arr = np.asarray(t, dtype=np.float64)
    if arr.ndim != 3:
        raise ValueError(f"{name} must be 3-D (H, W, C), got shape {arr.shape}")
    if min(arr.shape) < 1:
        raise ValueError(f"{name} must have all dimensions >= 1")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def as_rgb_image(img, name="image"):
    """Coerce to H x W x 3 float64 in [0, 1]; uint8 input is scaled by 255."""
    arr = np.asarray(img)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"{name} must be H x W x 3, got shape {arr.shape}")
    if arr.dtype == np.uint8:
        arr = arr.astype(np.float64) / 255.0
    else:
        arr = arr.astype(np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def as_bool_mask(mask, shape=None, name="mask"):
    """Coerce to a 2-D boolean mask, optionally checking its shape."""
    arr = np.asarray(mask)
    if arr.dtype != bool:
        arr = as_map(arr, name=name) > 0.5
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D")
    if shape is not None and arr.shape != tuple(shape):
        raise ValueError(f"{name} shape {arr.shape} != expected {tuple(shape)}")
    return arr


def check_same_shape(a, b, name_a="a", name_b="b"):
    if a.shape != b.shape:
        raise ValueError(
            f"{name_a} shape {a.shape} does not match {name_b} shape {b.shape}"
        )


def check_fixations(points, shape):
    """Validate a nonempty list of (row, col) fixations inside an image."""
    pts = [(int(r), int(c)) for r, c in points]
    if not pts:
        raise ValueError("fixation set is empty")
    h, w = shape
    for r, c in pts:
        if not (0 <= r < h and 0 <= c < w):
            raise ValueError(f"fixation ({r}, {c}) outside image {h}x{w}")
    return pts
