"""A fixed analytic filter bank standing in for a pretrained encoder.

Ten layers in five groups (two per group), eight channels per layer:
luminance, three color-opponency axes 60 degrees apart in the isoluminant
plane (the first is red-green, the others span blue-yellow), three
oriented edge-energy channels 60 degrees apart, and a local-contrast
channel. Evenly spaced steerable families keep the bank's response to a
rotating color or edge direction within cos(30 deg) of its peak, so
detectability grows near-monotonically with the target/distractor
difference. Group g runs the bank on the image average-pooled g-1 times,
so deeper groups integrate progressively larger neighbourhoods; the
second layer of each group adds a 3x3 box average before filtering.

Everything is deterministic, and every response is pointwise or an
absolute value of a symmetric-kernel convolution, making the bank
equivariant to 180-degree rotation on even-sized inputs.
"""

import numpy as np
from scipy import ndimage

from .features import TOY, FeatureStack, FeatureTensor, layer_selection
from .validation import as_rgb_image

CHANNELS_PER_LAYER = 8
MIN_IMAGE_SIDE = 32
_COLOR_AXES_DEG = (0.0, 60.0, 120.0)
# staggered so vertical structure leaves one axis free for rotated targets
_EDGE_AXES_DEG = (30.0, 90.0, 150.0)

# orthonormal isoluminant opponent basis: red-green and blue-yellow
OPPONENT_RG = np.array([1.0, -1.0, 0.0]) / np.sqrt(2.0)
OPPONENT_BY = np.array([1.0, 1.0, -2.0]) / np.sqrt(6.0)


def _pool2(m):
    """2x2 average pooling; odd edges are replicated to even size first."""
    h, w = m.shape
    if h % 2 or w % 2:
        m = np.pad(m, ((0, h % 2), (0, w % 2)), mode="edge")
        h, w = m.shape
    return m.reshape(h // 2, 2, w // 2, 2).mean(axis=(1, 3))


def _bank(rgb):
    """The 8-channel response stack of one scale."""
    r, g, b = rgb[:, :, 0], rgb[:, :, 1], rgb[:, :, 2]
    lum = (r + g + b) / 3.0
    o1 = r * OPPONENT_RG[0] + g * OPPONENT_RG[1] + b * OPPONENT_RG[2]
    o2 = r * OPPONENT_BY[0] + g * OPPONENT_BY[1] + b * OPPONENT_BY[2]
    colors = [
        np.cos(np.deg2rad(k)) * o1 + np.sin(np.deg2rad(k)) * o2
        for k in _COLOR_AXES_DEG
    ]
    iy = ndimage.gaussian_filter(lum, 1.0, order=(1, 0), mode="nearest")
    ix = ndimage.gaussian_filter(lum, 1.0, order=(0, 1), mode="nearest")
    edges = [
        np.abs(np.cos(np.deg2rad(k)) * ix + np.sin(np.deg2rad(k)) * iy)
        for k in _EDGE_AXES_DEG
    ]
    contrast = np.abs(lum - ndimage.uniform_filter(lum, 3, mode="nearest"))
    return np.stack([lum, *colors, *edges, contrast], axis=-1)


def extract_toy_features(image):
    """Build the 10-layer feature stack of an RGB image (>= 32x32)."""
    rgb = as_rgb_image(image)
    h, w, _ = rgb.shape
    if h < MIN_IMAGE_SIDE or w < MIN_IMAGE_SIDE:
        raise ValueError(f"image must be at least {MIN_IMAGE_SIDE}x{MIN_IMAGE_SIDE}")

    table = layer_selection(TOY)
    tensors = []
    scaled = rgb
    for group_id, layers in enumerate(table.groups, start=1):
        if group_id > 1:
            scaled = np.stack(
                [_pool2(scaled[:, :, k]) for k in range(3)], axis=-1
            )
        smoothed = np.stack(
            [ndimage.uniform_filter(scaled[:, :, k], 3, mode="nearest") for k in range(3)],
            axis=-1,
        )
        for layer_id, source in zip(layers, (scaled, smoothed)):
            tensors.append(FeatureTensor(layer_id, group_id, _bank(source)))

    return FeatureStack(TOY, h, w, tensors).validate()
