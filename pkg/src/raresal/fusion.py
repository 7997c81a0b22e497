"""Conspicuity fusion: channels -> layer maps -> group maps -> saliency.

Fusion weights follow the classic Itti scheme: each map, normalized to
[0, 1], is weighted by the squared difference between its max and mean,
so maps with a few strong peaks dominate flat ones. Layer maps (one per
selected layer) are fused into five group maps, which are combined by a
weighted sum favouring deeper groups. The whole cascade runs once per
rarity threshold and the per-threshold results are averaged.
"""

import os
from dataclasses import dataclass

import numpy as np

from .features import VGG16, layer_selection
from .maps import normalize_01, resize_bilinear
from .rarity import tensor_rarity, tensor_rarity_threshold
from .validation import as_map, check_same_shape

DEFAULT_THRESHOLDS = (0.0, 0.9)
DEFAULT_GROUP_WEIGHTS = tuple(g / 15.0 for g in range(1, 6))


@dataclass(frozen=True)
class FusionConfig:
    """Knobs of the fusion cascade.

    group_weights default to g / 15 for g = 1..5 (linear preference for
    deeper groups). ``resolution`` is the (height, width) working grid;
    None means the source image size from the feature stack. The face
    channel is the raw activation of ``face_channel`` in ``face_layer``
    (its rarity instead when face_rarity is set) and only applies to
    vgg16 stacks.
    """

    thresholds: tuple = DEFAULT_THRESHOLDS
    group_weights: tuple = DEFAULT_GROUP_WEIGHTS
    use_face: bool = False
    face_layer: int = 15
    face_channel: int = 105
    face_rarity: bool = False
    border_margin: float = 0.05
    resolution: tuple = None
    n_bins: int = 11

    def validate(self):
        if len(self.thresholds) == 0:
            raise ValueError("at least one threshold is required")
        for t in self.thresholds:
            if not 0.0 <= t < 1.0:
                raise ValueError(f"thresholds must lie in [0, 1), got {t}")
        if len(self.group_weights) != 5:
            raise ValueError("exactly 5 group weights are required")
        if any(w <= 0 for w in self.group_weights):
            raise ValueError("group weights must be positive")
        if not 0.0 <= self.border_margin <= 0.25:
            raise ValueError("border_margin must be in [0, 0.25]")
        if self.n_bins < 2:
            raise ValueError("n_bins must be >= 2")
        return self


def itti_weight(m):
    """(max - mean)^2 of a map; expects a [0, 1]-normalized input."""
    m = as_map(m)
    return float((m.max() - m.mean()) ** 2)


def _fuse_channels(stack3d):
    """Itti-weighted fusion over the last axis of an H x W x C array."""
    h, w, c = stack3d.shape
    flat = stack3d.reshape(h * w, c)
    mn = flat.min(axis=0)
    mx = flat.max(axis=0)
    span = mx - mn
    span = np.where(span == 0.0, 1.0, span)
    normed = (flat - mn) / span
    weights = (normed.max(axis=0) - normed.mean(axis=0)) ** 2
    fused = (normed * weights).sum(axis=1).reshape(h, w)
    return normalize_01(fused)


def fuse_maps(maps):
    """Fuse same-sized maps: normalize each, weight by itti_weight, sum,
    normalize the sum. All-flat inputs fuse to an all-zero map."""
    if len(maps) == 0:
        raise ValueError("fuse_maps requires at least one map")
    arrs = [as_map(m) for m in maps]
    for m in arrs[1:]:
        check_same_shape(arrs[0], m)
    h, w = arrs[0].shape
    # row-major layout keeps the per-map reductions contiguous
    rows = np.stack([m.ravel() for m in arrs], axis=0)
    mn = rows.min(axis=1, keepdims=True)
    mx = rows.max(axis=1, keepdims=True)
    span = np.where(mx == mn, 1.0, mx - mn)
    normed = (rows - mn) / span
    weights = (normed.max(axis=1) - normed.mean(axis=1)) ** 2
    fused = (weights[:, None] * normed).sum(axis=0)
    return normalize_01(fused.reshape(h, w))


def layer_conspicuity(tensor, threshold, n_bins=11, resolution=None):
    """Layer conspicuity map: per-channel rarity, thresholded, fused.

    Channels are normalized after thresholding, fused at the tensor's own
    grid, then the result is resized to ``resolution`` when given.
    """
    rarity = tensor_rarity(tensor.data, n_bins=n_bins)
    return _layer_map(rarity, threshold, resolution)


def _layer_map(rarity, threshold, resolution):
    kept = rarity if threshold == 0.0 else tensor_rarity_threshold(rarity, threshold)
    dlcm = _fuse_channels(kept)
    if resolution is not None and tuple(resolution) != dlcm.shape:
        dlcm = resize_bilinear(dlcm, resolution[0], resolution[1])
    return dlcm


def group_conspicuity(dlcms):
    """Fuse the layer maps of one group into its group conspicuity map."""
    return fuse_maps(dlcms)


def zero_border(m, margin):
    """Zero a border band of width ceil(margin * min(H, W))."""
    m = as_map(m).copy()
    if margin <= 0:
        return m
    h, w = m.shape
    b = int(np.ceil(margin * min(h, w)))
    if b > 0:
        m[:b, :] = 0.0
        m[-b:, :] = 0.0
        m[:, :b] = 0.0
        m[:, -b:] = 0.0
    return m


def combine_groups(dgcms, cfg=FusionConfig(), face=None):
    """Weighted sum of the 5 group maps plus the optional face channel.

    The face map enters normalized, weighted by the mean group weight.
    Borders are zeroed before the final normalization.
    """
    cfg.validate()
    if len(dgcms) != 5:
        raise ValueError(f"expected 5 group maps, got {len(dgcms)}")
    arrs = [as_map(m) for m in dgcms]
    for m in arrs[1:]:
        check_same_shape(arrs[0], m)
    weights = np.asarray(cfg.group_weights, dtype=np.float64)
    total = sum(w * m for w, m in zip(weights, arrs))
    if face is not None:
        face = as_map(face)
        check_same_shape(arrs[0], face, "group map", "face map")
        total = total + float(weights.mean()) * normalize_01(face)
    total = zero_border(total, cfg.border_margin)
    return normalize_01(total)


def _working_resolution(stack, cfg):
    if cfg.resolution is not None:
        return (int(cfg.resolution[0]), int(cfg.resolution[1]))
    return (stack.image_height, stack.image_width)


def extract_face_map(stack, cfg, resolution):
    """Raw activation (or rarity) of the face channel, at working resolution."""
    if stack.backbone != VGG16:
        raise ValueError("the face channel is only defined for vgg16 stacks")
    tensor = stack.tensor_for_layer(cfg.face_layer)
    if cfg.face_channel >= tensor.channels:
        raise ValueError(
            f"face channel {cfg.face_channel} out of range "
            f"({tensor.channels} channels in layer {cfg.face_layer})"
        )
    fmap = tensor.data[:, :, cfg.face_channel]
    if cfg.face_rarity:
        fmap = tensor_rarity(fmap[:, :, None], n_bins=cfg.n_bins)[:, :, 0]
    return resize_bilinear(fmap, resolution[0], resolution[1])


def _cascade(stack, cfg, thresholds):
    """Run the cascade for several thresholds, computing rarity only once.

    Returns a list of (threshold, saliency, dlcms, dgcms) tuples; the maps
    all live at the working resolution.
    """
    cfg.validate()
    stack.validate()
    resolution = _working_resolution(stack, cfg)
    table = layer_selection(stack.backbone)
    rarity = {
        t.layer_id: tensor_rarity(t.data, n_bins=cfg.n_bins) for t in stack.tensors
    }
    face = extract_face_map(stack, cfg, resolution) if cfg.use_face else None

    passes = []
    for threshold in thresholds:
        dlcms = {}
        dgcms = {}
        for group_id, layers in enumerate(table.groups, start=1):
            group_maps = []
            for layer_id in layers:
                dlcm = _layer_map(rarity[layer_id], threshold, resolution)
                dlcms[layer_id] = dlcm
                group_maps.append(dlcm)
            dgcms[group_id] = group_conspicuity(group_maps)
        combined = combine_groups([dgcms[g] for g in range(1, 6)], cfg, face=face)
        passes.append((threshold, combined, dlcms, dgcms))
    return passes


def single_threshold_saliency(stack, threshold, cfg=FusionConfig()):
    """One full cascade pass at a fixed rarity threshold.

    Returns (saliency map, {layer_id: layer map}, {group_id: group map}).
    """
    _, combined, dlcms, dgcms = _cascade(stack, cfg, [threshold])[0]
    return combined, dlcms, dgcms


def multi_threshold_saliency(stack, cfg=FusionConfig()):
    """Average the cascade over all configured thresholds and renormalize."""
    passes = _cascade(stack, cfg, cfg.thresholds)
    return normalize_01(np.mean([p[1] for p in passes], axis=0))


def export_decomposition(stack, cfg, out_dir):
    """Write every layer/group conspicuity map per threshold as PGM files.

    Files are named L{layer}_T{threshold}.pgm and G{group}_T{threshold}.pgm.
    Returns the list of written paths.
    """
    from .netpbm import write_pgm

    os.makedirs(out_dir, exist_ok=True)
    written = []
    for threshold, _, dlcms, dgcms in _cascade(stack, cfg, cfg.thresholds):
        for layer_id, m in sorted(dlcms.items()):
            path = os.path.join(out_dir, f"L{layer_id}_T{threshold:g}.pgm")
            write_pgm(path, m)
            written.append(path)
        for group_id, m in sorted(dgcms.items()):
            path = os.path.join(out_dir, f"G{group_id}_T{threshold:g}.pgm")
            write_pgm(path, m)
            written.append(path)
    return written
