"""Saliency evaluation metrics.

Distribution metrics (cc, kl_div, sim) compare a prediction against a
ground-truth density map; fixation metrics (nss, auc_judd, auc_borji)
against discrete fixation points; singleton metrics (gsi, msr) against
target/distractor/background masks of pop-out scenes; fixation_search
simulates a greedy saccade sequence with inhibition of return.

Conventions:
  - kl_div is D(gt || pred) with eps regularization on both maps.
  - nss uses the population standard deviation and averages over the
    fixation points as given (duplicates count).
  - the AUCs treat the set of distinct fixated pixels as positives;
    auc_judd takes all non-fixated pixels as negatives, auc_borji draws
    as many random pixels as there are positives, per split.
  - undefined cases raise ValueError (constant maps for cc/nss) or return
    nan (zero denominators in msr); they are never silently zero.
"""

from dataclasses import dataclass, field

import numpy as np

from .validation import as_bool_mask, as_map, check_fixations, check_same_shape


@dataclass
class SingletonGroundTruth:
    """Binary masks of a pop-out scene: the singleton target, the repeated
    distractors, and everything else. The three must partition the image."""

    target_mask: np.ndarray
    distractor_mask: np.ndarray
    background_mask: np.ndarray


@dataclass
class EvalRecord:
    """Computed metric values for one image."""

    image: str = ""
    values: dict = field(default_factory=dict)
    fixations_to_target: int = None
    found_within: dict = field(default_factory=dict)


def cc(pred, gt):
    """Pearson linear correlation coefficient between two maps."""
    pred = as_map(pred, "pred")
    gt = as_map(gt, "gt")
    check_same_shape(pred, gt, "pred", "gt")
    p = pred.ravel()
    g = gt.ravel()
    if p.std() == 0 or g.std() == 0:
        raise ValueError("cc is undefined for constant maps")
    p = p - p.mean()
    g = g - g.mean()
    return float((p * g).sum() / np.sqrt((p * p).sum() * (g * g).sum()))


def kl_div(pred, gt, eps=1e-8):
    """Kullback-Leibler divergence of the prediction from the ground truth.

    Both maps are regularized by ``eps`` and renormalized to sum 1; the
    returned value is sum(gt * log(gt / pred)) >= 0.
    """
    pred = as_map(pred, "pred")
    gt = as_map(gt, "gt")
    check_same_shape(pred, gt, "pred", "gt")
    p = pred.ravel() + eps
    g = gt.ravel() + eps
    p = p / p.sum()
    g = g / g.sum()
    return float((g * np.log(g / p)).sum())


def sim(pred, gt):
    """Histogram intersection of the two maps normalized to sum 1."""
    pred = as_map(pred, "pred")
    gt = as_map(gt, "gt")
    check_same_shape(pred, gt, "pred", "gt")
    ps = pred.sum()
    gs = gt.sum()
    if ps <= 0 or gs <= 0:
        raise ValueError("sim is undefined for all-zero maps")
    return float(np.minimum(pred / ps, gt / gs).sum())


def nss(pred, fixations):
    """Mean z-scored saliency at the fixated pixels."""
    pred = as_map(pred, "pred")
    pts = check_fixations(fixations, pred.shape)
    std = pred.std()
    if std == 0:
        raise ValueError("nss is undefined for constant maps")
    z = (pred - pred.mean()) / std
    return float(np.mean([z[r, c] for r, c in pts]))


def _unique_pixels(pts):
    seen = {}
    for r, c in pts:
        seen[(r, c)] = True
    return list(seen)


def _roc_area(pos_vals, neg_vals):
    """Trapezoidal ROC area, thresholding at each distinct positive value."""
    pos_vals = np.asarray(pos_vals, dtype=np.float64)
    neg_vals = np.asarray(neg_vals, dtype=np.float64)
    thresholds = np.unique(pos_vals)[::-1]
    n_pos = pos_vals.size
    n_neg = neg_vals.size
    tpr = [0.0]
    fpr = [0.0]
    for t in thresholds:
        tpr.append((pos_vals >= t).sum() / n_pos)
        fpr.append((neg_vals >= t).sum() / n_neg if n_neg else 0.0)
    tpr.append(1.0)
    fpr.append(1.0)
    return float(np.trapezoid(tpr, fpr))


def auc_judd(pred, fixations):
    """ROC area with all non-fixated pixels as negatives."""
    pred = as_map(pred, "pred")
    pts = _unique_pixels(check_fixations(fixations, pred.shape))
    fix_mask = np.zeros(pred.shape, dtype=bool)
    for r, c in pts:
        fix_mask[r, c] = True
    pos = pred[fix_mask]
    neg = pred[~fix_mask]
    return _roc_area(pos, neg)


def auc_borji(pred, fixations, n_splits=100, seed=0):
    """ROC area against uniformly sampled negative pixels, averaged.

    Each split samples as many pixels (with replacement) as there are
    distinct fixated pixels; a fixed seed makes the result reproducible.
    """
    pred = as_map(pred, "pred")
    pts = _unique_pixels(check_fixations(fixations, pred.shape))
    if n_splits < 1:
        raise ValueError("n_splits must be >= 1")
    flat = pred.ravel()
    pos = np.array([pred[r, c] for r, c in pts])
    rng = np.random.default_rng(seed)
    areas = []
    for _ in range(n_splits):
        neg = flat[rng.integers(0, flat.size, size=pos.size)]
        areas.append(_roc_area(pos, neg))
    return float(np.mean(areas))


def gsi(saliency, gt):
    """Global saliency index: (mean_target - mean_distractor) / (sum of both)."""
    s = as_map(saliency, "saliency")
    target, distractor, _ = _check_masks(gt, s.shape)
    mean_t = float(s[target].mean())
    mean_d = float(s[distractor].mean()) if distractor.any() else 0.0
    if mean_t == 0 and mean_d == 0:
        return 0.0
    return (mean_t - mean_d) / (mean_t + mean_d)


def msr(saliency, gt):
    """Max-saliency ratios (target/distractors, background/target).

    msr_t > 1 means the target peak beats every distractor; msr_b < 1
    means it also beats the background. Ratios with a zero denominator
    come back as nan.
    """
    s = as_map(saliency, "saliency")
    target, distractor, background = _check_masks(gt, s.shape)
    max_t = float(s[target].max())
    max_d = float(s[distractor].max()) if distractor.any() else 0.0
    max_b = float(s[background].max()) if background.any() else 0.0
    msr_t = max_t / max_d if max_d > 0 else float("nan")
    msr_b = max_b / max_t if max_t > 0 else float("nan")
    return msr_t, msr_b


def fixation_search(saliency, target_mask, max_fix=100, ior_radius=None):
    """Greedy fixation count to reach the target, or None if not found.

    Repeatedly jumps to the global maximum; a hit inside ``target_mask``
    stops the search, otherwise a disc of ``ior_radius`` pixels around the
    fixation is suppressed (inhibition of return). The default radius is
    7% of the image diagonal. Returns None when the budget runs out or
    the remaining map is all zero.
    """
    s = as_map(saliency, "saliency").copy()
    target = as_bool_mask(target_mask, s.shape, "target_mask")
    if max_fix < 1:
        raise ValueError("max_fix must be >= 1")
    h, w = s.shape
    if ior_radius is None:
        ior_radius = 0.07 * float(np.hypot(h, w))
    if ior_radius <= 0:
        raise ValueError("ior_radius must be > 0")
    rows = np.arange(h)[:, None]
    cols = np.arange(w)[None, :]
    r2 = float(ior_radius) ** 2
    for count in range(1, max_fix + 1):
        flat_idx = int(np.argmax(s))
        r, c = divmod(flat_idx, w)
        if s[r, c] <= 0:
            return None
        if target[r, c]:
            return count
        s[(rows - r) ** 2 + (cols - c) ** 2 <= r2] = 0.0
    return None


def percent_found(records, budget):
    """Percentage of records whose target was reached within ``budget``."""
    records = list(records)
    if not records:
        raise ValueError("no records")
    found = 0
    for rec in records:
        n = rec.fixations_to_target if hasattr(rec, "fixations_to_target") else rec
        if n is not None and n <= budget:
            found += 1
    return 100.0 * found / len(records)


def _check_masks(gt, shape):
    target = as_bool_mask(gt.target_mask, shape, "target_mask")
    distractor = as_bool_mask(gt.distractor_mask, shape, "distractor_mask")
    background = as_bool_mask(gt.background_mask, shape, "background_mask")
    if not target.any():
        raise ValueError("target mask is empty")
    if (target & distractor).any() or (target & background).any() or (
        distractor & background
    ).any():
        raise ValueError("masks must be pairwise disjoint")
    if not (target | distractor | background).all():
        raise ValueError("masks must cover the whole image")
    return target, distractor, background
