"""Estimator facade over the rarity-saliency pipeline.

RaritySaliency is a stateless transformer (there is nothing to train);
fit only validates parameters, and transform/predict map feature stacks
or RGB images to saliency maps. It follows the scikit-learn parameter
conventions so it clones cleanly and can sit inside a Pipeline.
"""

import numpy as np
from sklearn.base import BaseEstimator

from .features import FeatureStack
from .fusion import (
    DEFAULT_GROUP_WEIGHTS,
    DEFAULT_THRESHOLDS,
    FusionConfig,
    _cascade,
    multi_threshold_saliency,
)
from .maps import normalize_01
from .postprocess import PostprocessConfig, finalize
from .toy import extract_toy_features


class RaritySaliency(BaseEstimator):
    """Training-free saliency from rarity of multi-level features.

    Parameters
    ----------
    thresholds : tuple of float in [0, 1)
        Rarity cut-offs; the cascade runs once per value and the results
        are averaged. (0, 0.9) keeps all rarity-ordered data while
        reinforcing only the rarest regions.
    n_bins : int
        Histogram bins for the rarity transform.
    group_weights : tuple of 5 positive floats, or None
        Mixing weights of the five level groups; None means the linear
        default favouring deeper groups.
    use_face : bool
        Add the raw face-selective channel (vgg16 stacks only).
    face_rarity : bool
        Use the rarity of the face channel instead of its raw activation.
    border_margin : float
        Fraction of min(H, W) zeroed along the borders.
    sigma_fraction : float
        Gaussian smoothing sigma as a fraction of image width.
    square : bool
        Square the smoothed map to sharpen peaks.
    resolution : (height, width) or None
        Working grid; None uses the source image size.
    """

    def __init__(
        self,
        thresholds=DEFAULT_THRESHOLDS,
        n_bins=11,
        group_weights=None,
        use_face=False,
        face_rarity=False,
        border_margin=0.05,
        sigma_fraction=0.035,
        square=True,
        resolution=None,
    ):
        self.thresholds = thresholds
        self.n_bins = n_bins
        self.group_weights = group_weights
        self.use_face = use_face
        self.face_rarity = face_rarity
        self.border_margin = border_margin
        self.sigma_fraction = sigma_fraction
        self.square = square
        self.resolution = resolution

    def fusion_config(self):
        weights = (
            DEFAULT_GROUP_WEIGHTS
            if self.group_weights is None
            else tuple(self.group_weights)
        )
        return FusionConfig(
            thresholds=tuple(self.thresholds),
            group_weights=weights,
            use_face=self.use_face,
            face_rarity=self.face_rarity,
            border_margin=self.border_margin,
            resolution=self.resolution,
            n_bins=self.n_bins,
        ).validate()

    def postprocess_config(self):
        return PostprocessConfig(
            sigma_fraction=self.sigma_fraction, square=self.square
        ).validate()

    def fit(self, X=None, y=None):
        """Validate parameters; the model has no trainable state."""
        self.fusion_config()
        self.postprocess_config()
        return self

    def _as_stack(self, x):
        if isinstance(x, FeatureStack):
            return x
        return extract_toy_features(x)

    def _one(self, x):
        stack = self._as_stack(x)
        raw = multi_threshold_saliency(stack, self.fusion_config())
        return finalize(raw, self.postprocess_config(), image_width=raw.shape[1])

    def transform(self, X):
        """Saliency map(s) for a feature stack / RGB image or a list of them."""
        if isinstance(X, (list, tuple)):
            return [self._one(x) for x in X]
        return self._one(X)

    def predict(self, X):
        return self.transform(X)

    def decompose(self, x):
        """Per-threshold layer and group conspicuity maps, for inspection.

        Returns {threshold: {"layers": {layer_id: map}, "groups": {g: map},
        "saliency": map}} plus the final postprocessed map under "final".
        """
        stack = self._as_stack(x)
        cfg = self.fusion_config()
        out = {}
        combined = []
        for threshold, sal, dlcms, dgcms in _cascade(stack, cfg, cfg.thresholds):
            out[threshold] = {"layers": dlcms, "groups": dgcms, "saliency": sal}
            combined.append(sal)
        raw = normalize_01(np.mean(combined, axis=0))
        out["final"] = finalize(
            raw, self.postprocess_config(), image_width=raw.shape[1]
        )
        return out
