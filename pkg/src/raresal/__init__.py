"""raresal: training-free visual saliency from rarity of deep features.

The pipeline measures, per feature map, how improbable each pixel's value
is (histogram self-information), keeps the rarest responses, fuses them
across channels, layers, and level groups into a single saliency map, and
conditions it with smoothing and squaring. A full evaluation suite
(distribution, fixation, and singleton metrics plus a greedy fixation
search) and a pop-out stimulus generator make the model testable without
any external dataset; a deterministic toy filter bank stands in for a
pretrained encoder.
"""

from .drf import DrfError, drf_bytes, read_drf, write_drf
from .features import (
    BACKBONES,
    MOBILENETV2,
    TOY,
    VGG16,
    VGG19,
    FeatureStack,
    FeatureTensor,
    LayerSelection,
    layer_selection,
)
from .fusion import (
    FusionConfig,
    combine_groups,
    export_decomposition,
    fuse_maps,
    group_conspicuity,
    itti_weight,
    layer_conspicuity,
    multi_threshold_saliency,
    single_threshold_saliency,
)
from .maps import map_stats, normalize_01, resize_bilinear
from .metrics import (
    EvalRecord,
    SingletonGroundTruth,
    auc_borji,
    auc_judd,
    cc,
    fixation_search,
    gsi,
    kl_div,
    msr,
    nss,
    percent_found,
    sim,
)
from .model import RaritySaliency
from .postprocess import PostprocessConfig, finalize, gaussian_smooth
from .rarity import (
    RarityHistogram,
    apply_rarity_threshold,
    feature_map_rarity,
    rarity_histogram,
    tensor_rarity,
)
from .stimuli import Stimulus, StimulusSpec, generate, sweep, write_stimulus
from .toy import extract_toy_features

__version__ = "0.1.0"

__all__ = [
    "BACKBONES",
    "DrfError",
    "EvalRecord",
    "FeatureStack",
    "FeatureTensor",
    "FusionConfig",
    "LayerSelection",
    "MOBILENETV2",
    "PostprocessConfig",
    "RarityHistogram",
    "RaritySaliency",
    "SingletonGroundTruth",
    "Stimulus",
    "StimulusSpec",
    "TOY",
    "VGG16",
    "VGG19",
    "apply_rarity_threshold",
    "auc_borji",
    "auc_judd",
    "cc",
    "combine_groups",
    "drf_bytes",
    "export_decomposition",
    "extract_toy_features",
    "feature_map_rarity",
    "finalize",
    "fixation_search",
    "fuse_maps",
    "gaussian_smooth",
    "generate",
    "group_conspicuity",
    "gsi",
    "itti_weight",
    "kl_div",
    "layer_conspicuity",
    "layer_selection",
    "map_stats",
    "msr",
    "multi_threshold_saliency",
    "normalize_01",
    "nss",
    "percent_found",
    "rarity_histogram",
    "read_drf",
    "resize_bilinear",
    "sim",
    "single_threshold_saliency",
    "sweep",
    "tensor_rarity",
    "write_drf",
    "write_stimulus",
]
