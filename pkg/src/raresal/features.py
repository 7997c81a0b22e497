"""Feature tensors, feature stacks, and per-backbone layer selection tables.

A feature stack is the pipeline input: an ordered list of H x W x C
activation tensors, each tagged with the backbone layer index it was
captured from and the level group (1 = earliest/low level .. 5 = deepest)
it belongs to.
"""

from dataclasses import dataclass, field

import numpy as np

from .validation import as_tensor

VGG16 = "vgg16"
VGG19 = "vgg19"
MOBILENETV2 = "mobilenetv2"
TOY = "toy"

BACKBONES = (VGG16, VGG19, MOBILENETV2, TOY)

# numeric codes used by the DRF container
BACKBONE_CODES = {VGG16: 0, VGG19: 1, MOBILENETV2: 2, TOY: 3}
BACKBONE_FROM_CODE = {v: k for k, v in BACKBONE_CODES.items()}

_LAYER_TABLES = {
    VGG16: ((1, 2), (4, 5), (7, 8, 9), (11, 12, 13), (15, 16, 17)),
    VGG19: ((1, 2), (4, 5), (7, 8, 9, 10), (12, 13, 14, 15), (17, 18, 19, 20)),
    MOBILENETV2: (
        (16, 18),
        (24, 32),
        (41, 50, 59, 67),
        (76, 85, 94, 102),
        (111, 120, 137, 146),
    ),
    TOY: ((1, 2), (3, 4), (5, 6), (7, 8), (9, 10)),
}


@dataclass(frozen=True)
class LayerSelection:
    """The layers read out of one backbone, as 5 ordered groups."""

    backbone: str
    groups: tuple

    @property
    def all_layers(self):
        return tuple(l for g in self.groups for l in g)

    def group_of(self, layer_id):
        for g, layers in enumerate(self.groups, start=1):
            if layer_id in layers:
                return g
        raise KeyError(f"layer {layer_id} not selected for {self.backbone}")


def layer_selection(backbone):
    """Return the layer/group selection table for a backbone id."""
    if backbone not in _LAYER_TABLES:
        raise ValueError(f"unknown backbone {backbone!r}; expected one of {BACKBONES}")
    return LayerSelection(backbone, _LAYER_TABLES[backbone])


@dataclass
class FeatureTensor:
    """One captured activation tensor: H x W x C float64 data."""

    layer_id: int
    group_id: int
    data: np.ndarray

    def __post_init__(self):
        self.data = as_tensor(self.data, name=f"layer {self.layer_id} data")
        if not 1 <= self.group_id <= 5:
            raise ValueError(f"group_id must be in 1..5, got {self.group_id}")

    @property
    def height(self):
        return self.data.shape[0]

    @property
    def width(self):
        return self.data.shape[1]

    @property
    def channels(self):
        return self.data.shape[2]


@dataclass
class FeatureStack:
    """All selected activations for one image, ordered by (group, layer)."""

    backbone: str
    image_height: int
    image_width: int
    tensors: list = field(default_factory=list)

    def validate(self):
        """Check the stack against its backbone's selection table."""
        table = layer_selection(self.backbone)
        if self.image_height < 1 or self.image_width < 1:
            raise ValueError("image dimensions must be >= 1")
        got = [(t.group_id, t.layer_id) for t in self.tensors]
        expected = [
            (g, l) for g, layers in enumerate(table.groups, start=1) for l in layers
        ]
        if got != expected:
            raise ValueError(
                f"stack layers {got} do not match the {self.backbone} "
                f"selection table {expected}"
            )
        return self

    def group_tensors(self, group_id):
        return [t for t in self.tensors if t.group_id == group_id]

    def tensor_for_layer(self, layer_id):
        for t in self.tensors:
            if t.layer_id == layer_id:
                return t
        raise KeyError(f"no tensor for layer {layer_id}")
