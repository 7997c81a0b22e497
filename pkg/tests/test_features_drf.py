import io
import struct

import numpy as np
import pytest

from raresal.drf import DrfError, drf_bytes, read_drf, write_drf
from raresal.features import (
    MOBILENETV2,
    TOY,
    VGG16,
    VGG19,
    FeatureStack,
    FeatureTensor,
    layer_selection,
)


class TestLayerSelection:
    def test_vgg16_table(self):
        sel = layer_selection(VGG16)
        assert sel.groups == ((1, 2), (4, 5), (7, 8, 9), (11, 12, 13), (15, 16, 17))
        assert len(sel.all_layers) == 13

    def test_vgg19_table(self):
        # 16 selected conv layers: 2 + 2 + 4 + 4 + 4
        sel = layer_selection(VGG19)
        assert len(sel.all_layers) == 16
        assert sel.groups[2] == (7, 8, 9, 10)
        assert sel.groups[3] == (12, 13, 14, 15)
        assert sel.groups[4] == (17, 18, 19, 20)

    def test_mobilenetv2_table(self):
        sel = layer_selection(MOBILENETV2)
        assert sel.groups[0] == (16, 18)
        assert sel.groups[4] == (111, 120, 137, 146)

    def test_toy_table(self):
        sel = layer_selection(TOY)
        assert sel.groups == ((1, 2), (3, 4), (5, 6), (7, 8), (9, 10))

    def test_group_lookup(self):
        sel = layer_selection(VGG16)
        assert sel.group_of(9) == 3
        with pytest.raises(KeyError):
            sel.group_of(3)

    def test_unknown_backbone_rejected(self):
        with pytest.raises(ValueError):
            layer_selection("resnet50")


def _toy_stack(seed=0, h=8, w=6, channels=2):
    rng = np.random.default_rng(seed)
    tensors = []
    for g, layers in enumerate(layer_selection(TOY).groups, start=1):
        for lid in layers:
            tensors.append(
                FeatureTensor(lid, g, rng.normal(size=(h, w, channels)))
            )
    return FeatureStack(TOY, 32, 24, tensors)


class TestFeatureTypes:
    def test_group_range_checked(self):
        with pytest.raises(ValueError):
            FeatureTensor(1, 6, np.zeros((2, 2, 1)))

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            FeatureTensor(1, 1, np.full((2, 2, 1), np.inf))

    def test_stack_order_must_match_table(self):
        stack = _toy_stack()
        stack.tensors.reverse()
        with pytest.raises(ValueError, match="selection table"):
            stack.validate()

    def test_valid_stack_passes(self):
        _toy_stack().validate()


class TestDrfRoundtrip:
    def test_byte_count_matches_layout(self):
        stack = _toy_stack(h=4, w=4, channels=2)
        payload = sum(4 * t.height * t.width * t.channels for t in stack.tensors)
        expected = 20 + len(stack.tensors) * 17 + payload
        assert len(drf_bytes(stack)) == expected

    def test_single_layer_record_arithmetic(self):
        # header 20 + record 17 + 4*4*2*4 payload = 165 bytes
        header = struct.pack("<4sIIII", b"DRF1", 3, 4, 4, 1)
        record = struct.pack("<IBIII", 1, 1, 4, 4, 2)
        payload = np.zeros(32, dtype="<f4").tobytes()
        blob = header + record + payload
        assert len(blob) == 165
        with pytest.raises(DrfError):  # toy table wants 10 layers
            read_drf(io.BytesIO(blob))

    def test_roundtrip_is_bit_exact_on_float32(self):
        stack = _toy_stack(seed=1)
        back = read_drf(io.BytesIO(drf_bytes(stack)))
        assert back.backbone == stack.backbone
        assert (back.image_height, back.image_width) == (32, 24)
        for a, b in zip(stack.tensors, back.tensors):
            assert (a.layer_id, a.group_id) == (b.layer_id, b.group_id)
            assert np.array_equal(
                a.data.astype(np.float32), b.data.astype(np.float32)
            )
            assert b.data.dtype == np.float64

    def test_double_roundtrip_identical_bytes(self):
        stack = _toy_stack(seed=2)
        once = drf_bytes(read_drf(io.BytesIO(drf_bytes(stack))))
        assert once == drf_bytes(stack)

    def test_file_path_roundtrip(self, tmp_path):
        stack = _toy_stack(seed=3)
        path = tmp_path / "stack.drf"
        n = write_drf(stack, path)
        assert path.stat().st_size == n
        assert read_drf(path).validate()


class TestDrfErrors:
    def test_empty_stack_rejected(self):
        with pytest.raises(ValueError):
            write_drf(FeatureStack(TOY, 8, 8, []), io.BytesIO())

    def test_bad_magic(self):
        blob = b"XXXX" + drf_bytes(_toy_stack())[4:]
        with pytest.raises(DrfError, match="magic"):
            read_drf(io.BytesIO(blob))

    def test_truncated_payload(self):
        blob = drf_bytes(_toy_stack())
        with pytest.raises(DrfError, match="truncated"):
            read_drf(io.BytesIO(blob[:-5]))

    def test_layer_count_mismatch(self):
        blob = bytearray(drf_bytes(_toy_stack()))
        blob[16:20] = struct.pack("<I", 12)
        with pytest.raises(DrfError, match="layer_count"):
            read_drf(io.BytesIO(bytes(blob)))

    def test_wrong_group_for_layer(self):
        blob = bytearray(drf_bytes(_toy_stack(h=2, w=2, channels=1)))
        blob[24] = 5  # group byte of the first layer record
        with pytest.raises(DrfError, match="inconsistent"):
            read_drf(io.BytesIO(bytes(blob)))

    def test_non_finite_payload(self):
        blob = bytearray(drf_bytes(_toy_stack(h=2, w=2, channels=1)))
        blob[37:41] = struct.pack("<f", np.inf)  # first payload float
        with pytest.raises(DrfError, match="non-finite"):
            read_drf(io.BytesIO(bytes(blob)))

    def test_unknown_backbone_code(self):
        blob = bytearray(drf_bytes(_toy_stack()))
        blob[4:8] = struct.pack("<I", 9)
        with pytest.raises(DrfError, match="backbone"):
            read_drf(io.BytesIO(bytes(blob)))
