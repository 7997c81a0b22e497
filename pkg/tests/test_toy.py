import numpy as np
import pytest

from raresal.features import TOY
from raresal.fusion import FusionConfig, multi_threshold_saliency
from raresal.postprocess import PostprocessConfig, finalize
from raresal.stimuli import StimulusSpec, generate
from raresal.toy import CHANNELS_PER_LAYER, extract_toy_features


def predict(image):
    stack = extract_toy_features(image)
    raw = multi_threshold_saliency(stack, FusionConfig())
    return finalize(raw, PostprocessConfig(), image_width=raw.shape[1])


class TestStackStructure:
    def test_layer_table_and_shapes(self):
        img = np.random.default_rng(0).random((64, 48, 3))
        stack = extract_toy_features(img)
        assert stack.backbone == TOY
        assert (stack.image_height, stack.image_width) == (64, 48)
        assert [t.layer_id for t in stack.tensors] == list(range(1, 11))
        assert [t.group_id for t in stack.tensors] == [1, 1, 2, 2, 3, 3, 4, 4, 5, 5]
        for t in stack.tensors:
            factor = 2 ** (t.group_id - 1)
            assert t.channels == CHANNELS_PER_LAYER
            assert t.height == 64 // factor
            assert t.width == 48 // factor
        stack.validate()

    def test_odd_sizes_handled(self):
        img = np.random.default_rng(1).random((37, 45, 3))
        stack = extract_toy_features(img)
        assert stack.tensors[-1].height >= 1

    def test_deterministic(self):
        img = np.random.default_rng(2).random((32, 32, 3))
        a = extract_toy_features(img)
        b = extract_toy_features(img)
        for ta, tb in zip(a.tensors, b.tensors):
            assert np.array_equal(ta.data, tb.data)

    def test_uint8_input_accepted(self):
        img = (np.random.default_rng(3).random((32, 32, 3)) * 255).astype(np.uint8)
        extract_toy_features(img).validate()

    def test_too_small_rejected(self):
        with pytest.raises(ValueError):
            extract_toy_features(np.zeros((16, 64, 3)))


class TestPipelineBehaviour:
    def test_constant_image_gives_zero_saliency(self):
        img = np.full((48, 48, 3), 0.5)
        stack = extract_toy_features(img)
        for t in stack.tensors:
            flat = t.data.reshape(-1, t.channels)
            assert np.all(flat.max(axis=0) == flat.min(axis=0))
        assert np.array_equal(predict(img), np.zeros((48, 48)))

    def test_color_singleton_argmax_inside_target(self):
        stim = generate(StimulusSpec(kind="color", delta=180.0, seed=4))
        sal = predict(stim.image)
        r, c = np.unravel_index(sal.argmax(), sal.shape)
        assert stim.ground_truth.target_mask[r, c]

    def test_rotation_equivariance(self):
        rng = np.random.default_rng(5)
        img = rng.random((64, 64, 3))
        rotated = img[::-1, ::-1, :].copy()
        a = extract_toy_features(img)
        b = extract_toy_features(rotated)
        for ta, tb in zip(a.tensors, b.tensors):
            assert np.allclose(ta.data, tb.data[::-1, ::-1, :], atol=1e-10)

    def test_saliency_rotates_with_input(self):
        rng = np.random.default_rng(6)
        img = rng.random((64, 64, 3))
        sal = predict(img)
        sal_rot = predict(img[::-1, ::-1, :].copy())
        assert np.allclose(sal, sal_rot[::-1, ::-1], atol=1e-7)
