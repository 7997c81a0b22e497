import numpy as np
import pytest

from raresal.stimuli import (
    StimulusSpec,
    generate,
    isoluminant_color,
    sweep,
    write_stimulus,
)


class TestSpecValidation:
    def test_bad_kind(self):
        with pytest.raises(ValueError):
            StimulusSpec(kind="shape", delta=1.0).validate()

    def test_delta_ranges(self):
        with pytest.raises(ValueError):
            StimulusSpec(kind="color", delta=200.0).validate()
        with pytest.raises(ValueError):
            StimulusSpec(kind="orientation", delta=91.0).validate()
        with pytest.raises(ValueError):
            StimulusSpec(kind="size", delta=8.0).validate()
        with pytest.raises(ValueError):
            StimulusSpec(kind="size", delta=0.1).validate()

    def test_target_cell_off_grid(self):
        with pytest.raises(ValueError):
            StimulusSpec(kind="color", delta=10.0, target_cell=(5, 0)).validate()

    def test_element_must_fit_cell(self):
        with pytest.raises(ValueError, match="too large"):
            StimulusSpec(kind="color", delta=10.0, element_size=60).validate()

    def test_size_ratio_counts_against_cell(self):
        # a 4x scaled target must still fit its cell
        with pytest.raises(ValueError, match="too large"):
            StimulusSpec(kind="size", delta=4.0, element_size=24).validate()


class TestGenerate:
    def test_deterministic(self):
        spec = StimulusSpec(kind="color", delta=90.0, seed=5)
        a = generate(spec)
        b = generate(spec)
        assert np.array_equal(a.image, b.image)
        assert np.array_equal(a.ground_truth.target_mask, b.ground_truth.target_mask)

    def test_seed_changes_scene(self):
        a = generate(StimulusSpec(kind="color", delta=90.0, seed=1))
        b = generate(StimulusSpec(kind="color", delta=90.0, seed=2))
        assert not np.array_equal(a.image, b.image)

    def test_masks_partition_image(self):
        for kind, delta in (("color", 45.0), ("orientation", 30.0), ("size", 2.0)):
            extra = {"grid": (3, 4), "element_size": 14} if kind == "size" else {}
            gt = generate(StimulusSpec(kind=kind, delta=delta, seed=3, **extra)).ground_truth
            total = (
                gt.target_mask.astype(int)
                + gt.distractor_mask.astype(int)
                + gt.background_mask.astype(int)
            )
            assert np.all(total == 1)

    def test_zero_delta_elements_identical(self):
        stim = generate(StimulusSpec(kind="color", delta=0.0, seed=4))
        assert stim.ground_truth.target_mask.any()
        # the target element is rendered with the distractor color
        target_px = stim.image[stim.ground_truth.target_mask]
        distract_px = stim.image[stim.ground_truth.distractor_mask]
        assert abs(target_px.max() - distract_px.max()) < 0.05
        assert abs(target_px.min() - distract_px.min()) < 0.05

    def test_pinned_target_cell(self):
        stim = generate(StimulusSpec(kind="color", delta=90.0, target_cell=(2, 3), seed=0))
        assert stim.target_cell == (2, 3)
        rows, cols = stim.spec.grid
        cy = (2 + 0.5) * stim.spec.height / rows
        cx = (3 + 0.5) * stim.spec.width / cols
        ys, xs = np.nonzero(stim.ground_truth.target_mask)
        assert abs(ys.mean() - cy) < 5
        assert abs(xs.mean() - cx) < 5

    def test_element_count_5x8(self):
        stim = generate(StimulusSpec(kind="color", delta=90.0, seed=6))
        gt = stim.ground_truth
        # 40 elements: 1 target site + 39 distractor sites of equal footprint
        site = gt.target_mask.sum()
        assert site > 0
        assert gt.distractor_mask.sum() == pytest.approx(39 * site, rel=0.05)

    def test_target_footprint_matches_disc_geometry(self):
        from raresal.stimuli import _site_radius

        spec = StimulusSpec(kind="color", delta=90.0, seed=7)
        stim = generate(spec)
        radius = _site_radius(spec.element_size)
        area = np.pi * radius**2
        assert stim.ground_truth.target_mask.sum() == pytest.approx(area, rel=0.05)

    def test_image_range_and_dtype(self):
        img = generate(StimulusSpec(kind="size", delta=0.5, seed=8)).image
        assert img.dtype == np.float64
        assert img.min() >= 0.0
        assert img.max() <= 1.0

    def test_isoluminant_colors(self):
        for hue in (0, 45, 90, 180, 270):
            rgb = isoluminant_color(hue)
            assert rgb.sum() == pytest.approx(1.5, abs=1e-12)
            assert rgb.min() >= 0.0
            assert rgb.max() <= 1.0


class TestSweep:
    def test_single_delta(self):
        out = sweep("color", [90.0], StimulusSpec(kind="color", delta=0.0, seed=9))
        assert len(out) == 1

    def test_hue_sweep_shares_geometry(self):
        base = StimulusSpec(kind="color", delta=0.0, seed=10)
        scenes = sweep("color", list(range(10, 181, 10)), base)
        assert len(scenes) == 18
        first = scenes[0].ground_truth.target_mask
        for s in scenes[1:]:
            assert np.array_equal(s.ground_truth.target_mask, first)

    def test_orientation_sweep_masks_identical(self):
        base = StimulusSpec(kind="orientation", delta=0.0, seed=11)
        scenes = sweep("orientation", [5, 15, 30, 60, 90], base)
        first = scenes[0].ground_truth.target_mask
        for s in scenes[1:]:
            assert np.array_equal(s.ground_truth.target_mask, first)

    def test_empty_deltas_rejected(self):
        with pytest.raises(ValueError):
            sweep("color", [], StimulusSpec(kind="color", delta=0.0))


class TestWriteStimulus:
    def test_files_written(self, tmp_path):
        stim = generate(StimulusSpec(kind="orientation", delta=45.0, seed=12))
        paths = write_stimulus(stim, tmp_path, "demo")
        for key in ("image", "target", "distractor", "background", "spec"):
            assert (tmp_path / paths[key].split("/")[-1]).exists()
        sidecar = (tmp_path / "demo.spec").read_text()
        assert "kind=orientation" in sidecar
        assert "delta=45" in sidecar
        assert "target_cell=" in sidecar

    def test_masks_roundtrip_through_pgm(self, tmp_path):
        from raresal.netpbm import read_pgm

        stim = generate(StimulusSpec(kind="color", delta=90.0, seed=13))
        write_stimulus(stim, tmp_path, "rt")
        back = read_pgm(tmp_path / "rt_target.pgm") > 0.5
        assert np.array_equal(back, stim.ground_truth.target_mask)
