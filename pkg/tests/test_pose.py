import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from dancenotes import (
    DanceSequence,
    InvalidInputError,
    PoseParseError,
    SynthConfig,
    denormalize_keypoints,
    load_pose_json,
    normalize_keypoints,
    synth_dance,
    write_pose_json,
)
from dancenotes.validation import POSE_DIM


def make_triplets(rng, w, h, conf=1.0):
    kp = np.empty((18, 3))
    kp[:, 0] = rng.uniform(0, w, 18)
    kp[:, 1] = rng.uniform(0, h, 18)
    kp[:, 2] = conf
    return kp


class TestNormalize:
    def test_affine_formula(self, rng):
        w, h = 640, 480
        kp = make_triplets(rng, w, h)
        out = normalize_keypoints(kp, w, h)
        # oracle: independent elementwise affine map
        for i in range(18):
            assert out[2 * i] == pytest.approx(2 * kp[i, 0] / w - 1, abs=1e-12)
            assert out[2 * i + 1] == pytest.approx(2 * kp[i, 1] / h - 1, abs=1e-12)

    def test_corners(self):
        kp = np.array([[0, 0, 1]] * 17 + [[320, 240, 1]], dtype=float)
        out = normalize_keypoints(kp, 320, 240)
        assert out[0] == -1.0 and out[1] == -1.0
        assert out[34] == 1.0 and out[35] == 1.0

    def test_clamps_out_of_frame(self):
        kp = np.tile([[-50.0, 999.0, 1.0]], (18, 1))
        out = normalize_keypoints(kp, 100, 100)
        assert np.all(out[0::2] == -1.0)
        assert np.all(out[1::2] == 1.0)

    def test_zero_confidence_carries_forward(self):
        prev = np.full(POSE_DIM, 0.25)
        kp = np.tile([[10.0, 10.0, 0.0]], (18, 1))
        kp[3, 2] = 1.0  # only keypoint 3 detected
        out = normalize_keypoints(kp, 100, 100, prev=prev)
        want = prev.copy()
        want[6] = 2 * 10 / 100 - 1
        want[7] = 2 * 10 / 100 - 1
        assert np.allclose(out, want)

    def test_zero_confidence_without_prev_is_origin(self):
        kp = np.tile([[55.0, 55.0, 0.0]], (18, 1))
        out = normalize_keypoints(kp, 100, 100)
        assert np.all(out == 0.0)

    def test_bad_shapes_and_dims(self):
        with pytest.raises(InvalidInputError):
            normalize_keypoints(np.zeros((17, 3)), 100, 100)
        with pytest.raises(InvalidInputError):
            normalize_keypoints(np.zeros((18, 3)), 0, 100)

    @given(
        w=st.integers(10, 4000),
        h=st.integers(10, 4000),
        px=hnp.arrays(np.float64, (18, 2), elements=st.floats(0, 1, exclude_max=False)),
    )
    @settings(max_examples=50, deadline=None)
    def test_denormalize_inverts(self, w, h, px):
        kp = np.column_stack([px[:, 0] * w, px[:, 1] * h, np.ones(18)])
        norm = normalize_keypoints(kp, w, h)
        back = denormalize_keypoints(norm, w, h)
        assert np.allclose(back, kp[:, :2], atol=1e-9 * max(w, h))


class TestDanceSequence:
    def test_frames_read_only(self, short_dance):
        with pytest.raises(ValueError):
            short_dance.frames[0, 0] = 0.5

    def test_len_and_duration(self, short_dance):
        assert len(short_dance) == 120
        assert short_dance.duration_s == pytest.approx(4.0)

    def test_rejects_out_of_range_coords(self):
        with pytest.raises(InvalidInputError):
            DanceSequence(np.full((3, POSE_DIM), 1.5))

    def test_rejects_bad_shape(self):
        with pytest.raises(InvalidInputError):
            DanceSequence(np.zeros((3, 35)))


class TestSynthDance:
    def test_shape_and_bounds(self):
        d = synth_dance(SynthConfig(duration_s=2.0, fps=30, seed=3))
        assert d.frames.shape == (60, POSE_DIM)
        assert d.frames.min() >= -1.0 and d.frames.max() <= 1.0
        assert d.fps == 30 and d.source_id == "synth-3"

    def test_deterministic_per_seed(self):
        a = synth_dance(SynthConfig(seed=11))
        b = synth_dance(SynthConfig(seed=11))
        c = synth_dance(SynthConfig(seed=12))
        assert np.array_equal(a.frames, b.frames)
        assert not np.array_equal(a.frames, c.frames)

    def test_motif_override_blocks(self):
        # pinned A B A with no noise or easing: three exact constant blocks
        cfg = SynthConfig(duration_s=3.0, fps=30, n_base_poses=2, motif=(0, 1, 0),
                          noise_std=0.0, transition_frac=0.0, seed=5)
        d = synth_dance(cfg)
        f = d.frames
        assert np.allclose(f[:30], f[0])
        assert np.allclose(f[30:60], f[30])
        assert np.allclose(f[60:], f[0])
        assert not np.allclose(f[0], f[30])

    def test_motif_validation(self):
        with pytest.raises(InvalidInputError):
            SynthConfig(n_base_poses=2, motif=(0, 2))
        with pytest.raises(InvalidInputError):
            SynthConfig(motif=())
        with pytest.raises(InvalidInputError):
            SynthConfig(duration_s=0.0)
        with pytest.raises(InvalidInputError):
            SynthConfig(n_base_poses=1)

    def test_motif_labels_never_repeat_adjacent(self):
        for seed in range(40):
            cfg = SynthConfig(duration_s=4.0, n_base_poses=4, motif_len=8,
                              noise_std=0.0, transition_frac=0.0, seed=seed)
            d = synth_dance(cfg)
            # segment representatives at segment centers
            seg = len(d) // cfg.motif_len
            reps = d.frames[seg // 2::seg][: cfg.motif_len]
            for i in range(1, len(reps)):
                assert not np.allclose(reps[i], reps[i - 1])


class TestCanonicalJson:
    def test_round_trip_lossless(self, tmp_path, short_dance):
        path = tmp_path / "d.json"
        write_pose_json(short_dance, path)
        back = load_pose_json(path)
        assert np.array_equal(back.frames, short_dance.frames)
        assert back.fps == short_dance.fps

    def test_source_id_from_stem(self, tmp_path, short_dance):
        path = tmp_path / "dance_0042.json"
        write_pose_json(short_dance, path)
        assert load_pose_json(path).source_id == "dance_0042"

    def test_fps_comes_from_file(self, tmp_path):
        doc = {"fps": 24, "source_id": "x", "frames": [[0.0] * POSE_DIM] * 3}
        path = tmp_path / "d.json"
        path.write_text(json.dumps(doc))
        assert load_pose_json(path).fps == 24

    def test_frame_error_carries_index(self, tmp_path):
        doc = {"fps": 30, "frames": [[0.0] * POSE_DIM, [2.0] * POSE_DIM]}
        with pytest.raises(PoseParseError) as exc:
            load_pose_json(json.dumps(doc))
        assert exc.value.frame_index == 1

    def test_missing_fps_rejected(self):
        with pytest.raises(PoseParseError):
            load_pose_json(json.dumps({"frames": [[0.0] * POSE_DIM]}))

    def test_wrong_width_rejected(self):
        doc = {"fps": 30, "frames": [[0.0] * 35]}
        with pytest.raises(PoseParseError):
            load_pose_json(json.dumps(doc))


class TestEstimatorRecords:
    def records(self, rng, n, w, h):
        out = []
        for _ in range(n):
            kp = make_triplets(rng, w, h)
            out.append({"people": [{"pose_keypoints_2d": kp.ravel().tolist()}]})
        return out

    def test_basic_ingest(self, rng):
        recs = self.records(rng, 5, 640, 480)
        d = load_pose_json(recs, image_w=640, image_h=480, fps=25)
        assert d.frames.shape == (5, POSE_DIM)
        assert d.fps == 25
        kp0 = np.asarray(recs[0]["people"][0]["pose_keypoints_2d"]).reshape(18, 3)
        assert np.allclose(d.frames[0], normalize_keypoints(kp0, 640, 480))

    def test_empty_people_repeats_previous(self, rng):
        recs = self.records(rng, 2, 100, 100)
        recs.append({"people": []})
        d = load_pose_json(recs, image_w=100, image_h=100)
        assert np.array_equal(d.frames[2], d.frames[1])

    def test_empty_people_first_frame_is_zero(self):
        d = load_pose_json([{"people": []}], image_w=100, image_h=100)
        assert np.all(d.frames[0] == 0.0)

    def test_requires_image_dims(self, rng):
        with pytest.raises(InvalidInputError):
            load_pose_json(self.records(rng, 1, 100, 100))

    def test_short_keypoint_list_rejected(self):
        recs = [{"people": [{"pose_keypoints_2d": [0.0] * 30}]}]
        with pytest.raises(PoseParseError) as exc:
            load_pose_json(recs, image_w=100, image_h=100)
        assert exc.value.frame_index == 0

    def test_directory_of_per_frame_files(self, tmp_path, rng):
        recs = self.records(rng, 4, 320, 240)
        for i, rec in enumerate(recs):
            (tmp_path / f"frame_{i:04d}.json").write_text(json.dumps(rec))
        d = load_pose_json(tmp_path, image_w=320, image_h=240)
        assert d.frames.shape == (4, POSE_DIM)
        direct = load_pose_json(recs, image_w=320, image_h=240)
        assert np.array_equal(d.frames, direct.frames)

    def test_empty_directory_rejected(self, tmp_path):
        with pytest.raises(InvalidInputError):
            load_pose_json(tmp_path, image_w=100, image_h=100)

    def test_unrecognized_document(self):
        with pytest.raises(PoseParseError):
            load_pose_json({"nope": 1})
