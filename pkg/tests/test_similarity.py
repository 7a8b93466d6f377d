import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from dancenotes import (
    InvalidInputError,
    cosine_sim,
    dance_music_corr,
    music_sim_matrix,
    nn_resize,
    pearson,
    pose_similarity,
)
from dancenotes.similarity import write_matrix_csv, write_matrix_pgm

from conftest import random_pose_frames


def ref_cosine(a, b):
    # independent of the library's vectorized path
    na, nb = np.sqrt(np.sum(a * a)), np.sqrt(np.sum(b * b))
    if na < 1e-12 and nb < 1e-12:
        return 1.0
    if na < 1e-12 or nb < 1e-12:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


def ref_pearson(x, y):
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    xc = x - x.mean()
    yc = y - y.mean()
    if np.sum(xc * xc) / x.size < 1e-18 or np.sum(yc * yc) / y.size < 1e-18:
        return 0.0
    return float(np.clip(np.corrcoef(x, y)[0, 1], -1.0, 1.0))


class TestCosine:
    def test_matches_reference_on_random_vectors(self, rng):
        for _ in range(200):
            a = rng.normal(size=36)
            b = rng.normal(size=36)
            assert cosine_sim(a, b) == pytest.approx(ref_cosine(a, b), abs=1e-12)

    def test_zero_vector_rules(self):
        z = np.zeros(36)
        v = np.ones(36)
        assert cosine_sim(z, v) == 0.0
        assert cosine_sim(v, z) == 0.0
        assert cosine_sim(z, z) == 1.0

    def test_parallel_and_antiparallel(self, rng):
        v = rng.normal(size=36)
        assert cosine_sim(v, 2.5 * v) == pytest.approx(1.0, abs=1e-12)
        assert cosine_sim(v, -v) == pytest.approx(-1.0, abs=1e-12)

    def test_bounded(self, rng):
        for _ in range(100):
            a, b = rng.normal(size=(2, 36))
            assert -1.0 <= cosine_sim(a, b) <= 1.0


class TestPoseSimilarity:
    def test_matches_pairwise_reference(self, rng):
        frames = random_pose_frames(rng, 17)
        m = pose_similarity(frames)
        for i in range(17):
            for j in range(17):
                assert m[i, j] == pytest.approx(ref_cosine(frames[i], frames[j]), abs=1e-12)

    def test_exact_symmetry_and_unit_diagonal(self, rng):
        frames = random_pose_frames(rng, 40)
        m = pose_similarity(frames)
        assert np.array_equal(m, m.T)
        assert np.all(m.diagonal() == 1.0)

    def test_zero_rows(self):
        frames = np.zeros((3, 36))
        frames[1] = 0.5
        m = pose_similarity(frames)
        # rows 0 and 2 are zero poses: mutual similarity 1, vs nonzero 0
        assert m[0, 2] == 1.0
        assert m[0, 1] == 0.0
        assert m[1, 2] == 0.0
        assert np.all(m.diagonal() == 1.0)

    @given(
        hnp.arrays(
            np.float64,
            st.tuples(st.integers(1, 12)).map(lambda t: (t[0], 36)),
            elements=st.floats(-1, 1, width=32),
        )
    )
    @settings(max_examples=50, deadline=None)
    def test_properties_hold_for_any_frames(self, frames):
        m = pose_similarity(frames)
        assert m.shape == (len(frames), len(frames))
        assert np.array_equal(m, m.T)
        assert np.all(m.diagonal() == 1.0)
        assert np.all(m >= -1.0) and np.all(m <= 1.0)


class TestMusicSimilarity:
    def test_value_table(self):
        m = music_sim_matrix([0, 1, 2, 3, 4])
        for i in range(5):
            for j in range(5):
                assert m[i, j] == pytest.approx(1.0 - abs(i - j) / 4.0)

    def test_extremes(self):
        m = music_sim_matrix([0, 4])
        assert m[0, 1] == 0.0
        assert m[0, 0] == 1.0

    @given(st.lists(st.integers(0, 4), min_size=1, max_size=30))
    @settings(max_examples=50, deadline=None)
    def test_reflection_invariance(self, notes):
        # mirroring the scale preserves all pairwise distances
        flipped = [4 - n for n in notes]
        assert np.array_equal(music_sim_matrix(notes), music_sim_matrix(flipped))


class TestNnResize:
    def test_block_upsampling_equals_kron(self, rng):
        m = rng.normal(size=(5, 5))
        m = (m + m.T) / 2
        np.fill_diagonal(m, 1.0)
        up = nn_resize(m, 15)
        assert np.array_equal(up, np.kron(m, np.ones((3, 3))))

    def test_identity_when_same_size(self, rng):
        m = rng.normal(size=(4, 4))
        m = (m + m.T) / 2
        np.fill_diagonal(m, 1.0)
        assert np.array_equal(nn_resize(m, 4), m)

    def test_nearest_indices_for_uneven_ratio(self):
        m = np.diag([1.0, 1.0]) * 0 + np.array([[1.0, 2.0], [2.0, 1.0]])
        up = nn_resize(m, 3)
        # index map: floor(i * 2 / 3) -> [0, 0, 1]
        expected = m[np.ix_([0, 0, 1], [0, 0, 1])]
        assert np.array_equal(up, expected)


class TestPearson:
    def test_matches_numpy_reference(self, rng):
        for _ in range(100):
            x = rng.normal(size=50)
            y = 0.3 * x + rng.normal(size=50)
            assert pearson(x, y) == pytest.approx(ref_pearson(x, y), abs=1e-12)

    def test_degenerate_constant_input(self):
        assert pearson(np.full(10, 3.7), np.arange(10.0)) == 0.0
        assert pearson(np.arange(10.0), np.full(10, -1.0)) == 0.0
        assert pearson(np.full(10, 2.0), np.full(10, 2.0)) == 0.0

    def test_perfect_correlation_clipped(self, rng):
        x = rng.normal(size=30)
        assert pearson(x, 2 * x + 1) == pytest.approx(1.0, abs=1e-12)
        assert pearson(x, -x) == pytest.approx(-1.0, abs=1e-12)

    @given(
        st.lists(st.floats(-100, 100), min_size=3, max_size=40),
        st.floats(0.1, 10),
        st.floats(-5, 5),
    )
    @settings(max_examples=50, deadline=None)
    def test_affine_invariance(self, xs, scale, shift):
        x = np.asarray(xs)
        y = np.sin(x) + 0.1 * x  # any fixed companion signal
        base = pearson(x, y)
        again = pearson(scale * x + shift, y)
        assert again == pytest.approx(base, abs=1e-7)


class TestDanceMusicCorr:
    def test_two_block_alignment_is_perfect(self, block_dance):
        # two pose blocks of 30 frames, notes aligned on the k=6 grid
        notes = [0] * 5 + [4] * 5
        d = pose_similarity(block_dance.frames)
        assert dance_music_corr(d, notes, k=6) == pytest.approx(1.0, abs=1e-9)

    def test_matches_flattened_pearson_reference(self, rng):
        frames = random_pose_frames(rng, 24)
        notes = rng.integers(0, 5, 6)
        d = pose_similarity(frames)
        s = np.kron(music_sim_matrix(notes), np.ones((4, 4)))
        assert dance_music_corr(d, notes, k=4) == pytest.approx(
            ref_pearson(d.ravel(), s.ravel()), abs=1e-12
        )

    def test_constant_dance_is_degenerate(self):
        frames = np.tile(np.linspace(-0.5, 0.5, 36), (12, 1))
        d = pose_similarity(frames)
        assert dance_music_corr(d, [0, 3], k=6) == 0.0

    def test_constant_notes_are_degenerate(self, rng):
        frames = random_pose_frames(rng, 12)
        d = pose_similarity(frames)
        assert dance_music_corr(d, [2, 2], k=6) == 0.0

    def test_frame_count_must_match(self, rng):
        d = pose_similarity(random_pose_frames(rng, 11))
        with pytest.raises(InvalidInputError):
            dance_music_corr(d, [0, 1], k=6)

    def test_reflection_invariance_of_notes(self, rng):
        frames = random_pose_frames(rng, 18)
        d = pose_similarity(frames)
        notes = rng.integers(0, 5, 3)
        assert dance_music_corr(d, notes, k=6) == pytest.approx(
            dance_music_corr(d, 4 - notes, k=6), abs=1e-12
        )


class TestMatrixDumps:
    def test_csv_round_trip(self, tmp_path, rng):
        m = pose_similarity(random_pose_frames(rng, 6))
        path = tmp_path / "m.csv"
        write_matrix_csv(m, path)
        back = np.loadtxt(path, delimiter=",")
        assert np.array_equal(back, m)

    def test_pgm_layout(self, tmp_path):
        m = np.array([[0.0, 0.5], [0.5, 1.0]])
        path = tmp_path / "m.pgm"
        write_matrix_pgm(m, path)
        blob = path.read_bytes()
        assert blob.startswith(b"P5")
        header, payload = blob.rsplit(b"\n", 1)[0], blob.rsplit(b"\n", 1)[1]
        assert b"2 2" in header and b"255" in header
        assert list(payload) == [0, 128, 128, 255]

    def test_pgm_constant_matrix(self, tmp_path):
        path = tmp_path / "c.pgm"
        write_matrix_pgm(np.ones((3, 3)), path)
        assert path.read_bytes().endswith(bytes(9))
