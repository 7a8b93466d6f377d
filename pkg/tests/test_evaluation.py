import numpy as np
import pytest
from conftest import random_pose_frames

from dancenotes import (
    DanceSequence,
    EvalRow,
    InvalidInputError,
    beam_generate,
    flatness,
    mean_correlation,
    next_note_accuracy,
    sequence_correlation,
    write_report,
)


class TestAccuracy:
    def test_counts_only_decided_positions(self):
        # position 0 is pinned by every generator and must not be scored
        assert next_note_accuracy([2, 1, 1], [2, 1, 3]) == pytest.approx(0.5)
        assert next_note_accuracy([2, 0], [4, 0]) == 1.0

    def test_perfect_and_zero(self):
        assert next_note_accuracy([2, 3, 4], [2, 3, 4]) == 1.0
        assert next_note_accuracy([2, 0, 0], [2, 1, 1]) == 0.0

    def test_chance_level_for_random_guesses(self):
        rng = np.random.default_rng(0)
        pred = rng.integers(0, 5, 4001)
        labels = rng.integers(0, 5, 4001)
        assert next_note_accuracy(pred, labels) == pytest.approx(0.2, abs=0.05)

    def test_errors(self):
        with pytest.raises(InvalidInputError):
            next_note_accuracy([1, 2], [1, 2, 3])
        with pytest.raises(InvalidInputError):
            next_note_accuracy([1], [1])


class TestFlatness:
    def test_counts_changes(self):
        assert flatness([2, 2, 2, 2]) == 0
        assert flatness([2, 0, 2, 0]) == 3
        assert flatness([2]) == 0
        assert flatness([0, 0, 1, 1, 2]) == 2

    def test_empty_rejected(self):
        with pytest.raises(InvalidInputError):
            flatness([])


class TestSequenceCorrelation:
    def test_constant_dance_is_degenerate(self):
        frames = np.tile(np.full(36, 0.1), (12, 1))
        d = DanceSequence(frames)
        assert sequence_correlation(d, [2, 3], k=6) == 0.0

    def test_two_block_dance_perfect_notes(self, block_dance):
        # matched block structure gives correlation 1
        corr = sequence_correlation(block_dance, [2, 2, 2, 2, 2, 0, 0, 0, 0, 0], k=6)
        assert corr == pytest.approx(1.0, abs=1e-9)

    def test_uses_only_covered_frames(self, rng):
        # extra trailing frames beyond notes * k are ignored
        frames = random_pose_frames(rng, 17)
        d = DanceSequence(frames)
        d_trunc = DanceSequence(frames[:12])
        assert sequence_correlation(d, [2, 1], k=6) == pytest.approx(
            sequence_correlation(d_trunc, [2, 1], k=6)
        )

    def test_too_few_frames_rejected(self, rng):
        d = DanceSequence(random_pose_frames(rng, 11))
        with pytest.raises(InvalidInputError):
            sequence_correlation(d, [2, 1], k=6)

    def test_beam_output_scores_positive_on_structure(self, block_dance):
        notes = beam_generate(block_dance)
        assert sequence_correlation(block_dance, notes) > 0.5


class TestMeanCorrelation:
    def test_average_over_corpus(self, rng, block_dance):
        frames = np.tile(np.full(36, 0.1), (60, 1))
        flat = DanceSequence(frames)
        pairs = [
            (block_dance, np.array([2, 2, 2, 2, 2, 0, 0, 0, 0, 0], dtype=np.int8)),
            (flat, np.array([2] * 10, dtype=np.int8)),
        ]
        # (1.0 + 0.0) / 2
        assert mean_correlation(pairs) == pytest.approx(0.5, abs=1e-9)

    def test_empty_corpus_rejected(self):
        with pytest.raises(InvalidInputError):
            mean_correlation([])


class TestReport:
    def test_csv_layout(self, tmp_path):
        rows = [
            EvalRow("d0", "offline", 0.5, 1.0, 3),
            EvalRow("d1", "offline", 0.7, 1.0, 5),
            EvalRow("d0", "baseline", 0.1, 0.25, 9),
        ]
        path = tmp_path / "report.csv"
        write_report(path, rows)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "video_id,generator,correlation,accuracy,flatness"
        assert lines[1] == "d0,offline,0.500000,1.000000,3"
        assert lines[3] == "d0,baseline,0.100000,0.250000,9"
        # one MEAN row per generator, sorted by name
        assert lines[4].startswith("MEAN,baseline,0.100000")
        assert lines[5].startswith("MEAN,offline,0.600000")
        assert len(lines) == 6

    def test_empty_rows_rejected(self, tmp_path):
        with pytest.raises(InvalidInputError):
            write_report(tmp_path / "r.csv", [])
