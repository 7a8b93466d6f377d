"""Training examples for the next-note model and their on-disk dataset format."""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from ..exceptions import DatasetFormatError, InvalidInputError
from ..pose import DanceSequence
from ..similarity import pose_similarity
from ..validation import N_NOTES, as_note_array
from .config import ModelConfig

DATASET_MAGIC = b"D2MD"
DATASET_VERSION = 1


def dance_window_matrix(frames: np.ndarray, window_frames: int, dtype=np.float32) -> np.ndarray:
    """Cosine self-similarity of the trailing frames, zero padded top-left.

    ``frames`` holds the most recent m <= window_frames pose vectors; the
    result is a fixed (window_frames, window_frames) image whose bottom-right
    m x m block is the similarity matrix. Used identically by example
    building, batch rollout, and the live session.
    """
    m = frames.shape[0]
    if m > window_frames:
        raise InvalidInputError(f"window holds {m} frames, limit is {window_frames}")
    out = np.zeros((window_frames, window_frames), dtype=dtype)
    if m:
        out[window_frames - m:, window_frames - m:] = pose_similarity(frames)
    return out


def note_history_onehot(notes, window_notes: int, dtype=np.float32) -> np.ndarray:
    """One-hot encode the trailing notes, zero rows padding the front."""
    notes = as_note_array(notes) if len(notes) else np.zeros(0, dtype=np.int8)
    m = notes.shape[0]
    if m > window_notes:
        raise InvalidInputError(f"history holds {m} notes, limit is {window_notes}")
    out = np.zeros((window_notes, N_NOTES), dtype=dtype)
    if m:
        out[np.arange(window_notes - m, window_notes), notes] = 1.0
    return out


@dataclass(frozen=True)
class TrainingExample:
    """One supervised step: context windows and the note that came next."""

    dance_window: np.ndarray  # (window_frames, window_frames) float32
    note_history: np.ndarray  # (window_notes, 5) float32
    target: int


def build_examples(dance: DanceSequence, notes, cfg: ModelConfig) -> list[TrainingExample]:
    """Teacher-forcing pairs for every note position after the first.

    Position t (1 <= t < L) sees the dance frames covering its trailing note
    window, [max(0, (t - W) * k), t * k), and the <= W preceding notes; the
    label is note t. Note 0 is fixed by convention, so it yields no example.
    """
    notes = as_note_array(notes)
    k, w = cfg.k, cfg.window_notes
    n_notes = dance.frames.shape[0] // k
    if notes.shape[0] != n_notes:
        raise InvalidInputError(
            f"got {notes.shape[0]} notes for a dance spanning {n_notes} intervals of {k} frames"
        )
    out = []
    for t in range(1, n_notes):
        lo = max(0, t - w)
        window = dance_window_matrix(dance.frames[lo * k: t * k], cfg.window_frames)
        history = note_history_onehot(notes[lo:t], w)
        out.append(TrainingExample(window, history, int(notes[t])))
    return out


@dataclass
class Dataset:
    """Stacked training examples ready for minibatching."""

    windows: np.ndarray  # (n, F, F) float32
    histories: np.ndarray  # (n, W, 5) float32
    targets: np.ndarray  # (n,) int8

    def __post_init__(self):
        if not (len(self.windows) == len(self.histories) == len(self.targets)):
            raise InvalidInputError("dataset arrays disagree on example count")
        self.windows = np.ascontiguousarray(self.windows, dtype=np.float32)
        self.histories = np.ascontiguousarray(self.histories, dtype=np.float32)
        self.targets = as_note_array(self.targets)

    def __len__(self) -> int:
        return self.targets.shape[0]

    @classmethod
    def from_examples(cls, examples: list) -> "Dataset":
        if not examples:
            raise InvalidInputError("no training examples")
        return cls(
            np.stack([e.dance_window for e in examples]),
            np.stack([e.note_history for e in examples]),
            np.array([e.target for e in examples], dtype=np.int8),
        )


def save_dataset(path, ds: Dataset) -> None:
    """Write a dataset as little-endian binary; byte-identical across runs."""
    n = len(ds)
    f_dim = ds.windows.shape[1]
    w_dim = ds.histories.shape[1]
    with open(path, "wb") as fh:
        fh.write(DATASET_MAGIC)
        fh.write(struct.pack("<IIIII", DATASET_VERSION, n, f_dim, w_dim, N_NOTES))
        fh.write(ds.windows.astype("<f4").tobytes())
        fh.write(ds.histories.astype("<f4").tobytes())
        fh.write(ds.targets.astype("<i1").tobytes())


def load_dataset(path) -> Dataset:
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != DATASET_MAGIC:
        raise DatasetFormatError(f"bad dataset magic {blob[:4]!r}")
    try:
        version, n, f_dim, w_dim, classes = struct.unpack_from("<IIIII", blob, 4)
    except struct.error as exc:
        raise DatasetFormatError("truncated dataset header") from exc
    if version != DATASET_VERSION:
        raise DatasetFormatError(f"unsupported dataset version {version}")
    if classes != N_NOTES:
        raise DatasetFormatError(f"dataset has {classes} classes, expected {N_NOTES}")
    off = 4 + 20
    win_bytes = 4 * n * f_dim * f_dim
    his_bytes = 4 * n * w_dim * classes
    if len(blob) != off + win_bytes + his_bytes + n:
        raise DatasetFormatError("dataset payload size mismatch")
    windows = np.frombuffer(blob, dtype="<f4", count=n * f_dim * f_dim, offset=off)
    histories = np.frombuffer(blob, dtype="<f4", count=n * w_dim * classes, offset=off + win_bytes)
    targets = np.frombuffer(blob, dtype="<i1", count=n, offset=off + win_bytes + his_bytes)
    return Dataset(
        windows.reshape(n, f_dim, f_dim).copy(),
        histories.reshape(n, w_dim, classes).copy(),
        targets.copy(),
    )
