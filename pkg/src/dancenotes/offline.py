"""Offline note generation: windowed beam search against the dance.

Candidates are grown left to right, one note per k frames; at every step each
candidate is scored by the correlation between the dance and the music over a
trailing window of ``window_notes`` notes, and the best ``beam_width``
sequences survive. A brute-force enumerator over the same criterion serves as
a test oracle at desk scale.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator

from .exceptions import InvalidInputError
from .music import FIRST_NOTE
from .similarity import DEGENERATE_VAR_EPS, NOTE_SPAN, pose_similarity
from .validation import N_NOTES, as_note_array, check_ordinal, check_positive_int


@dataclass(frozen=True)
class SearchConfig:
    """Beam-search hyperparameters."""

    k: int = 6
    beam_width: int = 50
    window_notes: int = 10
    first_note: int = FIRST_NOTE
    tie_break: str = "lexicographic"

    def __post_init__(self):
        check_positive_int(self.k, "k")
        check_positive_int(self.beam_width, "beam_width")
        if self.window_notes < 2:
            raise InvalidInputError(f"window_notes must be >= 2, got {self.window_notes}")
        check_ordinal(self.first_note)
        if self.tie_break != "lexicographic":
            raise InvalidInputError(f"unsupported tie_break {self.tie_break!r}")

    @property
    def window_frames(self) -> int:
        return self.window_notes * self.k


def _batch_window_scores(d_window: np.ndarray, note_windows: np.ndarray, k: int) -> np.ndarray:
    """Correlation of one dance window against many candidate note windows.

    ``d_window`` is (m*k, m*k), ``note_windows`` is (C, m). Numerically
    equivalent to running ``dance_music_corr`` per candidate, but the
    nearest-neighbour upsampling is folded into a k x k block sum of the
    centered dance window, so each candidate costs O(m^2) instead of O((mk)^2).
    """
    c, m = note_windows.shape
    n_tot = d_window.shape[0] * d_window.shape[0]
    dc = d_window - d_window.mean()
    ss_d = float(np.dot(dc.ravel(), dc.ravel()))
    scores = np.zeros(c, dtype=np.float64)
    if ss_d / n_tot < DEGENERATE_VAR_EPS:
        return scores
    pooled = dc.reshape(m, k, m, k).sum(axis=(1, 3))
    notes = note_windows.astype(np.float64)
    s = 1.0 - np.abs(notes[:, None, :] - notes[:, :, None]) / NOTE_SPAN
    s -= s.mean(axis=(1, 2))[:, None, None]
    ss_m = (k * k) * np.einsum("cij,cij->c", s, s)
    num = np.einsum("cij,ij->c", s, pooled)
    ok = ss_m / n_tot >= DEGENERATE_VAR_EPS
    scores[ok] = np.clip(num[ok] / np.sqrt(ss_d * ss_m[ok]), -1.0, 1.0)
    return scores


def window_score(dance_sim: np.ndarray, notes, cfg: SearchConfig) -> float:
    """Score of a note prefix over its trailing local window.

    For a prefix of length t+1 the window covers note indices
    [max(0, t+1-window_notes), t] and the matching frames.
    """
    prefix = as_note_array(notes)
    if prefix.size == 0:
        raise InvalidInputError("note prefix is empty")
    n = dance_sim.shape[0]
    if prefix.size * cfg.k > n:
        raise InvalidInputError(
            f"prefix of {prefix.size} notes needs {prefix.size * cfg.k} frames, matrix has {n}"
        )
    lo = max(0, prefix.size - cfg.window_notes)
    d_win = dance_sim[lo * cfg.k : prefix.size * cfg.k, lo * cfg.k : prefix.size * cfg.k]
    return float(_batch_window_scores(d_win, prefix[None, lo:], cfg.k)[0])


def _rank(children: np.ndarray, scores: np.ndarray) -> np.ndarray:
    """Order candidates by score descending, ties by lexicographic note order."""
    keys = [children[:, j] for j in range(children.shape[1] - 1, -1, -1)]
    keys.append(-scores)
    return np.lexsort(keys)


def beam_generate(dance, cfg: SearchConfig = SearchConfig()) -> np.ndarray:
    """Generate floor(N/k) notes for a dance by windowed beam search.

    Deterministic: the first note is fixed, every expansion scores all 5
    continuations of each surviving candidate with :func:`window_score`, and
    ties are broken toward the lexicographically smaller sequence.
    """
    frames = dance.frames
    n = frames.shape[0]
    length = n // cfg.k
    if length < 1:
        raise InvalidInputError(f"dance of {n} frames is shorter than one interval of k={cfg.k}")
    d = pose_similarity(frames[: length * cfg.k])

    beams = np.full((1, 1), cfg.first_note, dtype=np.int8)
    for t in range(1, length):
        prefix_len = t + 1
        lo = max(0, prefix_len - cfg.window_notes)
        d_win = d[lo * cfg.k : prefix_len * cfg.k, lo * cfg.k : prefix_len * cfg.k]
        children = np.repeat(beams, N_NOTES, axis=0)
        new_col = np.tile(np.arange(N_NOTES, dtype=np.int8), beams.shape[0])
        children = np.concatenate([children, new_col[:, None]], axis=1)
        scores = _batch_window_scores(d_win, children[:, lo:], cfg.k)
        order = _rank(children, scores)[: cfg.beam_width]
        beams = children[order]
    return beams[0].copy()


@dataclass(frozen=True)
class ExhaustiveResult:
    """Best sequences under the beam's windowed criterion and under global correlation."""

    sequence: np.ndarray
    score: float
    global_sequence: np.ndarray
    global_score: float


def exhaustive_generate(dance, cfg: SearchConfig = SearchConfig(), max_notes: int = 8) -> ExhaustiveResult:
    """Enumerate every note sequence (fixed first note) and pick the best.

    Scores each full sequence with the same final-step window criterion the
    beam uses, and separately with the global correlation. Refuses sequences
    longer than ``max_notes`` (the space grows as 5**(L-1)).
    """
    frames = dance.frames
    n = frames.shape[0]
    length = n // cfg.k
    if length < 1:
        raise InvalidInputError(f"dance of {n} frames is shorter than one interval of k={cfg.k}")
    if length > max_notes:
        raise InvalidInputError(f"{length} notes exceed the exhaustive-search guard of {max_notes}")
    d = pose_similarity(frames[: length * cfg.k])

    if length == 1:
        seq = np.array([cfg.first_note], dtype=np.int8)
        return ExhaustiveResult(seq, 0.0, seq.copy(), 0.0)

    # all tails in lexicographic order, so argmax resolves ties like the beam
    tails = np.stack(
        np.meshgrid(*[np.arange(N_NOTES, dtype=np.int8)] * (length - 1), indexing="ij"), axis=-1
    ).reshape(-1, length - 1)
    leaves = np.concatenate(
        [np.full((tails.shape[0], 1), cfg.first_note, dtype=np.int8), tails], axis=1
    )

    lo = max(0, length - cfg.window_notes)
    win_scores = _batch_window_scores(
        d[lo * cfg.k :, lo * cfg.k :], leaves[:, lo:], cfg.k
    )
    glob_scores = _batch_window_scores(d, leaves, cfg.k)
    bw = int(np.argmax(win_scores))
    bg = int(np.argmax(glob_scores))
    return ExhaustiveResult(
        sequence=leaves[bw].copy(),
        score=float(win_scores[bw]),
        global_sequence=leaves[bg].copy(),
        global_score=float(glob_scores[bg]),
    )


class BeamSearchGenerator(BaseEstimator):
    """Offline windowed beam-search note generator.

    Stateless estimator: ``fit`` is a no-op so the generator can sit in
    pipelines; ``generate`` maps one dance to its note ordinals and
    ``transform`` maps a corpus.
    """

    def __init__(self, k=6, beam_width=50, window_notes=10, first_note=FIRST_NOTE,
                 tie_break="lexicographic"):
        self.k = k
        self.beam_width = beam_width
        self.window_notes = window_notes
        self.first_note = first_note
        self.tie_break = tie_break

    def _config(self) -> SearchConfig:
        return SearchConfig(
            k=self.k,
            beam_width=self.beam_width,
            window_notes=self.window_notes,
            first_note=self.first_note,
            tie_break=self.tie_break,
        )

    def fit(self, X=None, y=None):
        self._config()  # validate hyperparameters
        return self

    def generate(self, dance) -> np.ndarray:
        return beam_generate(dance, self._config())

    def transform(self, dances) -> list[np.ndarray]:
        cfg = self._config()
        return [beam_generate(d, cfg) for d in dances]
