"""Threshold-randomness baseline: keep the note while the pose holds still,
redraw a random note when motion across an interval exceeds a fitted threshold.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .exceptions import InvalidInputError
from .music import FIRST_NOTE
from .similarity import cosine_sim
from .validation import N_NOTES, check_ordinal, check_positive_int

DEFAULT_PERCENTILE = 80.0


def interval_sims(dance, k: int) -> np.ndarray:
    """Cosine similarity between the poses at consecutive note onsets.

    s[i] = cos(pose[i*k], pose[(i-1)*k]) for i = 1 .. floor(N/k)-1, so the
    result has one entry per decided note; needs at least two intervals.
    """
    check_positive_int(k, "k")
    frames = dance.frames
    n_notes = frames.shape[0] // k
    if n_notes < 2:
        raise InvalidInputError(
            f"dance of {frames.shape[0]} frames has fewer than two intervals of k={k}"
        )
    return np.array(
        [cosine_sim(frames[i * k], frames[(i - 1) * k]) for i in range(1, n_notes)]
    )


def fit_threshold(corpus, k: int, percentile: float = DEFAULT_PERCENTILE) -> float:
    """Percentile (linear interpolation) of interval similarities pooled over a corpus."""
    if not 0.0 < percentile < 100.0:
        raise InvalidInputError(f"percentile must lie in (0, 100), got {percentile}")
    pools = []
    for dance in corpus:
        if dance.frames.shape[0] // k >= 2:
            pools.append(interval_sims(dance, k))
    if not pools:
        raise InvalidInputError("corpus yields no interval similarities")
    return float(np.percentile(np.concatenate(pools), percentile, method="linear"))


def baseline_generate(dance, threshold: float, k: int = 6, seed: int = 0,
                      first_note: int = FIRST_NOTE) -> np.ndarray:
    """Generate floor(N/k) notes: repeat the previous note while the interval
    similarity stays at or above the threshold, otherwise draw uniformly from
    the full scale (a redraw may repeat the note). Deterministic per seed.
    """
    check_ordinal(first_note)
    frames = dance.frames
    n_notes = frames.shape[0] // k
    if n_notes < 1:
        raise InvalidInputError(f"dance of {frames.shape[0]} frames is shorter than k={k}")
    rng = np.random.default_rng(seed)
    notes = np.empty(n_notes, dtype=np.int8)
    notes[0] = first_note
    if n_notes == 1:
        return notes
    sims = interval_sims(dance, k)
    for i in range(1, n_notes):
        if sims[i - 1] < threshold:
            notes[i] = rng.integers(N_NOTES)
        else:
            notes[i] = notes[i - 1]
    return notes


class ThresholdBaseline(BaseEstimator):
    """Quality-plus-surprise baseline generator.

    ``fit`` pools interval similarities over a training corpus and stores their
    ``percentile`` as ``threshold_``; ``generate`` then emits notes per dance.
    """

    def __init__(self, k=6, percentile=DEFAULT_PERCENTILE, first_note=FIRST_NOTE, seed=0):
        self.k = k
        self.percentile = percentile
        self.first_note = first_note
        self.seed = seed

    def fit(self, X, y=None):
        self.threshold_ = fit_threshold(X, k=self.k, percentile=self.percentile)
        return self

    def generate(self, dance, seed=None) -> np.ndarray:
        if not hasattr(self, "threshold_"):
            raise InvalidInputError("ThresholdBaseline must be fitted (or given threshold_) first")
        return baseline_generate(
            dance,
            self.threshold_,
            k=self.k,
            seed=self.seed if seed is None else seed,
            first_note=self.first_note,
        )

    def transform(self, dances) -> list[np.ndarray]:
        # per-dance seeds derive from the base seed so corpus output is stable
        return [self.generate(d, seed=self.seed + i) for i, d in enumerate(dances)]
