"""Corpus metrics: next-note accuracy, mean correlation, flatness, CSV reports."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidInputError
from .pose import DanceSequence
from .similarity import dance_music_corr, pose_similarity
from .validation import as_note_array


def next_note_accuracy(pred, labels) -> float:
    """Fraction of positions 1..L-1 where pred matches labels.

    Index 0 is excluded: every generator pins it to the same opening note, so
    counting it would inflate the score.
    """
    pred = as_note_array(pred)
    labels = as_note_array(labels)
    if pred.shape != labels.shape:
        raise InvalidInputError(f"length mismatch: {pred.shape[0]} vs {labels.shape[0]}")
    if pred.shape[0] < 2:
        raise InvalidInputError("need at least two notes to score decided positions")
    return float(np.mean(pred[1:] == labels[1:]))


def sequence_correlation(dance: DanceSequence, notes, k: int = 6) -> float:
    """Global dance-music correlation for one dance and its note sequence."""
    notes = as_note_array(notes)
    n = notes.shape[0] * k
    if dance.frames.shape[0] < n:
        raise InvalidInputError(
            f"dance has {dance.frames.shape[0]} frames, notes need {n}"
        )
    return dance_music_corr(pose_similarity(dance.frames[:n]), notes, k)


def mean_correlation(corpus, k: int = 6) -> float:
    """Mean global correlation over (dance, notes) pairs."""
    corpus = list(corpus)
    if not corpus:
        raise InvalidInputError("empty corpus")
    return float(np.mean([sequence_correlation(d, n, k) for d, n in corpus]))


def flatness(notes) -> int:
    """Number of adjacent note changes; 0 means one note held throughout."""
    notes = as_note_array(notes)
    if notes.shape[0] == 0:
        raise InvalidInputError("empty note sequence")
    return int(np.count_nonzero(np.diff(notes)))


@dataclass(frozen=True)
class EvalRow:
    video_id: str
    generator: str
    correlation: float
    accuracy: float
    flatness: int


def write_report(path, rows: list) -> None:
    """CSV report with one row per (video, generator) and MEAN summary rows."""
    if not rows:
        raise InvalidInputError("no evaluation rows")
    lines = ["video_id,generator,correlation,accuracy,flatness"]
    for r in rows:
        lines.append(
            f"{r.video_id},{r.generator},{r.correlation:.6f},{r.accuracy:.6f},{r.flatness}"
        )
    for gen in sorted({r.generator for r in rows}):
        sub = [r for r in rows if r.generator == gen]
        lines.append(
            "MEAN,{},{:.6f},{:.6f},{:.2f}".format(
                gen,
                float(np.mean([r.correlation for r in sub])),
                float(np.mean([r.accuracy for r in sub])),
                float(np.mean([r.flatness for r in sub])),
            )
        )
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
