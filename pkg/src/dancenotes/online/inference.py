"""Live and batch note generation with a trained model."""

from __future__ import annotations

from collections import deque

import numpy as np
from sklearn.base import BaseEstimator

from ..exceptions import InvalidInputError
from ..music import FIRST_NOTE, NoteSequence
from ..pose import DanceSequence
from ..validation import POSE_DIM, as_pose_vector, check_ordinal
from .config import ModelConfig, desk_config
from .examples import Dataset, dance_window_matrix, note_history_onehot
from .network import ModelParams, forward, softmax
from .training import train
from .weights_io import load_params, save_params

SAMPLING_MODES = ("argmax", "temperature")


class RollingState:
    """Bounded live history: one dance window plus the interval in flight.

    Keeps at most window_frames + k pose frames and window_notes notes, so
    memory stays constant no matter how long the stream runs.
    """

    def __init__(self, cfg: ModelConfig):
        self.cfg = cfg
        self._frames = deque(maxlen=cfg.window_frames + cfg.k)
        self._notes = deque(maxlen=cfg.window_notes)
        self.frames_seen = 0
        self.notes_emitted = 0

    def push_frame(self, coords) -> None:
        self._frames.append(as_pose_vector(coords))
        self.frames_seen += 1

    def push_note(self, ordinal: int) -> None:
        self._notes.append(check_ordinal(ordinal))
        self.notes_emitted += 1

    @property
    def ready(self) -> bool:
        """True once enough frames arrived to emit the next note."""
        return self.frames_seen >= (self.notes_emitted + 1) * self.cfg.k

    def window_frames_array(self) -> np.ndarray:
        """The frames covering the current note window: all but the last k."""
        frames = list(self._frames)[: -self.cfg.k]
        if not frames:
            return np.zeros((0, POSE_DIM))
        return np.array(frames, dtype=np.float64)

    def last_interval(self) -> np.ndarray:
        """The k most recent frames: the interval the pending note spans."""
        return np.array(list(self._frames)[-self.cfg.k:], dtype=np.float64)

    def history_notes(self) -> list:
        return list(self._notes)


def _pick_note(logits, mode: str, temperature: float, rng) -> int:
    if mode == "argmax":
        return int(np.argmax(logits))  # ties resolve to the lowest ordinal
    if mode == "temperature":
        if temperature <= 0:
            raise InvalidInputError(f"temperature must be positive, got {temperature}")
        if rng is None:
            raise InvalidInputError("temperature sampling needs a seeded generator")
        probs = softmax(logits, temperature)
        return int(rng.choice(probs.shape[-1], p=probs))
    raise InvalidInputError(f"unknown sampling mode {mode!r}, expected one of {SAMPLING_MODES}")


def predict_next(
    params: ModelParams,
    state: RollingState,
    mode: str = "argmax",
    temperature: float = 1.0,
    rng=None,
):
    """Emit the next note from live history, or None if frames are still due.

    Must be called at each k-frame boundary; letting frames run past an
    unemitted note would scroll its window out of the bounded buffer, so that
    is an error. Note 0 is the fixed opening note and skips the model. The
    emitted note is appended to the rolling history.
    """
    cfg = params.config
    due = (state.notes_emitted + 1) * cfg.k
    if state.frames_seen < due:
        return None
    if state.frames_seen > due:
        raise InvalidInputError(
            f"note {state.notes_emitted} was due at frame {due}, "
            f"but {state.frames_seen} frames have arrived"
        )
    if state.notes_emitted == 0:
        note = FIRST_NOTE
    else:
        window = dance_window_matrix(state.window_frames_array(), cfg.window_frames)
        hist = note_history_onehot(state.history_notes(), cfg.window_notes)
        logits = forward(params, window[None], hist[None])[0]
        note = _pick_note(logits, mode, temperature, rng)
    state.push_note(note)
    return note


def generate_notes(
    params: ModelParams,
    dance: DanceSequence,
    mode: str = "argmax",
    temperature: float = 1.0,
    seed: int = 0,
) -> NoteSequence:
    """Batch rollout over a full dance; one note per k frames, first fixed."""
    cfg = params.config
    k = cfg.k
    n_notes = dance.frames.shape[0] // k
    if n_notes < 1:
        raise InvalidInputError(f"dance has {dance.frames.shape[0]} frames, needs at least {k}")
    rng = np.random.default_rng(seed) if mode == "temperature" else None
    notes = [FIRST_NOTE]
    for t in range(1, n_notes):
        lo = max(0, t - cfg.window_notes)
        window = dance_window_matrix(dance.frames[lo * k: t * k], cfg.window_frames)
        hist = note_history_onehot(notes[lo:t], cfg.window_notes)
        logits = forward(params, window[None], hist[None])[0]
        notes.append(_pick_note(logits, mode, temperature, rng))
    return NoteSequence(
        notes=np.array(notes, dtype=np.int8), k=k, fps=dance.fps, generator_tag="online"
    )


class OnlineNoteModel(BaseEstimator):
    """Trainable real-time generator: fit on examples, generate per dance."""

    def __init__(
        self,
        config: ModelConfig = None,
        val_fraction: float = 0.1,
        sampling: str = "argmax",
        temperature: float = 1.0,
        seed: int = 0,
    ):
        self.config = config
        self.val_fraction = val_fraction
        self.sampling = sampling
        self.temperature = temperature
        self.seed = seed

    def _check_fitted(self):
        if not hasattr(self, "params_"):
            raise InvalidInputError("OnlineNoteModel must be fitted or loaded first")

    def fit(self, X, y=None, log_fn=None):
        """X is a Dataset or a list of TrainingExample."""
        ds = X if isinstance(X, Dataset) else Dataset.from_examples(list(X))
        cfg = self.config if self.config is not None else desk_config()
        self.params_, self.log_ = train(ds, cfg, val_fraction=self.val_fraction, log_fn=log_fn)
        return self

    def generate(self, dance: DanceSequence, seed: int = None) -> NoteSequence:
        self._check_fitted()
        return generate_notes(
            self.params_,
            dance,
            mode=self.sampling,
            temperature=self.temperature,
            seed=self.seed if seed is None else seed,
        )

    def transform(self, dances) -> list:
        return [self.generate(d, seed=self.seed + i) for i, d in enumerate(dances)]

    def save_weights(self, path) -> int:
        self._check_fitted()
        return save_params(path, self.params_)

    @classmethod
    def from_weights(cls, path, **kwargs) -> "OnlineNoteModel":
        model = cls(**kwargs)
        model.params_ = load_params(path)
        model.config = model.params_.config
        return model
