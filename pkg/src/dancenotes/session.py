"""Transport-agnostic streaming session: hello, pose frames in, notes out.

A session drives the online model one frame at a time and answers each
message with zero or more reply messages. The WebSocket layer in server.py
is a thin wrapper around this, which keeps the protocol testable without
sockets.
"""

from __future__ import annotations

import numpy as np

from .exceptions import InvalidInputError, ProtocolError
from .music import ordinal_to_midi
from .online.inference import RollingState, predict_next
from .online.network import ModelParams
from .pose import DEFAULT_FPS
from .similarity import DEGENERATE_VAR_EPS, NOTE_SPAN, ZERO_NORM_EPS
from .validation import N_NOTES, POSE_DIM

# Raw-moment variance of the dance side cancels catastrophically for
# near-constant streams, so the streaming degeneracy guard is relative.
STREAM_VAR_REL_EPS = 1e-9


class CorrelationStats:
    """O(1)-memory sufficient statistics for the global correlation.

    Folding a note's k frames updates per-ordinal sums of unit pose vectors,
    a Gram accumulator, and zero-norm counts. The full-matrix Pearson
    correlation between the dance and upsampled music similarity matrices is
    then recovered in closed form, so the session never stores the stream.
    """

    def __init__(self):
        self.unit_sums = np.zeros((N_NOTES, POSE_DIM))
        self.gram = np.zeros((POSE_DIM, POSE_DIM))
        self.zero_counts = np.zeros(N_NOTES)
        self.frame_counts = np.zeros(N_NOTES)

    def fold(self, frames: np.ndarray, ordinal: int) -> None:
        """Account for the frames during which this note sounds."""
        for row in np.atleast_2d(frames):
            norm = float(np.linalg.norm(row))
            if norm < ZERO_NORM_EPS:
                self.zero_counts[ordinal] += 1.0
            else:
                u = row / norm
                self.unit_sums[ordinal] += u
                self.gram += np.outer(u, u)
            self.frame_counts[ordinal] += 1.0

    def correlation(self) -> float:
        n = float(self.frame_counts.sum())
        if n == 0.0:
            return 0.0
        pairs = n * n
        ordinals = np.arange(N_NOTES, dtype=np.float64)
        s_tab = 1.0 - np.abs(ordinals[:, None] - ordinals[None, :]) / NOTE_SPAN
        m = self.frame_counts
        z = self.zero_counts
        sum_s = float(m @ s_tab @ m)
        sum_s2 = float(m @ (s_tab * s_tab) @ m)
        total_u = self.unit_sums.sum(axis=0)
        total_z = float(z.sum())
        sum_d = float(total_u @ total_u) + total_z * total_z
        sum_d2 = float(np.sum(self.gram * self.gram)) + total_z * total_z
        cross = self.unit_sums @ self.unit_sums.T
        sum_ds = float(np.sum(s_tab * cross)) + float(z @ s_tab @ z)
        mean_d = sum_d / pairs
        mean_s = sum_s / pairs
        var_d = sum_d2 / pairs - mean_d * mean_d
        var_s = sum_s2 / pairs - mean_s * mean_s
        if var_s < DEGENERATE_VAR_EPS:
            return 0.0
        if var_d < STREAM_VAR_REL_EPS * (1.0 + mean_d * mean_d):
            return 0.0
        cov = sum_ds / pairs - mean_d * mean_s
        return float(np.clip(cov / np.sqrt(var_d * var_s), -1.0, 1.0))


def _require(msg: dict, key: str):
    if key not in msg:
        raise ProtocolError(f"{msg.get('type', '?')} message missing field {key!r}")
    return msg[key]


class StreamingSession:
    """One client's protocol state machine. handle(msg) returns replies."""

    def __init__(
        self,
        params: ModelParams,
        sampling: str = "argmax",
        temperature: float = 1.0,
        seed: int = 0,
        session_id: str = "s0",
    ):
        self.params = params
        self.sampling = sampling
        self.temperature = temperature
        self.session_id = session_id
        self._rng = np.random.default_rng(seed)
        self.state = None  # RollingState, allocated by hello
        self.fps = DEFAULT_FPS
        self.notes = []  # every emitted ordinal, for the summary
        self.stats = CorrelationStats()
        self._expected_seq = 0
        self.ended = False

    def handle(self, msg) -> list:
        if not isinstance(msg, dict) or not isinstance(msg.get("type"), str):
            raise ProtocolError("messages must be JSON objects with a string 'type'")
        if self.ended:
            raise ProtocolError("session already ended")
        kind = msg["type"]
        if kind == "hello":
            return self._handle_hello(msg)
        if kind == "pose":
            return self._handle_pose(msg)
        if kind == "end":
            return self._handle_end(msg)
        raise ProtocolError(f"unknown message type {kind!r}")

    def _handle_hello(self, msg) -> list:
        if self.state is not None:
            raise ProtocolError("hello may only be sent once")
        cfg = self.params.config
        k = msg.get("k", cfg.k)
        fps = msg.get("fps", DEFAULT_FPS)
        generator = msg.get("generator", "online")
        if generator != "online":
            raise ProtocolError(f"unsupported generator {generator!r}; only online streams")
        if not isinstance(k, int) or k != cfg.k:
            raise ProtocolError(f"unsupported k {k!r}; this model expects k={cfg.k}")
        if not isinstance(fps, int) or fps < 1:
            raise ProtocolError(f"unsupported fps {fps!r}")
        self.fps = fps
        self.state = RollingState(cfg)
        return [
            {
                "type": "ready",
                "session_id": self.session_id,
                "k": cfg.k,
                "fps": fps,
                "generator": "online",
            }
        ]

    def _handle_pose(self, msg) -> list:
        if self.state is None:
            raise ProtocolError("pose before hello")
        seq = _require(msg, "seq")
        if not isinstance(seq, int) or seq != self._expected_seq:
            raise ProtocolError(f"expected seq {self._expected_seq}, got {seq!r}")
        coords = _require(msg, "coords")
        try:
            self.state.push_frame(coords)
        except InvalidInputError as exc:
            raise ProtocolError(f"malformed pose vector: {exc}") from exc
        self._expected_seq += 1
        if not self.state.ready:
            return []
        interval = self.state.last_interval()
        note = predict_next(
            self.params,
            self.state,
            mode=self.sampling,
            temperature=self.temperature,
            rng=self._rng,
        )
        self.stats.fold(interval, note)
        self.notes.append(int(note))
        return [
            {
                "type": "note",
                "index": len(self.notes) - 1,
                "ordinal": int(note),
                "midi": ordinal_to_midi(note),
                "at_frame": self.state.frames_seen,
            }
        ]

    def _handle_end(self, msg) -> list:
        if self.state is None:
            raise ProtocolError("end before hello")
        self.ended = True
        return [
            {
                "type": "summary",
                "notes": list(self.notes),
                "correlation": self.stats.correlation(),
            }
        ]
