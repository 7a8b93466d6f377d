"""Pose data model, ingestion of pose-estimator output, and synthetic dances.

A pose is 18 2-D keypoints (COCO-18 order) flattened to a 36-vector with
coordinates normalized to [-1, 1]. A dance is an ordered frame sequence at a
fixed frame rate.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .exceptions import InvalidInputError, PoseParseError
from .validation import N_KEYPOINTS, POSE_DIM, as_pose_array, check_positive_int

DEFAULT_FPS = 30


@dataclass(frozen=True)
class DanceSequence:
    """An ordered sequence of pose frames at a fixed frame rate.

    ``frames`` is an (N, 36) float64 array, read-only after construction.
    """

    frames: np.ndarray
    fps: int = DEFAULT_FPS
    source_id: str = ""

    def __post_init__(self):
        frames = as_pose_array(self.frames)
        frames.setflags(write=False)
        object.__setattr__(self, "frames", frames)
        object.__setattr__(self, "fps", check_positive_int(self.fps, "fps"))

    def __len__(self) -> int:
        return self.frames.shape[0]

    @property
    def duration_s(self) -> float:
        return len(self) / self.fps


@dataclass(frozen=True)
class SynthConfig:
    """Parameters for the synthetic motif-dance generator.

    ``motif`` optionally pins the segment labels (e.g. ``(0, 1, 0)`` for
    "A B A"); when given it overrides ``motif_len`` and the random draw.
    """

    duration_s: float = 12.0
    fps: int = DEFAULT_FPS
    n_base_poses: int = 3
    motif_len: int = 6
    noise_std: float = 0.02
    seed: int = 0
    # fraction of a segment spent easing into the next base pose
    transition_frac: float = 0.3
    motif: tuple = None

    def __post_init__(self):
        if self.duration_s <= 0:
            raise InvalidInputError(f"duration_s must be > 0, got {self.duration_s}")
        if self.n_base_poses < 2:
            raise InvalidInputError(f"n_base_poses must be >= 2, got {self.n_base_poses}")
        if self.motif is not None:
            motif = tuple(int(v) for v in self.motif)
            if not motif:
                raise InvalidInputError("motif must be non-empty")
            if min(motif) < 0 or max(motif) >= self.n_base_poses:
                raise InvalidInputError("motif labels must index the base poses")
            object.__setattr__(self, "motif", motif)
            object.__setattr__(self, "motif_len", len(motif))
        if self.motif_len < 1:
            raise InvalidInputError(f"motif_len must be >= 1, got {self.motif_len}")
        if self.noise_std < 0:
            raise InvalidInputError(f"noise_std must be >= 0, got {self.noise_std}")
        if not 0.0 <= self.transition_frac <= 1.0:
            raise InvalidInputError("transition_frac must lie in [0, 1]")
        check_positive_int(self.fps, "fps")


def normalize_keypoints(raw, image_w, image_h, prev=None) -> np.ndarray:
    """Map 18 (x_px, y_px, confidence) triplets to a normalized 36-vector.

    Pixel coordinates map affinely so that 0 -> -1 and the image edge -> +1;
    results are clamped to [-1, 1]. Keypoints with confidence 0 carry forward
    the previous frame's value, or (0, 0) when there is none.
    """
    if image_w <= 0 or image_h <= 0:
        raise InvalidInputError(f"image dimensions must be positive, got {image_w}x{image_h}")
    raw = np.asarray(raw, dtype=np.float64)
    if raw.shape != (N_KEYPOINTS, 3):
        raise InvalidInputError(f"expected {N_KEYPOINTS} (x, y, conf) triplets, got shape {raw.shape}")
    coords = np.empty(POSE_DIM, dtype=np.float64)
    if prev is not None:
        coords[:] = np.asarray(prev, dtype=np.float64)
    else:
        coords[:] = 0.0
    detected = raw[:, 2] > 0.0
    x = np.clip(2.0 * (raw[:, 0] / image_w) - 1.0, -1.0, 1.0)
    y = np.clip(2.0 * (raw[:, 1] / image_h) - 1.0, -1.0, 1.0)
    coords[0::2] = np.where(detected, x, coords[0::2])
    coords[1::2] = np.where(detected, y, coords[1::2])
    return coords


def denormalize_keypoints(pose, image_w, image_h) -> np.ndarray:
    """Inverse of the affine map in :func:`normalize_keypoints` (18 x 2 pixels)."""
    if image_w <= 0 or image_h <= 0:
        raise InvalidInputError(f"image dimensions must be positive, got {image_w}x{image_h}")
    pose = np.asarray(pose, dtype=np.float64).reshape(N_KEYPOINTS, 2)
    px = np.empty_like(pose)
    px[:, 0] = (pose[:, 0] + 1.0) / 2.0 * image_w
    px[:, 1] = (pose[:, 1] + 1.0) / 2.0 * image_h
    return px


def _frames_from_estimator_records(records, image_w, image_h):
    if image_w is None or image_h is None:
        raise InvalidInputError("estimator input requires image_w and image_h")
    frames = []
    prev = None
    for i, record in enumerate(records):
        if not isinstance(record, dict) or "people" not in record:
            raise PoseParseError("estimator record has no 'people' field", frame_index=i)
        people = record["people"]
        if not people:
            # nobody detected: keep the timeline intact by repeating the last pose
            frame = prev if prev is not None else np.zeros(POSE_DIM)
        else:
            kp = people[0].get("pose_keypoints_2d")
            if kp is None or len(kp) != 3 * N_KEYPOINTS:
                raise PoseParseError(
                    f"pose_keypoints_2d must have {3 * N_KEYPOINTS} values", frame_index=i
                )
            try:
                triplets = np.asarray(kp, dtype=np.float64).reshape(N_KEYPOINTS, 3)
            except (TypeError, ValueError) as exc:
                raise PoseParseError(f"bad keypoint values: {exc}", frame_index=i) from exc
            frame = normalize_keypoints(triplets, image_w, image_h, prev=prev)
        frames.append(frame)
        prev = frame
    return np.asarray(frames)


def _frames_from_canonical(doc):
    for key in ("fps", "frames"):
        if key not in doc:
            raise PoseParseError(f"canonical pose file is missing '{key}'")
    frames = doc["frames"]
    if not isinstance(frames, list) or not frames:
        raise InvalidInputError("canonical pose file has no frames")
    out = np.empty((len(frames), POSE_DIM), dtype=np.float64)
    for i, row in enumerate(frames):
        if not isinstance(row, list) or len(row) != POSE_DIM:
            raise PoseParseError(f"frame must be a list of {POSE_DIM} numbers", frame_index=i)
        try:
            vec = np.asarray(row, dtype=np.float64)
        except (TypeError, ValueError) as exc:
            raise PoseParseError(f"bad coordinate values: {exc}", frame_index=i) from exc
        if not np.all(np.isfinite(vec)) or vec.min() < -1.0 or vec.max() > 1.0:
            raise PoseParseError("coordinates must be finite and in [-1, 1]", frame_index=i)
        out[i] = vec
    return out, int(doc["fps"]), str(doc.get("source_id", ""))


def _is_existing_path(source) -> bool:
    try:
        return Path(source).exists()
    except OSError:  # e.g. raw JSON text longer than NAME_MAX
        return False


def load_pose_json(source, image_w=None, image_h=None, fps=DEFAULT_FPS, source_id=None) -> DanceSequence:
    """Load a dance from the canonical pose format or raw estimator output.

    ``source`` may be a path to a canonical JSON file, a path to a directory of
    per-frame estimator files (read in lexicographic order), raw JSON bytes/str,
    or an already-decoded document. Estimator input additionally needs
    ``image_w``/``image_h``.
    """
    label = source_id
    if isinstance(source, (str, Path)) and _is_existing_path(source):
        path = Path(source)
        if label is None:
            label = path.stem
        if path.is_dir():
            files = sorted(p for p in path.iterdir() if p.suffix == ".json")
            if not files:
                raise InvalidInputError(f"no .json files in directory {path}")
            records = [json.loads(p.read_text()) for p in files]
            doc = records
        else:
            doc = json.loads(path.read_text())
    elif isinstance(source, (bytes, str)):
        doc = json.loads(source)
    else:
        doc = source

    if isinstance(doc, dict) and "frames" in doc:
        frames, file_fps, file_source = _frames_from_canonical(doc)
        return DanceSequence(frames, fps=file_fps, source_id=label or file_source)
    if isinstance(doc, list):
        if not doc:
            raise InvalidInputError("estimator input is empty")
        frames = _frames_from_estimator_records(doc, image_w, image_h)
        return DanceSequence(frames, fps=fps, source_id=label or "")
    raise PoseParseError("unrecognized pose document structure")


def write_pose_json(dance: DanceSequence, path) -> None:
    """Write a dance in the canonical pose format (lossless round-trip)."""
    doc = {
        "fps": dance.fps,
        "source_id": dance.source_id,
        "frames": [[float(v) for v in row] for row in dance.frames],
    }
    Path(path).write_text(json.dumps(doc, separators=(",", ":")) + "\n")


def _motif_labels(rng, cfg: SynthConfig) -> np.ndarray:
    # random segment labels with no immediate repeats, so every boundary moves;
    # motif_len > n_base_poses then forces repeated labels (block structure)
    labels = np.empty(cfg.motif_len, dtype=np.int64)
    labels[0] = rng.integers(cfg.n_base_poses)
    for i in range(1, cfg.motif_len):
        step = rng.integers(1, cfg.n_base_poses)
        labels[i] = (labels[i - 1] + step) % cfg.n_base_poses
    return labels


def synth_dance(cfg: SynthConfig) -> DanceSequence:
    """Generate a deterministic motif dance for desk-scale corpora.

    Base poses are random unit-norm 36-vectors; the motif repeats them in
    segments with cosine-eased transitions at segment boundaries, plus optional
    Gaussian jitter. The resulting similarity matrix has block structure.
    """
    rng = np.random.default_rng(cfg.seed)
    n_frames = int(round(cfg.duration_s * cfg.fps))
    if n_frames < 1:
        raise InvalidInputError("duration_s and fps give an empty dance")

    bases = rng.standard_normal((cfg.n_base_poses, POSE_DIM))
    bases /= np.linalg.norm(bases, axis=1, keepdims=True)
    np.clip(bases, -1.0, 1.0, out=bases)
    labels = np.asarray(cfg.motif) if cfg.motif is not None else _motif_labels(rng, cfg)

    seg_len = n_frames / cfg.motif_len
    half_zone = 0.5 * cfg.transition_frac * seg_len
    frames = np.empty((n_frames, POSE_DIM), dtype=np.float64)
    for t in range(n_frames):
        seg = min(int(t / seg_len), cfg.motif_len - 1)
        pose = bases[labels[seg]]
        if half_zone > 0:
            boundary = (seg + 1) * seg_len
            prev_boundary = seg * seg_len
            if seg + 1 < cfg.motif_len and t >= boundary - half_zone:
                u = (t - (boundary - half_zone)) / (2 * half_zone)
                w = 0.5 * (1.0 - math.cos(math.pi * u))
                pose = (1 - w) * bases[labels[seg]] + w * bases[labels[seg + 1]]
            elif seg > 0 and t < prev_boundary + half_zone:
                u = (t - (prev_boundary - half_zone)) / (2 * half_zone)
                w = 0.5 * (1.0 - math.cos(math.pi * u))
                pose = (1 - w) * bases[labels[seg - 1]] + w * bases[labels[seg]]
        frames[t] = pose
    if cfg.noise_std > 0:
        frames += rng.normal(0.0, cfg.noise_std, size=frames.shape)
    np.clip(frames, -1.0, 1.0, out=frames)
    return DanceSequence(frames, fps=cfg.fps, source_id=f"synth-{cfg.seed}")
