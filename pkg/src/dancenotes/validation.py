"""Input validation helpers used by the estimators and the functional API."""

from __future__ import annotations

import numpy as np

from .exceptions import InvalidInputError

N_KEYPOINTS = 18
POSE_DIM = 2 * N_KEYPOINTS  # 36
N_NOTES = 5


def as_pose_vector(v) -> np.ndarray:
    """Coerce to a float64 pose vector of length 36 with entries in [-1, 1]."""
    arr = np.asarray(v, dtype=np.float64)
    if arr.shape != (POSE_DIM,):
        raise InvalidInputError(f"pose vector must have shape ({POSE_DIM},), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("pose vector contains non-finite values")
    if arr.min() < -1.0 or arr.max() > 1.0:
        raise InvalidInputError("pose coordinates must lie in [-1, 1]")
    return arr


def as_pose_array(frames) -> np.ndarray:
    """Coerce to an (N, 36) float64 array of valid pose vectors."""
    arr = np.asarray(frames, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != POSE_DIM:
        raise InvalidInputError(f"pose array must have shape (N, {POSE_DIM}), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("pose array contains non-finite values")
    if arr.size and (arr.min() < -1.0 or arr.max() > 1.0):
        raise InvalidInputError("pose coordinates must lie in [-1, 1]")
    return arr


def as_note_array(notes) -> np.ndarray:
    """Coerce to a 1-D int8 array of ordinals in {0..4}."""
    arr = np.asarray(notes)
    if arr.ndim != 1:
        raise InvalidInputError(f"note sequence must be 1-D, got shape {arr.shape}")
    if arr.size == 0:
        return arr.astype(np.int8)
    if not np.issubdtype(arr.dtype, np.integer):
        rounded = np.rint(np.asarray(arr, dtype=np.float64))
        if not np.array_equal(rounded, np.asarray(arr, dtype=np.float64)):
            raise InvalidInputError("note ordinals must be integers")
        arr = rounded.astype(np.int64)
    if arr.min() < 0 or arr.max() >= N_NOTES:
        raise InvalidInputError(f"note ordinals must lie in 0..{N_NOTES - 1}")
    return arr.astype(np.int8)


def check_ordinal(o) -> int:
    o = int(o)
    if not 0 <= o < N_NOTES:
        raise InvalidInputError(f"note ordinal must lie in 0..{N_NOTES - 1}, got {o}")
    return o


def check_positive_int(value, name: str) -> int:
    v = int(value)
    if v <= 0:
        raise InvalidInputError(f"{name} must be a positive integer, got {value}")
    return v


def check_sim_matrix(m) -> np.ndarray:
    """Validate a square symmetric similarity matrix and return it as float64."""
    arr = np.asarray(m, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidInputError(f"similarity matrix must be square, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise InvalidInputError("similarity matrix must be non-empty")
    if not np.array_equal(arr, arr.T):
        raise InvalidInputError("similarity matrix must be symmetric")
    return arr
