"""Similarity matrices for dance and music, and the correlation objective.

Dance frames are compared by cosine similarity, note sequences by pitch
closeness (1 - |a - b| / 4), and the two are aligned by nearest-neighbour
upsampling of the note matrix before taking a Pearson correlation over the
vectorized matrices.
"""

from __future__ import annotations

import numpy as np

from .exceptions import InvalidInputError
from .validation import as_note_array, check_sim_matrix

# Below this squared-norm scale a pose is treated as undefined and the
# degenerate similarity rules apply.
ZERO_NORM_EPS = 1e-12
# Below this variance a sequence is treated as constant and its correlation
# with anything is defined to be 0.
DEGENERATE_VAR_EPS = 1e-18

NOTE_SPAN = 4.0  # ordinal distance between the lowest and highest note


def cosine_sim(a, b) -> float:
    """Cosine similarity of two equal-length vectors.

    A vector with norm below ``ZERO_NORM_EPS`` has similarity 0 to everything
    except another such vector, to which it has similarity 1.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise InvalidInputError(f"cosine_sim needs equal-length vectors, got {a.shape} and {b.shape}")
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na < ZERO_NORM_EPS and nb < ZERO_NORM_EPS:
        return 1.0
    if na < ZERO_NORM_EPS or nb < ZERO_NORM_EPS:
        return 0.0
    return float(np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0))


def pose_similarity(frames: np.ndarray) -> np.ndarray:
    """Pairwise cosine-similarity matrix of an (n, d) frame array.

    Exactly symmetric with unit diagonal; zero-norm frames follow the same
    degenerate rules as :func:`cosine_sim`.
    """
    x = np.asarray(frames, dtype=np.float64)
    if x.ndim != 2:
        raise InvalidInputError(f"expected an (n, d) frame array, got shape {x.shape}")
    n = x.shape[0]
    if n == 0:
        raise InvalidInputError("frame array is empty")
    norms = np.linalg.norm(x, axis=1)
    nonzero = norms >= ZERO_NORM_EPS
    unit = np.zeros_like(x)
    unit[nonzero] = x[nonzero] / norms[nonzero, None]
    s = unit @ unit.T
    zero = ~nonzero
    if zero.any():
        s[np.ix_(zero, zero)] = 1.0
    np.clip(s, -1.0, 1.0, out=s)
    # mirror the upper triangle so symmetry is exact despite BLAS rounding
    s = np.triu(s, 1)
    s = s + s.T
    np.fill_diagonal(s, 1.0)
    return s


def dance_sim_matrix(dance, frame_range=None) -> np.ndarray:
    """Cosine-similarity matrix over a dance's frames.

    ``frame_range`` is an optional ``(start, stop)`` half-open interval.
    """
    frames = dance.frames if hasattr(dance, "frames") else np.asarray(dance, dtype=np.float64)
    n = frames.shape[0]
    if frame_range is not None:
        start, stop = frame_range
        if not (0 <= start < stop <= n):
            raise InvalidInputError(f"frame range ({start}, {stop}) out of bounds for {n} frames")
        frames = frames[start:stop]
    if frames.shape[0] == 0:
        raise InvalidInputError("dance has no frames in the requested range")
    return pose_similarity(frames)


def music_sim_matrix(notes) -> np.ndarray:
    """Note-closeness matrix S[i][j] = 1 - |note_i - note_j| / 4.

    Values lie in {0, 0.25, 0.5, 0.75, 1} with a unit diagonal.
    """
    arr = as_note_array(notes)
    if arr.size == 0:
        raise InvalidInputError("note sequence is empty")
    a = arr.astype(np.float64)
    return 1.0 - np.abs(a[:, None] - a[None, :]) / NOTE_SPAN


def nn_resize(m, target: int) -> np.ndarray:
    """Upsample a square matrix to ``target`` x ``target`` by nearest neighbour.

    out[a][b] = m[a * s // target][b * s // target]; when target == s * K each
    source entry becomes a K x K block.
    """
    m = check_sim_matrix(m)
    s = m.shape[0]
    target = int(target)
    if target < s:
        raise InvalidInputError(f"cannot shrink: target {target} < source size {s}")
    idx = (np.arange(target) * s) // target
    return m[np.ix_(idx, idx)]


def pearson(x, y) -> float:
    """Pearson correlation of two equal-length sequences (length >= 2).

    If either side has variance below ``DEGENERATE_VAR_EPS`` the correlation
    is defined to be 0.
    """
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.shape != y.shape:
        raise InvalidInputError(f"length mismatch: {x.shape} vs {y.shape}")
    n = x.size
    if n < 2:
        raise InvalidInputError("pearson needs at least 2 values")
    xc = x - x.mean()
    yc = y - y.mean()
    ssx = float(xc @ xc)
    ssy = float(yc @ yc)
    if ssx / n < DEGENERATE_VAR_EPS or ssy / n < DEGENERATE_VAR_EPS:
        return 0.0
    return float(np.clip((xc @ yc) / np.sqrt(ssx * ssy), -1.0, 1.0))


def dance_music_corr(dance_sim, notes, k: int) -> float:
    """Correlation between a dance similarity matrix and a note sequence.

    The note matrix is upsampled by nearest neighbour to the dance matrix's
    size (which must equal ``len(notes) * k``) and both are compared with
    :func:`pearson` over their row-major vectorizations.
    """
    d = check_sim_matrix(dance_sim)
    arr = as_note_array(notes)
    k = int(k)
    if k < 1:
        raise InvalidInputError(f"k must be >= 1, got {k}")
    n = d.shape[0]
    if n != arr.size * k:
        raise InvalidInputError(
            f"dance matrix size {n} does not equal len(notes) * k = {arr.size} * {k}"
        )
    music = nn_resize(music_sim_matrix(arr), n)
    return pearson(d.ravel(), music.ravel())


def write_matrix_csv(m, path) -> None:
    """Dump a matrix as CSV, one row per line, full float precision."""
    m = np.asarray(m, dtype=np.float64)
    np.savetxt(path, m, delimiter=",", fmt="%.17g")


def write_matrix_pgm(m, path) -> None:
    """Dump a matrix as a binary PGM heatmap.

    Values are mapped linearly so the matrix minimum becomes 0 and the maximum
    255; a constant matrix maps to all zeros.
    """
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.size == 0:
        raise InvalidInputError(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    lo = m.min()
    hi = m.max()
    if hi > lo:
        gray = np.floor((m - lo) / (hi - lo) * 255.0 + 0.5).astype(np.uint8)
    else:
        gray = np.zeros(m.shape, dtype=np.uint8)
    header = f"P5\n{m.shape[1]} {m.shape[0]}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(gray.tobytes(order="C"))
