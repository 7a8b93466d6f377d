"""Binary weight files: magic "D2MW", version, architecture echo, named tensors.

All integers are little-endian uint32 and tensor payloads are little-endian
float32, so files are byte-identical across platforms and reruns.
"""

from __future__ import annotations

import struct

import numpy as np

from ..exceptions import WeightFormatError
from .config import ModelConfig
from .network import WEIGHTS_VERSION, ModelParams, expected_shapes

WEIGHTS_MAGIC = b"D2MW"


def _pack_u32(*values) -> bytes:
    return struct.pack(f"<{len(values)}I", *values)


def save_params(path, params: ModelParams) -> int:
    """Write params to path; returns the byte count."""
    cfg = params.config
    blob = bytearray()
    blob += WEIGHTS_MAGIC
    blob += _pack_u32(WEIGHTS_VERSION)
    blob += _pack_u32(cfg.window_frames, cfg.window_notes, cfg.kernel, cfg.rnn_hidden, cfg.classes)
    blob += _pack_u32(len(cfg.conv_filters), *cfg.conv_filters)
    blob += _pack_u32(len(cfg.pool_after), *cfg.pool_after)
    blob += _pack_u32(len(cfg.fc_sizes), *cfg.fc_sizes)
    names = sorted(params.tensors)
    blob += _pack_u32(len(names))
    for name in names:
        arr = params.tensors[name]
        encoded = name.encode("utf-8")
        blob += _pack_u32(len(encoded))
        blob += encoded
        blob += _pack_u32(arr.ndim, *arr.shape)
        blob += np.ascontiguousarray(arr, dtype="<f4").tobytes()
    with open(path, "wb") as fh:
        fh.write(blob)
    return len(blob)


class _Reader:
    def __init__(self, blob: bytes):
        self.blob = blob
        self.off = 0

    def u32(self, n: int = 1):
        end = self.off + 4 * n
        if end > len(self.blob):
            raise WeightFormatError("truncated weight file")
        vals = struct.unpack_from(f"<{n}I", self.blob, self.off)
        self.off = end
        return vals[0] if n == 1 else vals

    def raw(self, n: int) -> bytes:
        end = self.off + n
        if end > len(self.blob):
            raise WeightFormatError("truncated weight file")
        out = self.blob[self.off: end]
        self.off = end
        return out


def load_params(path, expected_config: ModelConfig = None) -> ModelParams:
    """Read a weight file back into ModelParams (float32).

    The architecture block in the file is authoritative; if expected_config
    is given its architecture fields must match. Bad magic, version, layout,
    or tensor shapes raise WeightFormatError.
    """
    with open(path, "rb") as fh:
        r = _Reader(fh.read())
    if r.raw(4) != WEIGHTS_MAGIC:
        raise WeightFormatError("bad weight file magic")
    version = r.u32()
    if version != WEIGHTS_VERSION:
        raise WeightFormatError(f"unsupported weight file version {version}")
    window_frames, window_notes, kernel, rnn_hidden, classes = r.u32(5)
    conv_filters = r.u32(r.u32())
    pool_after = r.u32(r.u32())
    fc_sizes = r.u32(r.u32())
    as_tuple = lambda v: v if isinstance(v, tuple) else (v,)
    cfg = ModelConfig(
        window_frames=window_frames,
        window_notes=window_notes,
        kernel=kernel,
        rnn_hidden=rnn_hidden,
        classes=classes,
        conv_filters=as_tuple(conv_filters),
        pool_after=as_tuple(pool_after),
        fc_sizes=as_tuple(fc_sizes),
    )
    if expected_config is not None and cfg.arch_fields() != expected_config.arch_fields():
        raise WeightFormatError(
            f"weight file architecture {cfg.arch_fields()} does not match "
            f"expected {expected_config.arch_fields()}"
        )
    n_tensors = r.u32()
    tensors = {}
    for _ in range(n_tensors):
        name = r.raw(r.u32()).decode("utf-8")
        rank = r.u32()
        shape = as_tuple(r.u32(rank)) if rank else ()
        count = int(np.prod(shape)) if shape else 1
        data = np.frombuffer(r.raw(4 * count), dtype="<f4").reshape(shape)
        tensors[name] = data.astype(np.float32)
    if r.off != len(r.blob):
        raise WeightFormatError("trailing bytes after last tensor")
    want = expected_shapes(cfg)
    if set(tensors) != set(want):
        missing = sorted(set(want) - set(tensors))
        extra = sorted(set(tensors) - set(want))
        raise WeightFormatError(f"tensor names mismatch (missing {missing}, extra {extra})")
    for name, shape in want.items():
        if tensors[name].shape != shape:
            raise WeightFormatError(
                f"tensor {name} has shape {tensors[name].shape}, expected {shape}"
            )
    return ModelParams(tensors, cfg, version)
