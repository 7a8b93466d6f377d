"""From-scratch conv + LSTM next-note classifier (forward, backward, init).

Everything runs on plain numpy. Convolutions use im2col with stride 1 and
same padding; the input gradient is computed as a correlation of the padded
output gradient with the spatially flipped, channel-swapped kernel, which
keeps the backward pass matmul-shaped instead of scatter-add-shaped.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..exceptions import NumericError
from .config import ModelConfig

WEIGHTS_VERSION = 1


@dataclass
class ModelParams:
    """Named tensors plus the architecture they were shaped for."""

    tensors: dict
    config: ModelConfig
    version: int = WEIGHTS_VERSION

    @property
    def dtype(self):
        return self.tensors["head_b"].dtype

    def astype(self, dtype) -> "ModelParams":
        return ModelParams(
            {k: v.astype(dtype) for k, v in self.tensors.items()}, self.config, self.version
        )

    def n_parameters(self) -> int:
        return int(sum(v.size for v in self.tensors.values()))


def expected_shapes(cfg: ModelConfig) -> dict:
    """Tensor name -> shape for this architecture, in construction order."""
    k = cfg.kernel
    shapes = {}
    cin = 1
    for i, cout in enumerate(cfg.conv_filters, start=1):
        shapes[f"conv{i}_w"] = (k, k, cin, cout)
        shapes[f"conv{i}_b"] = (cout,)
        cin = cout
    h = cfg.rnn_hidden
    shapes["lstm_wx"] = (4 * h, cfg.classes)
    shapes["lstm_wh"] = (4 * h, h)
    shapes["lstm_b"] = (4 * h,)
    fan_in = cfg.concat_len
    for i, width in enumerate(cfg.fc_sizes, start=1):
        shapes[f"fc{i}_w"] = (fan_in, width)
        shapes[f"fc{i}_b"] = (width,)
        fan_in = width
    shapes["head_w"] = (fan_in, cfg.classes)
    shapes["head_b"] = (cfg.classes,)
    return shapes


def init_params(cfg: ModelConfig, seed: int = None, dtype=np.float32) -> ModelParams:
    """He-normal conv/FC weights, small-uniform recurrent weights, zero biases."""
    rng = np.random.default_rng(cfg.seed if seed is None else seed)
    t = {}
    for name, shape in expected_shapes(cfg).items():
        if name.endswith("_b"):
            t[name] = np.zeros(shape)
        elif name.startswith("lstm"):
            t[name] = rng.uniform(-0.08, 0.08, shape)
        elif name.startswith("conv"):
            t[name] = rng.normal(0.0, np.sqrt(2.0 / np.prod(shape[:3])), shape)
        else:
            t[name] = rng.normal(0.0, np.sqrt(2.0 / shape[0]), shape)
    return ModelParams({k_: v.astype(dtype) for k_, v in t.items()}, cfg)


def _im2col(x: np.ndarray, k: int) -> np.ndarray:
    # (B,H,W,C) -> (B,Ho,Wo,k*k*C) with Ho = H-k+1, patch layout (ki,kj,c)
    win = sliding_window_view(x, (k, k), axis=(1, 2))
    win = win.transpose(0, 1, 2, 4, 5, 3)
    return win.reshape(win.shape[0], win.shape[1], win.shape[2], -1)


def _conv_forward(x, w, b):
    k = w.shape[0]
    p = k // 2
    xp = np.pad(x, ((0, 0), (p, p), (p, p), (0, 0)))
    cols = _im2col(xp, k)
    out = cols @ w.reshape(-1, w.shape[3]) + b
    return out, (cols, w, x.shape)


def _conv_input_grad(dout, w, x_shape):
    k = w.shape[0]
    p = k // 2
    h, wd = x_shape[1], x_shape[2]
    dpad = np.pad(dout, ((0, 0), (k - 1, k - 1), (k - 1, k - 1), (0, 0)))
    w_back = np.flip(w, axis=(0, 1)).transpose(0, 1, 3, 2)  # (k,k,cout,cin)
    cols = _im2col(dpad, k)
    dxp = cols @ w_back.reshape(-1, w_back.shape[3])
    return dxp[:, p:p + h, p:p + wd, :]


def _conv_backward(dout, cache, need_dx=True):
    cols, w, x_shape = cache
    cout = w.shape[3]
    db = dout.sum(axis=(0, 1, 2))
    dw = (cols.reshape(-1, cols.shape[-1]).T @ dout.reshape(-1, cout)).reshape(w.shape)
    dx = _conv_input_grad(dout, w, x_shape) if need_dx else None
    return dx, dw, db


def _relu_forward(x):
    return np.maximum(x, 0.0), x > 0


def _relu_backward(dout, mask):
    return dout * mask


def _maxpool_forward(x):
    b, h, w, c = x.shape
    h2, w2 = h // 2, w // 2
    xt = (
        x[:, : 2 * h2, : 2 * w2, :]
        .reshape(b, h2, 2, w2, 2, c)
        .transpose(0, 1, 3, 2, 4, 5)
        .reshape(b, h2, w2, 4, c)
    )
    idx = xt.argmax(axis=3)  # first max wins on ties
    out = np.take_along_axis(xt, idx[:, :, :, None, :], axis=3)[:, :, :, 0, :]
    return out, (idx, x.shape)


def _maxpool_backward(dout, cache):
    idx, x_shape = cache
    b, h, w, c = x_shape
    h2, w2 = h // 2, w // 2
    dxt = np.zeros((b, h2, w2, 4, c), dtype=dout.dtype)
    np.put_along_axis(dxt, idx[:, :, :, None, :], dout[:, :, :, None, :], axis=3)
    dx = np.zeros(x_shape, dtype=dout.dtype)
    dx[:, : 2 * h2, : 2 * w2, :] = (
        dxt.reshape(b, h2, w2, 2, 2, c).transpose(0, 1, 3, 2, 4, 5).reshape(b, 2 * h2, 2 * w2, c)
    )
    return dx


def _gap_forward(x):
    return x.mean(axis=(1, 2)), x.shape


def _gap_backward(dout, x_shape):
    scale = 1.0 / (x_shape[1] * x_shape[2])
    return np.broadcast_to(dout[:, None, None, :] * scale, x_shape).copy()


def _sigmoid(z):
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _lstm_forward(xs, wx, wh, b):
    bsz, n_steps, _ = xs.shape
    hid = wh.shape[1]
    h = np.zeros((bsz, hid), dtype=xs.dtype)
    c = np.zeros_like(h)
    steps = []
    for t in range(n_steps):
        xt = xs[:, t]
        z = xt @ wx.T + h @ wh.T + b
        gi = _sigmoid(z[:, :hid])
        gf = _sigmoid(z[:, hid: 2 * hid])
        gg = np.tanh(z[:, 2 * hid: 3 * hid])
        go = _sigmoid(z[:, 3 * hid:])
        c_new = gf * c + gi * gg
        tanh_c = np.tanh(c_new)
        steps.append((xt, h, c, gi, gf, gg, go, tanh_c))
        h = go * tanh_c
        c = c_new
    return h, (steps, wh)


def _lstm_backward(dh, cache):
    steps, wh = cache
    dwx = None
    dwh = np.zeros_like(wh)
    db = None
    dc = np.zeros_like(dh)
    for xt, h_prev, c_prev, gi, gf, gg, go, tanh_c in reversed(steps):
        do = dh * tanh_c
        dc = dc + dh * go * (1.0 - tanh_c * tanh_c)
        dz = np.concatenate(
            [
                dc * gg * gi * (1.0 - gi),
                dc * c_prev * gf * (1.0 - gf),
                dc * gi * (1.0 - gg * gg),
                do * go * (1.0 - go),
            ],
            axis=1,
        )
        step_dwx = dz.T @ xt
        dwx = step_dwx if dwx is None else dwx + step_dwx
        dwh += dz.T @ h_prev
        db = dz.sum(axis=0) if db is None else db + dz.sum(axis=0)
        dh = dz @ wh
        dc = dc * gf
    return dwx, dwh, db


def _affine_forward(x, w, b):
    return x @ w + b, (x, w)


def _affine_backward(dout, cache):
    x, w = cache
    return dout @ w.T, x.T @ dout, dout.sum(axis=0)


def softmax(logits: np.ndarray, temperature: float = 1.0) -> np.ndarray:
    z = np.asarray(logits, dtype=np.float64) / float(temperature)
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def _softmax_cross_entropy(logits, targets):
    n = logits.shape[0]
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_z = np.log(np.exp(shifted).sum(axis=1))
    loss = float(np.mean(log_z - shifted[np.arange(n), targets]))
    dlogits = np.exp(shifted) / np.exp(log_z)[:, None]
    dlogits[np.arange(n), targets] -= 1.0
    dlogits /= n
    return loss, dlogits


def forward(params: ModelParams, windows: np.ndarray, hists: np.ndarray, want_cache=False):
    """Logits (batch, 5) for dance windows (batch, F, F) and histories (batch, W, 5)."""
    cfg = params.config
    t = params.tensors
    dtype = params.dtype
    x = np.ascontiguousarray(windows, dtype=dtype)[..., None]
    conv_caches = []
    for i in range(1, len(cfg.conv_filters) + 1):
        x, c_conv = _conv_forward(x, t[f"conv{i}_w"], t[f"conv{i}_b"])
        x, c_relu = _relu_forward(x)
        c_pool = None
        if i in cfg.pool_after:
            x, c_pool = _maxpool_forward(x)
        conv_caches.append((c_conv, c_relu, c_pool))
    feat, gap_cache = _gap_forward(x)
    h, lstm_cache = _lstm_forward(
        np.ascontiguousarray(hists, dtype=dtype), t["lstm_wx"], t["lstm_wh"], t["lstm_b"]
    )
    z = np.concatenate([feat, h], axis=1)
    fc_caches = []
    for i in range(1, len(cfg.fc_sizes) + 1):
        z, c_aff = _affine_forward(z, t[f"fc{i}_w"], t[f"fc{i}_b"])
        z, c_relu = _relu_forward(z)
        fc_caches.append((c_aff, c_relu))
    logits, head_cache = _affine_forward(z, t["head_w"], t["head_b"])
    if not np.isfinite(logits).all():
        raise NumericError("non-finite logits in forward pass")
    if not want_cache:
        return logits
    cache = (conv_caches, gap_cache, lstm_cache, fc_caches, head_cache, feat.shape[1])
    return logits, cache


def loss_and_grad(params: ModelParams, windows, hists, targets):
    """Mean cross-entropy over the batch and gradients for every tensor."""
    cfg = params.config
    logits, cache = forward(params, windows, hists, want_cache=True)
    conv_caches, gap_cache, lstm_cache, fc_caches, head_cache, n_feat = cache
    targets = np.asarray(targets, dtype=np.int64)
    loss, dlogits = _softmax_cross_entropy(logits, targets)
    grads = {}
    dz, grads["head_w"], grads["head_b"] = _affine_backward(dlogits, head_cache)
    for i in range(len(cfg.fc_sizes), 0, -1):
        c_aff, c_relu = fc_caches[i - 1]
        dz = _relu_backward(dz, c_relu)
        dz, grads[f"fc{i}_w"], grads[f"fc{i}_b"] = _affine_backward(dz, c_aff)
    dfeat = dz[:, :n_feat]
    dh = dz[:, n_feat:]
    grads["lstm_wx"], grads["lstm_wh"], grads["lstm_b"] = _lstm_backward(dh, lstm_cache)
    dx = _gap_backward(dfeat, gap_cache)
    for i in range(len(cfg.conv_filters), 0, -1):
        c_conv, c_relu, c_pool = conv_caches[i - 1]
        if c_pool is not None:
            dx = _maxpool_backward(dx, c_pool)
        dx = _relu_backward(dx, c_relu)
        dx, grads[f"conv{i}_w"], grads[f"conv{i}_b"] = _conv_backward(dx, c_conv, need_dx=i > 1)
    return loss, grads


def predict_logits(params: ModelParams, windows, hists, chunk: int = 256) -> np.ndarray:
    """Batched inference over many examples without building one giant im2col."""
    n = len(windows)
    out = np.empty((n, params.config.classes), dtype=params.dtype)
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        out[lo:hi] = forward(params, windows[lo:hi], hists[lo:hi])
    return out
