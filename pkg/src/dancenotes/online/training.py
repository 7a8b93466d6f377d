"""Adam training loop for the next-note model."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from ..exceptions import InvalidInputError, NumericError
from .config import ModelConfig
from .examples import Dataset
from .network import ModelParams, init_params, loss_and_grad, predict_logits


class AdamState:
    """First/second moment accumulators, one pair per tensor."""

    def __init__(self, params: ModelParams):
        self.m = {k: np.zeros_like(v) for k, v in params.tensors.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.tensors.items()}
        self.step = 0

    def update(self, params: ModelParams, grads: dict):
        cfg = params.config
        self.step += 1
        b1, b2 = cfg.adam_beta1, cfg.adam_beta2
        bias1 = 1.0 - b1 ** self.step
        bias2 = 1.0 - b2 ** self.step
        for name, g in grads.items():
            m = self.m[name]
            v = self.v[name]
            m *= b1
            m += (1.0 - b1) * g
            v *= b2
            v += (1.0 - b2) * g * g
            params.tensors[name] -= (
                cfg.lr * (m / bias1) / (np.sqrt(v / bias2) + cfg.adam_eps)
            ).astype(params.tensors[name].dtype, copy=False)


@dataclass
class TrainingLog:
    """Per-epoch mean loss and held-out accuracy, CSV friendly."""

    epochs: list = field(default_factory=list)
    losses: list = field(default_factory=list)
    val_accs: list = field(default_factory=list)

    def append(self, epoch: int, loss: float, val_acc: float):
        self.epochs.append(int(epoch))
        self.losses.append(float(loss))
        self.val_accs.append(float(val_acc))

    def write_csv(self, path):
        with open(path, "w") as fh:
            fh.write("epoch,loss,val_accuracy\n")
            for e, l, a in zip(self.epochs, self.losses, self.val_accs):
                fh.write(f"{e},{l:.6f},{a:.6f}\n")


def accuracy(params: ModelParams, ds: Dataset, indices=None) -> float:
    """Fraction of examples whose argmax logit matches the label."""
    if indices is None:
        windows, hists, targets = ds.windows, ds.histories, ds.targets
    else:
        windows, hists, targets = ds.windows[indices], ds.histories[indices], ds.targets[indices]
    if len(targets) == 0:
        return float("nan")
    preds = predict_logits(params, windows, hists).argmax(axis=1)
    return float(np.mean(preds == targets))


def train(
    dataset: Dataset,
    cfg: ModelConfig,
    val_fraction: float = 0.1,
    log_fn=None,
    on_epoch=None,
) -> tuple[ModelParams, TrainingLog]:
    """Train from scratch on the dataset; returns learned params and the log.

    Shuffling, init, and the val split all derive from cfg.seed, so a rerun
    with the same dataset and config reproduces the same weights. Raises
    NumericError if the loss diverges to a non-finite value.
    """
    if len(dataset) < 2:
        raise InvalidInputError("need at least two examples to train")
    if not 0.0 <= val_fraction < 1.0:
        raise InvalidInputError(f"val_fraction must be in [0, 1), got {val_fraction}")
    rng = np.random.default_rng(cfg.seed)
    params = init_params(cfg, seed=cfg.seed)
    perm = rng.permutation(len(dataset))
    n_val = int(round(val_fraction * len(dataset)))
    n_val = min(n_val, len(dataset) - 1)
    val_idx = perm[:n_val]
    train_idx = perm[n_val:]
    opt = AdamState(params)
    log = TrainingLog()
    for epoch in range(1, cfg.epochs + 1):
        t0 = time.perf_counter()
        order = rng.permutation(train_idx)
        total = 0.0
        for lo in range(0, len(order), cfg.batch):
            take = order[lo: lo + cfg.batch]
            loss, grads = loss_and_grad(
                params, dataset.windows[take], dataset.histories[take], dataset.targets[take]
            )
            if not np.isfinite(loss):
                raise NumericError(f"training loss diverged at epoch {epoch}")
            opt.update(params, grads)
            total += loss * len(take)
        mean_loss = total / len(order)
        val_acc = accuracy(params, dataset, val_idx) if n_val else float("nan")
        log.append(epoch, mean_loss, val_acc)
        if log_fn is not None:
            log_fn(
                f"epoch {epoch}/{cfg.epochs} loss {mean_loss:.4f} "
                f"val_acc {val_acc:.4f} ({time.perf_counter() - t0:.1f}s)"
            )
        if on_epoch is not None:
            on_epoch(epoch, params)
    return params, log
